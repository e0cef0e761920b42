//! Parametric distribution catalog.
//!
//! Every family exposes a log-survival function computed from a direct tail
//! formula, so that `ln(1 - F(x))` stays accurate far beyond the point where
//! `1 - F(x)` underflows.
//!
//! # Pareto convention
//!
//! `pareto:γ` is parameterized by its *tail index* γ > 0: support `[1, ∞)` and
//! survival `x^(-1/γ)`. With this convention the tail statistic computed
//! against `pareto:γ` equals the Hill estimator divided by γ.
//!
//! # Spec strings
//!
//! `exp:λ`, `pareto:γ`, `normal:μ,σ`, `lognormal:μ,σ`, `weibull:c,s`,
//! `frechet:a`, `gumbel:loc,scale`, `uniform:a,b`.

use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::special;

/// Tail functionals shared by catalog distributions and transformed views.
pub trait TailModel {
    fn cdf(&self, x: f64) -> f64;

    /// ln(1 - F(x)); `-inf` at or beyond the right endpoint, `0` at or below
    /// the left endpoint.
    fn log_survival(&self, x: f64) -> f64;

    /// The point x with `log_survival(x) == log_sf`, for `log_sf < 0`.
    fn inverse_log_survival(&self, log_sf: f64) -> f64;

    /// inf{x : F(x) >= p}.
    fn quantile(&self, p: f64) -> Result<f64>;

    /// (left endpoint, right endpoint) of the support.
    fn support(&self) -> (f64, f64);

    fn survival(&self, x: f64) -> f64 {
        self.log_survival(x).exp()
    }

    fn inverse_survival(&self, s: f64) -> f64 {
        self.inverse_log_survival(s.ln())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Exponential { rate: f64 },
    Pareto { tail_index: f64 },
    Normal { mean: f64, sd: f64 },
    LogNormal { mu: f64, sigma: f64 },
    Weibull { shape: f64, scale: f64 },
    Frechet { shape: f64 },
    Gumbel { location: f64, scale: f64 },
    Uniform { low: f64, high: f64 },
}

/// A validated member of the catalog.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distribution {
    family: Family,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite and > 0, got {v}")))
    }
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")))
    }
}

fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("probability {p} outside (0, 1)")))
    }
}

/// ln(1 - exp(-t)) for t > 0.
fn log_one_minus_exp_neg(t: f64) -> f64 {
    if t > std::f64::consts::LN_2 {
        libm::log1p(-(-t).exp())
    } else {
        (-libm::expm1(-t)).ln()
    }
}

/// The t > 0 with ln(1 - exp(-t)) = l, for l < 0.
fn inv_log_one_minus_exp_neg(l: f64) -> f64 {
    if l < -std::f64::consts::LN_2 {
        -libm::log1p(-l.exp())
    } else {
        -(-libm::expm1(l)).ln()
    }
}

/// ln(1 - exp(-t)) given ln t; stays finite when t itself underflows.
fn log_one_minus_exp_neg_of_log(log_t: f64) -> f64 {
    if log_t < -20.0 {
        log_t - 0.5 * log_t.exp()
    } else {
        log_one_minus_exp_neg(log_t.exp())
    }
}

/// ln t for the t of [`inv_log_one_minus_exp_neg`].
fn log_inv_log_one_minus_exp_neg(l: f64) -> f64 {
    if l < -20.0 {
        l + 0.5 * l.exp()
    } else {
        inv_log_one_minus_exp_neg(l).ln()
    }
}

impl Distribution {
    pub fn new(family: Family) -> Result<Self> {
        match family {
            Family::Exponential { rate } => {
                positive("rate", rate)?;
            }
            Family::Pareto { tail_index } => {
                positive("tail index", tail_index)?;
            }
            Family::Normal { mean, sd } | Family::LogNormal { mu: mean, sigma: sd } => {
                finite("location", mean)?;
                positive("scale", sd)?;
            }
            Family::Weibull { shape, scale } => {
                positive("shape", shape)?;
                positive("scale", scale)?;
            }
            Family::Frechet { shape } => {
                positive("shape", shape)?;
            }
            Family::Gumbel { location, scale } => {
                finite("location", location)?;
                positive("scale", scale)?;
            }
            Family::Uniform { low, high } => {
                finite("low", low)?;
                finite("high", high)?;
                if low >= high {
                    return Err(Error::InvalidParameter(format!(
                        "uniform needs low < high, got {low} >= {high}"
                    )));
                }
            }
        }
        Ok(Self { family })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Self::new(Family::Exponential { rate })
    }

    pub fn pareto(tail_index: f64) -> Result<Self> {
        Self::new(Family::Pareto { tail_index })
    }

    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        Self::new(Family::Normal { mean, sd })
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Family::LogNormal { mu, sigma })
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self> {
        Self::new(Family::Weibull { shape, scale })
    }

    pub fn frechet(shape: f64) -> Result<Self> {
        Self::new(Family::Frechet { shape })
    }

    pub fn gumbel(location: f64, scale: f64) -> Result<Self> {
        Self::new(Family::Gumbel { location, scale })
    }

    pub fn uniform(low: f64, high: f64) -> Result<Self> {
        Self::new(Family::Uniform { low, high })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Quantile for p already known to lie in (0, 1).
    fn quantile_unchecked(&self, p: f64) -> f64 {
        match self.family {
            Family::Exponential { rate } => -libm::log1p(-p) / rate,
            Family::Pareto { tail_index } => (-tail_index * libm::log1p(-p)).exp(),
            Family::Normal { mean, sd } => mean + sd * special::normal_quantile(p),
            Family::LogNormal { mu, sigma } => (mu + sigma * special::normal_quantile(p)).exp(),
            Family::Weibull { shape, scale } => scale * (-libm::log1p(-p)).powf(1.0 / shape),
            Family::Frechet { shape } => (-p.ln()).powf(-1.0 / shape),
            Family::Gumbel { location, scale } => location - scale * (-p.ln()).ln(),
            Family::Uniform { low, high } => low + p * (high - low),
        }
    }

    /// Quantile by monotone bracketing on the cdf, independent of the
    /// per-family inverse formulas.
    pub fn quantile_by_search(&self, p: f64) -> Result<f64> {
        check_probability(p)?;
        let (lo, hi) = self.support();
        let start = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (true, false) => lo + 1.0,
            (false, _) => 0.0,
        };
        let x = if p > 0.5 {
            // Work with the survival side so that 1 - p does not round away.
            let target = (1.0 - p).ln();
            special::solve_increasing(|x| -self.log_survival(x), -target, start)
        } else {
            special::solve_increasing(|x| self.cdf(x), p, start)
        };
        Ok(x.clamp(lo, hi))
    }

    /// `n` draws by inverse transform from a ChaCha8 stream seeded with
    /// `seed`. Output depends only on (`self`, `seed`, `n`).
    pub fn sample(&self, seed: u64, n: usize) -> Vec<f64> {
        let mut sampler = Sampler::new(*self, seed);
        (0..n).map(|_| sampler.draw()).collect()
    }
}

impl TailModel for Distribution {
    fn cdf(&self, x: f64) -> f64 {
        match self.family {
            Family::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -libm::expm1(-rate * x)
                }
            }
            Family::Pareto { tail_index } => {
                if x <= 1.0 {
                    0.0
                } else {
                    -libm::expm1(-x.ln() / tail_index)
                }
            }
            Family::Normal { mean, sd } => special::normal_cdf((x - mean) / sd),
            Family::LogNormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    special::normal_cdf((x.ln() - mu) / sigma)
                }
            }
            Family::Weibull { shape, scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -libm::expm1(-(x / scale).powf(shape))
                }
            }
            Family::Frechet { shape } => {
                if x <= 0.0 {
                    0.0
                } else {
                    (-x.powf(-shape)).exp()
                }
            }
            Family::Gumbel { location, scale } => (-(-(x - location) / scale).exp()).exp(),
            Family::Uniform { low, high } => ((x - low) / (high - low)).clamp(0.0, 1.0),
        }
    }

    fn log_survival(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        match self.family {
            Family::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -rate * x
                }
            }
            Family::Pareto { tail_index } => {
                if x <= 1.0 {
                    0.0
                } else {
                    -x.ln() / tail_index
                }
            }
            Family::Normal { mean, sd } => special::normal_log_sf((x - mean) / sd),
            Family::LogNormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    special::normal_log_sf((x.ln() - mu) / sigma)
                }
            }
            Family::Weibull { shape, scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(x / scale).powf(shape)
                }
            }
            Family::Frechet { shape } => {
                if x <= 0.0 {
                    0.0
                } else if x == f64::INFINITY {
                    f64::NEG_INFINITY
                } else {
                    log_one_minus_exp_neg_of_log(-shape * x.ln())
                }
            }
            Family::Gumbel { location, scale } => {
                if x == f64::INFINITY {
                    f64::NEG_INFINITY
                } else {
                    log_one_minus_exp_neg_of_log(-(x - location) / scale)
                }
            }
            Family::Uniform { low, high } => {
                if x <= low {
                    0.0
                } else if x >= high {
                    f64::NEG_INFINITY
                } else if x - low < high - x {
                    libm::log1p(-(x - low) / (high - low))
                } else {
                    ((high - x) / (high - low)).ln()
                }
            }
        }
    }

    fn inverse_log_survival(&self, log_sf: f64) -> f64 {
        let (lo, hi) = self.support();
        if log_sf >= 0.0 {
            return lo;
        }
        if log_sf == f64::NEG_INFINITY {
            return hi;
        }
        match self.family {
            Family::Exponential { rate } => -log_sf / rate,
            Family::Pareto { tail_index } => (-tail_index * log_sf).exp(),
            Family::Normal { mean, sd } => mean + sd * special::normal_inv_log_sf(log_sf),
            Family::LogNormal { mu, sigma } => {
                (mu + sigma * special::normal_inv_log_sf(log_sf)).exp()
            }
            Family::Weibull { shape, scale } => scale * (-log_sf).powf(1.0 / shape),
            Family::Frechet { shape } => (-log_inv_log_one_minus_exp_neg(log_sf) / shape).exp(),
            Family::Gumbel { location, scale } => location - scale * log_inv_log_one_minus_exp_neg(log_sf),
            Family::Uniform { low, high } if log_sf > -std::f64::consts::LN_2 => {
                low - (high - low) * libm::expm1(log_sf)
            }
            Family::Uniform { low, high } => high - (high - low) * log_sf.exp(),
        }
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        check_probability(p)?;
        Ok(self.quantile_unchecked(p))
    }

    fn support(&self) -> (f64, f64) {
        match self.family {
            Family::Exponential { .. }
            | Family::LogNormal { .. }
            | Family::Weibull { .. }
            | Family::Frechet { .. } => (0.0, f64::INFINITY),
            Family::Pareto { .. } => (1.0, f64::INFINITY),
            Family::Normal { .. } | Family::Gumbel { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Family::Uniform { low, high } => (low, high),
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Exponential { rate } => write!(f, "exp:{rate}"),
            Family::Pareto { tail_index } => write!(f, "pareto:{tail_index}"),
            Family::Normal { mean, sd } => write!(f, "normal:{mean},{sd}"),
            Family::LogNormal { mu, sigma } => write!(f, "lognormal:{mu},{sigma}"),
            Family::Weibull { shape, scale } => write!(f, "weibull:{shape},{scale}"),
            Family::Frechet { shape } => write!(f, "frechet:{shape}"),
            Family::Gumbel { location, scale } => write!(f, "gumbel:{location},{scale}"),
            Family::Uniform { low, high } => write!(f, "uniform:{low},{high}"),
        }
    }
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let spec_err = |reason: String| Error::Spec { spec: spec.to_string(), reason };
        let (name, args) = spec
            .trim()
            .split_once(':')
            .ok_or_else(|| spec_err("expected `family:params`".into()))?;
        let params = args
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|_| spec_err(format!("`{}` is not a number", a.trim())))
            })
            .collect::<Result<Vec<f64>>>()?;
        let want = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(spec_err(format!("{name} takes {n} parameter(s), got {}", params.len())))
            }
        };
        let family = match name.trim().to_ascii_lowercase().as_str() {
            "exp" | "exponential" => {
                want(1)?;
                Family::Exponential { rate: params[0] }
            }
            "pareto" => {
                want(1)?;
                Family::Pareto { tail_index: params[0] }
            }
            "normal" => {
                want(2)?;
                Family::Normal { mean: params[0], sd: params[1] }
            }
            "lognormal" => {
                want(2)?;
                Family::LogNormal { mu: params[0], sigma: params[1] }
            }
            "weibull" => {
                want(2)?;
                Family::Weibull { shape: params[0], scale: params[1] }
            }
            "frechet" => {
                want(1)?;
                Family::Frechet { shape: params[0] }
            }
            "gumbel" => {
                want(2)?;
                Family::Gumbel { location: params[0], scale: params[1] }
            }
            "uniform" => {
                want(2)?;
                Family::Uniform { low: params[0], high: params[1] }
            }
            other => return Err(spec_err(format!("unknown family `{other}`"))),
        };
        Distribution::new(family).map_err(|e| spec_err(e.to_string()))
    }
}

impl serde::Serialize for Distribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Distribution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Uniform draw on the open interval (0, 1) with 53 bits of resolution.
pub fn open_uniform<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// `n` open-interval uniforms from the stream that [`Distribution::sample`]
/// consumes for the same seed.
pub fn uniforms(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| open_uniform(&mut rng)).collect()
}

/// Inverse-transform sampler owning its generator state.
#[derive(Debug, Clone)]
pub struct Sampler {
    dist: Distribution,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(dist: Distribution, seed: u64) -> Self {
        Self { dist, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn draw(&mut self) -> f64 {
        let u = open_uniform(&mut self.rng);
        self.dist.quantile_unchecked(u)
    }

    pub fn fill(&mut self, out: &mut [f64]) {
        for v in out {
            *v = self.draw();
        }
    }
}

/// The change of variables y = 1/(x* - x) that sends a finite right endpoint
/// x* to +infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointTransform {
    right_endpoint: f64,
}

impl EndpointTransform {
    pub fn new(right_endpoint: f64) -> Result<Self> {
        finite("right endpoint", right_endpoint)?;
        Ok(Self { right_endpoint })
    }

    pub fn right_endpoint(&self) -> f64 {
        self.right_endpoint
    }

    pub fn apply(&self, x: f64) -> Result<f64> {
        if !(x < self.right_endpoint) {
            return Err(Error::Domain(format!(
                "value {x} is not below the right endpoint {}",
                self.right_endpoint
            )));
        }
        Ok(1.0 / (self.right_endpoint - x))
    }

    pub fn apply_all(&self, xs: &[f64]) -> Result<Vec<f64>> {
        xs.iter().map(|&x| self.apply(x)).collect()
    }

    /// The law of 1/(x* - X) for X ~ `base`. The base law must not put mass
    /// above x*.
    pub fn push_forward(&self, base: Distribution) -> Result<EndpointView> {
        let (_, hi) = base.support();
        if hi > self.right_endpoint {
            return Err(Error::Domain(format!(
                "{base} has right endpoint {hi} above {}",
                self.right_endpoint
            )));
        }
        Ok(EndpointView { base, transform: *self })
    }
}

/// Distribution of y = 1/(x* - X), with cdf G(y) = F(x* - 1/y) for y > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointView {
    base: Distribution,
    transform: EndpointTransform,
}

impl EndpointView {
    fn to_base(self, y: f64) -> f64 {
        self.transform.right_endpoint - 1.0 / y
    }

    fn from_base(self, x: f64) -> f64 {
        1.0 / (self.transform.right_endpoint - x)
    }
}

impl TailModel for EndpointView {
    fn cdf(&self, y: f64) -> f64 {
        if y <= 0.0 {
            0.0
        } else {
            self.base.cdf(self.to_base(y))
        }
    }

    fn log_survival(&self, y: f64) -> f64 {
        if y <= 0.0 {
            0.0
        } else {
            self.base.log_survival(self.to_base(y))
        }
    }

    fn inverse_log_survival(&self, log_sf: f64) -> f64 {
        self.from_base(self.base.inverse_log_survival(log_sf))
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        Ok(self.from_base(self.base.quantile(p)?))
    }

    fn support(&self) -> (f64, f64) {
        let (lo, hi) = self.base.support();
        let lo_y = if lo.is_finite() { self.from_base(lo) } else { 0.0 };
        let hi_y = if hi < self.transform.right_endpoint { self.from_base(hi) } else { f64::INFINITY };
        (lo_y, hi_y)
    }
}
