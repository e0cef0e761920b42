//! Tail-count rules k = k(n) and finite-n checks of their growth conditions.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// How many upper order statistics to use at sample size n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KRule {
    Fixed(usize),
    /// floor(coef * n^exponent)
    Power { coef: f64, exponent: f64 },
    /// floor(coef * (ln n)^exponent)
    LogPower { coef: f64, exponent: f64 },
    /// n - offset
    BelowN(usize),
}

impl KRule {
    pub fn k_for(&self, n: usize) -> usize {
        let nf = n as f64;
        // Absorb rounding so that e.g. (10^5)^0.6 floors to 1000, not 999.
        let floor = |v: f64| (v * (1.0 + 1e-12)).floor() as usize;
        match *self {
            KRule::Fixed(k) => k,
            KRule::Power { coef, exponent } => floor(coef * nf.powf(exponent)),
            KRule::LogPower { coef, exponent } => floor(coef * nf.ln().powf(exponent)),
            KRule::BelowN(offset) => n.saturating_sub(offset),
        }
    }
}

impl fmt::Display for KRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            KRule::Fixed(k) => write!(f, "{k}"),
            KRule::Power { coef, exponent } if coef == 1.0 => write!(f, "n^{exponent}"),
            KRule::Power { coef, exponent } => write!(f, "{coef}*n^{exponent}"),
            KRule::LogPower { coef, exponent } if coef == 1.0 => write!(f, "ln(n)^{exponent}"),
            KRule::LogPower { coef, exponent } => write!(f, "{coef}*ln(n)^{exponent}"),
            KRule::BelowN(offset) => write!(f, "n-{offset}"),
        }
    }
}

/// Accepted forms: `200`, `n^0.6`, `2.5*n^0.6`, `ln(n)^2`, `3*ln(n)^2`, `n-1`.
impl FromStr for KRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("cannot parse k rule `{s}`"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Ok(k) = compact.parse::<usize>() {
            return Ok(KRule::Fixed(k));
        }
        if let Some(off) = compact.strip_prefix("n-") {
            return off.parse().map(KRule::BelowN).map_err(|_| bad());
        }
        let (coef, rest) = match compact.split_once('*') {
            Some((c, r)) => (c.parse::<f64>().map_err(|_| bad())?, r),
            None => (1.0, compact.as_str()),
        };
        let exponent = |e: &str| e.parse::<f64>().map_err(|_| bad());
        let rule = if let Some(e) = rest.strip_prefix("n^") {
            KRule::Power { coef, exponent: exponent(e)? }
        } else if let Some(e) = rest.strip_prefix("ln(n)^").or_else(|| rest.strip_prefix("log(n)^")) {
            KRule::LogPower { coef, exponent: exponent(e)? }
        } else if rest == "n" {
            KRule::Power { coef, exponent: 1.0 }
        } else {
            return Err(bad());
        };
        if !(coef > 0.0 && coef.is_finite()) {
            return Err(bad());
        }
        Ok(rule)
    }
}

impl Serialize for KRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for KRule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(usize),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(k) => Ok(KRule::Fixed(k)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleRow {
    pub n: usize,
    pub k: usize,
    pub k_over_n: f64,
    /// k^(1/2 - alpha) / ln n
    pub growth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleReport {
    pub rule: KRule,
    pub alpha: f64,
    pub rows: Vec<ScheduleRow>,
    /// 1 <= k < n at every grid point.
    pub k_valid: bool,
    /// k/n strictly decreasing along the grid.
    pub ratio_decreasing: bool,
    /// k^(1/2-alpha)/ln n strictly increasing from `growth_from` onward.
    pub growth_increasing: bool,
    pub growth_from: usize,
    pub pass: bool,
    /// Finite-grid trends stand in for limits; the verdict is heuristic.
    pub heuristic: bool,
}

/// Decades 10^3 .. 10^7.
pub fn default_n_grid() -> Vec<usize> {
    vec![1_000, 10_000, 100_000, 1_000_000, 10_000_000]
}

/// Check along `n_grid` that k/n decreases (toward 0) and that
/// k^(1/2-alpha)/ln n increases for n >= `growth_from`.
pub fn validate_k_schedule(
    rule: KRule,
    alpha: f64,
    n_grid: &[usize],
    growth_from: Option<usize>,
) -> Result<ScheduleReport> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::Usage(format!("alpha must lie in (0, 1/2), got {alpha}")));
    }
    if n_grid.len() < 2 || n_grid.windows(2).any(|w| w[1] <= w[0]) || n_grid[0] < 2 {
        return Err(Error::Usage("n grid must be strictly increasing, with n >= 2 and at least two points".into()));
    }
    let rows: Vec<ScheduleRow> = n_grid
        .iter()
        .map(|&n| {
            let k = rule.k_for(n);
            ScheduleRow {
                n,
                k,
                k_over_n: k as f64 / n as f64,
                growth: (k as f64).powf(0.5 - alpha) / (n as f64).ln(),
            }
        })
        .collect();
    let growth_from = growth_from.unwrap_or(n_grid[0]);
    let k_valid = rows.iter().all(|r| r.k >= 1 && r.k < r.n);
    let ratio_decreasing = rows.windows(2).all(|w| w[1].k_over_n < w[0].k_over_n);
    let tail: Vec<&ScheduleRow> = rows.iter().filter(|r| r.n >= growth_from).collect();
    let growth_increasing = tail.len() >= 2 && tail.windows(2).all(|w| w[1].growth > w[0].growth);
    Ok(ScheduleReport {
        rule,
        alpha,
        rows,
        k_valid,
        ratio_decreasing,
        growth_increasing,
        growth_from,
        pass: k_valid && ratio_decreasing && growth_increasing,
        heuristic: true,
    })
}
