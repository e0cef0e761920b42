//! Numerical checks of the tail-ordering conditions that make the test
//! consistent against an alternative F1.
//!
//! With S = 1 - F written in log space:
//!
//! * `B(F, G)`: ln S_G(x) - (1 - ε) ln S_F(x) is nondecreasing for x > x0.
//! * `C(F, G)`: ln S_G(x) - ln S_F(x) - ε ln(-ln S_F(x)) is nondecreasing.
//! * δ-domination: ln S_1(x) <= δ ln S_0(x) for some fixed δ in (0, 1).
//!
//! All checks are evaluated on a finite grid of points in the tail of F0, so a
//! positive answer means "holds on the grid", which is necessary but not
//! sufficient for the asymptotic condition.

use serde::Serialize;

use crate::distributions::TailModel;
use crate::error::{Error, Result};

/// Relative slack for monotonicity comparisons between consecutive points.
pub const MONOTONE_SLACK: f64 = 1e-9;

/// Default bisection width for ε estimates.
pub const DEFAULT_TOL: f64 = 1e-3;

const MIN_GRID_POINTS: usize = 16;

/// Upper limit of the expanding search for the C-condition ε.
const MAX_EPSILON_C: f64 = (1u64 << 20) as f64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    /// Start of the tail region; defaults to the 0.9 quantile of F0.
    pub x0: Option<f64>,
    pub points: usize,
    /// Deepest ln S0 probed by the last grid point.
    pub min_log_survival: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self { x0: None, points: 512, min_log_survival: -1e6 }
    }
}

/// Probe points x_1 < ... < x_m in the tail of F0.
///
/// Points are placed so that -ln S0(x_j) is geometrically spaced between
/// -ln S0(x0) and `-min_log_survival`; the far end reaches tail depths where
/// polynomial and logarithmic slack terms separate. Points that would not be
/// finite, strictly increasing and strictly inside F0's support are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneGrid {
    x0: f64,
    points: Vec<f64>,
}

impl MonotoneGrid {
    pub fn new<M: TailModel + ?Sized>(f0: &M, opts: GridOptions) -> Result<Self> {
        if opts.points < MIN_GRID_POINTS {
            return Err(Error::Grid(format!(
                "grid needs at least {MIN_GRID_POINTS} points, got {}",
                opts.points
            )));
        }
        let x0 = match opts.x0 {
            Some(x) => x,
            None => f0.quantile(0.9)?,
        };
        let start = -f0.log_survival(x0);
        let end = -opts.min_log_survival;
        if !(start > 0.0 && start.is_finite()) {
            return Err(Error::Grid(format!("x0 = {x0} is not strictly inside the support of F0")));
        }
        if !(end > start) {
            return Err(Error::Grid(format!(
                "deepest log-survival {} does not lie beyond x0 = {x0}",
                opts.min_log_survival
            )));
        }
        let ratio = (end / start).ln() / opts.points as f64;
        let mut points = Vec::with_capacity(opts.points);
        let mut prev = x0;
        for j in 1..=opts.points {
            let t = start * (ratio * j as f64).exp();
            let x = f0.inverse_log_survival(-t);
            if !x.is_finite() || x <= prev || !f0.log_survival(x).is_finite() {
                continue;
            }
            points.push(x);
            prev = x;
        }
        Self::from_points(x0, points)
    }

    /// A grid from explicit points, which must be strictly increasing and
    /// above `x0`.
    pub fn from_points(x0: f64, points: Vec<f64>) -> Result<Self> {
        if points.len() < MIN_GRID_POINTS {
            return Err(Error::Grid(format!(
                "only {} usable grid points beyond x0 = {x0}; need {MIN_GRID_POINTS}",
                points.len()
            )));
        }
        let mut prev = x0;
        for &x in &points {
            if !(x > prev) || !x.is_finite() {
                return Err(Error::Grid(format!("grid point {x} does not increase past {prev}")));
            }
            prev = x;
        }
        Ok(Self { x0, points })
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The sub-grid where `keep` holds, if it still has enough points.
    pub fn restrict<P: Fn(f64) -> bool>(&self, keep: P) -> Result<Self> {
        let pts: Vec<f64> = self.points.iter().copied().filter(|&x| keep(x)).collect();
        Self::from_points(self.x0, pts)
    }
}

fn log_survivals<M: TailModel + ?Sized>(d: &M, grid: &MonotoneGrid, name: &str) -> Result<Vec<f64>> {
    grid.points
        .iter()
        .map(|&x| {
            let v = d.log_survival(x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Domain(format!("grid point {x} lies beyond the support of {name}")))
            }
        })
        .collect()
}

/// True when each value is at least its predecessor, up to relative slack.
pub fn is_nondecreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| {
        let scale = w[0].abs().max(w[1].abs()).max(1.0);
        w[1] >= w[0] - MONOTONE_SLACK * scale
    })
}

/// ln S_G(x) - (1 - ε) ln S_F(x) on the grid.
pub fn b_log_ratio<F, G>(f: &F, g: &G, epsilon: f64, grid: &MonotoneGrid) -> Result<Vec<f64>>
where
    F: TailModel + ?Sized,
    G: TailModel + ?Sized,
{
    let lf = log_survivals(f, grid, "F")?;
    let lg = log_survivals(g, grid, "G")?;
    Ok(lf.iter().zip(&lg).map(|(a, b)| b - (1.0 - epsilon) * a).collect())
}

/// ln S_G(x) - ln S_F(x) - ε ln(-ln S_F(x)) on the grid.
pub fn c_log_ratio<F, G>(f: &F, g: &G, epsilon: f64, grid: &MonotoneGrid) -> Result<Vec<f64>>
where
    F: TailModel + ?Sized,
    G: TailModel + ?Sized,
{
    let lf = log_survivals(f, grid, "F")?;
    let lg = log_survivals(g, grid, "G")?;
    lf.iter()
        .zip(&lg)
        .zip(grid.points())
        .map(|((a, b), x)| {
            if -a <= 1.0 {
                return Err(Error::Grid(format!(
                    "-ln(1 - F(x)) <= 1 at grid point {x}; choose a larger x0"
                )));
            }
            Ok(b - a - epsilon * (-a).ln())
        })
        .collect()
}

pub fn check_condition_b<F, G>(f: &F, g: &G, epsilon: f64, grid: &MonotoneGrid) -> Result<bool>
where
    F: TailModel + ?Sized,
    G: TailModel + ?Sized,
{
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Usage(format!("B-condition epsilon must lie in (0, 1), got {epsilon}")));
    }
    Ok(is_nondecreasing(&b_log_ratio(f, g, epsilon, grid)?))
}

pub fn check_condition_c<F, G>(f: &F, g: &G, epsilon: f64, grid: &MonotoneGrid) -> Result<bool>
where
    F: TailModel + ?Sized,
    G: TailModel + ?Sized,
{
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Usage(format!("C-condition epsilon must be > 0, got {epsilon}")));
    }
    Ok(is_nondecreasing(&c_log_ratio(f, g, epsilon, grid)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConditionKind {
    B,
    C,
}

/// Which argument order of the condition holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// The condition holds as K(f, g).
    Forward,
    /// The condition holds as K(g, f).
    Reverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsilonEstimate {
    pub epsilon: f64,
    pub direction: Direction,
}

fn check_kind<F, G>(kind: ConditionKind, f: &F, g: &G, eps: f64, grid: &MonotoneGrid) -> Result<bool>
where
    F: TailModel + ?Sized,
    G: TailModel + ?Sized,
{
    match kind {
        ConditionKind::B => check_condition_b(f, g, eps, grid),
        ConditionKind::C => check_condition_c(f, g, eps, grid),
    }
}

/// Largest ε (to within `tol`) for which `pass` holds, given it holds at `tol`.
fn bisect_epsilon<P: Fn(f64) -> Result<bool>>(kind: ConditionKind, tol: f64, pass: P) -> Result<f64> {
    let mut lo = tol;
    let mut hi = match kind {
        ConditionKind::B => 1.0,
        ConditionKind::C => {
            let mut hi = 8.0;
            while pass(hi)? {
                lo = hi;
                hi *= 2.0;
                if hi > MAX_EPSILON_C {
                    return Ok(lo);
                }
            }
            hi
        }
    };
    while hi - lo > 0.5 * tol {
        let mid = 0.5 * (lo + hi);
        if pass(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Grid estimate of sup{ε : K(f, g) or K(g, f) holds with ε}.
///
/// The grid can only refute monotonicity, so on a coarse grid the estimate
/// may exceed the true supremum.
pub fn estimate_epsilon<F, G>(
    f: &F,
    g: &G,
    kind: ConditionKind,
    grid: &MonotoneGrid,
    tol: f64,
) -> Result<EpsilonEstimate>
where
    F: TailModel + ?Sized,
    G: TailModel + ?Sized,
{
    if !(tol > 0.0 && tol < 0.5) {
        return Err(Error::Usage(format!("tolerance must lie in (0, 0.5), got {tol}")));
    }
    let mut best: Option<EpsilonEstimate> = None;
    for direction in [Direction::Forward, Direction::Reverse] {
        let pass = |eps: f64| match direction {
            Direction::Forward => check_kind(kind, f, g, eps, grid),
            Direction::Reverse => check_kind(kind, g, f, eps, grid),
        };
        if !pass(tol)? {
            continue;
        }
        let epsilon = bisect_epsilon(kind, tol, pass)?;
        if best.is_none_or(|b| epsilon > b.epsilon) {
            best = Some(EpsilonEstimate { epsilon, direction });
        }
    }
    best.ok_or(Error::NotInClass)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaCheck {
    pub ok: bool,
    pub delta_hat: f64,
}

/// Whether ln S1(x) <= δ ln S0(x) on the grid for some δ in (0, 1).
///
/// δ̂ is the smallest ratio ln S1 / ln S0 over the grid, capped at 1 - tol.
pub fn check_delta<F0, F1>(f0: &F0, f1: &F1, grid: &MonotoneGrid, tol: f64) -> Result<DeltaCheck>
where
    F0: TailModel + ?Sized,
    F1: TailModel + ?Sized,
{
    let l0 = log_survivals(f0, grid, "F0")?;
    let mut inf = f64::INFINITY;
    for (&a, &x) in l0.iter().zip(grid.points()) {
        if a < 0.0 {
            // S1 = 0 beyond F1's support satisfies the bound for every δ.
            inf = inf.min(f1.log_survival(x) / a);
        }
    }
    let delta_hat = inf.min(1.0 - tol);
    Ok(DeltaCheck { ok: delta_hat > tol, delta_hat })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ThetaClass {
    Theta,
    ThetaPrime,
    #[serde(rename = "neither")]
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PredictedSign {
    Plus,
    Minus,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub b_f0_f1: bool,
    pub b_f1_f0: bool,
    pub c_f0_f1: bool,
    pub c_f1_f0: bool,
    pub epsilon_hat_b: f64,
    pub epsilon_hat_c: f64,
    pub delta_ok: bool,
    pub delta_hat: f64,
    pub theta_class: ThetaClass,
    pub predicted_sign: PredictedSign,
    /// Verdicts refer to the probe grid only.
    pub on_grid: bool,
    pub x0: f64,
    pub grid_points: usize,
    pub tol: f64,
}

/// C check on the part of the grid where -ln S_F > 1; fewer than 16 such
/// points counts as "does not hold".
fn c_holds<F, G>(f: &F, g: &G, eps: f64, grid: &MonotoneGrid) -> bool
where
    F: TailModel + ?Sized,
    G: TailModel + ?Sized,
{
    grid.restrict(|x| -f.log_survival(x) > 1.0)
        .and_then(|sub| check_condition_c(f, g, eps, &sub))
        .unwrap_or(false)
}

fn c_epsilon<F, G>(f: &F, g: &G, grid: &MonotoneGrid, tol: f64) -> f64
where
    F: TailModel + ?Sized,
    G: TailModel + ?Sized,
{
    let Ok(sub) = grid.restrict(|x| -f.log_survival(x) > 1.0) else {
        return 0.0;
    };
    bisect_epsilon(ConditionKind::C, tol, |eps| Ok(c_holds(f, g, eps, &sub))).unwrap_or(0.0)
}

/// Run all direction checks at ε = `tol`, estimate ε for the conditions that
/// hold, check δ-domination and classify F1 relative to F0.
///
/// The drift sign follows the stochastic-dominance argument: when F1's tail
/// dominates F0's (B(F0,F1) or C(F0,F1)), the log-survival gaps are larger
/// than standard exponentials and R drifts above 1.
pub fn classify_alternative<F0, F1>(f0: &F0, f1: &F1, grid: &MonotoneGrid, tol: f64) -> ConditionReport
where
    F0: TailModel + ?Sized,
    F1: TailModel + ?Sized,
{
    let b_f0_f1 = check_condition_b(f0, f1, tol, grid).unwrap_or(false);
    let b_f1_f0 = check_condition_b(f1, f0, tol, grid).unwrap_or(false);
    let c_f0_f1 = c_holds(f0, f1, tol, grid);
    let c_f1_f0 = c_holds(f1, f0, tol, grid);

    let epsilon_hat_b = if b_f0_f1 || b_f1_f0 {
        estimate_epsilon(f0, f1, ConditionKind::B, grid, tol).map(|e| e.epsilon).unwrap_or(0.0)
    } else {
        0.0
    };
    let epsilon_hat_c = match (c_f0_f1, c_f1_f0) {
        (false, false) => 0.0,
        _ => {
            let fwd = if c_f0_f1 { c_epsilon(f0, f1, grid, tol) } else { 0.0 };
            let rev = if c_f1_f0 { c_epsilon(f1, f0, grid, tol) } else { 0.0 };
            fwd.max(rev)
        }
    };
    let delta = check_delta(f0, f1, grid, tol).unwrap_or(DeltaCheck { ok: false, delta_hat: 0.0 });

    let theta_class = if b_f0_f1 != b_f1_f0 {
        ThetaClass::Theta
    } else if !b_f0_f1 && (c_f0_f1 || c_f1_f0) && delta.ok {
        ThetaClass::ThetaPrime
    } else {
        ThetaClass::Neither
    };
    let predicted_sign = match (b_f0_f1, b_f1_f0, c_f0_f1, c_f1_f0) {
        (true, false, _, _) => PredictedSign::Plus,
        (false, true, _, _) => PredictedSign::Minus,
        (false, false, true, false) => PredictedSign::Plus,
        (false, false, false, true) => PredictedSign::Minus,
        _ => PredictedSign::Undetermined,
    };

    ConditionReport {
        b_f0_f1,
        b_f1_f0,
        c_f0_f1,
        c_f1_f0,
        epsilon_hat_b,
        epsilon_hat_c,
        delta_ok: delta.ok,
        delta_hat: delta.delta_hat,
        theta_class,
        predicted_sign,
        on_grid: true,
        x0: grid.x0(),
        grid_points: grid.len(),
        tol,
    }
}

/// One row of the grid dump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridRow {
    pub x: f64,
    /// Survival of F0 at x (may underflow to 0 deep in the grid).
    pub p: f64,
    pub log_ratio_b_f0f1: f64,
    pub log_ratio_b_f1f0: f64,
    pub log_ratio_c_f0f1: f64,
    pub log_ratio_c_f1f0: f64,
    pub delta_ratio: f64,
}

/// The quantities behind each check at every grid point, evaluated at
/// `epsilon`. Entries that are undefined at a point (outside a support, or
/// -ln S <= 1 for the C ratio) are NaN.
pub fn grid_table<F0, F1>(f0: &F0, f1: &F1, grid: &MonotoneGrid, epsilon: f64) -> Vec<GridRow>
where
    F0: TailModel + ?Sized,
    F1: TailModel + ?Sized,
{
    let c = |lf: f64, lg: f64| {
        if -lf > 1.0 && lg.is_finite() {
            lg - lf - epsilon * (-lf).ln()
        } else {
            f64::NAN
        }
    };
    let b = |lf: f64, lg: f64| {
        if lf.is_finite() && lg.is_finite() {
            lg - (1.0 - epsilon) * lf
        } else {
            f64::NAN
        }
    };
    grid.points()
        .iter()
        .map(|&x| {
            let l0 = f0.log_survival(x);
            let l1 = f1.log_survival(x);
            GridRow {
                x,
                p: l0.exp(),
                log_ratio_b_f0f1: b(l0, l1),
                log_ratio_b_f1f0: b(l1, l0),
                log_ratio_c_f0f1: c(l0, l1),
                log_ratio_c_f1f0: c(l1, l0),
                delta_ratio: if l0 < 0.0 { l1 / l0 } else { f64::NAN },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Distribution;

    fn d(spec: &str) -> Distribution {
        spec.parse().unwrap()
    }

    fn grid(f0: &Distribution) -> MonotoneGrid {
        MonotoneGrid::new(f0, GridOptions::default()).unwrap()
    }

    #[test]
    fn grid_is_increasing_beyond_x0() {
        for spec in ["exp:1", "normal:0,1", "pareto:1", "lognormal:0,1", "uniform:0,1", "gumbel:0,1"] {
            let f0 = d(spec);
            let g = grid(&f0);
            assert!(g.len() >= 16, "{spec}");
            assert!((g.x0() - f0.quantile(0.9).unwrap()).abs() < 1e-12);
            assert!(g.points()[0] > g.x0());
            assert!(g.points().windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn grid_rejects_tiny_or_outside_start() {
        let f0 = d("exp:1");
        let small = GridOptions { points: 8, ..GridOptions::default() };
        assert!(matches!(MonotoneGrid::new(&f0, small), Err(Error::Grid(_))));
        let outside = GridOptions { x0: Some(-1.0), ..GridOptions::default() };
        assert!(matches!(MonotoneGrid::new(&f0, outside), Err(Error::Grid(_))));
    }

    #[test]
    fn condition_b_exponential_examples() {
        let (f, g) = (d("exp:2"), d("exp:1"));
        let grid = grid(&g);
        // ln S_G - (1-ε) ln S_F = (1 - 2ε) x.
        assert!(check_condition_b(&f, &g, 0.4, &grid).unwrap());
        assert!(!check_condition_b(&f, &g, 0.6, &grid).unwrap());
        assert!(!check_condition_b(&f, &f, 0.01, &grid).unwrap());
        assert!(matches!(check_condition_b(&f, &g, 1.5, &grid), Err(Error::Usage(_))));
    }

    #[test]
    fn condition_b_beyond_support_is_domain_error() {
        let f0 = d("exp:1");
        let grid = grid(&f0);
        let r = check_condition_b(&f0, &d("uniform:0,3"), 0.1, &grid);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn condition_c_examples() {
        let (f, g) = (d("exp:1"), d("exp:1"));
        let grid_f = grid(&f);
        assert!(!check_condition_c(&f, &g, 0.5, &grid_f).unwrap());
        // ln S_G - ln S_F - 0.5 ln x = (1 - λ) x - 0.5 ln x increases for x >= 1.
        let lighter = d("exp:0.5");
        let from_one = MonotoneGrid::new(&f, GridOptions { x0: Some(1.5), ..GridOptions::default() }).unwrap();
        assert!(check_condition_c(&f, &lighter, 0.5, &from_one).unwrap());
    }

    #[test]
    fn condition_c_normal_shift_needs_deep_start() {
        let (f, g) = (d("normal:0,1"), d("normal:0.5,1"));
        // With ε = 1 the ratio still decreases until x is roughly 4.
        let near = MonotoneGrid::new(&f, GridOptions { x0: Some(f.quantile(0.99).unwrap()), ..Default::default() })
            .unwrap();
        assert!(!check_condition_c(&f, &g, 1.0, &near).unwrap());
        let far = MonotoneGrid::new(&f, GridOptions { x0: Some(6.0), ..Default::default() }).unwrap();
        assert!(check_condition_c(&f, &g, 1.0, &far).unwrap());
    }

    #[test]
    fn condition_c_requires_log_term_above_one() {
        let f = d("exp:1");
        let grid = MonotoneGrid::from_points(0.1, (1..=20).map(|i| 0.1 + i as f64 * 0.1).collect()).unwrap();
        assert!(matches!(check_condition_c(&f, &f, 0.5, &grid), Err(Error::Grid(_))));
    }

    #[test]
    fn epsilon_exponential_pairs() {
        let f0 = d("exp:1");
        let g = grid(&f0);
        let e = estimate_epsilon(&f0, &d("exp:2"), ConditionKind::B, &g, DEFAULT_TOL).unwrap();
        assert!((e.epsilon - 0.5).abs() <= 1e-3);
        assert_eq!(e.direction, Direction::Reverse);
        let e = estimate_epsilon(&f0, &d("exp:4"), ConditionKind::B, &g, DEFAULT_TOL).unwrap();
        assert!((e.epsilon - 0.75).abs() <= 1e-3);
        assert_eq!(
            estimate_epsilon(&f0, &f0, ConditionKind::B, &g, DEFAULT_TOL),
            Err(Error::NotInClass)
        );
    }

    #[test]
    fn epsilon_stable_under_grid_refinement() {
        let f0 = d("exp:1");
        let coarse = MonotoneGrid::new(&f0, GridOptions { points: 128, ..Default::default() }).unwrap();
        let fine = MonotoneGrid::new(&f0, GridOptions { points: 512, ..Default::default() }).unwrap();
        for f1 in ["exp:2", "exp:4", "exp:0.5", "exp:1.5"] {
            let f1 = d(f1);
            let a = estimate_epsilon(&f0, &f1, ConditionKind::B, &coarse, DEFAULT_TOL).unwrap();
            let b = estimate_epsilon(&f0, &f1, ConditionKind::B, &fine, DEFAULT_TOL).unwrap();
            assert!((a.epsilon - b.epsilon).abs() <= 2.0 * DEFAULT_TOL);
        }
    }

    #[test]
    fn delta_examples() {
        let g = grid(&d("exp:1"));
        let c = check_delta(&d("exp:1"), &d("exp:2"), &g, DEFAULT_TOL).unwrap();
        assert!(c.ok);
        assert_eq!(c.delta_hat, 1.0 - DEFAULT_TOL);

        let g2 = grid(&d("exp:2"));
        let c = check_delta(&d("exp:2"), &d("exp:1"), &g2, DEFAULT_TOL).unwrap();
        assert!(c.ok);
        assert!((c.delta_hat - 0.5).abs() < 1e-12);

        let gn = grid(&d("normal:0,1"));
        let c = check_delta(&d("normal:0,1"), &d("normal:0.5,1"), &gn, DEFAULT_TOL).unwrap();
        assert!(c.ok);
        assert!(c.delta_hat > 0.0 && c.delta_hat < 1.0);
    }

    #[test]
    fn classify_exponential_pair() {
        let f0 = d("exp:1");
        let rep = classify_alternative(&f0, &d("exp:2"), &grid(&f0), DEFAULT_TOL);
        assert_eq!(rep.theta_class, ThetaClass::Theta);
        assert!(rep.b_f1_f0 && !rep.b_f0_f1);
        assert!((rep.epsilon_hat_b - 0.5).abs() <= 1e-3);
        assert_eq!(rep.predicted_sign, PredictedSign::Minus);
    }

    #[test]
    fn classify_normal_location_shift() {
        let f0 = d("normal:0,1");
        let rep = classify_alternative(&f0, &d("normal:0.5,1"), &grid(&f0), DEFAULT_TOL);
        assert!(!rep.b_f0_f1 && !rep.b_f1_f0);
        assert!(rep.c_f0_f1);
        assert!(rep.delta_ok);
        assert_eq!(rep.theta_class, ThetaClass::ThetaPrime);
        assert_eq!(rep.predicted_sign, PredictedSign::Plus);
        assert!(rep.epsilon_hat_c > 0.0);
    }

    #[test]
    fn classify_identical_is_neither() {
        for spec in ["exp:1", "normal:0,1", "pareto:2"] {
            let f0 = d(spec);
            let rep = classify_alternative(&f0, &f0, &grid(&f0), DEFAULT_TOL);
            assert_eq!(rep.theta_class, ThetaClass::Neither, "{spec}");
            assert_eq!(rep.predicted_sign, PredictedSign::Undetermined);
        }
    }

    #[test]
    fn classify_heavier_pareto_is_plus() {
        let f0 = d("pareto:1");
        let rep = classify_alternative(&f0, &d("pareto:2"), &grid(&f0), DEFAULT_TOL);
        assert_eq!(rep.theta_class, ThetaClass::Theta);
        assert_eq!(rep.predicted_sign, PredictedSign::Plus);
        assert!((rep.epsilon_hat_b - 0.5).abs() <= 1e-3);
    }

    #[test]
    fn grid_table_columns() {
        let f0 = d("exp:1");
        let g = grid(&f0);
        let rows = grid_table(&f0, &d("exp:2"), &g, 0.25);
        assert_eq!(rows.len(), g.len());
        let r = rows[3];
        assert!((r.log_ratio_b_f0f1 - (-2.0 * r.x + 0.75 * r.x)).abs() < 1e-9 * r.x);
        assert!((r.delta_ratio - 2.0).abs() < 1e-12);
    }
}
