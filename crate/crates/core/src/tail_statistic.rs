//! The tail slice, the statistic R, its normalization and p-values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::TailModel;
use crate::error::{Error, Result};
use crate::special::{gamma_pq, normal_cdf, normal_sf};

/// Negative values of R above this are floating-point cancellation and are
/// clamped to zero.
const NONNEGATIVE_SLACK: f64 = 1e-12;

/// The order statistic X_(n-k) and the k observations above it.
#[derive(Debug, Clone, PartialEq)]
pub struct TailSlice {
    n: usize,
    threshold: f64,
    exceedances: Vec<f64>,
}

impl TailSlice {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.exceedances.len()
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// The k largest observations, ascending.
    pub fn exceedances(&self) -> &[f64] {
        &self.exceedances
    }

    /// Number of adjacent equal pairs among the threshold and the
    /// exceedances.
    pub fn ties(&self) -> usize {
        let mut prev = self.threshold;
        let mut ties = 0;
        for &x in &self.exceedances {
            if x == prev {
                ties += 1;
            }
            prev = x;
        }
        ties
    }
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::Usage(format!("k must satisfy 1 <= k <= n-1, got k={k} with n={n}")));
    }
    Ok(())
}

/// Extract the top-k slice from `sample` without sorting all of it.
pub fn select_top_k(sample: &[f64], k: usize) -> Result<TailSlice> {
    check_k(sample.len(), k)?;
    select_top_k_owned(sample.to_vec(), k)
}

/// Like [`select_top_k`], reusing the buffer. Expected linear time: a
/// selection pass places X_(n-k) at its sorted position, and only the k
/// values above it are then sorted.
pub fn select_top_k_owned(mut sample: Vec<f64>, k: usize) -> Result<TailSlice> {
    let n = sample.len();
    check_k(n, k)?;
    if let Some(index) = sample.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let (_, &mut threshold, upper) = sample.select_nth_unstable_by(n - k - 1, f64::total_cmp);
    let mut exceedances = upper.to_vec();
    exceedances.sort_unstable_by(f64::total_cmp);
    Ok(TailSlice { n, threshold, exceedances })
}

/// Neumaier-compensated sum.
fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// R = ln S0(threshold) - mean of ln S0(exceedance), with S0 = 1 - F0.
///
/// Accumulated as the mean of the nonnegative gaps ln S0(threshold) -
/// ln S0(x_i), which are already in ascending order.
pub fn r_statistic<M: TailModel + ?Sized>(tail: &TailSlice, f0: &M) -> Result<f64> {
    let base = f0.log_survival(tail.threshold);
    let logs: Vec<f64> = tail.exceedances.iter().map(|&x| f0.log_survival(x)).collect();
    let beyond = logs.iter().filter(|v| **v == f64::NEG_INFINITY).count()
        + usize::from(base == f64::NEG_INFINITY);
    if beyond > 0 {
        return Err(Error::BeyondSupport { count: beyond });
    }
    let k = tail.k() as f64;
    let r = compensated_sum(logs.iter().map(|&l| base - l)) / k;
    if (-NONNEGATIVE_SLACK..0.0).contains(&r) {
        return Ok(0.0);
    }
    Ok(r)
}

/// sqrt(k) * (r - 1).
pub fn z_statistic(r: f64, k: usize) -> f64 {
    (k as f64).sqrt() * (r - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sided {
    #[default]
    Two,
    Upper,
    Lower,
}

impl fmt::Display for Sided {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sided::Two => "two",
            Sided::Upper => "upper",
            Sided::Lower => "lower",
        })
    }
}

impl FromStr for Sided {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two" => Ok(Sided::Two),
            "upper" => Ok(Sided::Upper),
            "lower" => Ok(Sided::Lower),
            other => Err(Error::Usage(format!("sided must be two, upper or lower, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PValues {
    /// From the exact Gamma(k, 1) law of k*R.
    pub exact: f64,
    /// From the standard normal limit of sqrt(k)(R - 1).
    pub normal: f64,
}

fn sided_p(lower: f64, upper: f64, sided: Sided) -> f64 {
    match sided {
        Sided::Upper => upper,
        Sided::Lower => lower,
        Sided::Two => (2.0 * lower.min(upper)).min(1.0),
    }
}

pub fn p_values(r: f64, k: usize, sided: Sided) -> PValues {
    let (lower, upper) = gamma_pq(k as f64, k as f64 * r);
    let z = z_statistic(r, k);
    PValues {
        exact: sided_p(lower, upper, sided),
        normal: sided_p(normal_cdf(z), normal_sf(z), sided),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestReport {
    pub n: usize,
    pub k: usize,
    pub threshold: f64,
    pub r: f64,
    pub z: f64,
    pub p_exact: f64,
    pub p_normal: f64,
    pub sided: Sided,
    pub level: f64,
    pub reject: bool,
    /// Tied values in the tail slice; zero almost surely for continuous data.
    pub ties: usize,
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::Usage(format!("level must lie in (0, 1), got {level}")))
    }
}

/// Select the tail, compute R and decide at `level` using the exact p-value.
pub fn tail_test<M: TailModel + ?Sized>(
    sample: Vec<f64>,
    f0: &M,
    k: usize,
    level: f64,
    sided: Sided,
) -> Result<TestReport> {
    check_level(level)?;
    let tail = select_top_k_owned(sample, k)?;
    report_for_tail(&tail, f0, level, sided)
}

pub(crate) fn report_for_tail<M: TailModel + ?Sized>(
    tail: &TailSlice,
    f0: &M,
    level: f64,
    sided: Sided,
) -> Result<TestReport> {
    let r = r_statistic(tail, f0)?;
    let k = tail.k();
    let p = p_values(r, k, sided);
    Ok(TestReport {
        n: tail.n(),
        k,
        threshold: tail.threshold(),
        r,
        z: z_statistic(r, k),
        p_exact: p.exact,
        p_normal: p.normal,
        sided,
        level,
        reject: p.exact < level,
        ties: tail.ties(),
    })
}

/// Hill estimator (1/k) * sum ln(x_i) - ln(threshold).
pub fn hill_estimator(tail: &TailSlice) -> Result<f64> {
    if !(tail.threshold > 0.0) {
        return Err(Error::Domain(format!(
            "Hill estimator needs positive data, threshold is {}",
            tail.threshold
        )));
    }
    let log_t = tail.threshold.ln();
    let k = tail.k() as f64;
    Ok(compensated_sum(tail.exceedances.iter().map(|&x| x.ln() - log_t)) / k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Distribution;

    fn exp1() -> Distribution {
        Distribution::exponential(1.0).unwrap()
    }

    #[test]
    fn select_small_example() {
        let t = select_top_k(&[5.0, 1.0, 3.0, 2.0, 4.0], 2).unwrap();
        assert_eq!(t.threshold(), 3.0);
        assert_eq!(t.exceedances(), &[4.0, 5.0]);
        assert_eq!((t.n(), t.k()), (5, 2));
    }

    #[test]
    fn select_k_n_minus_one_gives_min() {
        let xs = [3.0, -2.0, 7.5, 0.0, 1.0];
        let t = select_top_k(&xs, 4).unwrap();
        assert_eq!(t.threshold(), -2.0);
        assert_eq!(t.exceedances(), &[0.0, 1.0, 3.0, 7.5]);
    }

    #[test]
    fn select_rejects_bad_k_and_non_finite() {
        let xs = [1.0, 2.0, 3.0];
        assert!(matches!(select_top_k(&xs, 0), Err(Error::Usage(_))));
        assert!(matches!(select_top_k(&xs, 3), Err(Error::Usage(_))));
        assert_eq!(select_top_k(&[1.0, f64::NAN, 2.0], 1), Err(Error::NonFinite { index: 1 }));
        assert_eq!(
            select_top_k(&[1.0, 2.0, f64::INFINITY], 1),
            Err(Error::NonFinite { index: 2 })
        );
    }

    #[test]
    fn select_matches_full_sort_on_sorted_million() {
        let xs: Vec<f64> = (0..1_000_000).map(|i| i as f64 * 0.5 - 7.0).collect();
        let t = select_top_k(&xs, 1000).unwrap();
        let mut sorted = xs.clone();
        sorted.sort_by(f64::total_cmp);
        assert_eq!(t.threshold(), sorted[1_000_000 - 1001]);
        assert_eq!(t.exceedances(), &sorted[1_000_000 - 1000..]);
    }

    #[test]
    fn ties_are_counted() {
        let t = select_top_k(&[1.0, 2.0, 2.0, 2.0, 3.0], 3).unwrap();
        assert_eq!(t.threshold(), 2.0);
        assert_eq!(t.ties(), 2);
    }

    #[test]
    fn r_exponential_example() {
        let t = select_top_k(&[0.5, 1.0, 2.0, 4.0], 2).unwrap();
        assert_eq!(t.threshold(), 1.0);
        assert_eq!(r_statistic(&t, &exp1()).unwrap(), 2.0);
    }

    #[test]
    fn r_pareto_example() {
        let t = select_top_k(&[1.0, 2.0, 4.0, 8.0], 2).unwrap();
        let r = r_statistic(&t, &Distribution::pareto(1.0).unwrap()).unwrap();
        assert!((r - 1.5 * 2f64.ln()).abs() < 1e-15);
        assert!((r - 1.0397).abs() < 1e-4);
    }

    #[test]
    fn r_degenerate_is_zero() {
        let t = select_top_k(&[0.1, 2.0, 2.0, 2.0], 2).unwrap();
        assert_eq!(r_statistic(&t, &exp1()).unwrap(), 0.0);
    }

    #[test]
    fn r_reports_points_beyond_support() {
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        let t = select_top_k(&[0.1, 0.5, 0.9, 1.0, 1.2], 3).unwrap();
        assert_eq!(r_statistic(&t, &u), Err(Error::BeyondSupport { count: 2 }));
        let t = select_top_k(&[0.1, 1.5, 2.0], 1).unwrap();
        assert_eq!(r_statistic(&t, &u), Err(Error::BeyondSupport { count: 2 }));
    }

    #[test]
    fn z_examples() {
        assert_eq!(z_statistic(1.0, 400), 0.0);
        assert!((z_statistic(1.1, 400) - 2.0).abs() < 1e-12);
        assert!((z_statistic(0.8, 100) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn p_value_examples() {
        let p = p_values(1.0, 1, Sided::Upper);
        assert!((p.exact - (-1f64).exp()).abs() < 1e-15);
        let p = p_values(1.0, 2, Sided::Upper);
        assert!((p.exact - 3.0 * (-2f64).exp()).abs() < 1e-15);
        let p = p_values(1.0, 10_000, Sided::Two);
        assert_eq!(p.normal, 1.0);
        assert!(p.exact > 0.99 && p.exact <= 1.0);
    }

    #[test]
    fn p_values_are_probabilities() {
        for k in [1, 3, 40, 900] {
            for r in [0.0, 0.2, 0.9, 1.0, 1.3, 5.0] {
                for sided in [Sided::Two, Sided::Upper, Sided::Lower] {
                    let p = p_values(r, k, sided);
                    assert!((0.0..=1.0).contains(&p.exact), "{k} {r} {sided}");
                    assert!((0.0..=1.0).contains(&p.normal), "{k} {r} {sided}");
                }
            }
        }
    }

    #[test]
    fn test_rejects_k_at_least_n() {
        let r = tail_test(vec![1.0, 2.0, 3.0], &exp1(), 3, 0.05, Sided::Two);
        assert!(matches!(r, Err(Error::Usage(_))));
        let r = tail_test(vec![1.0, 2.0, 3.0], &exp1(), 1, 1.5, Sided::Two);
        assert!(matches!(r, Err(Error::Usage(_))));
    }

    #[test]
    fn test_shifted_tail_rejects_upward() {
        let mut xs = exp1().sample(3, 5000);
        xs.sort_by(f64::total_cmp);
        for x in xs.iter_mut().rev().take(200) {
            *x *= 3.0;
        }
        let rep = tail_test(xs, &exp1(), 200, 0.05, Sided::Two).unwrap();
        assert!(rep.reject);
        assert!(rep.z > 0.0);
    }

    #[test]
    fn hill_examples() {
        let t = TailSlice { n: 3, threshold: 2.0, exceedances: vec![4.0, 8.0] };
        assert!((hill_estimator(&t).unwrap() - 1.5 * 2f64.ln()).abs() < 1e-15);
        let t = TailSlice { n: 3, threshold: 2.0, exceedances: vec![2.0, 2.0] };
        assert_eq!(hill_estimator(&t).unwrap(), 0.0);
        let t = TailSlice { n: 3, threshold: -1.0, exceedances: vec![2.0, 2.0] };
        assert!(matches!(hill_estimator(&t), Err(Error::Domain(_))));
    }

    #[test]
    fn sided_round_trip() {
        for s in [Sided::Two, Sided::Upper, Sided::Lower] {
            assert_eq!(s.to_string().parse::<Sided>().unwrap(), s);
        }
        assert!("both".parse::<Sided>().is_err());
    }
}
