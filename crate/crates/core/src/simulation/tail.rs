//! Exact constructions behind the null law and the alternative drift: the
//! exponential-spacings representation of the exceedance log-spectrum, draws
//! from a tail distribution F_q, and the log-survival gap η_q.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distributions::{open_uniform, TailModel};
use crate::error::{Error, Result};
use crate::ks::{dkw_epsilon, ks_one_sample, KsResult};

/// Sorted values { sum_{j=i+1}^{k} E_j / j }_{i=0..k-1} from k seeded
/// standard exponentials. Under H0 these have the joint law of the
/// exceedance log-survival gaps, so their mean has the law of R.
pub fn renyi_tail_oracle(k: usize, seed: u64) -> Vec<f64> {
    assert!(k >= 1, "renyi_tail_oracle needs k >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e: Vec<f64> = (0..k).map(|_| -open_uniform(&mut rng).ln()).collect();
    // Partial sums from j = k down to 1 come out ascending.
    let mut out = Vec::with_capacity(k);
    let mut acc = 0.0;
    for j in (1..=k).rev() {
        acc += e[j - 1] / j as f64;
        out.push(acc);
    }
    out
}

/// Mean of [`renyi_tail_oracle`].
pub fn renyi_mean(k: usize, seed: u64) -> f64 {
    renyi_tail_oracle(k, seed).iter().sum::<f64>() / k as f64
}

/// `count` i.i.d. draws from F_q(x) = (F(x) - F(q)) / (1 - F(q)), x > q.
///
/// Inverse transform in log-survival space: ln S(X) = ln S(q) + ln U.
pub fn sample_tail_conditional<M: TailModel + ?Sized>(
    f: &M,
    q: f64,
    seed: u64,
    count: usize,
) -> Result<Vec<f64>> {
    let base = f.log_survival(q);
    if !base.is_finite() {
        return Err(Error::Domain(format!("threshold {q} is at or beyond the right endpoint")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let x = f.inverse_log_survival(base + open_uniform(&mut rng).ln());
            // Rounding in the inverse can land on q itself in very flat tails.
            if x > q {
                x
            } else {
                q.next_up()
            }
        })
        .collect())
}

/// How the law of η_q compares with Exp(1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DominanceVerdict {
    /// The empirical cdf stays inside the band around the Exp(1) cdf.
    Equal,
    /// Cdf above Exp(1): η_q is stochastically smaller.
    StochasticallySmaller,
    /// Cdf below Exp(1): η_q is stochastically larger.
    StochasticallyLarger,
    Undetermined,
}

#[derive(Clone, Copy)]
pub struct EtaExperiment<'a> {
    /// Plays F: the law whose log-survival measures the gap.
    pub f: &'a dyn TailModel,
    /// Plays G: the law the exceedance is drawn from.
    pub g: &'a dyn TailModel,
    pub q: f64,
    pub reps: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaReport {
    pub reps: usize,
    pub mean: f64,
    pub ks: KsResult,
    /// DKW band half-width at 99% confidence.
    pub dkw_band: f64,
    /// sup (F_emp - F_exp): how far the empirical cdf rises above Exp(1).
    pub max_above: f64,
    /// sup (F_exp - F_emp).
    pub max_below: f64,
    pub verdict: DominanceVerdict,
}

/// Confidence level of the dominance band.
const DKW_ALPHA: f64 = 0.01;

/// Draw ξ_q ~ G_q and form η_q = ln S_F(q) - ln S_F(ξ_q); compare its law to
/// Exp(1).
pub fn eta_q_experiment(exp: &EtaExperiment<'_>) -> Result<EtaReport> {
    if exp.reps == 0 {
        return Err(Error::Usage("eta experiment needs reps >= 1".into()));
    }
    let base_f = exp.f.log_survival(exp.q);
    if !base_f.is_finite() || !exp.g.log_survival(exp.q).is_finite() {
        return Err(Error::Domain(format!("q = {} must lie strictly inside both supports", exp.q)));
    }
    let xi = sample_tail_conditional(exp.g, exp.q, exp.seed, exp.reps)?;
    let mut eta: Vec<f64> = xi.iter().map(|&x| base_f - exp.f.log_survival(x)).collect();
    eta.sort_unstable_by(f64::total_cmp);

    let n = eta.len() as f64;
    let exp_cdf = |y: f64| if y <= 0.0 { 0.0 } else { -libm::expm1(-y) };
    let (mut above, mut below) = (0.0f64, 0.0f64);
    for (i, &y) in eta.iter().enumerate() {
        let f = exp_cdf(y);
        above = above.max((i + 1) as f64 / n - f);
        below = below.max(f - i as f64 / n);
    }
    let band = dkw_epsilon(eta.len(), DKW_ALPHA);
    // Cdf never drops below Exp(1) by more than the band: consistent with
    // "stochastically smaller or equal", and symmetrically for "larger".
    let smaller_ok = below <= band;
    let larger_ok = above <= band;
    let verdict = match (smaller_ok, larger_ok) {
        (true, true) => DominanceVerdict::Equal,
        (true, false) => DominanceVerdict::StochasticallySmaller,
        (false, true) => DominanceVerdict::StochasticallyLarger,
        (false, false) => DominanceVerdict::Undetermined,
    };
    Ok(EtaReport {
        reps: exp.reps,
        mean: eta.iter().sum::<f64>() / n,
        ks: ks_one_sample(&eta, exp_cdf),
        dkw_band: band,
        max_above: above,
        max_below: below,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Distribution;

    fn d(spec: &str) -> Distribution {
        spec.parse().unwrap()
    }

    #[test]
    fn oracle_is_sorted_and_seeded() {
        let v = renyi_tail_oracle(50, 9);
        assert_eq!(v.len(), 50);
        assert!(v.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(v, renyi_tail_oracle(50, 9));
        assert!(v.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn oracle_k1_has_unit_mean() {
        let reps = 100_000;
        let mean = (0..reps).map(|s| renyi_mean(1, s as u64)).sum::<f64>() / reps as f64;
        assert!((mean - 1.0).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn memoryless_exponential_tail() {
        let xs = sample_tail_conditional(&d("exp:1"), 2.0, 4, 100_000).unwrap();
        assert!(xs.iter().all(|&x| x > 2.0));
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((mean - 3.0).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn uniform_tail_mean() {
        let xs = sample_tail_conditional(&d("uniform:0,1"), 0.9, 4, 100_000).unwrap();
        assert!(xs.iter().all(|&x| x > 0.9 && x < 1.0));
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((mean - 0.95).abs() < 0.001, "mean {mean}");
    }

    #[test]
    fn threshold_at_endpoint_is_rejected() {
        assert!(sample_tail_conditional(&d("uniform:0,1"), 1.0, 1, 10).is_err());
    }

    #[test]
    fn eta_verdicts_for_exponential_pairs() {
        let (e1, e2) = (d("exp:1"), d("exp:2"));
        let run = |f: &Distribution, g: &Distribution, q: f64| {
            eta_q_experiment(&EtaExperiment { f, g, q, reps: 100_000, seed: 11 }).unwrap()
        };
        let same = run(&e1, &e1, 3.0);
        assert_eq!(same.verdict, DominanceVerdict::Equal);
        assert!(same.ks.p_value > 0.001);
        assert_eq!(run(&e1, &e2, 1.0).verdict, DominanceVerdict::StochasticallySmaller);
        assert_eq!(run(&e2, &e1, 1.0).verdict, DominanceVerdict::StochasticallyLarger);
    }
}
