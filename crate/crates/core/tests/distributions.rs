use tailgof::ks::ks_one_sample;
use tailgof::{Distribution, TailModel};

const FAMILIES: &[&str] = &[
    "exp:1",
    "exp:0.3",
    "pareto:0.5",
    "pareto:2",
    "normal:0,1",
    "normal:-3,0.2",
    "lognormal:0,1",
    "lognormal:1,0.5",
    "weibull:0.5,1",
    "weibull:3,2",
    "frechet:1",
    "frechet:4",
    "gumbel:0,1",
    "gumbel:-2,0.5",
    "uniform:0,1",
    "uniform:-1,3",
];

fn each() -> impl Iterator<Item = Distribution> {
    FAMILIES.iter().map(|s| s.parse().unwrap())
}

#[test]
fn cdf_of_quantile_round_trips() {
    let ps = [1e-6, 1e-3, 0.1, 0.5, 0.9, 1.0 - 1e-3, 1.0 - 1e-6];
    for d in each() {
        for p in ps {
            let x = d.quantile(p).unwrap();
            assert!((d.cdf(x) - p).abs() <= 1e-9, "{d}: p={p} x={x} cdf={}", d.cdf(x));
        }
    }
}

#[test]
fn log_survival_stable_up_to_extreme_quantile() {
    for d in each() {
        let lo = d.quantile(0.5).unwrap();
        let hi = d.quantile(1.0 - 1e-12).unwrap();
        let mut prev = d.log_survival(lo);
        assert!(prev.is_finite());
        for i in 1..=2000 {
            let x = lo + (hi - lo) * i as f64 / 2000.0;
            let v = d.log_survival(x);
            assert!(v.is_finite() && v < prev, "{d} at x={x}: {v} vs {prev}");
            prev = v;
        }
        // ln S at the extreme quantile matches ln(1e-12).
        let target = (1e-12f64).ln();
        assert!((d.log_survival(hi) - target).abs() < 1e-3 * target.abs(), "{d}");
    }
}

#[test]
fn log_survival_far_beyond_double_precision_survival() {
    for d in each() {
        let (_, hi) = d.support();
        if hi.is_finite() {
            continue;
        }
        let x = d.inverse_log_survival(-2000.0);
        if x == f64::INFINITY {
            // Heavy tails reach this depth only past the largest double.
            assert!(d.log_survival(f64::MAX) > -2000.0, "{d}");
            continue;
        }
        let back = d.log_survival(x);
        assert!((back + 2000.0).abs() < 1e-6 * 2000.0, "{d}: {back}");
    }
}

#[test]
fn samples_follow_their_cdf() {
    for (i, d) in each().enumerate() {
        let seed = 1000 + i as u64;
        let xs = d.sample(seed, 10_000);
        let ks = ks_one_sample(&xs, |x| d.cdf(x));
        assert!(ks.p_value > 0.001, "{d} seed {seed}: D={} p={}", ks.statistic, ks.p_value);
    }
}

#[test]
fn sample_equals_quantile_of_uniform_draws() {
    for d in each() {
        let xs = d.sample(99, 2000);
        let us = tailgof::distributions::uniforms(99, 2000);
        for (x, u) in xs.iter().zip(&us) {
            assert_eq!(*x, d.quantile(*u).unwrap(), "{d}");
        }
    }
}
