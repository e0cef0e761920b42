//! Deterministic parallel Monte Carlo for null calibration and power.
//!
//! Each replication draws its sample from a ChaCha8 stream whose seed is a
//! pure function of `(master_seed, replication index)`, so results do not
//! depend on how rayon schedules replications. Replications run on the
//! current rayon pool; wrap calls in `ThreadPool::install` to pick a worker
//! count.

mod schedule;
mod tail;

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use schedule::{default_n_grid, validate_k_schedule, KRule, ScheduleReport, ScheduleRow};
pub use tail::{
    eta_q_experiment, renyi_mean, renyi_tail_oracle, sample_tail_conditional, DominanceVerdict,
    EtaExperiment, EtaReport,
};

use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::ks::{ks_one_sample, KsResult};
use crate::special::{gamma_pq, normal_cdf};
use crate::tail_statistic::{report_for_tail, select_top_k_owned, Sided};

fn default_level() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub f0: Distribution,
    /// Law the samples are drawn from; `None` means F0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f1: Option<Distribution>,
    pub n: usize,
    #[serde(alias = "k")]
    pub k_rule: KRule,
    #[serde(default = "default_level")]
    pub level: f64,
    #[serde(default)]
    pub sided: Sided,
    pub reps: usize,
    #[serde(alias = "seed")]
    pub master_seed: u64,
}

impl SimulationConfig {
    pub fn null(f0: Distribution, n: usize, k_rule: KRule, reps: usize, master_seed: u64) -> Self {
        Self { f0, f1: None, n, k_rule, level: default_level(), sided: Sided::Two, reps, master_seed }
    }

    pub fn with_alternative(mut self, f1: Distribution) -> Self {
        self.f1 = Some(f1);
        self
    }

    /// Check invariants and return the tail count k for this n.
    pub fn validate(&self) -> Result<usize> {
        let k = self.k_rule.k_for(self.n);
        if k == 0 || k >= self.n {
            return Err(Error::Usage(format!(
                "k rule `{}` gives k={k} at n={}; need 1 <= k < n",
                self.k_rule, self.n
            )));
        }
        if self.reps == 0 {
            return Err(Error::Usage("reps must be >= 1".into()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::Usage(format!("level must lie in (0, 1), got {}", self.level)));
        }
        if let KRule::Power { exponent, .. } = self.k_rule {
            if !(exponent > 0.0 && exponent < 1.0) {
                return Err(Error::Usage(format!("schedule exponent must lie in (0, 1), got {exponent}")));
            }
        }
        Ok(k)
    }

    fn sampled_law(&self) -> Distribution {
        self.f1.unwrap_or(self.f0)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replication `rep` under `master`.
pub fn derive_seed(master: u64, rep: usize) -> u64 {
    splitmix64(master ^ splitmix64(rep as u64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReplicationRecord {
    pub rep: usize,
    pub seed: u64,
    pub r: f64,
    pub z: f64,
    pub p_exact: f64,
    pub reject: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunKind {
    Null,
    Power,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationResult {
    pub kind: RunKind,
    pub config: SimulationConfig,
    pub k: usize,
    pub rejection_rate: f64,
    pub mean_z: f64,
    pub sd_z: f64,
    /// KS distance of the z values to N(0, 1).
    pub ks_vs_normal: f64,
    pub ks_vs_normal_p: f64,
    /// KS distance of the k*r values to Gamma(k, 1).
    pub ks_kr_vs_gamma: f64,
    pub ks_kr_vs_gamma_p: f64,
    #[serde(skip)]
    pub records: Vec<ReplicationRecord>,
}

impl SimulationResult {
    pub fn z_values(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.z).collect()
    }

    pub fn kr_values(&self) -> Vec<f64> {
        let k = self.k as f64;
        self.records.iter().map(|r| k * r.r).collect()
    }

    /// Per-replication CSV with header `rep,seed,r,z,p_exact,reject`.
    pub fn records_csv(&self) -> String {
        let mut out = String::from("rep,seed,r,z,p_exact,reject\n");
        for r in &self.records {
            let _ = writeln!(out, "{},{},{},{},{},{}", r.rep, r.seed, r.r, r.z, r.p_exact, r.reject);
        }
        out
    }
}

fn replicate(cfg: &SimulationConfig, law: Distribution, k: usize, rep: usize) -> Result<ReplicationRecord> {
    let seed = derive_seed(cfg.master_seed, rep);
    let sample = law.sample(seed, cfg.n);
    let tail = select_top_k_owned(sample, k)?;
    let report = report_for_tail(&tail, &cfg.f0, cfg.level, cfg.sided)?;
    Ok(ReplicationRecord {
        rep,
        seed,
        r: report.r,
        z: report.z,
        p_exact: report.p_exact,
        reject: report.reject,
    })
}

fn run(cfg: &SimulationConfig, kind: RunKind) -> Result<SimulationResult> {
    let k = cfg.validate()?;
    let law = cfg.sampled_law();
    let records = (0..cfg.reps)
        .into_par_iter()
        .map(|rep| replicate(cfg, law, k, rep))
        .collect::<Result<Vec<_>>>()?;

    // Aggregates are computed sequentially over records in replication order.
    let reps = records.len() as f64;
    let rejections = records.iter().filter(|r| r.reject).count();
    let z: Vec<f64> = records.iter().map(|r| r.z).collect();
    let mean_z = z.iter().sum::<f64>() / reps;
    let sd_z = if records.len() > 1 {
        (z.iter().map(|v| (v - mean_z).powi(2)).sum::<f64>() / (reps - 1.0)).sqrt()
    } else {
        0.0
    };
    let kf = k as f64;
    let kr: Vec<f64> = records.iter().map(|r| kf * r.r).collect();
    let ks_normal: KsResult = ks_one_sample(&z, normal_cdf);
    let ks_gamma: KsResult = ks_one_sample(&kr, |x| gamma_pq(kf, x).0);

    Ok(SimulationResult {
        kind,
        config: cfg.clone(),
        k,
        rejection_rate: rejections as f64 / reps,
        mean_z,
        sd_z,
        ks_vs_normal: ks_normal.statistic,
        ks_vs_normal_p: ks_normal.p_value,
        ks_kr_vs_gamma: ks_gamma.statistic,
        ks_kr_vs_gamma_p: ks_gamma.p_value,
        records,
    })
}

/// Replications under H0: samples from F0, tested against F0.
pub fn simulate_null(cfg: &SimulationConfig) -> Result<SimulationResult> {
    if cfg.f1.is_some_and(|f1| f1 != cfg.f0) {
        return Err(Error::Usage("null simulation must not set a different f1".into()));
    }
    run(cfg, RunKind::Null)
}

/// Replications under an alternative: samples from F1, tested against F0.
pub fn simulate_power(cfg: &SimulationConfig) -> Result<SimulationResult> {
    if cfg.f1.is_none() {
        return Err(Error::Usage("power simulation needs f1".into()));
    }
    run(cfg, RunKind::Power)
}
