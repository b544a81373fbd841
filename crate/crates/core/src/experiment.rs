//! Seed sweeps with summary statistics and acceptance verdicts.
//!
//! A sweep runs one algorithm on one instance for the seeds
//! `first_seed..first_seed + trials`, records a metric per seed together with
//! a structural check, and accepts when every structural check passed and the
//! empirical mean is at least `floor - 3 SE`.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::instances::{emit_instance, Instance, MakespanInstance, SetPackingInstance};
use crate::makespan::{alg2_round, evaluate_schedule, solve_clp, CombinedPlan};
use crate::par::Execution;
use crate::rational::{ceil, Rational};
use crate::setpacking::{sp_combined, LpMode, SpParams};

/// Fewest trials for which a standard error is reported.
pub const MIN_TRIALS: u64 = 30;

/// Width of the acceptance slack in standard errors.
pub const SLACK_SE: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation (denominator `n - 1`).
    pub std: f64,
    pub se: f64,
}

pub fn summarize(values: &[f64]) -> Summary {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let std = var.sqrt();
    Summary {
        mean,
        std,
        se: std / n.sqrt(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trial {
    pub seed: u64,
    pub value: f64,
    /// Per-run guarantee (load bound, disjointness) held.
    pub structural: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub digest: String,
    pub algorithm: String,
    pub metric: String,
    pub first_seed: u64,
    pub trials: Vec<Trial>,
    pub summary: Summary,
    pub floor: f64,
}

impl ExperimentReport {
    fn new(
        inst: &Instance,
        algorithm: &str,
        metric: &str,
        first_seed: u64,
        trials: Vec<Trial>,
        floor: f64,
    ) -> Self {
        let summary = summarize(&trials.iter().map(|t| t.value).collect::<Vec<_>>());
        ExperimentReport {
            digest: digest(inst),
            algorithm: algorithm.to_string(),
            metric: metric.to_string(),
            first_seed,
            trials,
            summary,
            floor,
        }
    }

    pub fn structural_ok(&self) -> bool {
        self.trials.iter().all(|t| t.structural)
    }

    pub fn mean_ok(&self) -> bool {
        self.summary.mean >= self.floor - SLACK_SE * self.summary.se
    }

    pub fn passed(&self) -> bool {
        self.structural_ok() && self.mean_ok()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "digest": self.digest,
            "algorithm": self.algorithm,
            "metric": self.metric,
            "first_seed": self.first_seed,
            "trials": self.trials.len(),
            "per_seed": self.trials.iter().map(|t| json!({
                "seed": t.seed,
                "value": t.value,
                "structural": t.structural,
            })).collect::<Vec<_>>(),
            "mean": self.summary.mean,
            "std": self.summary.std,
            "se": self.summary.se,
            "floor": self.floor,
            "verdicts": {
                "structural": self.structural_ok(),
                "mean_at_least_floor_minus_3se": self.mean_ok(),
            },
            "passed": self.passed(),
        })
    }
}

/// SHA-256 of the canonical instance bytes, hex encoded.
pub fn digest(inst: &Instance) -> String {
    format!("{:x}", Sha256::digest(emit_instance(inst)))
}

fn check_trials(trials: u64) -> Result<()> {
    if trials < MIN_TRIALS {
        return Err(Error::BadParams(format!(
            "need at least {MIN_TRIALS} trials, got {trials}"
        )));
    }
    Ok(())
}

fn sweep<F>(exec: Execution, first_seed: u64, trials: u64, run: F) -> Result<Vec<Trial>>
where
    F: Fn(u64) -> Result<Trial> + Sync + Send,
{
    exec.map_range(first_seed..first_seed + trials, run)
        .into_iter()
        .collect()
}

/// Fraction of jobs scheduled by rounding one configuration LP solution.
/// Floor `1 - 1/e`; structural check: every load at most `T`.
pub fn bench_rounding(
    inst: &MakespanInstance,
    first_seed: u64,
    trials: u64,
    column_cap: usize,
    exec: Execution,
) -> Result<ExperimentReport> {
    check_trials(trials)?;
    let clp = solve_clp(inst, column_cap)?;
    let n = inst.jobs() as f64;
    let trials = sweep(exec, first_seed, trials, |seed| {
        let s = alg2_round(&clp, inst, seed);
        let stats = evaluate_schedule(inst, &s)?;
        Ok(Trial {
            seed,
            value: stats.jobs_scheduled as f64 / n,
            structural: stats.makespan <= inst.target(),
        })
    })?;
    let floor = 1.0 - (-1.0f64).exp();
    Ok(ExperimentReport::new(
        &Instance::Makespan(inst.clone()),
        "alg2",
        "scheduled_fraction",
        first_seed,
        trials,
        floor,
    ))
}

/// Jobs scheduled by the combined scheduler. Floor from its report;
/// structural check: makespan at most `3T/2`.
pub fn bench_combined(
    inst: &MakespanInstance,
    first_seed: u64,
    trials: u64,
    column_cap: usize,
    exec: Execution,
) -> Result<ExperimentReport> {
    check_trials(trials)?;
    let plan = CombinedPlan::prepare(inst, column_cap)?;
    let bound = inst.target() * Rational::new(3, 2);
    let trials = sweep(exec, first_seed, trials, |seed| {
        let (s, report) = plan.run(inst, seed)?;
        Ok(Trial {
            seed,
            value: s.len() as f64,
            structural: report.makespan <= bound,
        })
    })?;
    let floor = crate::makespan::theoretical_floor(inst.jobs(), plan.m_star());
    Ok(ExperimentReport::new(
        &Instance::Makespan(inst.clone()),
        "combined",
        "scheduled_count",
        first_seed,
        trials,
        floor,
    ))
}

/// Sets packed by the two-phase set packing algorithm. Floor
/// `(1 - delta) m` with `m` the planted partition size; structural check:
/// the packing is disjoint and every set bigger than `C` keeps at least
/// `0.9 eps` of its free elements.
pub fn bench_setpacking(
    inst: &SetPackingInstance,
    params: &SpParams,
    mode: LpMode,
    first_seed: u64,
    trials: u64,
    exec: Execution,
) -> Result<ExperimentReport> {
    check_trials(trials)?;
    let planted = inst.planted().ok_or(Error::NoPlantedWitness)?.len();
    let trials = sweep(exec, first_seed, trials, |seed| {
        let sol = sp_combined(inst, params, seed, mode)?;
        Ok(Trial {
            seed,
            value: sol.len() as f64,
            structural: sol.validate(inst).is_ok() && big_sets_keep_enough(inst, params, &sol),
        })
    })?;
    let floor = (1.0 - crate::rational::to_f64(&params.delta)) * planted as f64;
    Ok(ExperimentReport::new(
        &Instance::SetPacking(inst.clone()),
        "sp_all",
        "packed_sets",
        first_seed,
        trials,
        floor,
    ))
}

/// Every pick of a set bigger than `C` keeps at least `ceil(0.9 eps |S'|)`
/// elements, `S'` being the set minus the elements used by small sets.
pub fn big_sets_keep_enough(
    inst: &SetPackingInstance,
    params: &SpParams,
    sol: &crate::setpacking::PackingSolution,
) -> bool {
    let mut used = vec![false; inst.universe_size()];
    for p in sol
        .picks
        .iter()
        .filter(|p| inst.set(p.set_index).len() <= params.c)
    {
        for &u in &p.kept {
            used[u] = true;
        }
    }
    sol.picks
        .iter()
        .filter(|p| inst.set(p.set_index).len() > params.c)
        .all(|p| {
            let free = inst.set(p.set_index).iter().filter(|&&u| !used[u]).count() as i64;
            let need = ceil(&(Rational::new(9, 10) * params.eps * Rational::from_integer(free)));
            p.kept.len() as i64 >= need
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::gen_planted_makespan;
    use crate::makespan::DEFAULT_COLUMN_CAP;

    #[test]
    fn summary_of_constant() {
        let s = summarize(&[2.0; 10]);
        assert_eq!((s.mean, s.std, s.se), (2.0, 0.0, 0.0));
        let s = summarize(&[1.0, 3.0]);
        assert_eq!(s.mean, 2.0);
        assert!((s.std - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn too_few_trials() {
        let inst = gen_planted_makespan(2, 3, 0.5, 7).unwrap();
        assert!(matches!(
            bench_rounding(&inst, 0, 1, DEFAULT_COLUMN_CAP, Execution::Sequential),
            Err(Error::BadParams(_))
        ));
    }

    #[test]
    fn sequential_and_default_agree() {
        let inst = gen_planted_makespan(2, 6, 0.5, 3).unwrap();
        let a = bench_combined(&inst, 5, 40, DEFAULT_COLUMN_CAP, Execution::Sequential).unwrap();
        let b = bench_combined(&inst, 5, 40, DEFAULT_COLUMN_CAP, Execution::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.passed());
        assert_eq!(a.digest.len(), 64);
    }
}
