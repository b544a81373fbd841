//! Configuration LP by explicit column enumeration.
//!
//! For each machine every subset of the covered jobs whose total processing
//! time is at most `T` becomes one column. Rows are one convexity constraint
//! per machine (`sum_C y_{i,C} = 1`) followed by one covering constraint per
//! covered job (`sum_{i, C ∋ j} y_{i,C} = 1`). The LP has a zero objective; any
//! vertex returned by the feasibility phase is a valid solution.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::engines::{lp_solve, LpProblem, LpStatus, Relation};
use crate::error::{Error, Result};
use crate::instances::MakespanInstance;
use crate::rational::Rational;

pub const DEFAULT_COLUMN_CAP: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub machine: usize,
    /// Sorted job ids.
    pub jobs: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ConfigurationLp {
    pub problem: LpProblem,
    /// One entry per LP variable, in canonical `(machine, subset)` order.
    pub columns: Vec<Column>,
    /// Jobs with a covering row, in row order.
    pub covered: Vec<usize>,
}

/// Configuration LP covering every job of the instance.
pub fn build_configuration_lp(
    inst: &MakespanInstance,
    column_cap: usize,
) -> Result<ConfigurationLp> {
    let all: Vec<usize> = (0..inst.jobs()).collect();
    build_configuration_lp_for(inst, &all, column_cap)
}

/// Configuration LP over the given jobs only; other jobs appear in no
/// configuration and have no covering row.
pub fn build_configuration_lp_for(
    inst: &MakespanInstance,
    jobs: &[usize],
    column_cap: usize,
) -> Result<ConfigurationLp> {
    let mut covered = jobs.to_vec();
    covered.sort_unstable();
    covered.dedup();
    let t = inst.target();
    let mut columns = Vec::new();
    for machine in 0..inst.machines() {
        let candidates: Vec<(usize, Rational)> = covered
            .iter()
            .filter_map(|&j| inst.time(machine, j).filter(|p| *p <= t).map(|p| (j, p)))
            .collect();
        let mut current = Vec::new();
        enumerate_subsets(
            &candidates,
            0,
            Rational::zero(),
            t,
            &mut current,
            &mut |subset| {
                if columns.len() >= column_cap {
                    return Err(Error::ConfigExplosion { cap: column_cap });
                }
                columns.push(Column {
                    machine,
                    jobs: subset.to_vec(),
                });
                Ok(())
            },
        )?;
    }

    let mut problem = LpProblem::new(vec![BigRational::zero(); columns.len()]);
    for machine in 0..inst.machines() {
        let coeffs = columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.machine == machine)
            .map(|(k, _)| (k, BigRational::one()));
        problem.add_constraint(coeffs, Relation::Eq, BigRational::one());
    }
    let mut rows_of_job: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); covered.len()];
    for (k, c) in columns.iter().enumerate() {
        for j in &c.jobs {
            let r = covered
                .binary_search(j)
                .expect("columns only use covered jobs");
            rows_of_job[r].push((k, BigRational::one()));
        }
    }
    for coeffs in rows_of_job {
        problem.add_constraint(coeffs, Relation::Eq, BigRational::one());
    }
    Ok(ConfigurationLp {
        problem,
        columns,
        covered,
    })
}

/// Emits every subset of `candidates[from..]` extending `current` whose load
/// stays within `cap`, in lexicographic order of sorted job lists.
fn enumerate_subsets<F>(
    candidates: &[(usize, Rational)],
    from: usize,
    load: Rational,
    cap: Rational,
    current: &mut Vec<usize>,
    emit: &mut F,
) -> Result<()>
where
    F: FnMut(&[usize]) -> Result<()>,
{
    emit(current)?;
    for k in from..candidates.len() {
        let (j, p) = candidates[k];
        let next = load + p;
        if next <= cap {
            current.push(j);
            enumerate_subsets(candidates, k + 1, next, cap, current, emit)?;
            current.pop();
        }
    }
    Ok(())
}

/// Fractional configuration assignment: per machine, the configurations with
/// positive weight in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct ClpSolution {
    per_machine: Vec<Vec<(Vec<usize>, BigRational)>>,
    covered: Vec<usize>,
}

impl ClpSolution {
    /// Validates every configuration LP constraint exactly.
    pub fn new(
        inst: &MakespanInstance,
        covered: &[usize],
        per_machine: Vec<Vec<(Vec<usize>, BigRational)>>,
    ) -> Result<Self> {
        if per_machine.len() != inst.machines() {
            return Err(Error::invariant(
                "clp",
                format!(
                    "{} machine rows for {} machines",
                    per_machine.len(),
                    inst.machines()
                ),
            ));
        }
        let mut covered = covered.to_vec();
        covered.sort_unstable();
        covered.dedup();
        let mut job_weight = vec![BigRational::zero(); inst.jobs()];
        let t = inst.target();
        for (i, configs) in per_machine.iter().enumerate() {
            let mut total = BigRational::zero();
            for (jobs, w) in configs {
                if w.is_negative() || *w > BigRational::one() {
                    return Err(Error::invariant(
                        format!("clp[{i}]"),
                        "weight outside [0, 1]",
                    ));
                }
                let mut load = Rational::zero();
                for &j in jobs {
                    if covered.binary_search(&j).is_err() {
                        return Err(Error::invariant(
                            format!("clp[{i}]"),
                            format!("job {j} is not covered"),
                        ));
                    }
                    load += inst
                        .time(i, j)
                        .ok_or(Error::InvalidAssignment { machine: i, job: j })?;
                    job_weight[j] += w;
                }
                if load > t {
                    return Err(Error::invariant(
                        format!("clp[{i}]"),
                        "configuration exceeds T",
                    ));
                }
                total += w;
            }
            if !total.is_one() {
                return Err(Error::invariant(
                    format!("clp[{i}]"),
                    "weights do not sum to 1",
                ));
            }
        }
        if let Some(&j) = covered.iter().find(|&&j| !job_weight[j].is_one()) {
            return Err(Error::invariant(
                "clp",
                format!("job {j} is not covered exactly once"),
            ));
        }
        Ok(ClpSolution {
            per_machine,
            covered,
        })
    }

    pub fn machines(&self) -> usize {
        self.per_machine.len()
    }

    pub fn configurations(&self, machine: usize) -> &[(Vec<usize>, BigRational)] {
        &self.per_machine[machine]
    }

    pub fn covered(&self) -> &[usize] {
        &self.covered
    }

    /// Total weight of configurations containing `job`, over all machines.
    pub fn coverage(&self, job: usize) -> BigRational {
        self.per_machine
            .iter()
            .flatten()
            .filter(|(jobs, _)| jobs.contains(&job))
            .map(|(_, w)| w.clone())
            .sum()
    }

    pub fn is_integral(&self) -> bool {
        self.per_machine
            .iter()
            .flatten()
            .all(|(_, w)| w.is_integer())
    }
}

pub fn solve_clp(inst: &MakespanInstance, column_cap: usize) -> Result<ClpSolution> {
    let all: Vec<usize> = (0..inst.jobs()).collect();
    solve_clp_for(inst, &all, column_cap)
}

pub fn solve_clp_for(
    inst: &MakespanInstance,
    jobs: &[usize],
    column_cap: usize,
) -> Result<ClpSolution> {
    let t = inst.target();
    if let Some(&j) = jobs
        .iter()
        .find(|&&j| (0..inst.machines()).all(|i| inst.time(i, j).is_none_or(|p| p > t)))
    {
        return Err(Error::InfeasibleClp(format!(
            "job {j} fits on no machine within T"
        )));
    }
    let clp = build_configuration_lp_for(inst, jobs, column_cap)?;
    let solution = lp_solve(&clp.problem)?;
    if solution.status != LpStatus::Optimal {
        return Err(Error::InfeasibleClp(
            "the jobs cannot be covered within makespan T".into(),
        ));
    }
    let mut per_machine = vec![Vec::new(); inst.machines()];
    for (col, w) in clp.columns.iter().zip(solution.values) {
        if w.is_positive() {
            per_machine[col.machine].push((col.jobs.clone(), w));
        }
    }
    ClpSolution::new(inst, &clp.covered, per_machine)
}
