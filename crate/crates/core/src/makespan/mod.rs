//! Bicriteria makespan on unrelated machines.
//!
//! Three procedures, combined into a schedule of makespan at most `3T/2`:
//!
//! * [`alg1_match_large`] schedules a maximum matching of large edges
//!   (`T/2 < p <= T`) within makespan `T`;
//! * [`alg2_round`] samples one configuration per machine from a solution of
//!   the configuration LP, scheduling a `1 - 1/e` fraction of the jobs in
//!   expectation within makespan `T`;
//! * [`alg3_greedy`] list-schedules small edges by increasing processing time
//!   and truncates every machine at `T/2`.
//!
//! [`combined_schedule`] returns the better of the matching and of the greedy
//! schedule followed by rounding on the jobs it left over.

mod clp;
mod combined;
mod greedy;
mod rounding;

use num_traits::Zero;

use crate::engines::max_bipartite_matching;
use crate::error::Result;
use crate::instances::{MakespanInstance, Schedule};
use crate::rational::Rational;

pub use clp::{
    build_configuration_lp, build_configuration_lp_for, solve_clp, solve_clp_for, ClpSolution,
    ConfigurationLp, DEFAULT_COLUMN_CAP,
};
pub use combined::{
    balance_fraction, balance_fraction_lower_bound, combined_schedule, theoretical_floor, Branch,
    CombinedPlan, CombinedReport,
};
pub use greedy::{alg3_greedy, GreedyTrace};
pub use rounding::alg2_round;

/// Large and small edges, each sorted by `(machine, job)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePartition {
    pub large: Vec<(usize, usize)>,
    pub small: Vec<(usize, usize)>,
}

pub fn partition_edges(inst: &MakespanInstance) -> EdgePartition {
    let t = inst.target();
    let half = t / 2;
    let mut large = Vec::new();
    let mut small = Vec::new();
    for i in 0..inst.machines() {
        for j in 0..inst.jobs() {
            match inst.time(i, j) {
                Some(p) if p <= half => small.push((i, j)),
                Some(p) if p <= t => large.push((i, j)),
                _ => {}
            }
        }
    }
    EdgePartition { large, small }
}

/// Maximum matching on the large edges. Its size is `m*`.
pub fn alg1_match_large(inst: &MakespanInstance) -> Schedule {
    let EdgePartition { large, .. } = partition_edges(inst);
    max_bipartite_matching(inst.machines(), inst.jobs(), &large)
        .expect("edges come from the instance")
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduleStats {
    pub jobs_scheduled: usize,
    pub makespan: Rational,
}

pub fn evaluate_schedule(inst: &MakespanInstance, sched: &Schedule) -> Result<ScheduleStats> {
    let loads = sched.loads(inst)?;
    Ok(ScheduleStats {
        jobs_scheduled: sched.len(),
        makespan: loads.into_iter().max().unwrap_or_else(Rational::zero),
    })
}
