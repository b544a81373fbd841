//! Exhaustive reference solvers for tiny instances.
//!
//! Nothing here is clever: every oracle enumerates its whole search space
//! (or, for almost-disjoint families, every subfamily whose subsets all pass)
//! and refuses inputs beyond a fixed budget with [`Error::TooLarge`].

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::instances::{MakespanInstance, SantaClausInstance, SetPackingInstance};
use crate::rational::Rational;
use crate::setpacking::check_almost_disjoint;

/// Largest search space any oracle will walk.
pub const SEARCH_BUDGET: u64 = 10_000_000;

fn guard(base: usize, exponent: usize, what: &str) -> Result<()> {
    let mut total: u64 = 1;
    for _ in 0..exponent {
        total = total.saturating_mul(base as u64);
        if total > SEARCH_BUDGET {
            return Err(Error::TooLarge(format!(
                "{what}: {base}^{exponent} exceeds {SEARCH_BUDGET}"
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeFilter {
    #[default]
    All,
    /// Only pairs with `p <= T/2`.
    SmallOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MakespanOpt {
    /// Best makespan over schedules of every job; `None` if some job has no
    /// usable machine.
    pub opt_makespan: Option<Rational>,
    /// Most jobs schedulable with every load at most `T`.
    pub max_jobs_within_t: usize,
}

/// Walks all `(m + 1)^n` assignments, the extra choice being "unscheduled".
pub fn brute_makespan_opt(inst: &MakespanInstance, filter: EdgeFilter) -> Result<MakespanOpt> {
    let (m, n) = (inst.machines(), inst.jobs());
    guard(m + 1, n, "makespan assignments")?;
    let half = inst.target() / 2;
    let usable: Vec<Vec<Option<Rational>>> = (0..m)
        .map(|i| {
            (0..n)
                .map(|j| {
                    inst.time(i, j)
                        .filter(|p| filter == EdgeFilter::All || *p <= half)
                })
                .collect()
        })
        .collect();
    let mut best = MakespanOpt {
        opt_makespan: None,
        max_jobs_within_t: 0,
    };
    let mut loads = vec![Rational::zero(); m];
    walk_makespan(inst, &usable, 0, 0, &mut loads, &mut best);
    Ok(best)
}

fn walk_makespan(
    inst: &MakespanInstance,
    usable: &[Vec<Option<Rational>>],
    job: usize,
    scheduled: usize,
    loads: &mut [Rational],
    best: &mut MakespanOpt,
) {
    if job == inst.jobs() {
        let makespan = loads.iter().copied().max().unwrap_or_else(Rational::zero);
        if makespan <= inst.target() {
            best.max_jobs_within_t = best.max_jobs_within_t.max(scheduled);
        }
        if scheduled == inst.jobs() && best.opt_makespan.is_none_or(|b| makespan < b) {
            best.opt_makespan = Some(makespan);
        }
        return;
    }
    walk_makespan(inst, usable, job + 1, scheduled, loads, best);
    for i in 0..inst.machines() {
        if let Some(p) = usable[i][job] {
            loads[i] += p;
            walk_makespan(inst, usable, job + 1, scheduled + 1, loads, best);
            loads[i] -= p;
        }
    }
}

/// Pairwise conflicts as bitmasks over set indices.
fn conflicts(sets: &[Vec<usize>]) -> Vec<u64> {
    (0..sets.len())
        .map(|a| {
            (0..sets.len())
                .filter(|&b| b != a && sets[a].iter().any(|u| sets[b].contains(u)))
                .fold(0u64, |acc, b| acc | 1 << b)
        })
        .collect()
}

fn is_packing(mask: u64, conflict: &[u64]) -> bool {
    (0..conflict.len()).all(|k| mask >> k & 1 == 0 || conflict[k] & mask == 0)
}

/// Largest number of pairwise disjoint sets lying entirely inside `allowed`
/// (the whole universe when `None`), over all `2^n` subfamilies.
pub fn brute_setpacking_opt(inst: &SetPackingInstance, allowed: Option<&[usize]>) -> Result<usize> {
    let n = inst.len();
    guard(2, n, "set subfamilies")?;
    let inside = |s: &[usize]| allowed.is_none_or(|a| s.iter().all(|u| a.contains(u)));
    let usable: u64 = (0..n)
        .filter(|&k| inside(inst.set(k)))
        .fold(0, |acc, k| acc | 1 << k);
    let conflict = conflicts(inst.sets());
    Ok((0..1u64 << n)
        .filter(|&mask| mask & !usable == 0 && is_packing(mask, &conflict))
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0))
}

/// Set packing optimum for every restriction of the universe at once:
/// entry `r` is the optimum over sets contained in the elements of bitmask `r`.
pub fn setpacking_opt_by_universe(inst: &SetPackingInstance) -> Result<Vec<u8>> {
    let (n, u) = (inst.len(), inst.universe_size());
    guard(2, n, "set subfamilies")?;
    guard(2, u, "universe restrictions")?;
    let masks: Vec<u64> = inst
        .sets()
        .iter()
        .map(|s| s.iter().fold(0u64, |acc, &e| acc | 1 << e))
        .collect();
    let conflict = conflicts(inst.sets());
    let mut best = vec![0u8; 1 << u];
    for family in 0..1u64 << n {
        if !is_packing(family, &conflict) {
            continue;
        }
        let union = (0..n)
            .filter(|&k| family >> k & 1 == 1)
            .fold(0u64, |acc, k| acc | masks[k]);
        let slot = &mut best[union as usize];
        *slot = (*slot).max(family.count_ones() as u8);
    }
    // A family fitting in r also fits in every superset of r.
    for bit in 0..u {
        for r in 0..best.len() {
            if r >> bit & 1 == 1 {
                best[r] = best[r].max(best[r ^ 1 << bit]);
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SantaOpt {
    /// Best minimum value over agents.
    pub opt_min_value: Rational,
    /// Most agents reaching `theta`, when a threshold was given.
    pub max_agents_at_theta: Option<usize>,
}

/// Walks all `(agents + 1)^items` allocations, items may stay unassigned.
pub fn brute_santaclaus_opt(
    inst: &SantaClausInstance,
    theta: Option<Rational>,
) -> Result<SantaOpt> {
    let (a, m) = (inst.agents(), inst.items());
    guard(a + 1, m, "allocations")?;
    let mut values = vec![Rational::zero(); a];
    let mut best = SantaOpt {
        opt_min_value: Rational::zero(),
        max_agents_at_theta: theta.map(|_| 0),
    };
    walk_santa(inst, theta, 0, &mut values, &mut best);
    Ok(best)
}

fn walk_santa(
    inst: &SantaClausInstance,
    theta: Option<Rational>,
    item: usize,
    values: &mut [Rational],
    best: &mut SantaOpt,
) {
    if item == inst.items() {
        let min = values.iter().copied().min().unwrap_or_else(Rational::zero);
        best.opt_min_value = best.opt_min_value.max(min);
        if let (Some(t), Some(count)) = (theta, best.max_agents_at_theta.as_mut()) {
            *count = (*count).max(values.iter().filter(|v| **v >= t).count());
        }
        return;
    }
    walk_santa(inst, theta, item + 1, values, best);
    for agent in 0..inst.agents() {
        let v = inst.value(agent, item);
        values[agent] += v;
        walk_santa(inst, theta, item + 1, values, best);
        values[agent] -= v;
    }
}

/// Most sets in a subfamily that is `eps`-almost disjoint.
///
/// Being almost disjoint is inherited by subfamilies, so a passing
/// collection is its own answer and the search only extends passing families. It gives up after [`SEARCH_BUDGET`] / 10 checks.
pub fn brute_almost_disjoint_max(sets: &[Vec<usize>], eps: &Rational) -> Result<usize> {
    if sets.len() > 64 {
        return Err(Error::TooLarge(format!("{} sets", sets.len())));
    }
    if check_almost_disjoint(sets, eps)?.is_feasible() {
        return Ok(sets.len());
    }
    let mut budget = SEARCH_BUDGET / 10;
    let mut chosen = Vec::new();
    let mut best = 0;
    extend_family(sets, eps, 0, &mut chosen, &mut best, &mut budget)?;
    Ok(best)
}

fn extend_family(
    sets: &[Vec<usize>],
    eps: &Rational,
    next: usize,
    chosen: &mut Vec<Vec<usize>>,
    best: &mut usize,
    budget: &mut u64,
) -> Result<()> {
    *best = (*best).max(chosen.len());
    for k in next..sets.len() {
        if *budget == 0 {
            return Err(Error::TooLarge(
                "almost-disjoint search budget exhausted".into(),
            ));
        }
        *budget -= 1;
        chosen.push(sets[k].clone());
        if check_almost_disjoint(chosen, eps)?.is_feasible() {
            extend_family(sets, eps, k + 1, chosen, best, budget)?;
        }
        chosen.pop();
    }
    Ok(())
}
