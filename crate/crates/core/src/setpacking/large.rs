use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PackingSolution, Pick, SpParams, Threshold};
use crate::engines::{lp_solve, LpProblem, LpStatus, Relation};
use crate::error::{Error, Result};
use crate::instances::SetPackingInstance;
use crate::rational::{bernoulli, Rational};

/// Where the fractional packing comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LpMode {
    /// Solve the packing LP exactly.
    #[default]
    Solve,
    /// Indicator of the planted partition, a feasible point of value `m`.
    Planted,
}

impl fmt::Display for LpMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LpMode::Solve => "solve",
            LpMode::Planted => "planted",
        })
    }
}

impl FromStr for LpMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "solve" => Ok(LpMode::Solve),
            "planted" => Ok(LpMode::Planted),
            other => Err(Error::BadParams(format!("unknown lp mode {other:?}"))),
        }
    }
}

/// `max sum x_S` subject to `sum_{S ∋ u} x_S <= 1` for every available
/// element, over the given sets restricted to the available elements.
/// Variable `k` belongs to `indices[k]`.
pub fn packing_lp(inst: &SetPackingInstance, indices: &[usize], available: &[bool]) -> LpProblem {
    let mut lp = LpProblem::new(vec![BigRational::one(); indices.len()]);
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); inst.universe_size()];
    for (k, &s) in indices.iter().enumerate() {
        let mut empty = true;
        for &u in inst.set(s).iter().filter(|&&u| available[u]) {
            rows[u].push(k);
            empty = false;
        }
        if empty {
            lp.set_bounds(k, Some(BigRational::zero()), Some(BigRational::one()))
                .expect("variable in range");
        }
    }
    for row in rows.into_iter().filter(|r| !r.is_empty()) {
        lp.add_constraint(
            row.into_iter().map(|k| (k, BigRational::one())),
            Relation::Le,
            BigRational::one(),
        );
    }
    lp
}

/// Randomized rounding phase for big sets.
///
/// Sets are sampled independently with their LP weight; elements covered at
/// least `D` times are congested. A sampled set survives if less than a tenth
/// of it is congested. Every free element goes to a uniformly chosen surviving
/// set containing it, and a survivor is kept if it collected at least `eps`
/// times its threshold base (see [`Threshold`]).
pub fn sp_large_phase(
    inst: &SetPackingInstance,
    indices: &[usize],
    available: &[bool],
    params: &SpParams,
    seed: u64,
    mode: LpMode,
) -> Result<PackingSolution> {
    let restricted: Vec<Vec<usize>> = indices
        .iter()
        .map(|&s| {
            inst.set(s)
                .iter()
                .copied()
                .filter(|&u| available[u])
                .collect()
        })
        .collect();
    let x: Vec<BigRational> = match mode {
        LpMode::Solve => {
            let sol = lp_solve(&packing_lp(inst, indices, available))?;
            debug_assert_eq!(sol.status, LpStatus::Optimal);
            sol.values
        }
        LpMode::Planted => {
            let planted = inst.planted().ok_or(Error::NoPlantedWitness)?;
            indices
                .iter()
                .map(|s| {
                    if planted.contains(s) {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampled: Vec<usize> = (0..indices.len())
        .filter(|&k| bernoulli(&mut rng, &x[k]))
        .collect();

    let mut cover = vec![0usize; inst.universe_size()];
    for &k in &sampled {
        for &u in &restricted[k] {
            cover[u] += 1;
        }
    }
    let congested = |u: usize| cover[u] >= params.d;
    let inside = |k: usize| restricted[k].iter().filter(|&&u| congested(u)).count();

    let survivors: Vec<usize> = sampled
        .into_iter()
        .filter(|&k| 10 * inside(k) < restricted[k].len())
        .collect();
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); inst.universe_size()];
    for &k in &survivors {
        for &u in &restricted[k] {
            if !congested(u) {
                holders[u].push(k);
            }
        }
    }
    let mut collected: Vec<Vec<usize>> = vec![Vec::new(); indices.len()];
    for (u, h) in holders.iter().enumerate() {
        let owner = match h.len() {
            0 => continue,
            1 => h[0],
            len => h[rng.random_range(0..len)],
        };
        collected[owner].push(u);
    }

    let picks = survivors
        .into_iter()
        .filter_map(|k| {
            let base = match params.threshold {
                Threshold::Outside => restricted[k].len() - inside(k),
                Threshold::Inside => inside(k),
            };
            let got = collected[k].len();
            let enough = Rational::from_integer(got as i64)
                >= params.eps * Rational::from_integer(base as i64);
            (got > 0 && enough).then(|| Pick {
                set_index: indices[k],
                kept: std::mem::take(&mut collected[k]),
            })
        })
        .collect();
    Ok(PackingSolution { picks })
}
