use serde_json::{json, Value};

use super::{hypercube_gadget, HypercubeGadget, ReductionParams};
use crate::error::{Error, Result};
use crate::instances::{CnfFormula, SetPackingInstance};
use crate::oracles::brute_almost_disjoint_max;
use crate::rational::{rational_json, Rational};

/// Most sets the soundness verifier will search over.
pub const MAX_SOUNDNESS_SETS: usize = 32;

/// The clause and the values of its variables that produced a set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetOrigin {
    pub clause: usize,
    /// One value per literal, in clause order.
    pub values: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct CnfReduction {
    pub instance: SetPackingInstance,
    pub params: ReductionParams,
    pub gadgets: Vec<HypercubeGadget>,
    /// One entry per output set.
    pub origins: Vec<SetOrigin>,
}

impl CnfReduction {
    pub fn metadata(&self) -> Value {
        json!({
            "reduction": "cnf-to-setpacking",
            "q": self.params.q,
            "alphabet_size": self.params.alphabet_size,
            "d": self.params.d,
            "eta": self.params.eta,
            "gamma": rational_json(&self.params.gamma),
            "eps_bound": rational_json(&self.params.eps_bound),
            "blocks": self.gadgets.iter().map(|g| json!({
                "var": g.var,
                "first": g.offset,
                "size": g.block_size(),
            })).collect::<Vec<_>>(),
            "sets": self.origins.iter().map(|o| json!({
                "clause": o.clause,
                "values": o.values,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Builds one set per (clause, satisfying assignment of its variables).
///
/// The set for a clause under values `v_1..v_q` is the union over its literals
/// of edge `j_i` of matching `v_i` in the gadget of variable `x_i`, where
/// `j_i` counts earlier occurrences of `x_i` in clause order and true values
/// use matching 0, false values matching 1. Assignments are enumerated by
/// binary counting with the first literal most significant and false before
/// true.
///
/// `degree` defaults to the larger of 2 and the maximum occurrence count. With
/// `assignment` given, the sets it selects must partition the universe and are
/// recorded as the planted witness.
pub fn reduce_cnf_to_setpacking(
    phi: &CnfFormula,
    alphabet_size: usize,
    assignment: Option<&[bool]>,
    degree: Option<usize>,
) -> Result<CnfReduction> {
    let q = phi
        .clauses()
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::BadParams("formula has no clauses".into()))?;
    if let Some(c) = phi.clauses().iter().position(|c| c.len() != q) {
        return Err(Error::BadParams(format!(
            "clause {c} has length {} not {q}",
            phi.clauses()[c].len()
        )));
    }
    let occurrences = phi.occurrences();
    let max_occ = occurrences.iter().copied().max().unwrap_or(0);
    let d = degree.unwrap_or(max_occ.max(2));
    if d < max_occ.max(2) {
        return Err(Error::BadParams(format!(
            "degree {d} below 2 or below {max_occ} occurrences"
        )));
    }
    let params = ReductionParams::new(q, alphabet_size, d)?;
    let block = d.pow(alphabet_size as u32);
    let gadgets = (0..phi.num_vars())
        .map(|v| hypercube_gadget(v, alphabet_size, d, v * block))
        .collect::<Result<Vec<_>>>()?;

    let mut seen = vec![0usize; phi.num_vars()];
    let mut sets = Vec::new();
    let mut origins = Vec::new();
    for (c, clause) in phi.clauses().iter().enumerate() {
        let occ: Vec<usize> = clause
            .iter()
            .map(|l| {
                seen[l.var] += 1;
                seen[l.var] - 1
            })
            .collect();
        for code in 0..1usize << q {
            let values: Vec<bool> = (0..q).map(|i| code >> (q - 1 - i) & 1 == 1).collect();
            if !clause.iter().zip(&values).any(|(l, &v)| v == l.positive) {
                continue;
            }
            let mut set: Vec<usize> = clause
                .iter()
                .zip(&values)
                .zip(&occ)
                .flat_map(|((l, &v), &j)| gadgets[l.var].edge(if v { 0 } else { 1 }, j))
                .collect();
            set.sort_unstable();
            sets.push(set);
            origins.push(SetOrigin { clause: c, values });
        }
    }

    let planted = match assignment {
        None => None,
        Some(a) => {
            if a.len() != phi.num_vars() {
                return Err(Error::BadParams(format!(
                    "assignment has {} values for {} variables",
                    a.len(),
                    phi.num_vars()
                )));
            }
            if phi.satisfied_count(a) != phi.clauses().len() {
                return Err(Error::BadParams(
                    "assignment does not satisfy the formula".into(),
                ));
            }
            let picked = origins
                .iter()
                .enumerate()
                .filter(|(_, o)| {
                    phi.clauses()[o.clause]
                        .iter()
                        .zip(&o.values)
                        .all(|(l, &v)| a[l.var] == v)
                })
                .map(|(k, _)| k)
                .collect();
            Some(picked)
        }
    };
    let instance = SetPackingInstance::new(phi.num_vars() * block, sets, planted).map_err(|e| match e {
        Error::Invariant { message, .. } => Error::BadParams(format!(
            "satisfying sets do not partition the universe ({message}); every variable must occur exactly d times"
        )),
        other => other,
    })?;
    Ok(CnfReduction {
        instance,
        params,
        gadgets,
        origins,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoundnessReport {
    pub clauses: usize,
    pub sets: usize,
    pub eps: Rational,
    pub eps_bound: Rational,
    pub max_almost_disjoint: usize,
    pub max_satisfiable: usize,
    /// `eps` is below the bound, so the inequality is claimed.
    pub applicable: bool,
    /// `max_almost_disjoint <= max_satisfiable`.
    pub inequality_holds: bool,
}

impl SoundnessReport {
    /// Fails only when the bound applies and is violated.
    pub fn passed(&self) -> bool {
        !self.applicable || self.inequality_holds
    }

    pub fn to_json(&self) -> Value {
        json!({
            "clauses": self.clauses,
            "sets": self.sets,
            "eps": rational_json(&self.eps),
            "eps_bound": rational_json(&self.eps_bound),
            "max_almost_disjoint": self.max_almost_disjoint,
            "max_satisfiable": self.max_satisfiable,
            "applicable": self.applicable,
            "inequality_holds": self.inequality_holds,
            "passed": self.passed(),
        })
    }
}

/// Compares the most `eps`-almost-disjoint sets of the reduction with the most
/// clauses any global assignment satisfies.
pub fn verify_reduction_soundness(phi: &CnfFormula, eps: &Rational) -> Result<SoundnessReport> {
    if phi.num_vars() > 24 {
        return Err(Error::TooLarge(format!("2^{} assignments", phi.num_vars())));
    }
    let red = reduce_cnf_to_setpacking(phi, 2, None, None)?;
    if red.instance.len() > MAX_SOUNDNESS_SETS {
        return Err(Error::TooLarge(format!("{} sets", red.instance.len())));
    }
    let max_almost_disjoint = brute_almost_disjoint_max(red.instance.sets(), eps)?;
    let max_satisfiable = (0..1u64 << phi.num_vars())
        .map(|code| {
            let a: Vec<bool> = (0..phi.num_vars()).map(|v| code >> v & 1 == 1).collect();
            phi.satisfied_count(&a)
        })
        .max()
        .unwrap_or(0);
    let applicable = *eps < red.params.eps_bound;
    Ok(SoundnessReport {
        clauses: phi.clauses().len(),
        sets: red.instance.len(),
        eps: *eps,
        eps_bound: red.params.eps_bound,
        max_almost_disjoint,
        max_satisfiable,
        applicable,
        inequality_holds: max_almost_disjoint <= max_satisfiable,
    })
}
