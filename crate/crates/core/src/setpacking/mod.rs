//! Two-phase set packing: a max-flow phase for small sets and a randomized
//! LP-rounding phase for big sets, plus the flow-based almost-disjointness
//! check.
//!
//! Sets of size at most `C` each get one private element through a maximum
//! flow. The remaining big sets, restricted to the elements the flow did not
//! use, are rounded from a fractional packing.

mod disjoint;
mod large;

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::engines::{max_flow, FlowNetwork};
use crate::error::{Error, Result};
use crate::instances::SetPackingInstance;
use crate::rational::{ceil, Rational};

pub use disjoint::{check_almost_disjoint, AlmostDisjoint, CutCertificate};
pub use large::{packing_lp, sp_large_phase, LpMode};

/// Which part of a surviving set the collection threshold is measured on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Threshold {
    /// `eps * |S \ T|`.
    #[default]
    Outside,
    /// `eps * |S ∩ T|`.
    Inside,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpParams {
    pub delta: Rational,
    /// Coverage level at which an element counts as congested.
    pub d: usize,
    /// Largest size handled by the flow phase.
    pub c: usize,
    pub eps: Rational,
    pub threshold: Threshold,
}

impl SpParams {
    /// `D = ceil(40/delta)`, `C = ceil(400/delta^2)`, `eps = delta^2/800`.
    pub fn new(delta: Rational) -> Result<Self> {
        if delta <= Rational::from_integer(0) || delta >= Rational::from_integer(1) {
            return Err(Error::BadParams(format!("delta {delta} outside (0, 1)")));
        }
        let d = ceil(&(Rational::from_integer(40) / delta));
        let c = ceil(&(Rational::from_integer(400) / (delta * delta)));
        Ok(SpParams {
            delta,
            d: d as usize,
            c: c as usize,
            eps: delta * delta / 800,
            threshold: Threshold::Outside,
        })
    }

    pub fn with_threshold(mut self, threshold: Threshold) -> Self {
        self.threshold = threshold;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pick {
    pub set_index: usize,
    /// Sorted.
    pub kept: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PackingSolution {
    pub picks: Vec<Pick>,
}

impl PackingSolution {
    pub fn len(&self) -> usize {
        self.picks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.picks.is_empty()
    }

    pub fn extend(&mut self, other: PackingSolution) {
        self.picks.extend(other.picks);
    }

    /// Kept lists must be subsets of their sets and pairwise disjoint.
    pub fn validate(&self, inst: &SetPackingInstance) -> Result<()> {
        let mut seen = BTreeSet::new();
        let mut sets = BTreeSet::new();
        for p in &self.picks {
            if p.set_index >= inst.len() || !sets.insert(p.set_index) {
                return Err(Error::invariant(
                    "picks",
                    format!("set {} picked twice or missing", p.set_index),
                ));
            }
            let set = inst.set(p.set_index);
            for &u in &p.kept {
                if set.binary_search(&u).is_err() {
                    return Err(Error::invariant(
                        "picks",
                        format!("element {u} not in set {}", p.set_index),
                    ));
                }
                if !seen.insert(u) {
                    return Err(Error::invariant("picks", format!("element {u} kept twice")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let picks: Vec<Value> = self
            .picks
            .iter()
            .map(|p| json!({"set_index": p.set_index, "kept_elements": p.kept}))
            .collect();
        json!({ "picks": picks })
    }
}

/// Flow phase on the given sets: each picked set keeps one private element.
///
/// Returns the packing and the elements it used.
pub fn sp_small_phase(
    inst: &SetPackingInstance,
    indices: &[usize],
) -> (PackingSolution, Vec<usize>) {
    let k = indices.len();
    let u = inst.universe_size();
    let source = 0;
    let sink = 1 + k + u;
    let mut net = FlowNetwork::new(k + u + 2, source, sink).expect("distinct terminals");
    for slot in 0..k {
        net.add_arc(source, 1 + slot, 1).expect("in range");
    }
    let mut membership = Vec::new();
    for (slot, &s) in indices.iter().enumerate() {
        for &e in inst.set(s) {
            let arc = net.add_arc(1 + slot, 1 + k + e, 1).expect("in range");
            membership.push((arc, s, e));
        }
    }
    for e in 0..u {
        net.add_arc(1 + k + e, sink, 1).expect("in range");
    }
    let result = max_flow(&net);
    debug_assert_eq!(result.value, result.cut_capacity);
    let mut picks: Vec<Pick> = membership
        .into_iter()
        .filter(|&(arc, _, _)| result.flow[arc] == 1)
        .map(|(_, s, e)| Pick {
            set_index: s,
            kept: vec![e],
        })
        .collect();
    picks.sort_by_key(|p| p.set_index);
    let mut used: Vec<usize> = picks.iter().map(|p| p.kept[0]).collect();
    used.sort_unstable();
    (PackingSolution { picks }, used)
}

/// Flow phase on the sets of size at most `C`, then rounding on the others
/// over the elements the flow phase left free.
pub fn sp_combined(
    inst: &SetPackingInstance,
    params: &SpParams,
    seed: u64,
    mode: LpMode,
) -> Result<PackingSolution> {
    let (small, big): (Vec<usize>, Vec<usize>) =
        (0..inst.len()).partition(|&s| inst.set(s).len() <= params.c);
    let (mut solution, used) = sp_small_phase(inst, &small);
    let mut available = vec![true; inst.universe_size()];
    for e in used {
        available[e] = false;
    }
    solution.extend(sp_large_phase(inst, &big, &available, params, seed, mode)?);
    Ok(solution)
}
