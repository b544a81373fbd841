use std::collections::{BTreeMap, BTreeSet};

use crate::engines::{max_flow, FlowNetwork};
use crate::error::{Error, Result};
use crate::rational::{ceil, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlmostDisjoint {
    /// Pairwise disjoint kept lists, one per input set, each large enough.
    Feasible(Vec<Vec<usize>>),
    Infeasible(CutCertificate),
}

impl AlmostDisjoint {
    pub fn is_feasible(&self) -> bool {
        matches!(self, AlmostDisjoint::Feasible(_))
    }
}

/// Minimum cut of the lower-bound network whose capacity falls short of the
/// total demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutCertificate {
    pub demand: u64,
    pub max_flow: u64,
    /// Source side of the cut, indexed by node of the transformed network.
    pub source_side: Vec<bool>,
}

/// Decides whether every set can keep `ceil((1 - eps) |S|)` of its elements
/// with the kept parts pairwise disjoint.
///
/// Source-to-set arcs carry the demand as a lower bound. The bound is removed
/// the usual way: a circulation arc from sink back to source, a super source
/// feeding each set its demand and the source draining the total demand into a
/// super sink. The demands are met exactly when the super source saturates.
pub fn check_almost_disjoint(sets: &[Vec<usize>], eps: &Rational) -> Result<AlmostDisjoint> {
    if *eps < Rational::from_integer(0) || *eps > Rational::from_integer(1) {
        return Err(Error::BadParams(format!("eps {eps} outside [0, 1]")));
    }
    let sets: Vec<Vec<usize>> = sets
        .iter()
        .map(|s| {
            s.iter()
                .copied()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect()
        })
        .collect();
    let elements: BTreeMap<usize, usize> = sets
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(node, e)| (e, node))
        .collect();

    let k = sets.len();
    let source = 0;
    let set_node = |i: usize| 1 + i;
    let elem_node = |e: usize| 1 + k + elements[&e];
    let sink = 1 + k + elements.len();
    let super_source = sink + 1;
    let super_sink = sink + 2;

    let one = Rational::from_integer(1);
    let demands: Vec<u64> = sets
        .iter()
        .map(|s| ceil(&((one - eps) * Rational::from_integer(s.len() as i64))).max(0) as u64)
        .collect();
    let demand: u64 = demands.iter().sum();
    let total: u64 = sets.iter().map(|s| s.len() as u64).sum();

    let mut net = FlowNetwork::new(sink + 3, super_source, super_sink)?;
    let mut membership = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        net.add_arc(source, set_node(i), s.len() as u64 - demands[i])?;
        net.add_arc(super_source, set_node(i), demands[i])?;
        for &e in s {
            membership.push((net.add_arc(set_node(i), elem_node(e), 1)?, i, e));
        }
    }
    for &node in elements.values() {
        net.add_arc(1 + k + node, sink, 1)?;
    }
    net.add_arc(sink, source, total)?;
    net.add_arc(source, super_sink, demand)?;

    let result = max_flow(&net);
    debug_assert_eq!(result.value, result.cut_capacity);
    if result.value < demand {
        return Ok(AlmostDisjoint::Infeasible(CutCertificate {
            demand,
            max_flow: result.value,
            source_side: result.source_side,
        }));
    }
    let mut kept = vec![Vec::new(); k];
    for (arc, i, e) in membership {
        if result.flow[arc] == 1 {
            kept[i].push(e);
        }
    }
    Ok(AlmostDisjoint::Feasible(kept))
}
