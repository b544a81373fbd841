use num_traits::Zero;

use super::partition_edges;
use crate::instances::{MakespanInstance, Schedule};
use crate::rational::Rational;

/// What the greedy pass did, machine by machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyTrace {
    /// Jobs appended to each machine by the while-loop, in order.
    pub lists: Vec<Vec<usize>>,
    /// Load of each machine when the loop stopped (at most `T`).
    pub fill: Vec<Rational>,
    /// Prefix of each list, sorted by processing time, kept within `T/2`.
    pub kept: Vec<Vec<usize>>,
}

impl GreedyTrace {
    pub fn listed(&self) -> usize {
        self.lists.iter().map(Vec::len).sum()
    }

    pub fn kept_count(&self) -> usize {
        self.kept.iter().map(Vec::len).sum()
    }
}

/// Greedy list scheduling over small edges followed by truncation at `T/2`.
///
/// The loop repeatedly takes the cheapest available small pair that still
/// fits within `T`; ties go to the smaller machine id, then the smaller job id.
pub fn alg3_greedy(inst: &MakespanInstance) -> (Schedule, GreedyTrace) {
    let t = inst.target();
    let half = t / 2;
    let small = partition_edges(inst).small;
    let mut fill = vec![Rational::zero(); inst.machines()];
    let mut lists = vec![Vec::new(); inst.machines()];
    let mut remaining = vec![true; inst.jobs()];

    loop {
        let best = small
            .iter()
            .filter(|&&(_, j)| remaining[j])
            .filter_map(|&(i, j)| {
                let p = inst.time(i, j).expect("small edges are finite");
                (fill[i] + p <= t).then_some((p, i, j))
            })
            .min();
        let Some((p, i, j)) = best else {
            break;
        };
        lists[i].push(j);
        fill[i] += p;
        remaining[j] = false;
    }

    let mut schedule = Schedule::new();
    let kept = lists
        .iter()
        .enumerate()
        .map(|(i, list)| {
            let mut sorted: Vec<(Rational, usize)> = list
                .iter()
                .map(|&j| (inst.time(i, j).expect("listed"), j))
                .collect();
            sorted.sort();
            let mut load = Rational::zero();
            let mut keep = Vec::new();
            for (p, j) in sorted {
                if load + p > half {
                    break;
                }
                load += p;
                keep.push(j);
                schedule.assign(i, j).expect("lists are disjoint");
            }
            keep
        })
        .collect();
    (schedule, GreedyTrace { lists, fill, kept })
}
