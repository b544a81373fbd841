use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::instances::{Allocation, SantaClausInstance, SetPackingInstance};
use crate::rational::{rational_json, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemOrigin {
    Element(usize),
    Dummy(usize),
}

#[derive(Debug, Clone)]
pub struct SantaReduction {
    pub instance: SantaClausInstance,
    /// Agent `a` stands for set `a`.
    pub agent_sets: Vec<usize>,
    pub items: Vec<ItemOrigin>,
    /// Planted agents take their sets, the others one dummy each.
    pub witness: Allocation,
}

impl SantaReduction {
    pub fn metadata(&self) -> Value {
        json!({
            "reduction": "setpacking-to-santaclaus",
            "T": rational_json(&self.instance.target()),
            "agent_sets": self.agent_sets,
            "items": self.items.iter().map(|o| match o {
                ItemOrigin::Element(e) => json!({"element": e}),
                ItemOrigin::Dummy(k) => json!({"dummy": k}),
            }).collect::<Vec<_>>(),
            "witness": self.witness.iter().map(|(item, agent)| json!([item, agent])).collect::<Vec<_>>(),
        })
    }
}

/// One agent per set, one item per element, and one dummy item per set outside
/// the planted partition. Element `u` is worth `T/|S|` to the agent of every
/// set `S` containing it; dummies are worth `T` to everyone.
pub fn reduce_setpacking_to_santaclaus(
    inst: &SetPackingInstance,
    target: Rational,
) -> Result<SantaReduction> {
    let planted = inst.planted().ok_or(Error::MissingWitness)?;
    let n = inst.len();
    let u = inst.universe_size();
    let dummies = n - planted.len();
    let items: Vec<ItemOrigin> = (0..u)
        .map(ItemOrigin::Element)
        .chain((0..dummies).map(ItemOrigin::Dummy))
        .collect();
    let rows = (0..n)
        .map(|a| {
            let set = inst.set(a);
            let share = if set.is_empty() {
                Rational::from_integer(0)
            } else {
                target / Rational::from_integer(set.len() as i64)
            };
            let mut row = vec![Rational::from_integer(0); u + dummies];
            for &e in set {
                row[e] = share;
            }
            for v in &mut row[u..] {
                *v = target;
            }
            row
        })
        .collect();
    let instance = SantaClausInstance::new(rows, u + dummies, target)?;

    let mut witness = Allocation::new();
    for &a in planted {
        for &e in inst.set(a) {
            witness.give(e, a);
        }
    }
    let others = (0..n).filter(|a| !planted.contains(a));
    for (k, a) in others.enumerate() {
        witness.give(u + k, a);
    }
    Ok(SantaReduction {
        instance,
        agent_sets: (0..n).collect(),
        items,
        witness,
    })
}
