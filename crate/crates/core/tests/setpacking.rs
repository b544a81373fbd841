mod common;

use bicrit::instances::{gen_planted_setpacking, SetPackingInstance};
use bicrit::oracles::brute_setpacking_opt;
use bicrit::rational::{ceil, int, ratio};
use bicrit::setpacking::{
    check_almost_disjoint, sp_combined, sp_large_phase, sp_small_phase, AlmostDisjoint, LpMode,
    SpParams, Threshold,
};
use bicrit::{Error, Rational};
use proptest::prelude::*;

fn family(max_universe: usize, max_sets: usize) -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
    (1..=max_universe).prop_flat_map(move |u| {
        (
            Just(u),
            prop::collection::vec(
                prop::collection::btree_set(0..u, 1..=u).prop_map(|s| s.into_iter().collect()),
                0..=max_sets,
            ),
        )
    })
}

fn eps() -> impl Strategy<Value = Rational> {
    (0i64..=6).prop_map(|k| ratio(k, 6))
}

proptest! {
    #[test]
    fn almost_disjoint_matches_exhaustive((_, sets) in family(10, 3), eps in eps()) {
        let need: Vec<usize> = sets
            .iter()
            .map(|s| ceil(&((int(1) - eps) * int(s.len() as i64))) as usize)
            .collect();
        let expected = common::exhaustive_almost_disjoint(&sets, &need);
        match check_almost_disjoint(&sets, &eps).unwrap() {
            AlmostDisjoint::Feasible(kept) => {
                prop_assert!(expected);
                prop_assert_eq!(kept.len(), sets.len());
                let mut all: Vec<usize> = kept.iter().flatten().copied().collect();
                let total = all.len();
                all.sort_unstable();
                all.dedup();
                prop_assert_eq!(all.len(), total);
                for ((k, s), n) in kept.iter().zip(&sets).zip(&need) {
                    prop_assert!(k.len() >= *n);
                    prop_assert!(k.iter().all(|e| s.contains(e)));
                }
            }
            AlmostDisjoint::Infeasible(cert) => {
                prop_assert!(!expected);
                prop_assert!(cert.max_flow < cert.demand);
            }
        }
    }

    #[test]
    fn flow_phase_picks_most_sets((u, sets) in family(6, 5)) {
        let inst = SetPackingInstance::new(u, sets.clone(), None).unwrap();
        let indices: Vec<usize> = (0..inst.len()).collect();
        let (sol, used) = sp_small_phase(&inst, &indices);
        sol.validate(&inst).unwrap();
        prop_assert!(sol.picks.iter().all(|p| p.kept.len() == 1));
        prop_assert_eq!(used.len(), sol.len());
        prop_assert_eq!(sol.len(), common::exhaustive_private_elements(inst.sets()));
        prop_assert!(sol.len() >= brute_setpacking_opt(&inst, None).unwrap());
    }

    #[test]
    fn rounding_phase_is_disjoint(
        (u, sets) in family(8, 5),
        seed in any::<u64>(),
        inside in any::<bool>(),
        free in prop::collection::vec(any::<bool>(), 8),
    ) {
        let inst = SetPackingInstance::new(u, sets, None).unwrap();
        let threshold = if inside { Threshold::Inside } else { Threshold::Outside };
        let params = SpParams::new(ratio(1, 2)).unwrap().with_threshold(threshold);
        let available = &free[..u];
        let indices: Vec<usize> = (0..inst.len()).collect();
        let sol = sp_large_phase(&inst, &indices, available, &params, seed, LpMode::Solve).unwrap();
        sol.validate(&inst).unwrap();
        for p in &sol.picks {
            prop_assert!(!p.kept.is_empty());
            prop_assert!(p.kept.iter().all(|&e| available[e]));
        }
        let again = sp_large_phase(&inst, &indices, available, &params, seed, LpMode::Solve).unwrap();
        prop_assert_eq!(again, sol);
    }

    #[test]
    fn combined_packing_is_valid(parts in 1usize..=4, extra in 0usize..=4, seed in any::<u64>()) {
        let inst = gen_planted_setpacking(parts, extra, 1, 4, seed % 1000).unwrap();
        let params = SpParams::new(ratio(1, 3)).unwrap();
        for mode in [LpMode::Solve, LpMode::Planted] {
            let sol = sp_combined(&inst, &params, seed, mode).unwrap();
            sol.validate(&inst).unwrap();
            prop_assert!(sol.len() >= parts);
        }
    }
}

#[test]
fn big_sets_go_through_rounding() {
    // C = 400 / (9/10)^2 rounds up to 494, so sets of 600 are big.
    let params = SpParams::new(ratio(9, 10)).unwrap();
    assert_eq!(params.c, 494);
    let inst = gen_planted_setpacking(4, 4, 600, 600, 3).unwrap();
    for seed in 0..5 {
        let sol = sp_combined(&inst, &params, seed, LpMode::Planted).unwrap();
        sol.validate(&inst).unwrap();
        assert!(sol.picks.iter().all(|p| !p.kept.is_empty()));
    }
}

#[test]
fn planted_mode_needs_a_witness() {
    let inst = gen_planted_setpacking(2, 2, 1, 3, 0)
        .unwrap()
        .without_witness();
    let params = SpParams::new(ratio(1, 2)).unwrap();
    assert_eq!(
        sp_combined(&inst, &params, 0, LpMode::Planted),
        Err(Error::NoPlantedWitness)
    );
}

#[test]
fn delta_must_be_inside_unit_interval() {
    assert!(SpParams::new(int(0)).is_err());
    assert!(SpParams::new(int(1)).is_err());
    let p = SpParams::new(ratio(1, 2)).unwrap();
    assert_eq!((p.d, p.c, p.eps), (80, 1600, ratio(1, 3200)));
}
