use bicrit::instances::{gen_cnf_regular, gen_planted_setpacking, CnfFormula, SetPackingInstance};
use bicrit::oracles::brute_santaclaus_opt;
use bicrit::rational::{int, ratio};
use bicrit::reductions::{
    hypercube_gadget, reduce_cnf_to_setpacking, reduce_setpacking_to_santaclaus, ItemOrigin,
    ReductionParams,
};
use bicrit::{Error, Rational};
use proptest::prelude::*;

fn overlap(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|x| b.contains(x)).count()
}

fn satisfying(phi: &CnfFormula) -> Option<Vec<bool>> {
    (0..1u64 << phi.num_vars())
        .map(|code| {
            (0..phi.num_vars())
                .map(|v| code >> v & 1 == 1)
                .collect::<Vec<_>>()
        })
        .find(|a| phi.satisfied_count(a) == phi.clauses().len())
}

proptest! {
    #[test]
    fn gadget_matchings_partition_and_cross(sigma in 2usize..=3, d in 2usize..=5, offset in 0usize..50) {
        let g = hypercube_gadget(0, sigma, d, offset).unwrap();
        let block: Vec<usize> = g.block().collect();
        prop_assert_eq!(block.len(), d.pow(sigma as u32));
        for i in 0..sigma {
            let mut union: Vec<usize> = (0..d).flat_map(|j| g.edge(i, j)).collect();
            union.sort_unstable();
            prop_assert_eq!(&union, &block);
            for j in 0..d {
                prop_assert_eq!(g.edge(i, j).len(), d.pow(sigma as u32 - 1));
            }
            for i2 in (0..sigma).filter(|&x| x != i) {
                for j1 in 0..d {
                    for j2 in 0..d {
                        prop_assert_eq!(overlap(&g.edge(i, j1), &g.edge(i2, j2)), d.pow(sigma as u32 - 2));
                    }
                }
            }
        }
    }

    #[test]
    fn reduction_structure(vars in 3usize..=6, occ in 1usize..=3, seed in 0u64..500) {
        prop_assume!(vars * occ % 3 == 0);
        let phi = gen_cnf_regular(vars, 3, occ, seed).unwrap();
        let red = reduce_cnf_to_setpacking(&phi, 2, None, None).unwrap();
        let d = red.params.d;
        let inst = &red.instance;
        prop_assert_eq!(inst.len(), 7 * phi.clauses().len());
        prop_assert_eq!(inst.universe_size(), vars * d * d);
        prop_assert_eq!(red.origins.len(), inst.len());
        prop_assert!(inst.sets().iter().all(|s| s.len() == red.params.set_size()));
        for (s, o) in inst.sets().iter().zip(&red.origins) {
            let clause = &phi.clauses()[o.clause];
            prop_assert!(clause.iter().zip(&o.values).any(|(l, &v)| l.positive == v));
            for (l, _) in clause.iter().zip(&o.values) {
                let inside = s.iter().filter(|e| red.gadgets[l.var].block().contains(e)).count();
                prop_assert_eq!(inside, d);
            }
        }
        // Two sets that disagree on a shared variable meet in at least
        // gamma / q of their elements; sets of different clauses that agree are disjoint.
        let size = red.params.set_size();
        for a in 0..inst.len() {
            for b in a + 1..inst.len() {
                let (oa, ob) = (&red.origins[a], &red.origins[b]);
                let ca = &phi.clauses()[oa.clause];
                let cb = &phi.clauses()[ob.clause];
                let mut conflict = false;
                for (la, &va) in ca.iter().zip(&oa.values) {
                    for (lb, &vb) in cb.iter().zip(&ob.values) {
                        conflict |= la.var == lb.var && va != vb;
                    }
                }
                let shared = overlap(inst.set(a), inst.set(b));
                if conflict {
                    let q = red.params.q as i64;
                    prop_assert!(Rational::from_integer(shared as i64) >= red.params.gamma / q * size as i64);
                } else if oa.clause != ob.clause {
                    prop_assert_eq!(shared, 0);
                }
            }
        }
    }

    #[test]
    fn satisfying_assignment_is_planted(vars in 3usize..=6, seed in 0u64..500) {
        let occ = 3;
        let phi = gen_cnf_regular(vars, 3, occ, seed).unwrap();
        let a = satisfying(&phi).expect("regular 3-CNF with these sizes is satisfiable");
        let red = reduce_cnf_to_setpacking(&phi, 2, Some(&a), None).unwrap();
        let planted = red.instance.planted().unwrap();
        prop_assert_eq!(planted.len(), phi.clauses().len());
        let mut cover: Vec<usize> = planted.iter().flat_map(|&s| red.instance.set(s).to_vec()).collect();
        cover.sort_unstable();
        prop_assert_eq!(cover, (0..red.instance.universe_size()).collect::<Vec<_>>());
    }

    #[test]
    fn santa_witness_and_counts(parts in 1usize..=4, extra in 0usize..=4, seed in 0u64..500, t in 1i64..=5) {
        let sp = gen_planted_setpacking(parts, extra, 1, 4, seed).unwrap();
        let target = ratio(t, 2);
        let red = reduce_setpacking_to_santaclaus(&sp, target).unwrap();
        let sc = &red.instance;
        prop_assert_eq!(sc.agents(), sp.len());
        prop_assert_eq!(sc.items(), sp.universe_size() + extra);
        prop_assert_eq!(red.items.iter().filter(|o| matches!(o, ItemOrigin::Dummy(_))).count(), extra);
        prop_assert!(red.witness.agent_values(sc).iter().all(|v| *v == target));
        for (agent, &set) in red.agent_sets.iter().enumerate() {
            let s = sp.set(set);
            for (item, origin) in red.items.iter().enumerate() {
                let expected = match origin {
                    ItemOrigin::Element(e) if s.contains(e) => target / s.len() as i64,
                    ItemOrigin::Element(_) => int(0),
                    ItemOrigin::Dummy(_) => target,
                };
                prop_assert_eq!(sc.value(agent, item), expected);
            }
        }
    }
}

#[test]
fn clause_parameters_for_three_sat() {
    let p = ReductionParams::new(3, 2, 5).unwrap();
    assert_eq!(
        (p.eta, p.gamma, p.eps_bound, p.set_size()),
        (7, ratio(1, 5), ratio(1, 30), 15)
    );
    assert!(hypercube_gadget(0, 2, 1, 0).is_err());
    assert!(hypercube_gadget(0, 1, 5, 0).is_err());
}

#[test]
fn santa_optimum_is_target_on_abc() {
    // A = {a, b}, B = {b, c}, C = {c}; planted {A, C}.
    let sp = SetPackingInstance::new(3, vec![vec![0, 1], vec![1, 2], vec![2]], Some(vec![0, 2]))
        .unwrap();
    let red = reduce_setpacking_to_santaclaus(&sp, int(1)).unwrap();
    assert_eq!((red.instance.agents(), red.instance.items()), (3, 4));
    let opt = brute_santaclaus_opt(&red.instance, Some(int(1))).unwrap();
    assert_eq!(opt.opt_min_value, int(1));
    assert_eq!(opt.max_agents_at_theta, Some(3));
}

#[test]
fn witnessless_instance_is_rejected() {
    let sp = SetPackingInstance::new(2, vec![vec![0, 1]], None).unwrap();
    assert!(matches!(
        reduce_setpacking_to_santaclaus(&sp, int(1)),
        Err(Error::MissingWitness)
    ));
}
