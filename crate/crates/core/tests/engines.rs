mod common;

use bicrit::engines::{
    lp_solve, max_bipartite_matching, max_flow, FlowNetwork, LpProblem, LpStatus, Relation,
};
use common::{q, vertex_enumeration_max, Q};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

#[test]
fn small_lp_matches_vertices() {
    // max x + y, x + 2y <= 4, 3x + y <= 6.
    let c = vec![q(1), q(1)];
    let a = vec![vec![q(1), q(2)], vec![q(3), q(1)]];
    let b = vec![q(4), q(6)];
    let mut lp = LpProblem::new(c.clone());
    for (row, r) in a.iter().zip(&b) {
        lp.add_dense_constraint(row.clone(), Relation::Le, r.clone())
            .unwrap();
    }
    let sol = lp_solve(&lp).unwrap();
    assert_eq!(sol.status, LpStatus::Optimal);
    assert_eq!(sol.objective_value, rat(14, 5));
    assert_eq!(vertex_enumeration_max(&c, &a, &b), Some(rat(14, 5)));
}

#[test]
fn equality_and_lower_bounds() {
    // max -x - y, x + y = 3, x >= 1, y >= 1/2.
    let mut lp = LpProblem::new(vec![q(-1), q(-1)]);
    lp.add_dense_constraint(vec![q(1), q(1)], Relation::Eq, q(3))
        .unwrap();
    lp.set_bounds(0, Some(q(1)), None).unwrap();
    lp.set_bounds(1, Some(rat(1, 2)), None).unwrap();
    let sol = lp_solve(&lp).unwrap();
    assert_eq!(sol.objective_value, q(-3));
    assert!(lp.is_feasible(&sol.values));
}

#[test]
fn unbounded_and_infeasible() {
    let mut lp = LpProblem::new(vec![q(1)]);
    lp.add_dense_constraint(vec![q(-1)], Relation::Le, q(1))
        .unwrap();
    assert_eq!(lp_solve(&lp).unwrap().status, LpStatus::Unbounded);
    lp.add_dense_constraint(vec![q(1)], Relation::Ge, q(5))
        .unwrap();
    lp.add_dense_constraint(vec![q(1)], Relation::Le, q(4))
        .unwrap();
    assert_eq!(lp_solve(&lp).unwrap().status, LpStatus::Infeasible);
}

#[test]
fn flow_on_a_diamond() {
    let arcs = [(0, 1), (0, 2), (1, 3), (2, 3), (1, 2)];
    let mut net = FlowNetwork::new(4, 0, 3).unwrap();
    for &(u, v) in &arcs {
        net.add_arc(u, v, 1).unwrap();
    }
    let res = max_flow(&net);
    assert_eq!(res.value, 2);
    assert_eq!(res.cut_capacity, 2);
    assert_eq!(common::enumerate_unit_flows(4, &arcs, 0, 3), 2);
}

fn micro_lp() -> impl Strategy<Value = (Vec<i64>, Vec<Vec<i64>>, Vec<i64>)> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(-4i64..=6, n),
            prop::collection::vec(prop::collection::vec(-3i64..=5, n), m),
            prop::collection::vec(-2i64..=8, m),
        )
    })
}

fn network() -> impl Strategy<Value = (usize, Vec<(usize, usize, u64)>)> {
    (2usize..=7).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((0..n, 0..n, 1u64..=4), 0..14),
        )
    })
}

proptest! {
    #[test]
    fn lp_optimum_equals_best_vertex((c, a, b) in micro_lp()) {
        let n = c.len();
        let cq: Vec<Q> = c.iter().map(|&v| q(v)).collect();
        let mut rows: Vec<Vec<Q>> = a.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
        let mut rhs: Vec<Q> = b.iter().map(|&v| q(v)).collect();
        let mut lp = LpProblem::new(cq.clone());
        for (row, r) in rows.iter().zip(&rhs) {
            lp.add_dense_constraint(row.clone(), Relation::Le, r.clone()).unwrap();
        }
        for v in 0..n {
            lp.set_bounds(v, Some(q(0)), Some(q(7))).unwrap();
            let mut row = vec![q(0); n];
            row[v] = q(1);
            rows.push(row);
            rhs.push(q(7));
        }
        let sol = lp_solve(&lp).unwrap();
        match vertex_enumeration_max(&cq, &rows, &rhs) {
            Some(best) => {
                prop_assert_eq!(sol.status, LpStatus::Optimal);
                prop_assert_eq!(&sol.objective_value, &best);
                prop_assert!(lp.is_feasible(&sol.values));
            }
            None => prop_assert_eq!(sol.status, LpStatus::Infeasible),
        }
    }

    #[test]
    fn flow_value_equals_cut((n, arcs) in network()) {
        let mut net = FlowNetwork::new(n, 0, n - 1).unwrap();
        for &(u, v, c) in &arcs {
            net.add_arc(u, v, c).unwrap();
        }
        let res = max_flow(&net);
        prop_assert_eq!(res.value, res.cut_capacity);
        prop_assert_eq!(res.value, net.cut_capacity(&res.source_side));
        prop_assert!(res.source_side[0] && !res.source_side[n - 1]);
        let mut balance = vec![0i128; n];
        for (arc, &f) in net.arcs().iter().zip(&res.flow) {
            prop_assert!(f <= arc.capacity);
            balance[arc.from] -= f as i128;
            balance[arc.to] += f as i128;
        }
        for (v, &b) in balance.iter().enumerate().take(n - 1).skip(1) {
            prop_assert_eq!(b, 0, "conservation at {}", v);
        }
        prop_assert_eq!(balance[n - 1], res.value as i128);
    }

    #[test]
    fn unit_flow_matches_enumeration((n, arcs) in network()) {
        let unit: Vec<(usize, usize)> = arcs.iter().map(|&(u, v, _)| (u, v)).collect();
        let mut net = FlowNetwork::new(n, 0, n - 1).unwrap();
        for &(u, v) in &unit {
            net.add_arc(u, v, 1).unwrap();
        }
        prop_assert_eq!(max_flow(&net).value, common::enumerate_unit_flows(n, &unit, 0, n - 1));
    }

    #[test]
    fn matching_is_maximum(edges in prop::collection::vec((0usize..4, 0usize..4), 0..10)) {
        let m = max_bipartite_matching(4, 4, &edges).unwrap();
        let mut lefts: Vec<usize> = m.iter().map(|e| e.0).collect();
        let mut rights: Vec<usize> = m.iter().map(|e| e.1).collect();
        lefts.dedup();
        rights.sort_unstable();
        rights.dedup();
        prop_assert_eq!(lefts.len(), m.len());
        prop_assert_eq!(rights.len(), m.len());
        prop_assert!(m.iter().all(|e| edges.contains(e)));
        let sets: Vec<Vec<usize>> = (0..4)
            .map(|l| edges.iter().filter(|e| e.0 == l).map(|e| e.1).collect())
            .collect();
        prop_assert_eq!(m.len(), common::exhaustive_private_elements(&sets));
    }
}
