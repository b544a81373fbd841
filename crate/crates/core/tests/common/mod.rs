//! Reference implementations used only by tests. Each is written from the
//! definition of the problem and shares no code with the library kernels.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// `rows x = rhs` by Gauss-Jordan elimination; `None` when singular.
pub fn solve_square(mut rows: Vec<Vec<Q>>, mut rhs: Vec<Q>) -> Option<Vec<Q>> {
    let n = rows.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = rows[col][col].clone();
        for k in 0..n {
            rows[col][k] = &rows[col][k] / &p;
        }
        rhs[col] = &rhs[col] / &p;
        for r in 0..n {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for k in 0..n {
                    let v = &f * &rows[col][k];
                    rows[r][k] -= v;
                }
                let v = &f * &rhs[col];
                rhs[r] -= v;
            }
        }
    }
    Some(rhs)
}

/// Dense `max c.x` subject to `a x <= b`, `x >= 0`, over a bounded region.
/// Every vertex is the unique solution of some `n` tight inequalities; the
/// answer is the best feasible one, `None` if none is feasible.
pub fn vertex_enumeration_max(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> Option<Q> {
    let n = c.len();
    // All inequalities as (row, rhs) with row . x <= rhs.
    let mut ineq: Vec<(Vec<Q>, Q)> = a.iter().cloned().zip(b.iter().cloned()).collect();
    for v in 0..n {
        let mut row = vec![Q::zero(); n];
        row[v] = -Q::one();
        ineq.push((row, Q::zero()));
    }
    let mut best: Option<Q> = None;
    for subset in combinations(ineq.len(), n) {
        let rows = subset.iter().map(|&k| ineq[k].0.clone()).collect();
        let rhs = subset.iter().map(|&k| ineq[k].1.clone()).collect();
        let Some(x) = solve_square(rows, rhs) else {
            continue;
        };
        let feasible = ineq.iter().all(|(row, r)| {
            let lhs: Q = row.iter().zip(&x).map(|(p, v)| p * v).sum();
            lhs <= *r
        });
        if feasible {
            let val: Q = c.iter().zip(&x).map(|(p, v)| p * v).sum();
            if best.as_ref().is_none_or(|b| val > *b) {
                best = Some(val);
            }
        }
    }
    best
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Maximum flow value over all 0/1 flows of a unit network given as arcs.
pub fn enumerate_unit_flows(nodes: usize, arcs: &[(usize, usize)], s: usize, t: usize) -> u64 {
    assert!(arcs.len() <= 20, "enumeration is 2^arcs");
    let mut best = 0;
    for mask in 0u32..1 << arcs.len() {
        let mut balance = vec![0i64; nodes];
        for (k, &(u, v)) in arcs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                balance[u] -= 1;
                balance[v] += 1;
            }
        }
        if (0..nodes).all(|x| x == s || x == t || balance[x] == 0) {
            best = best.max(balance[t].max(0) as u64);
        }
    }
    best
}

/// Whether every set can keep `need[i]` elements, kept parts disjoint, by
/// trying every map from elements to a containing set or to nobody.
pub fn exhaustive_almost_disjoint(sets: &[Vec<usize>], need: &[usize]) -> bool {
    let mut elements: Vec<usize> = sets.iter().flatten().copied().collect();
    elements.sort_unstable();
    elements.dedup();
    let mut counts = vec![0usize; sets.len()];
    fn rec(
        k: usize,
        elements: &[usize],
        sets: &[Vec<usize>],
        need: &[usize],
        counts: &mut [usize],
    ) -> bool {
        if k == elements.len() {
            return counts.iter().zip(need).all(|(c, n)| c >= n);
        }
        if rec(k + 1, elements, sets, need, counts) {
            return true;
        }
        for i in 0..sets.len() {
            if sets[i].contains(&elements[k]) {
                counts[i] += 1;
                let ok = rec(k + 1, elements, sets, need, counts);
                counts[i] -= 1;
                if ok {
                    return true;
                }
            }
        }
        false
    }
    rec(0, &elements, sets, need, &mut counts)
}

/// Most sets that can each receive a distinct element they contain.
pub fn exhaustive_private_elements(sets: &[Vec<usize>]) -> usize {
    fn rec(k: usize, sets: &[Vec<usize>], used: &mut Vec<usize>) -> usize {
        if k == sets.len() {
            return 0;
        }
        let mut best = rec(k + 1, sets, used);
        for &e in &sets[k] {
            if !used.contains(&e) {
                used.push(e);
                best = best.max(1 + rec(k + 1, sets, used));
                used.pop();
            }
        }
        best
    }
    rec(0, sets, &mut Vec::new())
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}
