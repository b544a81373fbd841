//! Exhaustive invariant suites over tiny instance families.
//!
//! Every suite enumerates its family, checks each member against the
//! brute-force oracles and stops at the first counterexample.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::instances::{
    gen_cnf_regular, gen_planted_makespan, gen_planted_setpacking, CnfFormula, Literal,
    MakespanInstance, ProcTime, SetPackingInstance,
};
use crate::makespan::{alg1_match_large, alg3_greedy, evaluate_schedule};
use crate::oracles::{
    brute_makespan_opt, brute_setpacking_opt, setpacking_opt_by_universe, EdgeFilter,
};
use crate::par::Execution;
use crate::rational::{int, ratio, rational_json, Rational};
use crate::reductions::{hypercube_gadget, reduce_cnf_to_setpacking, verify_reduction_soundness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    /// Small edges alone schedule `n - m*` jobs within `T`.
    SmallEdgeCapacity,
    /// Greedy list length, truncation and the combined `(n - m*)/6` bound.
    GreedyBounds,
    /// Removing `k` elements costs at most `k` sets.
    ElementRemoval,
    /// Hypercube partition system sizes and intersections.
    Gadget,
    /// Almost-disjoint sets of the CNF reduction versus satisfiable clauses.
    Soundness,
    /// Planted generators against the oracles.
    OracleEquality,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::SmallEdgeCapacity,
        Suite::GreedyBounds,
        Suite::ElementRemoval,
        Suite::Gadget,
        Suite::Soundness,
        Suite::OracleEquality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SmallEdgeCapacity => "lemma22",
            Suite::GreedyBounds => "prop25",
            Suite::ElementRemoval => "lemma42",
            Suite::Gadget => "gadget",
            Suite::Soundness => "soundness",
            Suite::OracleEquality => "oracle-eq",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::BadParams(format!("unknown suite {s:?}")))
    }
}

/// Family sizes. Defaults are the full desk-scale families.
#[derive(Debug, Clone)]
pub struct Scale {
    /// Jobs per makespan instance (two machines).
    pub max_jobs: usize,
    pub universe: usize,
    pub max_sets: usize,
    /// Restrict the gadget suite to one `(|Σ|, d)`.
    pub gadget: Option<(usize, usize)>,
    /// Random formulas for the soundness suite.
    pub formulas: usize,
    /// Check this formula instead of random ones.
    pub formula: Option<CnfFormula>,
    /// Check only this eps in the soundness suite.
    pub eps: Option<Rational>,
    pub seed: u64,
}

impl Default for Scale {
    fn default() -> Self {
        Scale {
            max_jobs: 4,
            universe: 6,
            max_sets: 5,
            gadget: None,
            formulas: 20,
            formula: None,
            eps: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: u64,
    /// First violation found, if any.
    pub counterexample: Option<String>,
    pub details: Value,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "cases": self.cases,
            "passed": self.passed(),
            "counterexample": self.counterexample,
            "details": self.details,
        })
    }
}

pub fn run_suite(suite: Suite, scale: &Scale, exec: Execution) -> Result<SuiteReport> {
    match suite {
        Suite::SmallEdgeCapacity => makespan_suite(suite, scale, exec, check_small_edges),
        Suite::GreedyBounds => makespan_suite(suite, scale, exec, check_greedy),
        Suite::ElementRemoval => element_removal(scale, exec),
        Suite::Gadget => gadget_suite(scale, exec),
        Suite::Soundness => soundness_suite(scale, exec),
        Suite::OracleEquality => oracle_equality(scale, exec),
    }
}

/// Every two-machine instance with up to `max_jobs` jobs and processing
/// times in `{1, 2, 3, 4, inf}` (no job unschedulable everywhere), one per
/// orbit under swapping the machines, with `T` set to the optimum makespan.
pub fn two_machine_family(max_jobs: usize) -> Result<Vec<MakespanInstance>> {
    let values = [Some(1), Some(2), Some(3), Some(4), None];
    let columns: Vec<(Option<i64>, Option<i64>)> = values
        .iter()
        .flat_map(|&a| values.iter().map(move |&b| (a, b)))
        .filter(|c| *c != (None, None))
        .collect();
    let swapped: Vec<usize> = columns
        .iter()
        .map(|&(a, b)| {
            columns
                .iter()
                .position(|&c| c == (b, a))
                .expect("closed under swap")
        })
        .collect();
    let proc = |v: Option<i64>| v.map_or(ProcTime::Unschedulable, |p| ProcTime::Finite(int(p)));

    let mut family = Vec::new();
    for n in 1..=max_jobs {
        for combo in multisets(columns.len(), n) {
            let mut mirror: Vec<usize> = combo.iter().map(|&c| swapped[c]).collect();
            mirror.sort_unstable();
            if mirror < combo {
                continue;
            }
            let rows = vec![
                combo.iter().map(|&c| proc(columns[c].0)).collect(),
                combo.iter().map(|&c| proc(columns[c].1)).collect(),
            ];
            let probe = MakespanInstance::new(rows, n, int(1))?;
            let opt = brute_makespan_opt(&probe, EdgeFilter::All)?
                .opt_makespan
                .expect("every job has a finite entry");
            family.push(probe.with_target(opt)?);
        }
    }
    Ok(family)
}

/// Non-decreasing sequences of length `len` over `0..kinds`.
fn multisets(kinds: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fn rec(
        kinds: usize,
        len: usize,
        from: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == len {
            out.push(current.clone());
            return;
        }
        for k in from..kinds {
            current.push(k);
            rec(kinds, len, k, current, out);
            current.pop();
        }
    }
    rec(kinds, len, 0, &mut current, &mut out);
    out
}

fn describe(inst: &MakespanInstance) -> String {
    let rows: Vec<String> = (0..inst.machines())
        .map(|i| {
            let cells: Vec<String> = (0..inst.jobs())
                .map(|j| {
                    inst.time(i, j)
                        .map_or("inf".into(), |p| crate::rational::format(&p))
                })
                .collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!(
        "T = {}, proc = [{}]",
        crate::rational::format(&inst.target()),
        rows.join(", ")
    )
}

fn makespan_suite(
    suite: Suite,
    scale: &Scale,
    exec: Execution,
    check: fn(&MakespanInstance) -> Result<Option<String>>,
) -> Result<SuiteReport> {
    let family = two_machine_family(scale.max_jobs)?;
    let found = exec.find_first(&family, |inst| match check(inst) {
        Ok(None) => None,
        Ok(Some(why)) => Some(Ok(format!("{why}: {}", describe(inst)))),
        Err(e) => Some(Err(e)),
    });
    Ok(SuiteReport {
        suite,
        cases: family.len() as u64,
        counterexample: found.transpose()?,
        details: json!({ "machines": 2, "max_jobs": scale.max_jobs }),
    })
}

fn check_small_edges(inst: &MakespanInstance) -> Result<Option<String>> {
    let m_star = alg1_match_large(inst).len();
    let small = brute_makespan_opt(inst, EdgeFilter::SmallOnly)?.max_jobs_within_t;
    Ok((small + m_star < inst.jobs()).then(|| {
        format!(
            "small-edge optimum {small} < n - m* = {}",
            inst.jobs() - m_star
        )
    }))
}

fn check_greedy(inst: &MakespanInstance) -> Result<Option<String>> {
    let n = inst.jobs();
    let m_star = alg1_match_large(inst).len();
    let small = brute_makespan_opt(inst, EdgeFilter::SmallOnly)?.max_jobs_within_t;
    let (schedule, trace) = alg3_greedy(inst);
    let stats = evaluate_schedule(inst, &schedule)?;
    let (listed, kept) = (trace.listed(), trace.kept_count());
    let t = inst.target();
    let why = if 2 * listed < small {
        format!("listed {listed} < half of small-edge optimum {small}")
    } else if 3 * kept < listed {
        format!("kept {kept} < a third of listed {listed}")
    } else if 6 * stats.jobs_scheduled + m_star < n {
        format!(
            "greedy count {} < (n - m*)/6 with m* = {m_star}",
            stats.jobs_scheduled
        )
    } else if stats.makespan > t / 2 {
        format!("greedy makespan {} > T/2", stats.makespan)
    } else if trace.fill.iter().any(|c| *c > t) {
        "list load exceeds T".to_string()
    } else {
        return Ok(None);
    };
    Ok(Some(why))
}

/// All collections of distinct nonempty subsets of a `universe`-element
/// ground set, at most `max_sets` of them, and every removed set `U'`:
/// `|U'| + OPT(U \ U') >= OPT(U)`.
///
/// Smaller ground sets are covered because their instances embed with unused
/// elements, and repeated sets never change an optimum.
fn element_removal(scale: &Scale, exec: Execution) -> Result<SuiteReport> {
    let u = scale.universe;
    if u > 12 || scale.max_sets > 8 {
        return Err(Error::TooLarge(format!(
            "|U| = {u}, {} sets",
            scale.max_sets
        )));
    }
    let subsets: Vec<u64> = (1..1u64 << u).collect();
    let full = (1usize << u) - 1;
    let starts: Vec<usize> = (0..subsets.len()).collect();
    let outcome = exec.map_slice(&starts, |&first| -> Result<(u64, Option<String>)> {
        let mut cases = 0;
        let mut chosen = vec![first];
        let mut bad = None;
        walk_collections(&subsets, scale.max_sets, &mut chosen, &mut |coll| {
            cases += 1;
            let sets: Vec<Vec<usize>> = coll
                .iter()
                .map(|&k| (0..u).filter(|e| subsets[k] >> e & 1 == 1).collect())
                .collect();
            let inst = SetPackingInstance::new(u, sets.clone(), None)?;
            let table = setpacking_opt_by_universe(&inst)?;
            let opt = table[full];
            for removed in 0..=full {
                let k = removed.count_ones() as usize;
                if k + (table[full & !removed] as usize) < opt as usize {
                    bad = Some(format!("sets {sets:?}, removed mask {removed:#b}"));
                    return Ok(false);
                }
            }
            Ok(true)
        })?;
        Ok((cases, bad))
    });
    let mut cases = 0;
    let mut counterexample = None;
    for r in outcome {
        let (c, bad) = r?;
        cases += c;
        if counterexample.is_none() {
            counterexample = bad;
        }
    }
    Ok(SuiteReport {
        suite: Suite::ElementRemoval,
        cases,
        counterexample,
        details: json!({ "universe": u, "max_sets": scale.max_sets }),
    })
}

/// Visits `chosen` and every extension by larger subset indices, up to
/// `max_sets` sets. Stops when `visit` returns `false`.
fn walk_collections<F>(
    subsets: &[u64],
    max_sets: usize,
    chosen: &mut Vec<usize>,
    visit: &mut F,
) -> Result<bool>
where
    F: FnMut(&[usize]) -> Result<bool>,
{
    if !visit(chosen)? {
        return Ok(false);
    }
    if chosen.len() == max_sets {
        return Ok(true);
    }
    let last = *chosen.last().expect("nonempty");
    for next in last + 1..subsets.len() {
        chosen.push(next);
        let go_on = walk_collections(subsets, max_sets, chosen, visit)?;
        chosen.pop();
        if !go_on {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Gadget invariants for every `(|Σ|, d)` with `d^|Σ| <= 10^4`, counted by a
/// single pass over the points.
fn gadget_suite(scale: &Scale, exec: Execution) -> Result<SuiteReport> {
    let mut pairs = Vec::new();
    match scale.gadget {
        Some(p) => pairs.push(p),
        None => {
            for sigma in 2..=13usize {
                for d in 2..=100usize {
                    if d.checked_pow(sigma as u32).is_some_and(|s| s <= 10_000) {
                        pairs.push((sigma, d));
                    }
                }
            }
        }
    }
    let results = exec.map_slice(&pairs, |&(sigma, d)| check_gadget(sigma, d));
    let mut counterexample = None;
    for r in results {
        if let Some(bad) = r? {
            counterexample.get_or_insert(bad);
        }
    }
    let detail: Vec<Value> = pairs
        .iter()
        .map(|&(s, d)| json!({"sigma": s, "d": d, "edge": d.pow(s as u32 - 1), "cross": d.pow(s as u32 - 2)}))
        .collect();
    Ok(SuiteReport {
        suite: Suite::Gadget,
        cases: pairs.len() as u64,
        counterexample,
        details: json!({ "gadgets": detail }),
    })
}

fn check_gadget(sigma: usize, d: usize) -> Result<Option<String>> {
    let g = hypercube_gadget(0, sigma, d, 0)?;
    let edge = d.pow(sigma as u32 - 1);
    let cross = d.pow(sigma as u32 - 2);
    // sizes[i][j] = |e_{i,j}|; meet[(i1, j1, i2, j2)] for i1 < i2.
    let mut sizes = vec![vec![0usize; d]; sigma];
    let mut meet = vec![0usize; sigma * d * sigma * d];
    let idx = |i1: usize, j1: usize, i2: usize, j2: usize| ((i1 * d + j1) * sigma + i2) * d + j2;
    for p in 0..g.block_size() {
        let coords: Vec<usize> = (0..sigma).map(|i| g.coordinate(p, i)).collect();
        for i1 in 0..sigma {
            sizes[i1][coords[i1]] += 1;
            for i2 in i1 + 1..sigma {
                meet[idx(i1, coords[i1], i2, coords[i2])] += 1;
            }
        }
    }
    // Each point has exactly one coordinate per matching, so every matching
    // partitions the block once the sizes add up.
    for i in 0..sigma {
        for j in 0..d {
            if sizes[i][j] != edge {
                return Ok(Some(format!(
                    "|Σ| = {sigma}, d = {d}: |e_{{{i},{j}}}| = {}",
                    sizes[i][j]
                )));
            }
        }
    }
    for i1 in 0..sigma {
        for i2 in i1 + 1..sigma {
            for j1 in 0..d {
                for j2 in 0..d {
                    let c = meet[idx(i1, j1, i2, j2)];
                    if c != cross {
                        return Ok(Some(format!(
                            "|Σ| = {sigma}, d = {d}: e_{{{i1},{j1}}} meets e_{{{i2},{j2}}} in {c}"
                        )));
                    }
                }
            }
        }
    }
    if d.pow(sigma as u32) <= 64 {
        // Direct enumeration of the edges as a cross-check.
        let e = g.edge(0, 0);
        let f = g.edge(1, d - 1);
        if e.len() != edge || e.iter().filter(|x| f.contains(x)).count() != cross {
            return Ok(Some(format!(
                "|Σ| = {sigma}, d = {d}: enumerated edges disagree"
            )));
        }
    }
    Ok(None)
}

/// Random 3-CNF formulas with at most four clauses: regular ones from the
/// generator and arbitrary ones with distinct variables per clause.
pub fn tiny_formulas(count: usize, seed: u64) -> Result<Vec<CnfFormula>> {
    let regular = [(3, 1), (3, 2), (3, 3), (3, 4), (6, 2), (4, 3)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let f = if k % 2 == 0 {
            let (vars, occ) = regular[(k / 2) % regular.len()];
            gen_cnf_regular(vars, 3, occ, seed.wrapping_add(k as u64))?
        } else {
            let vars = rng.random_range(3..=5usize);
            let clauses = rng.random_range(1..=4usize);
            let clauses = (0..clauses)
                .map(|_| {
                    rand::seq::index::sample(&mut rng, vars, 3)
                        .iter()
                        .map(|v| Literal::new(v, rng.random_bool(0.5)))
                        .collect()
                })
                .collect();
            CnfFormula::new(vars, clauses)?
        };
        out.push(f);
    }
    Ok(out)
}

fn soundness_suite(scale: &Scale, exec: Execution) -> Result<SuiteReport> {
    let formulas = match &scale.formula {
        Some(f) => vec![f.clone()],
        None => tiny_formulas(scale.formulas, scale.seed)?,
    };
    let results = exec.map_slice(&formulas, |phi| -> Result<(Vec<Value>, Option<String>)> {
        let max_occ = phi.occurrences().into_iter().max().unwrap_or(0).max(2);
        let bound = Rational::new(1, 6 * max_occ as i64);
        let mut rows = Vec::new();
        let mut bad = None;
        let grid = match scale.eps {
            Some(e) => vec![e],
            None => vec![
                int(0),
                ratio(1, 60),
                ratio(1, 30) - ratio(1, 1000),
                bound - ratio(1, 1000),
                int(1),
            ],
        };
        for eps in grid {
            let r = verify_reduction_soundness(phi, &eps)?;
            if eps == int(0) && r.max_almost_disjoint != r.max_satisfiable {
                bad.get_or_insert(format!(
                    "eps = 0: {} disjoint sets but {} satisfiable clauses",
                    r.max_almost_disjoint, r.max_satisfiable
                ));
            }
            if !r.passed() {
                bad.get_or_insert(format!(
                    "eps = {eps}: {} almost-disjoint sets > {} satisfiable clauses",
                    r.max_almost_disjoint, r.max_satisfiable
                ));
            }
            rows.push(r.to_json());
        }
        if let Some(b) = &mut bad {
            *b = format!(
                "{b} in formula {}",
                crate::instances::emit_dimacs(phi).replace('\n', " ")
            );
        }
        Ok((rows, bad))
    });
    let mut details = Vec::new();
    let mut counterexample = None;
    for r in results {
        let (rows, bad) = r?;
        details.push(Value::from(rows));
        if counterexample.is_none() {
            counterexample = bad;
        }
    }
    Ok(SuiteReport {
        suite: Suite::Soundness,
        cases: formulas.len() as u64,
        counterexample,
        details: json!({ "formulas": details }),
    })
}

/// Planted makespan instances with `m <= 3`, `n <= 6` have optimum exactly
/// `T`; planted set packing instances pack at least the planted sets; the
/// CNF reduction of a satisfiable formula packs one set per clause.
fn oracle_equality(scale: &Scale, exec: Execution) -> Result<SuiteReport> {
    let mut shapes = Vec::new();
    for m in 1..=3usize {
        for n in 1..=6usize {
            for density in [0.25, 0.5, 1.0] {
                for seed in 0..4u64 {
                    shapes.push((m, n, density, scale.seed + seed));
                }
            }
        }
    }
    let makespan = exec.find_first(&shapes, |&(m, n, density, seed)| -> Option<Result<String>> {
        let check = || -> Result<Option<String>> {
            let inst = gen_planted_makespan(m, n, density, seed)?;
            let opt = brute_makespan_opt(&inst, EdgeFilter::All)?.opt_makespan;
            Ok((opt != Some(inst.target())).then(|| format!("planted makespan m={m} n={n} density={density} seed={seed}: optimum {opt:?}")))
        };
        check().transpose()
    });
    let mut cases = shapes.len() as u64;
    let mut counterexample = makespan.transpose()?;

    if counterexample.is_none() {
        for seed in 0..20u64 {
            cases += 1;
            let inst = gen_planted_setpacking(
                2 + seed as usize % 3,
                1 + seed as usize % 4,
                1,
                3,
                scale.seed + seed,
            )?;
            let planted = inst.planted().map_or(0, <[usize]>::len);
            let opt = brute_setpacking_opt(&inst, None)?;
            if opt < planted {
                counterexample = Some(format!(
                    "planted set packing seed {seed}: optimum {opt} < {planted}"
                ));
                break;
            }
        }
    }
    if counterexample.is_none() {
        for (k, phi) in tiny_formulas(8, scale.seed)?
            .iter()
            .enumerate()
            .filter(|(_, f)| f.clauses().len() <= 3)
        {
            let Some(a) = (0..1u64 << phi.num_vars())
                .map(|c| {
                    (0..phi.num_vars())
                        .map(|v| c >> v & 1 == 1)
                        .collect::<Vec<_>>()
                })
                .find(|a| phi.satisfied_count(a) == phi.clauses().len())
            else {
                continue;
            };
            cases += 1;
            let red = reduce_cnf_to_setpacking(phi, 2, None, None)?;
            let opt = brute_setpacking_opt(&red.instance, None)?;
            if opt != phi.clauses().len() {
                counterexample = Some(format!(
                    "formula {k} satisfied by {a:?}: packing optimum {opt}"
                ));
                break;
            }
        }
    }
    Ok(SuiteReport {
        suite: Suite::OracleEquality,
        cases,
        counterexample,
        details: json!({ "T_rule": rational_json(&int(10)), "note": "T = 10 n" }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn family_shape() {
        let f = two_machine_family(1).unwrap();
        // 24 columns, 4 fixed by the swap: (24 + 4) / 2 orbits.
        assert_eq!(f.len(), 14);
        assert!(f.iter().all(|i| i.machines() == 2 && i.jobs() == 1));
    }

    #[test]
    fn small_scales_pass() {
        let scale = Scale {
            max_jobs: 2,
            universe: 3,
            max_sets: 3,
            gadget: Some((2, 5)),
            formulas: 2,
            ..Scale::default()
        };
        for s in Suite::ALL {
            let r = run_suite(s, &scale, Execution::Sequential).unwrap();
            assert!(r.passed(), "{s}: {:?}", r.counterexample);
            assert!(r.cases > 0);
        }
    }
}
