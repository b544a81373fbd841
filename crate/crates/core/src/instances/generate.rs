//! Seeded generators for planted instances and regular CNF formulas.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CnfFormula, Literal, MakespanInstance, ProcTime, SetPackingInstance};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Processing-time scale of planted makespan instances: `T = 10 n`.
const PLANTED_SCALE: i64 = 10;

/// Random makespan instance whose optimal makespan is exactly `T`.
///
/// With `n >= m` every machine receives at least one planted job and the
/// planted jobs on each machine sum to exactly `T`. Every other pair is
/// finite with probability `density`, drawn from `[planted time of the job, T]`,
/// so the total minimum work is `m T` and no schedule beats `T`. With `n < m`
/// each job gets its own machine at time `T` and every finite entry equals `T`.
pub fn gen_planted_makespan(
    machines: usize,
    jobs: usize,
    density: f64,
    seed: u64,
) -> Result<MakespanInstance> {
    if machines == 0 || jobs == 0 {
        return Err(Error::BadParams(
            "need at least one machine and one job".into(),
        ));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::BadParams(format!(
            "density {density} outside (0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = PLANTED_SCALE * jobs as i64;

    // planted[j] = (machine, time)
    let mut planted = vec![(0usize, 0i64); jobs];
    if jobs >= machines {
        let mut order: Vec<usize> = (0..jobs).collect();
        order.shuffle(&mut rng);
        let mut per_machine: Vec<Vec<usize>> = vec![Vec::new(); machines];
        for (k, &j) in order.iter().enumerate() {
            let i = if k < machines {
                k
            } else {
                rng.random_range(0..machines)
            };
            per_machine[i].push(j);
        }
        for (i, js) in per_machine.iter().enumerate() {
            for (j, p) in js
                .iter()
                .zip(random_composition(&mut rng, target, js.len()))
            {
                planted[*j] = (i, p);
            }
        }
    } else {
        let hosts = index::sample(&mut rng, machines, jobs);
        for (j, i) in hosts.iter().enumerate() {
            planted[j] = (i, target);
        }
    }

    let rows = (0..machines)
        .map(|i| {
            (0..jobs)
                .map(|j| {
                    let (host, p) = planted[j];
                    if host == i {
                        ProcTime::Finite(Rational::from_integer(p))
                    } else if rng.random_bool(density) {
                        ProcTime::Finite(Rational::from_integer(rng.random_range(p..=target)))
                    } else {
                        ProcTime::Unschedulable
                    }
                })
                .collect()
        })
        .collect();
    MakespanInstance::new(rows, jobs, Rational::from_integer(target))
}

/// Uniform composition of `total` into `parts` positive integers.
fn random_composition<R: Rng>(rng: &mut R, total: i64, parts: usize) -> Vec<i64> {
    if parts == 0 {
        return Vec::new();
    }
    let mut cuts: Vec<i64> = index::sample(rng, total as usize - 1, parts - 1)
        .iter()
        .map(|c| c as i64 + 1)
        .collect();
    cuts.sort_unstable();
    cuts.push(total);
    let mut prev = 0;
    cuts.into_iter()
        .map(|c| {
            let part = c - prev;
            prev = c;
            part
        })
        .collect()
}

/// Set packing instance whose first `parts` sets partition the universe,
/// followed by `extra` random decoy sets.
pub fn gen_planted_setpacking(
    parts: usize,
    extra: usize,
    min_size: usize,
    max_size: usize,
    seed: u64,
) -> Result<SetPackingInstance> {
    if parts == 0 {
        return Err(Error::BadParams("need at least one planted set".into()));
    }
    if min_size == 0 || min_size > max_size {
        return Err(Error::BadParams(format!(
            "set sizes {min_size}..={max_size} must satisfy 1 <= min <= max"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes: Vec<usize> = (0..parts)
        .map(|_| rng.random_range(min_size..=max_size))
        .collect();
    let universe: usize = sizes.iter().sum();
    let mut elements: Vec<usize> = (0..universe).collect();
    elements.shuffle(&mut rng);
    let mut sets = Vec::with_capacity(parts + extra);
    let mut start = 0;
    for s in sizes {
        sets.push(elements[start..start + s].to_vec());
        start += s;
    }
    for _ in 0..extra {
        let size = rng.random_range(min_size..=max_size).min(universe);
        sets.push(index::sample(&mut rng, universe, size).into_vec());
    }
    SetPackingInstance::new(universe, sets, Some((0..parts).collect()))
}

/// Random CNF where every clause has `clause_len` distinct variables and every
/// variable occurs exactly `occurrences` times.
pub fn gen_cnf_regular(
    num_vars: usize,
    clause_len: usize,
    occurrences: usize,
    seed: u64,
) -> Result<CnfFormula> {
    if clause_len == 0 || occurrences == 0 {
        return Err(Error::BadParams(
            "clause length and occurrences must be positive".into(),
        ));
    }
    if !(num_vars * occurrences).is_multiple_of(clause_len) {
        return Err(Error::BadParams(format!(
            "{num_vars} * {occurrences} is not divisible by clause length {clause_len}"
        )));
    }
    if num_vars < clause_len && num_vars > 0 {
        return Err(Error::BadParams(format!(
            "{num_vars} variables cannot fill clauses of {clause_len} distinct variables"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slots: Vec<usize> = (0..num_vars)
        .flat_map(|v| std::iter::repeat_n(v, occurrences))
        .collect();
    slots.shuffle(&mut rng);
    repair_duplicates(&mut slots, clause_len, &mut rng)?;
    let clauses = slots
        .chunks(clause_len)
        .map(|c| {
            c.iter()
                .map(|&v| Literal::new(v, rng.random_bool(0.5)))
                .collect()
        })
        .collect();
    CnfFormula::new(num_vars, clauses)
}

/// Swaps slots between clauses until no clause repeats a variable. A swap is
/// taken whenever it does not add repeats, so the walk can cross plateaus.
fn repair_duplicates<R: Rng>(slots: &mut [usize], q: usize, rng: &mut R) -> Result<()> {
    let repeats = |slots: &[usize], c: usize| {
        let clause = &slots[c * q..(c + 1) * q];
        (0..q).filter(|&a| clause[..a].contains(&clause[a])).count()
    };
    let n = slots.len();
    for _ in 0..(1000 * n.max(1)) {
        let bad: Vec<usize> = (0..n / q.max(1))
            .filter(|&c| repeats(slots, c) > 0)
            .collect();
        if bad.is_empty() {
            return Ok(());
        }
        let k = bad[rng.random_range(0..bad.len())] * q + rng.random_range(0..q);
        let r = rng.random_range(0..n);
        let (ck, cr) = (k / q, r / q);
        if ck == cr {
            continue;
        }
        let before = repeats(slots, ck) + repeats(slots, cr);
        slots.swap(k, r);
        if repeats(slots, ck) + repeats(slots, cr) > before {
            slots.swap(k, r);
        }
    }
    Err(Error::BadParams(
        "could not separate repeated variables; formula too dense".into(),
    ))
}
