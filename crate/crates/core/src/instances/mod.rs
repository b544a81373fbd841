//! Problem data: instances, schedules, allocations, CNF formulas, their file
//! formats and the planted-instance generators.

mod dimacs;
mod format;
mod generate;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use dimacs::{emit_dimacs, parse_dimacs};
pub use format::{emit_instance, parse_any_instance, parse_instance};
pub use generate::{gen_cnf_regular, gen_planted_makespan, gen_planted_setpacking};

/// Processing time of a job on a machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProcTime {
    Finite(Rational),
    Unschedulable,
}

impl ProcTime {
    pub fn finite(self) -> Option<Rational> {
        match self {
            ProcTime::Finite(p) => Some(p),
            ProcTime::Unschedulable => None,
        }
    }
}

impl From<Rational> for ProcTime {
    fn from(p: Rational) -> Self {
        ProcTime::Finite(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MakespanInstance {
    machines: usize,
    jobs: usize,
    /// Row-major, one row per machine.
    proc: Vec<ProcTime>,
    target: Rational,
}

impl MakespanInstance {
    /// Builds an instance from one row of processing times per machine.
    pub fn new(rows: Vec<Vec<ProcTime>>, jobs: usize, target: Rational) -> Result<Self> {
        if target <= Rational::zero() {
            return Err(Error::invariant("T", "target makespan must be positive"));
        }
        let machines = rows.len();
        let mut proc = Vec::with_capacity(machines * jobs);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != jobs {
                return Err(Error::invariant(
                    format!("proc[{i}]"),
                    format!("expected {jobs} entries, found {}", row.len()),
                ));
            }
            for (j, p) in row.iter().enumerate() {
                if let ProcTime::Finite(v) = p {
                    if *v < Rational::zero() {
                        return Err(Error::invariant(
                            format!("proc[{i}][{j}]"),
                            "processing time is negative",
                        ));
                    }
                }
            }
            proc.extend(row);
        }
        Ok(MakespanInstance {
            machines,
            jobs,
            proc,
            target,
        })
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    pub fn target(&self) -> Rational {
        self.target
    }

    pub fn proc(&self, machine: usize, job: usize) -> ProcTime {
        self.proc[machine * self.jobs + job]
    }

    /// Finite processing time, or `None` when the pair is unschedulable.
    pub fn time(&self, machine: usize, job: usize) -> Option<Rational> {
        self.proc(machine, job).finite()
    }

    pub fn row(&self, machine: usize) -> &[ProcTime] {
        &self.proc[machine * self.jobs..(machine + 1) * self.jobs]
    }

    /// Same table with a different target.
    pub fn with_target(&self, target: Rational) -> Result<Self> {
        if target <= Rational::zero() {
            return Err(Error::invariant("T", "target makespan must be positive"));
        }
        Ok(MakespanInstance {
            target,
            ..self.clone()
        })
    }
}

/// A set of `(machine, job)` assignments with every job used at most once.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Schedule {
    by_job: BTreeMap<usize, usize>,
}

impl Schedule {
    pub fn new() -> Self {
        Self::default()
    }

    /// Assigns `job` to `machine`; fails if the job is already scheduled.
    pub fn assign(&mut self, machine: usize, job: usize) -> Result<()> {
        if let Some(&other) = self.by_job.get(&job) {
            return Err(Error::invariant(
                "schedule",
                format!("job {job} already assigned to machine {other}"),
            ));
        }
        self.by_job.insert(job, machine);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.by_job.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_job.is_empty()
    }

    pub fn machine_of(&self, job: usize) -> Option<usize> {
        self.by_job.get(&job).copied()
    }

    pub fn contains_job(&self, job: usize) -> bool {
        self.by_job.contains_key(&job)
    }

    /// Pairs sorted by `(machine, job)`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.by_job.iter().map(|(&j, &i)| (i, j)).collect();
        v.sort_unstable();
        v
    }

    /// Union of two schedules over disjoint job sets.
    pub fn merged(&self, other: &Schedule) -> Result<Schedule> {
        let mut out = self.clone();
        for (i, j) in other.pairs() {
            out.assign(i, j)?;
        }
        Ok(out)
    }

    /// Checks that every pair is usable in `inst`.
    pub fn validate(&self, inst: &MakespanInstance) -> Result<()> {
        for (&job, &machine) in &self.by_job {
            if machine >= inst.machines() || job >= inst.jobs() || inst.time(machine, job).is_none()
            {
                return Err(Error::InvalidAssignment { machine, job });
            }
        }
        Ok(())
    }

    /// Per-machine loads; errors on unusable pairs.
    pub fn loads(&self, inst: &MakespanInstance) -> Result<Vec<Rational>> {
        self.validate(inst)?;
        let mut loads = vec![Rational::zero(); inst.machines()];
        for (&job, &machine) in &self.by_job {
            loads[machine] += inst.time(machine, job).expect("validated");
        }
        Ok(loads)
    }
}

impl FromIterator<(usize, usize)> for Schedule {
    /// Later duplicates of a job are ignored.
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        let mut s = Schedule::new();
        for (i, j) in iter {
            s.by_job.entry(j).or_insert(i);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPackingInstance {
    universe_size: usize,
    sets: Vec<Vec<usize>>,
    planted: Option<Vec<usize>>,
}

impl SetPackingInstance {
    /// Element lists are sorted and deduplicated. A planted witness, when
    /// given, must be a partition of the universe.
    pub fn new(
        universe_size: usize,
        sets: Vec<Vec<usize>>,
        planted: Option<Vec<usize>>,
    ) -> Result<Self> {
        let mut sets = sets;
        for (k, s) in sets.iter_mut().enumerate() {
            s.sort_unstable();
            s.dedup();
            if let Some(&bad) = s.iter().find(|&&e| e >= universe_size) {
                return Err(Error::invariant(
                    format!("sets[{k}]"),
                    format!("element {bad} outside universe 0..{universe_size}"),
                ));
            }
        }
        let planted = match planted {
            Some(mut p) => {
                p.sort_unstable();
                check_partition(universe_size, &sets, &p)?;
                Some(p)
            }
            None => None,
        };
        Ok(SetPackingInstance {
            universe_size,
            sets,
            planted,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn set(&self, k: usize) -> &[usize] {
        &self.sets[k]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn planted(&self) -> Option<&[usize]> {
        self.planted.as_deref()
    }

    pub fn without_witness(&self) -> Self {
        SetPackingInstance {
            planted: None,
            ..self.clone()
        }
    }
}

fn check_partition(universe_size: usize, sets: &[Vec<usize>], planted: &[usize]) -> Result<()> {
    let mut owner: Vec<Option<usize>> = vec![None; universe_size];
    for (pos, &k) in planted.iter().enumerate() {
        if pos > 0 && planted[pos - 1] == k {
            return Err(Error::invariant("planted", format!("set {k} listed twice")));
        }
        let set = sets.get(k).ok_or_else(|| {
            Error::invariant(
                "planted",
                format!("set index {k} out of range 0..{}", sets.len()),
            )
        })?;
        for &e in set {
            if let Some(prev) = owner[e] {
                return Err(Error::invariant(
                    "planted",
                    format!("sets {prev} and {k} both contain element {e}"),
                ));
            }
            owner[e] = Some(k);
        }
    }
    if let Some(e) = owner.iter().position(Option::is_none) {
        return Err(Error::invariant(
            "planted",
            format!("element {e} is not covered by the planted sets"),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SantaClausInstance {
    agents: usize,
    items: usize,
    /// Row-major, one row per agent.
    value: Vec<Rational>,
    target: Rational,
}

impl SantaClausInstance {
    pub fn new(rows: Vec<Vec<Rational>>, items: usize, target: Rational) -> Result<Self> {
        if target <= Rational::zero() {
            return Err(Error::invariant("T", "target value must be positive"));
        }
        let agents = rows.len();
        let mut value = Vec::with_capacity(agents * items);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != items {
                return Err(Error::invariant(
                    format!("value[{i}]"),
                    format!("expected {items} entries, found {}", row.len()),
                ));
            }
            if let Some(j) = row.iter().position(|v| *v < Rational::zero()) {
                return Err(Error::invariant(
                    format!("value[{i}][{j}]"),
                    "value is negative",
                ));
            }
            value.extend(row);
        }
        Ok(SantaClausInstance {
            agents,
            items,
            value,
            target,
        })
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn items(&self) -> usize {
        self.items
    }

    pub fn target(&self) -> Rational {
        self.target
    }

    pub fn value(&self, agent: usize, item: usize) -> Rational {
        self.value[agent * self.items + item]
    }
}

/// Partial map from items to agents.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Allocation {
    owner: BTreeMap<usize, usize>,
}

impl Allocation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Gives `item` to `agent`, replacing any previous owner.
    pub fn give(&mut self, item: usize, agent: usize) {
        self.owner.insert(item, agent);
    }

    pub fn owner(&self, item: usize) -> Option<usize> {
        self.owner.get(&item).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.owner.iter().map(|(&i, &a)| (i, a))
    }

    pub fn agent_values(&self, inst: &SantaClausInstance) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); inst.agents()];
        for (&item, &agent) in &self.owner {
            v[agent] += inst.value(agent, item);
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: usize, positive: bool) -> Self {
        Literal { var, positive }
    }

    /// DIMACS encoding: 1-based, negative for negated literals.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn from_dimacs(lit: i64) -> Option<Self> {
        (lit != 0).then(|| Literal::new(lit.unsigned_abs() as usize - 1, lit > 0))
    }

    pub fn satisfied_by(self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<Literal>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        for (c, clause) in clauses.iter().enumerate() {
            for (k, lit) in clause.iter().enumerate() {
                if lit.var >= num_vars {
                    return Err(Error::invariant(
                        format!("clauses[{c}]"),
                        format!("variable {} out of range 1..={num_vars}", lit.var + 1),
                    ));
                }
                if clause[..k].iter().any(|o| o.var == lit.var) {
                    return Err(Error::invariant(
                        format!("clauses[{c}]"),
                        format!("variable {} appears twice", lit.var + 1),
                    ));
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    /// Occurrences of each variable, counting both polarities.
    pub fn occurrences(&self) -> Vec<usize> {
        let mut occ = vec![0; self.num_vars];
        for lit in self.clauses.iter().flatten() {
            occ[lit.var] += 1;
        }
        occ
    }

    pub fn satisfied_count(&self, assignment: &[bool]) -> usize {
        self.clauses
            .iter()
            .filter(|c| c.iter().any(|l| l.satisfied_by(assignment)))
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    Makespan,
    SetPacking,
    SantaClaus,
    Cnf,
}

impl ProblemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::Makespan => "makespan",
            ProblemKind::SetPacking => "setpacking",
            ProblemKind::SantaClaus => "santaclaus",
            ProblemKind::Cnf => "cnf",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "makespan" => Ok(ProblemKind::Makespan),
            "setpacking" => Ok(ProblemKind::SetPacking),
            "santaclaus" => Ok(ProblemKind::SantaClaus),
            "cnf" => Ok(ProblemKind::Cnf),
            other => Err(Error::BadParams(format!("unknown problem kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Makespan(MakespanInstance),
    SetPacking(SetPackingInstance),
    SantaClaus(SantaClausInstance),
    Cnf(CnfFormula),
}

impl Instance {
    pub fn kind(&self) -> ProblemKind {
        match self {
            Instance::Makespan(_) => ProblemKind::Makespan,
            Instance::SetPacking(_) => ProblemKind::SetPacking,
            Instance::SantaClaus(_) => ProblemKind::SantaClaus,
            Instance::Cnf(_) => ProblemKind::Cnf,
        }
    }
}
