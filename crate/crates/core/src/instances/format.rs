//! Canonical JSON documents for every instance kind.
//!
//! Rationals are written as JSON integers when integral and as `"p/q"`
//! strings otherwise; an unschedulable pair is the string `"inf"`. Keys are
//! emitted in sorted order and element lists are sorted, so structurally equal
//! instances always produce identical bytes.

use serde::Deserialize;
use serde_json::{json, Value};

use super::{
    parse_dimacs, CnfFormula, Instance, Literal, MakespanInstance, ProblemKind, ProcTime,
    SantaClausInstance, SetPackingInstance,
};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn rational(&self, field: &str) -> Result<Rational> {
        match self {
            Number::Int(n) => Ok(Rational::from_integer(*n)),
            Number::Text(s) => rational::parse(s)
                .ok_or_else(|| Error::invariant(field, format!("`{s}` is not a rational"))),
        }
    }

    fn proc_time(&self, field: &str) -> Result<ProcTime> {
        match self {
            Number::Text(s) if s.trim() == "inf" => Ok(ProcTime::Unschedulable),
            other => other.rational(field).map(ProcTime::Finite),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MakespanDoc {
    #[allow(dead_code)]
    kind: String,
    machines: usize,
    jobs: usize,
    #[serde(rename = "T")]
    target: Number,
    proc: Vec<Vec<Number>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetPackingDoc {
    #[allow(dead_code)]
    kind: String,
    universe_size: usize,
    sets: Vec<Vec<usize>>,
    #[serde(default)]
    planted: Option<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SantaClausDoc {
    #[allow(dead_code)]
    kind: String,
    agents: usize,
    items: usize,
    #[serde(rename = "T")]
    target: Number,
    value: Vec<Vec<Number>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CnfDoc {
    #[allow(dead_code)]
    kind: String,
    num_vars: usize,
    clauses: Vec<Vec<i64>>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses a document and checks it is of the expected kind.
pub fn parse_instance(bytes: &[u8], kind: ProblemKind) -> Result<Instance> {
    let inst = parse_any_instance(bytes)?;
    if inst.kind() != kind {
        return Err(Error::Mismatch(format!(
            "expected a {kind} document, found {}",
            inst.kind()
        )));
    }
    Ok(inst)
}

/// Parses a JSON document of any kind, or DIMACS CNF text.
pub fn parse_any_instance(bytes: &[u8]) -> Result<Instance> {
    let first = bytes.iter().find(|b| !b.is_ascii_whitespace());
    if first != Some(&b'{') {
        let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
            line: 0,
            column: 0,
            message: format!("not UTF-8: {e}"),
        })?;
        return parse_dimacs(text).map(Instance::Cnf);
    }
    let value: Value = serde_json::from_slice(bytes).map_err(json_error)?;
    let kind = value
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::invariant("kind", "missing string field `kind`"))?;
    match kind.parse::<ProblemKind>()? {
        ProblemKind::Makespan => {
            let doc: MakespanDoc = serde_json::from_slice(bytes).map_err(json_error)?;
            makespan_from_doc(doc).map(Instance::Makespan)
        }
        ProblemKind::SetPacking => {
            let doc: SetPackingDoc = serde_json::from_slice(bytes).map_err(json_error)?;
            SetPackingInstance::new(doc.universe_size, doc.sets, doc.planted)
                .map(Instance::SetPacking)
        }
        ProblemKind::SantaClaus => {
            let doc: SantaClausDoc = serde_json::from_slice(bytes).map_err(json_error)?;
            santaclaus_from_doc(doc).map(Instance::SantaClaus)
        }
        ProblemKind::Cnf => {
            let doc: CnfDoc = serde_json::from_slice(bytes).map_err(json_error)?;
            cnf_from_doc(doc).map(Instance::Cnf)
        }
    }
}

fn makespan_from_doc(doc: MakespanDoc) -> Result<MakespanInstance> {
    if doc.proc.len() != doc.machines {
        return Err(Error::invariant(
            "proc",
            format!("expected {} rows, found {}", doc.machines, doc.proc.len()),
        ));
    }
    let target = doc.target.rational("T")?;
    let rows = doc
        .proc
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, p)| p.proc_time(&format!("proc[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    MakespanInstance::new(rows, doc.jobs, target)
}

fn santaclaus_from_doc(doc: SantaClausDoc) -> Result<SantaClausInstance> {
    if doc.value.len() != doc.agents {
        return Err(Error::invariant(
            "value",
            format!("expected {} rows, found {}", doc.agents, doc.value.len()),
        ));
    }
    let target = doc.target.rational("T")?;
    let rows = doc
        .value
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, v)| v.rational(&format!("value[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SantaClausInstance::new(rows, doc.items, target)
}

fn cnf_from_doc(doc: CnfDoc) -> Result<CnfFormula> {
    let clauses = doc
        .clauses
        .iter()
        .enumerate()
        .map(|(c, clause)| {
            clause
                .iter()
                .map(|&l| {
                    Literal::from_dimacs(l)
                        .ok_or_else(|| Error::invariant(format!("clauses[{c}]"), "literal 0"))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    CnfFormula::new(doc.num_vars, clauses)
}

fn rational_value(r: &Rational) -> Value {
    rational::rational_json(r)
}

fn proc_value(p: &ProcTime) -> Value {
    match p {
        ProcTime::Finite(r) => rational_value(r),
        ProcTime::Unschedulable => json!("inf"),
    }
}

pub(crate) fn instance_value(inst: &Instance) -> Value {
    match inst {
        Instance::Makespan(m) => json!({
            "kind": "makespan",
            "machines": m.machines(),
            "jobs": m.jobs(),
            "T": rational_value(&m.target()),
            "proc": (0..m.machines())
                .map(|i| m.row(i).iter().map(proc_value).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        }),
        Instance::SetPacking(s) => {
            let mut v = json!({
                "kind": "setpacking",
                "universe_size": s.universe_size(),
                "sets": s.sets(),
            });
            if let Some(p) = s.planted() {
                v["planted"] = json!(p);
            }
            v
        }
        Instance::SantaClaus(s) => json!({
            "kind": "santaclaus",
            "agents": s.agents(),
            "items": s.items(),
            "T": rational_value(&s.target()),
            "value": (0..s.agents())
                .map(|i| (0..s.items()).map(|j| rational_value(&s.value(i, j))).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        }),
        Instance::Cnf(f) => json!({
            "kind": "cnf",
            "num_vars": f.num_vars(),
            "clauses": f.clauses()
                .iter()
                .map(|c| c.iter().map(|l| l.to_dimacs()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        }),
    }
}

/// Canonical document bytes, newline-terminated.
pub fn emit_instance(inst: &Instance) -> Vec<u8> {
    let mut out = serde_json::to_string_pretty(&instance_value(inst)).expect("values serialize");
    out.push('\n');
    out.into_bytes()
}
