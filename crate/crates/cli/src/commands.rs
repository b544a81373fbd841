use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use bicrit::experiment::{bench_combined, bench_rounding, bench_setpacking, ExperimentReport};
use bicrit::instances::{
    emit_dimacs, emit_instance, gen_cnf_regular, gen_planted_makespan, gen_planted_setpacking,
    parse_any_instance, Instance, MakespanInstance, ProblemKind, Schedule, SetPackingInstance,
};
use bicrit::makespan::{
    alg1_match_large, alg2_round, alg3_greedy, combined_schedule, evaluate_schedule, solve_clp,
};
use bicrit::par::Execution;
use bicrit::rational::{self, rational_json, Rational};
use bicrit::reductions::{reduce_cnf_to_setpacking, reduce_setpacking_to_santaclaus};
use bicrit::setpacking::{
    sp_combined, sp_large_phase, sp_small_phase, LpMode, PackingSolution, SpParams, Threshold,
};
use bicrit::verify::{run_suite, Scale};

use crate::{
    AlgoFlags, Algorithm, BenchArgs, GenArgs, Kind, LpModeArg, ReduceArgs, Reduction, ScaleArg,
    SolveArgs, ThresholdArg, VerifyArgs,
};

fn problem_kind(kind: Kind) -> ProblemKind {
    match kind {
        Kind::Makespan => ProblemKind::Makespan,
        Kind::Setpacking => ProblemKind::SetPacking,
        Kind::Santaclaus => ProblemKind::SantaClaus,
        Kind::Cnf => ProblemKind::Cnf,
    }
}

fn read_instance(path: &Path, kind: Option<Kind>) -> Result<Instance> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let inst = parse_any_instance(&bytes).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(k) = kind {
        if inst.kind() != problem_kind(k) {
            return Err(bicrit::Error::Mismatch(format!(
                "--kind {} but {} holds a {} instance",
                problem_kind(k),
                path.display(),
                inst.kind()
            ))
            .into());
        }
    }
    Ok(inst)
}

fn write_or_print(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(v).expect("values serialize");
    bytes.push(b'\n');
    bytes
}

fn parse_rational(flag: &str, text: &str) -> Result<Rational> {
    rational::parse(text.trim()).ok_or_else(|| anyhow!("--{flag}: `{text}` is not a rational"))
}

pub fn gen(a: GenArgs) -> Result<bool> {
    let inst = match a.kind {
        Kind::Makespan => {
            Instance::Makespan(gen_planted_makespan(a.machines, a.jobs, a.density, a.seed)?)
        }
        Kind::Setpacking => Instance::SetPacking(gen_planted_setpacking(
            a.parts, a.extra, a.min_size, a.max_size, a.seed,
        )?),
        Kind::Cnf => {
            let f = gen_cnf_regular(a.vars, a.clause_len, a.occurrences, a.seed)?;
            if a.out
                .as_ref()
                .is_some_and(|p| p.extension().is_some_and(|e| e == "cnf"))
            {
                write_or_print(a.out.as_deref(), emit_dimacs(&f).as_bytes())?;
                return Ok(true);
            }
            Instance::Cnf(f)
        }
        Kind::Santaclaus => bail!("no Santa Claus generator; build one with `reduce --from sp-sc`"),
    };
    write_or_print(a.out.as_deref(), &emit_instance(&inst))?;
    Ok(true)
}

fn sp_params(flags: &AlgoFlags) -> Result<SpParams> {
    let threshold = match flags.threshold {
        ThresholdArg::Outside => Threshold::Outside,
        ThresholdArg::Inside => Threshold::Inside,
    };
    Ok(SpParams::new(parse_rational("delta", &flags.delta)?)?.with_threshold(threshold))
}

fn lp_mode(flags: &AlgoFlags) -> LpMode {
    match flags.lp_mode {
        LpModeArg::Solve => LpMode::Solve,
        LpModeArg::Planted => LpMode::Planted,
    }
}

fn makespan_of(inst: Instance, algorithm: Algorithm) -> Result<MakespanInstance> {
    match inst {
        Instance::Makespan(m) => Ok(m),
        other => Err(bicrit::Error::Mismatch(format!(
            "{} needs a makespan instance, got {}",
            name(algorithm),
            other.kind()
        ))
        .into()),
    }
}

fn setpacking_of(inst: Instance, algorithm: Algorithm) -> Result<SetPackingInstance> {
    match inst {
        Instance::SetPacking(s) => Ok(s),
        other => Err(bicrit::Error::Mismatch(format!(
            "{} needs a set packing instance, got {}",
            name(algorithm),
            other.kind()
        ))
        .into()),
    }
}

fn name(algorithm: Algorithm) -> String {
    use clap::ValueEnum;
    algorithm
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

fn schedule_json(s: &Schedule) -> Value {
    json!({ "assignments": s.pairs() })
}

pub fn solve(a: SolveArgs) -> Result<bool> {
    let inst = read_instance(&a.instance, a.kind)?;
    let (solution, report, passed) = match a.algorithm {
        Algorithm::Alg1 | Algorithm::Alg2 | Algorithm::Alg3 | Algorithm::Combined => {
            let inst = makespan_of(inst, a.algorithm)?;
            solve_makespan(&inst, a.algorithm, a.seed, &a.flags)?
        }
        Algorithm::SpSmall | Algorithm::SpLarge | Algorithm::SpAll => {
            let inst = setpacking_of(inst, a.algorithm)?;
            solve_setpacking(&inst, a.algorithm, a.seed, &a.flags)?
        }
    };
    let mut report = report;
    report["passed"] = json!(passed);
    match &a.out {
        Some(path) => {
            fs::write(path, pretty(&solution))
                .with_context(|| format!("writing {}", path.display()))?;
            write_or_print(None, &pretty(&report))?;
        }
        None => write_or_print(
            None,
            &pretty(&json!({ "solution": solution, "report": report })),
        )?,
    }
    Ok(passed)
}

fn solve_makespan(
    inst: &MakespanInstance,
    algorithm: Algorithm,
    seed: u64,
    flags: &AlgoFlags,
) -> Result<(Value, Value, bool)> {
    let t = inst.target();
    let n = inst.jobs();
    let m_star = alg1_match_large(inst).len();
    Ok(match algorithm {
        Algorithm::Alg1 => {
            let s = alg1_match_large(inst);
            let stats = evaluate_schedule(inst, &s)?;
            let ok = stats.makespan <= t && stats.jobs_scheduled == m_star;
            let report = json!({
                "algorithm": "alg1",
                "m_star": m_star,
                "count": stats.jobs_scheduled,
                "makespan": rational_json(&stats.makespan),
                "floor": m_star,
                "bound": rational_json(&t),
            });
            (schedule_json(&s), report, ok)
        }
        Algorithm::Alg2 => {
            let clp = solve_clp(inst, flags.column_cap)?;
            let s = alg2_round(&clp, inst, seed);
            let stats = evaluate_schedule(inst, &s)?;
            let report = json!({
                "algorithm": "alg2",
                "count": stats.jobs_scheduled,
                "makespan": rational_json(&stats.makespan),
                "floor": (1.0 - (-1.0f64).exp()) * n as f64,
                "floor_kind": "expectation",
                "bound": rational_json(&t),
                "clp_integral": clp.is_integral(),
            });
            (schedule_json(&s), report, stats.makespan <= t)
        }
        Algorithm::Alg3 => {
            let (s, trace) = alg3_greedy(inst);
            let stats = evaluate_schedule(inst, &s)?;
            let floor = (n - m_star).div_ceil(6);
            let ok = stats.jobs_scheduled >= floor && stats.makespan <= t / 2;
            let report = json!({
                "algorithm": "alg3",
                "m_star": m_star,
                "count": stats.jobs_scheduled,
                "listed": trace.listed(),
                "makespan": rational_json(&stats.makespan),
                "floor": floor,
                "bound": rational_json(&(t / 2)),
            });
            (schedule_json(&s), report, ok)
        }
        _ => {
            let (s, r) = combined_schedule(inst, seed, flags.column_cap)?;
            let bound = t * Rational::new(3, 2);
            let mut report = r.to_json();
            report["algorithm"] = json!("combined");
            report["count"] = json!(s.len());
            report["bound"] = rational_json(&bound);
            (schedule_json(&s), report, r.makespan <= bound)
        }
    })
}

fn solve_setpacking(
    inst: &SetPackingInstance,
    algorithm: Algorithm,
    seed: u64,
    flags: &AlgoFlags,
) -> Result<(Value, Value, bool)> {
    let params = sp_params(flags)?;
    let all: Vec<usize> = (0..inst.len()).collect();
    let sol: PackingSolution = match algorithm {
        Algorithm::SpSmall => sp_small_phase(inst, &all).0,
        Algorithm::SpLarge => sp_large_phase(
            inst,
            &all,
            &vec![true; inst.universe_size()],
            &params,
            seed,
            lp_mode(flags),
        )?,
        _ => sp_combined(inst, &params, seed, lp_mode(flags))?,
    };
    let disjoint = sol.validate(inst).is_ok();
    let keeps = bicrit::experiment::big_sets_keep_enough(inst, &params, &sol);
    let report = json!({
        "algorithm": name(algorithm),
        "count": sol.len(),
        "planted": inst.planted().map(<[usize]>::len),
        "D": params.d,
        "C": params.c,
        "eps": rational_json(&params.eps),
        "disjoint": disjoint,
        "big_sets_keep_enough": keeps,
    });
    Ok((sol.to_json(), report, disjoint && keeps))
}

pub fn bench(a: BenchArgs) -> Result<bool> {
    let inst = read_instance(&a.instance, a.kind)?;
    let exec = if a.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let report: ExperimentReport = match a.algorithm {
        Algorithm::Alg2 => bench_rounding(
            &makespan_of(inst, a.algorithm)?,
            a.seed,
            a.trials,
            a.flags.column_cap,
            exec,
        )?,
        Algorithm::Combined => bench_combined(
            &makespan_of(inst, a.algorithm)?,
            a.seed,
            a.trials,
            a.flags.column_cap,
            exec,
        )?,
        Algorithm::SpAll => {
            let inst = setpacking_of(inst, a.algorithm)?;
            bench_setpacking(
                &inst,
                &sp_params(&a.flags)?,
                lp_mode(&a.flags),
                a.seed,
                a.trials,
                exec,
            )?
        }
        other => bail!(
            "bench supports alg2, combined and sp-all; {} is deterministic",
            name(other)
        ),
    };
    write_or_print(a.out.as_deref(), &pretty(&report.to_json()))?;
    Ok(report.passed())
}

pub fn verify(a: VerifyArgs) -> Result<bool> {
    let suite = a.suite.parse()?;
    let mut scale = match a.scale {
        ScaleArg::Full => Scale::default(),
        ScaleArg::Small => Scale {
            max_jobs: 3,
            universe: 4,
            max_sets: 4,
            formulas: 4,
            ..Scale::default()
        },
    };
    scale.seed = a.seed;
    if let Some(v) = a.max_jobs {
        scale.max_jobs = v;
    }
    if let Some(v) = a.universe {
        scale.universe = v;
    }
    if let Some(v) = a.max_sets {
        scale.max_sets = v;
    }
    if let Some(v) = a.formulas {
        scale.formulas = v;
    }
    match (a.sigma, a.d) {
        (Some(s), Some(d)) => scale.gadget = Some((s, d)),
        (None, None) => {}
        _ => bail!("--sigma and --d go together"),
    }
    if let Some(path) = &a.formula {
        match read_instance(path, Some(Kind::Cnf))? {
            Instance::Cnf(f) => scale.formula = Some(f),
            _ => unreachable!("kind checked"),
        }
    }
    if let Some(e) = &a.eps {
        scale.eps = Some(parse_rational("eps", e)?);
    }
    let exec = if a.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let report = run_suite(suite, &scale, exec)?;
    write_or_print(a.out.as_deref(), &pretty(&report.to_json()))?;
    if let Some(c) = &report.counterexample {
        eprintln!("{suite} failed: {c}");
    }
    Ok(report.passed())
}

fn meta_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn parse_assignment(text: &str) -> Result<Vec<bool>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| match t {
            "1" | "true" | "T" => Ok(true),
            "0" | "false" | "F" => Ok(false),
            other => bail!("--assignment: `{other}` is not 0 or 1"),
        })
        .collect()
}

pub fn reduce(a: ReduceArgs) -> Result<bool> {
    let inst = read_instance(&a.input, None)?;
    let (instance, meta) = match a.from {
        Reduction::CnfSp => {
            let Instance::Cnf(phi) = inst else {
                bail!(bicrit::Error::Mismatch(format!(
                    "cnf-sp needs a CNF formula, got {}",
                    inst.kind()
                )));
            };
            let assignment = a.assignment.as_deref().map(parse_assignment).transpose()?;
            let red =
                reduce_cnf_to_setpacking(&phi, a.alphabet_size, assignment.as_deref(), a.degree)?;
            (Instance::SetPacking(red.instance.clone()), red.metadata())
        }
        Reduction::SpSc => {
            let Instance::SetPacking(sp) = inst else {
                bail!(bicrit::Error::Mismatch(format!(
                    "sp-sc needs a set packing instance, got {}",
                    inst.kind()
                )));
            };
            let red = reduce_setpacking_to_santaclaus(&sp, parse_rational("T", &a.target)?)?;
            (Instance::SantaClaus(red.instance.clone()), red.metadata())
        }
    };
    fs::write(&a.out, emit_instance(&instance))
        .with_context(|| format!("writing {}", a.out.display()))?;
    let meta_out = meta_path(&a.out);
    fs::write(&meta_out, pretty(&meta))
        .with_context(|| format!("writing {}", meta_out.display()))?;
    Ok(true)
}
