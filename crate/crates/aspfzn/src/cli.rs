//! Command line driver: grounds via an external grounder, translates to
//! FlatZinc, optionally runs an external solving toolchain and decodes its
//! solution stream, or cross-checks the translation with the built-in
//! brute-force enumerators.
//!
//! Exit codes: 0 translate-only / verification success, 10 satisfiable in
//! solve mode, 20 unsatisfiable, 1 internal failure, 2 usage error.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::process::Command;

use clap::Parser;
use thiserror::Error;

use crate::analysis::{build_dep_graph, partially_shift};
use crate::aspif::parse_aspif;
use crate::fzn::{emit_fzn, EmitOptions, OutputMap};
use crate::linearize::linearize;
use crate::oracle::{check_correspondence, enumerate_answer_sets, Verdict, DEFAULT_CAP};
use crate::theory::{bound_or_default, extract_casp};
use crate::translate::{translate, TranslateOptions};

const SEPARATOR: &str = "----------";

#[derive(Debug, Parser)]
#[command(name = "asp-fzn", version, about = "Translate ground ASP programs to FlatZinc")]
pub struct Args {
    /// Logic program files handed to the grounder; ASPIF is read from
    /// stdin when absent.
    pub inputs: Vec<PathBuf>,

    /// Write the FlatZinc translation to this file.
    #[arg(short = 'f', long = "output-fzn")]
    pub output_fzn: Option<PathBuf>,

    /// Write the output mapping sidecar to this file.
    #[arg(short = 'o', long = "output-ozn")]
    pub output_ozn: Option<PathBuf>,

    /// Disable strict ranking.
    #[arg(long = "non-strict-ranking")]
    pub non_strict_ranking: bool,

    /// Linearize the model for MIP backends (implied by a MIP solver id).
    #[arg(long)]
    pub linearize: bool,

    /// Verbose progress output on stderr.
    #[arg(short, long, action = clap::ArgAction::Count)]
    pub verbose: u8,

    /// Solve with this backend solver id via the external toolchain.
    #[arg(short = 's', long = "solver-id")]
    pub solver_id: Option<String>,

    /// Time limit in milliseconds, forwarded to the backend.
    #[arg(short = 't', long = "time-limit")]
    pub time_limit: Option<u64>,

    /// Number of backend threads.
    #[arg(short = 'p', long = "parallel")]
    pub parallel: Option<u32>,

    /// Enumerate all solutions (or print improving solutions when
    /// optimizing).
    #[arg(short = 'a', long = "all-solutions")]
    pub all_solutions: bool,

    /// Print solutions as JSON objects instead of answer-set lines.
    #[arg(long = "solution-json")]
    pub solution_json: bool,

    /// Extra arguments appended to the solver command line.
    #[arg(long = "solver-args")]
    pub solver_args: Option<String>,

    /// Grounder executable.
    #[arg(long = "gringo-path", default_value = "gringo")]
    pub gringo_path: String,

    /// Solving toolchain executable.
    #[arg(long = "minizinc-path", default_value = "minizinc")]
    pub minizinc_path: String,

    /// Cross-check translation models against the brute-force enumerator
    /// and print the verdict.
    #[arg(long)]
    pub verify: bool,

    /// Print answer sets from the brute-force enumerator instead of an
    /// external solver.
    #[arg(long = "enumerate-oracle")]
    pub enumerate_oracle: bool,

    /// Domain substituted for linear variables without a declared domain,
    /// as "lo..hi".
    #[arg(long = "fallback-bounds", default_value = "-1048576..1048576", value_parser = parse_bounds)]
    pub fallback_bounds: (i64, i64),

    /// Fail instead of decomposing when the program uses global
    /// constraints.
    #[arg(long = "reject-globals")]
    pub reject_globals: bool,
}

fn parse_bounds(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected lo..hi")?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err("empty interval".into());
    }
    Ok((lo, hi))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Aspif(#[from] crate::aspif::AspifError),
    #[error("{0}")]
    Theory(#[from] crate::theory::TheoryError),
    #[error("{0}")]
    Analysis(#[from] crate::analysis::AnalysisError),
    #[error("{0}")]
    Translate(#[from] crate::translate::TranslateError),
    #[error("{0}")]
    Linearize(#[from] crate::linearize::LinearizeError),
    #[error("{0}")]
    Emit(#[from] crate::fzn::EmitError),
    #[error("{0}")]
    Verify(#[from] crate::oracle::VerifyError),
    #[error("{0}")]
    Oracle(#[from] crate::oracle::OracleError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{executable} not found; install it or point --{flag} at it")]
    MissingExecutable { executable: String, flag: String },
    #[error("{command} exited with {status}: {stderr}")]
    SubprocessFailed { command: String, status: String, stderr: String },
    #[error("program uses global constraints but --reject-globals is set")]
    GlobalsRejected,
    #[error("cannot decode solver output line: {0}")]
    Decode(String),
}

/// MIP backends get the linearized model; the paper-side toolchain does the
/// same switch based on the solver family.
fn is_mip_solver(id: &str) -> bool {
    let id = id.to_ascii_lowercase();
    ["cbc", "coin-bc", "coinbc", "cplex", "gurobi", "scip", "highs", "mip"]
        .iter()
        .any(|m| id.contains(m))
}

fn run_subprocess(cmd: &mut Command, what: &str, flag: &str) -> Result<String, CliError> {
    let out = cmd.output().map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            CliError::MissingExecutable { executable: what.to_string(), flag: flag.to_string() }
        } else {
            CliError::Io(e)
        }
    })?;
    if !out.status.success() {
        return Err(CliError::SubprocessFailed {
            command: what.to_string(),
            status: out.status.to_string(),
            stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
        });
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveStatus {
    Satisfiable,
    /// The search space was exhausted (all solutions / proven optimum).
    Complete,
    Unsatisfiable,
}

/// One decoded solution block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub assignment: BTreeMap<String, i64>,
}

/// Splits a solver output stream into solutions and a final status,
/// following the standard conventions: `name = value;` items, blocks closed
/// by a ten-dash line, `==========` on exhaustion and
/// `=====UNSATISFIABLE=====` when there is no solution.
pub fn decode_solutions(stream: &str) -> Result<(Vec<Solution>, SolveStatus), CliError> {
    let mut solutions = Vec::new();
    let mut current: BTreeMap<String, i64> = BTreeMap::new();
    let mut status = SolveStatus::Satisfiable;
    let mut saw_unsat = false;
    for line in stream.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if line == SEPARATOR {
            solutions.push(Solution { assignment: std::mem::take(&mut current) });
            continue;
        }
        if line == "==========" {
            status = SolveStatus::Complete;
            continue;
        }
        if line == "=====UNSATISFIABLE=====" {
            saw_unsat = true;
            continue;
        }
        if line.starts_with("=====") {
            // Other terminal statuses (UNKNOWN, ERROR) pass through as-is.
            continue;
        }
        let item = line.strip_suffix(';').unwrap_or(line);
        let (name, value) = item.split_once('=').ok_or_else(|| CliError::Decode(line.into()))?;
        let value = value.trim();
        let parsed = match value {
            "true" => 1,
            "false" => 0,
            v => v.parse::<i64>().map_err(|_| CliError::Decode(line.into()))?,
        };
        current.insert(name.trim().to_string(), parsed);
    }
    if saw_unsat && solutions.is_empty() {
        status = SolveStatus::Unsatisfiable;
    }
    Ok((solutions, status))
}

fn render_json(map: &OutputMap, assign: &BTreeMap<String, i64>, cost: Option<i64>) -> String {
    let atoms: Vec<&String> = map
        .atoms
        .iter()
        .filter(|(id, _)| assign.get(*id).copied().unwrap_or(0) != 0)
        .map(|(_, display)| display)
        .collect();
    let vals: BTreeMap<&String, i64> = map
        .vals
        .iter()
        .filter_map(|(id, var)| assign.get(id).map(|v| (var, *v)))
        .collect();
    let mut obj = serde_json::json!({ "atoms": atoms, "lin_vars": vals });
    if let Some(c) = cost {
        obj["cost"] = serde_json::json!(c);
    }
    obj.to_string()
}

pub fn run(args: &Args) -> Result<i32, CliError> {
    let aspif_text = if args.inputs.is_empty() {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        let mut cmd = Command::new(&args.gringo_path);
        cmd.arg("--output=aspif");
        cmd.args(&args.inputs);
        run_subprocess(&mut cmd, &args.gringo_path, "gringo-path")?
    };

    let program = parse_aspif(aspif_text.as_bytes())?;
    let mut spec = extract_casp(&program)?;
    let defaulted = bound_or_default(&mut spec, args.fallback_bounds);
    if args.verbose > 0 && !defaulted.is_empty() {
        eprintln!("defaulted domains for: {}", defaulted.join(", "));
    }
    if args.reject_globals && !spec.globals.is_empty() {
        return Err(CliError::GlobalsRejected);
    }

    let opts = TranslateOptions { strict: !args.non_strict_ranking };

    if args.verify {
        let verdict = check_correspondence(&program, &spec, opts, DEFAULT_CAP)?;
        match verdict {
            Verdict::OneToOne => println!("VERIFIED one-to-one"),
            Verdict::ProjectionEqual => println!("VERIFIED projection-equal"),
            Verdict::Mismatch { witness, in_translation } => {
                let side = if in_translation { "translation only" } else { "oracle only" };
                println!("MISMATCH ({side}): {witness:?}");
                return Ok(1);
            }
        }
        return Ok(0);
    }

    if args.enumerate_oracle {
        let scc0 = build_dep_graph(&program);
        let shifted = partially_shift(&program, &scc0)?;
        let sets = enumerate_answer_sets(&shifted, &spec, DEFAULT_CAP)?;
        for e in &sets {
            let mut parts: Vec<String> = program.shown_facts.clone();
            for (atom, display) in &program.shows {
                if e.atoms.contains(atom) {
                    parts.push(display.clone());
                }
            }
            for (var, v) in &e.assignment {
                parts.push(format!("val({var},{v})"));
            }
            println!("{}", parts.join(" "));
            println!("{SEPARATOR}");
        }
        if sets.is_empty() {
            println!("UNSATISFIABLE");
            return Ok(20);
        }
        println!("==========");
        return Ok(10);
    }

    let scc0 = build_dep_graph(&program);
    let shifted = partially_shift(&program, &scc0)?;
    let scc = build_dep_graph(&shifted);
    let out = translate(&shifted, &spec, &scc, opts)?;
    let do_linearize =
        args.linearize || args.solver_id.as_deref().is_some_and(is_mip_solver);
    let model = if do_linearize { linearize(&out.model)? } else { out.model.clone() };
    if args.verbose > 0 {
        eprintln!(
            "translated: {} variables, {} constraints ({:?})",
            model.vars.len(),
            model.constraints.len(),
            out.stats
        );
    }
    let fzn_text = emit_fzn(&model, EmitOptions { linearized: do_linearize })?;
    let map = {
        // The sidecar names refer to the emitted model, which shares the
        // translation's variable registry prefix either way.
        OutputMap::build(&shifted, &out)?
    };
    if let Some(path) = &args.output_fzn {
        std::fs::write(path, &fzn_text)?;
    }
    if let Some(path) = &args.output_ozn {
        std::fs::write(path, map.to_text())?;
    }

    let Some(solver) = &args.solver_id else {
        if args.output_fzn.is_none() {
            print!("{fzn_text}");
        }
        return Ok(0);
    };

    let tmp;
    let fzn_path = match &args.output_fzn {
        Some(p) => p.clone(),
        None => {
            tmp = tempfile::Builder::new().suffix(".fzn").tempfile()?;
            std::fs::write(tmp.path(), &fzn_text)?;
            tmp.path().to_path_buf()
        }
    };
    let mut cmd = Command::new(&args.minizinc_path);
    cmd.arg("--solver").arg(solver);
    if args.all_solutions {
        cmd.arg("-a");
    }
    if let Some(t) = args.time_limit {
        cmd.arg("--time-limit").arg(t.to_string());
    }
    if let Some(p) = args.parallel {
        cmd.arg("-p").arg(p.to_string());
    }
    if let Some(extra) = &args.solver_args {
        cmd.args(extra.split_whitespace());
    }
    cmd.arg(&fzn_path);
    let stream = run_subprocess(&mut cmd, &args.minizinc_path, "minizinc-path")?;
    let (solutions, status) = decode_solutions(&stream)?;
    for s in &solutions {
        let cost = s.assignment.get("objective").copied();
        if args.solution_json {
            println!("{}", render_json(&map, &s.assignment, cost));
        } else {
            println!("{}", map.render(&s.assignment));
            println!("{SEPARATOR}");
        }
    }
    match status {
        SolveStatus::Unsatisfiable => {
            println!("UNSATISFIABLE");
            Ok(20)
        }
        SolveStatus::Complete => {
            if !args.solution_json {
                println!("==========");
            }
            Ok(10)
        }
        SolveStatus::Satisfiable => Ok(10),
    }
}

pub fn main_entry() -> i32 {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
