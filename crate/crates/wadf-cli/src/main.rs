//! Command line interface to the reasoning engine.
//!
//! Subcommands read a framework file, optionally an interpretation file,
//! and print a single JSON document (or framework text for `reduct`).
//! Output is byte deterministic. Exit codes: 0 success, 2 parse or
//! validation failure, 3 unsupported combination, 4 budget exceeded,
//! 5 iteration did not converge.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use wadf::framework::{parse_framework, serialize_framework, Framework};
use wadf::operator::{
    interpretation_from_json, interpretation_to_json, kleene_iterate, EngineChoice, EngineConfig,
    Interpretation, IterationOutcome, OperatorError,
};
use wadf::semantics::{
    enumerate, is_admissible, is_complete, is_grounded, is_model, is_preferred, is_stable,
    parse_assumed_set, parse_predicate, query, reduct, AssumedValueSet, QueryMode, SemanticsError,
    SemanticsName, StableVerdict,
};

const EXIT_PARSE: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_NO_CONVERGENCE: u8 = 5;

#[derive(Parser)]
#[command(
    name = "wadf",
    version,
    about = "Reason about weighted abstract dialectical frameworks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct EngineArgs {
    /// Operator engine: auto, finite, or unit
    #[arg(long, default_value = "auto")]
    engine: String,
    /// Iteration guard for fixpoint computations
    #[arg(long)]
    max_steps: Option<u64>,
    /// Evaluation budget per operator application (default from
    /// WADF_BUDGET, then 4194304)
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct OutArg {
    /// Write the result here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all interpretations under a semantics
    Solve {
        /// Semantics: adm, com, mod, grd, prf, or stb
        #[arg(long)]
        sem: String,
        /// Assumed value set for the stable semantics
        #[arg(long)]
        assumed: Option<String>,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        out: OutArg,
        framework: PathBuf,
    },
    /// Check whether an interpretation satisfies a semantics
    Verify {
        #[arg(long)]
        sem: String,
        /// JSON file mapping statement ids to values
        #[arg(long)]
        interpretation: PathBuf,
        #[arg(long)]
        assumed: Option<String>,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        out: OutArg,
        framework: PathBuf,
    },
    /// Decide a credulous or skeptical query
    Query {
        /// credulous or skeptical
        #[arg(long)]
        mode: String,
        #[arg(long)]
        sem: String,
        #[arg(long)]
        statement: String,
        /// eq:<value>, ge:<degree>, or le:<degree>
        #[arg(long)]
        pred: String,
        #[arg(long)]
        assumed: Option<String>,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        out: OutArg,
        framework: PathBuf,
    },
    /// Check the stable condition, with witness details
    Stable {
        #[arg(long)]
        interpretation: PathBuf,
        #[arg(long)]
        assumed: String,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        out: OutArg,
        framework: PathBuf,
    },
    /// Compute the grounded interpretation by fixpoint iteration
    Grounded {
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        out: OutArg,
        framework: PathBuf,
    },
    /// Build the reduct under a total interpretation and assumed set
    Reduct {
        #[arg(long)]
        interpretation: PathBuf,
        #[arg(long)]
        assumed: String,
        #[command(flatten)]
        out: OutArg,
        framework: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

fn classify_operator(e: &OperatorError) -> u8 {
    match e {
        OperatorError::BudgetExceeded { .. } => EXIT_BUDGET,
        OperatorError::UnsupportedEngine { .. } => EXIT_UNSUPPORTED,
        _ => EXIT_PARSE,
    }
}

impl From<SemanticsError> for Failure {
    fn from(e: SemanticsError) -> Self {
        let code = match &e {
            SemanticsError::Operator(op) => classify_operator(op),
            SemanticsError::Unsupported { .. } => EXIT_UNSUPPORTED,
            SemanticsError::NonConvergence { .. } => EXIT_NO_CONVERGENCE,
            _ => EXIT_PARSE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<OperatorError> for Failure {
    fn from(e: OperatorError) -> Self {
        Failure::new(classify_operator(&e), e.to_string())
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))
}

fn load_framework(path: &Path) -> Result<Framework, Failure> {
    let text = read_file(path)?;
    parse_framework(&text)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_interpretation(path: &Path, fw: &Framework) -> Result<Interpretation, Failure> {
    let text = read_file(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    interpretation_from_json(fw, &value)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn parse_sem(text: &str) -> Result<SemanticsName, Failure> {
    text.parse().map_err(|e: String| Failure::new(EXIT_PARSE, e))
}

fn parse_assumed_opt(
    text: Option<&str>,
    fw: &Framework,
) -> Result<Option<AssumedValueSet>, Failure> {
    match text {
        None => Ok(None),
        Some(t) => Ok(Some(parse_assumed_set(t, fw).map_err(Failure::from)?)),
    }
}

fn engine_config(args: &EngineArgs) -> Result<EngineConfig, Failure> {
    let engine = match args.engine.as_str() {
        "auto" => EngineChoice::Auto,
        "finite" => EngineChoice::Finite,
        "unit" => EngineChoice::Unit,
        other => {
            return Err(Failure::new(
                EXIT_PARSE,
                format!("unknown engine {other:?}; expected auto, finite, or unit"),
            ))
        }
    };
    let budget = match args.budget {
        Some(b) => Some(b),
        None => match std::env::var("WADF_BUDGET") {
            Ok(text) => Some(text.parse::<u64>().map_err(|_| {
                Failure::new(EXIT_PARSE, format!("invalid WADF_BUDGET value {text:?}"))
            })?),
            Err(_) => None,
        },
    };
    Ok(EngineConfig { engine, max_steps: args.max_steps, budget })
}

fn emit(out: &OutArg, payload: &str) -> Result<(), Failure> {
    match &out.out {
        None => {
            print!("{payload}");
            Ok(())
        }
        Some(path) => std::fs::write(path, payload).map_err(|e| {
            Failure::new(EXIT_PARSE, format!("cannot write {}: {e}", path.display()))
        }),
    }
}

fn json_line(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string(&value).expect("serializable");
    s.push('\n');
    s
}

fn run_solve(
    sem: &str,
    assumed: Option<&str>,
    engine: &EngineArgs,
    out: &OutArg,
    framework: &Path,
) -> Result<(), Failure> {
    let fw = load_framework(framework)?;
    let sem = parse_sem(sem)?;
    let assumed = parse_assumed_opt(assumed, &fw)?;
    let cfg = engine_config(engine)?;
    let interps = enumerate(&fw, sem, assumed.as_ref(), &cfg).map_err(Failure::from)?;
    let rendered: Vec<serde_json::Value> =
        interps.iter().map(|v| interpretation_to_json(&fw, v)).collect();
    let mut doc = json!({
        "format": 1,
        "operation": "solve",
        "semantics": sem.short(),
        "count": rendered.len(),
        "interpretations": rendered,
    });
    if let Some(w) = &assumed {
        doc.as_object_mut()
            .expect("object")
            .insert("assumed".to_string(), json!(w.to_string()));
    }
    emit(out, &json_line(doc))
}

fn run_verify(
    sem: &str,
    interpretation: &Path,
    assumed: Option<&str>,
    engine: &EngineArgs,
    out: &OutArg,
    framework: &Path,
) -> Result<(), Failure> {
    let fw = load_framework(framework)?;
    let sem = parse_sem(sem)?;
    let v = load_interpretation(interpretation, &fw)?;
    let assumed = parse_assumed_opt(assumed, &fw)?;
    let cfg = engine_config(engine)?;
    let verdict = match sem {
        SemanticsName::Admissible => verdict_bool(is_admissible(&fw, &v, &cfg)?),
        SemanticsName::Complete => verdict_bool(is_complete(&fw, &v, &cfg)?),
        SemanticsName::Model => verdict_bool(is_model(&fw, &v, &cfg)?),
        SemanticsName::Preferred => verdict_bool(is_preferred(&fw, &v, &cfg)?),
        SemanticsName::Grounded => match is_grounded(&fw, &v, &cfg)? {
            Some(b) => verdict_bool(b),
            None => "indeterminate",
        },
        SemanticsName::Stable => {
            let w = assumed.ok_or(SemanticsError::MissingAssumedSet)?;
            match is_stable(&fw, &v, &w, &cfg)? {
                StableVerdict::Stable => "yes",
                StableVerdict::NotStable { .. } => "no",
                StableVerdict::Unknown { .. } => "indeterminate",
            }
        }
    };
    let doc = json!({
        "format": 1,
        "operation": "verify",
        "semantics": sem.short(),
        "verdict": verdict,
    });
    emit(out, &json_line(doc))
}

fn verdict_bool(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn run_query(
    mode: &str,
    sem: &str,
    statement: &str,
    pred: &str,
    assumed: Option<&str>,
    engine: &EngineArgs,
    out: &OutArg,
    framework: &Path,
) -> Result<(), Failure> {
    let fw = load_framework(framework)?;
    let mode = match mode {
        "credulous" => QueryMode::Credulous,
        "skeptical" => QueryMode::Skeptical,
        other => {
            return Err(Failure::new(
                EXIT_PARSE,
                format!("unknown mode {other:?}; expected credulous or skeptical"),
            ))
        }
    };
    let sem = parse_sem(sem)?;
    let assumed = parse_assumed_opt(assumed, &fw)?;
    let predicate = parse_predicate(pred, &fw).map_err(Failure::from)?;
    let cfg = engine_config(engine)?;
    let answer = query(&fw, mode, sem, assumed.as_ref(), statement, &predicate, &cfg)
        .map_err(Failure::from)?;
    let mut doc = json!({
        "format": 1,
        "operation": "query",
        "mode": match mode {
            QueryMode::Credulous => "credulous",
            QueryMode::Skeptical => "skeptical",
        },
        "semantics": sem.short(),
        "statement": statement,
        "predicate": predicate.to_string(),
        "holds": answer.holds,
    });
    if let Some(evidence) = &answer.evidence {
        let key = match mode {
            QueryMode::Credulous => "witness",
            QueryMode::Skeptical => "counterexample",
        };
        doc.as_object_mut()
            .expect("object")
            .insert(key.to_string(), interpretation_to_json(&fw, evidence));
    }
    emit(out, &json_line(doc))
}

fn run_stable(
    interpretation: &Path,
    assumed: &str,
    engine: &EngineArgs,
    out: &OutArg,
    framework: &Path,
) -> Result<(), Failure> {
    let fw = load_framework(framework)?;
    let v = load_interpretation(interpretation, &fw)?;
    let w = parse_assumed_set(assumed, &fw).map_err(Failure::from)?;
    let cfg = engine_config(engine)?;
    let verdict = is_stable(&fw, &v, &w, &cfg).map_err(Failure::from)?;
    let mut doc = json!({
        "format": 1,
        "operation": "stable",
        "assumed": w.to_string(),
        "verdict": match &verdict {
            StableVerdict::Stable => "stable",
            StableVerdict::NotStable { .. } => "not-stable",
            StableVerdict::Unknown { .. } => "unknown",
        },
    });
    let obj = doc.as_object_mut().expect("object");
    match verdict {
        StableVerdict::Stable => {}
        StableVerdict::NotStable { witness } => {
            obj.insert("witness".to_string(), json!(witness));
        }
        StableVerdict::Unknown { reason } => {
            obj.insert("reason".to_string(), json!(reason));
        }
    }
    emit(out, &json_line(doc))
}

fn run_grounded(engine: &EngineArgs, out: &OutArg, framework: &Path) -> Result<(), Failure> {
    let fw = load_framework(framework)?;
    let cfg = engine_config(engine)?;
    match kleene_iterate(&fw, &cfg).map_err(Failure::from)? {
        IterationOutcome::Grounded { interpretation, steps } => {
            let doc = json!({
                "format": 1,
                "operation": "grounded",
                "interpretation": interpretation_to_json(&fw, &interpretation),
                "steps": steps,
            });
            emit(out, &json_line(doc))
        }
        IterationOutcome::NotConverged { limit, .. } => Err(Failure::new(
            EXIT_NO_CONVERGENCE,
            format!("operator iteration did not converge within {limit} steps"),
        )),
    }
}

fn run_reduct(
    interpretation: &Path,
    assumed: &str,
    out: &OutArg,
    framework: &Path,
) -> Result<(), Failure> {
    let fw = load_framework(framework)?;
    let v = load_interpretation(interpretation, &fw)?;
    let w = parse_assumed_set(assumed, &fw).map_err(Failure::from)?;
    let red = reduct(&fw, &v, &w).map_err(Failure::from)?;
    emit(out, &serialize_framework(&red))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Solve { sem, assumed, engine, out, framework } => {
            run_solve(sem, assumed.as_deref(), engine, out, framework)
        }
        Command::Verify { sem, interpretation, assumed, engine, out, framework } => {
            run_verify(sem, interpretation, assumed.as_deref(), engine, out, framework)
        }
        Command::Query { mode, sem, statement, pred, assumed, engine, out, framework } => {
            run_query(mode, sem, statement, pred, assumed.as_deref(), engine, out, framework)
        }
        Command::Stable { interpretation, assumed, engine, out, framework } => {
            run_stable(interpretation, assumed, engine, out, framework)
        }
        Command::Grounded { engine, out, framework } => run_grounded(engine, out, framework),
        Command::Reduct { interpretation, assumed, out, framework } => {
            run_reduct(interpretation, assumed, out, framework)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
