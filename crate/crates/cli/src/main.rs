//! `maa`: check, simulate and export component models.
//!
//! Exit status: 0 clean or warnings only, 1 ill-formed model, 2 I/O or
//! usage problem, 3 failure during simulation.

mod ir;
mod load;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use maa_core::exec::{self, ExecError, Policy};
use maa_core::{analyze, resolve, Analysis, Diagnostic, Profile};

#[derive(Parser)]
#[command(name = "maa", version, about = "Check, simulate and export component models with embedded automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report well-formedness diagnostics.
    Check(CheckArgs),
    /// Run a time-synchronous simulation and print the trace as TSV.
    SimTs(SimTsArgs),
    /// Feed an event script to an event-driven component.
    SimEd(SimEdArgs),
    /// Write the resolved model as JSON.
    ExportIr(ExportArgs),
}

#[derive(Args)]
struct Inputs {
    /// Model files or directories (searched for .maa and .types files).
    #[arg(required = true)]
    paths: Vec<PathBuf>,
    /// Type declaration files or directories.
    #[arg(long = "types")]
    types: Vec<PathBuf>,
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    First,
    Seeded,
    Enumerate,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, default_value = "generic", value_parser = parse_profile)]
    profile: Profile,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct Run {
    #[command(flatten)]
    inputs: Inputs,
    /// Component to execute: qualified, or a unique simple name.
    #[arg(long)]
    main: String,
    #[arg(long, value_enum)]
    policy: Option<PolicyArg>,
    /// Seed for `--policy seeded`; implies it when no policy is given.
    #[arg(long)]
    seed: Option<u64>,
    /// Simulate despite warnings.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct SimTsArgs {
    #[command(flatten)]
    run: Run,
    /// Tab-separated stimulus: header of in-port names, one row per cycle.
    #[arg(long)]
    stimulus: Option<PathBuf>,
    /// Number of cycles; defaults to the stimulus length (at least 1).
    #[arg(long)]
    cycles: Option<usize>,
    /// Shorthand for `--policy enumerate`.
    #[arg(long)]
    enumerate: bool,
    /// Most partial runs kept alive while enumerating.
    #[arg(long, default_value_t = 64)]
    bound: usize,
}

#[derive(Args)]
struct SimEdArgs {
    #[command(flatten)]
    run: Run,
    /// Event script: one `<port> <value>` per line, `#` comments.
    #[arg(long)]
    script: PathBuf,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Profile recorded in the document.
    #[arg(long, default_value = "generic", value_parser = parse_profile)]
    profile: Profile,
}

fn parse_profile(s: &str) -> Result<Profile, String> {
    s.parse()
}

/// Why a command stopped early.
enum Failure {
    Invalid(String),
    Usage(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 3,
        }
    }
}

impl From<ExecError> for Failure {
    fn from(e: ExecError) -> Self {
        match e {
            ExecError::UnknownMain(_) | ExecError::UnknownPort(_) | ExecError::TypeMismatch { .. } => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Runtime(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => check(a),
        Command::SimTs(a) => sim_ts(a),
        Command::SimEd(a) => sim_ed(a),
        Command::ExportIr(a) => export_ir(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let (Failure::Invalid(m) | Failure::Usage(m) | Failure::Runtime(m)) = &f;
            if !m.is_empty() {
                eprintln!("error: {m}");
            }
            ExitCode::from(f.code())
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())
                .and_then(|_| so.flush())
                .map_err(|e| Failure::Usage(format!("stdout: {e}")))
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn text_lines(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| format!("{d}\n")).collect()
}

fn json_diags(diags: &[Diagnostic]) -> String {
    let items: Vec<serde_json::Value> = diags
        .iter()
        .map(|d| {
            serde_json::json!({
                "file": &*d.loc.file,
                "line": d.loc.line,
                "column": d.loc.column,
                "severity": d.severity.to_string(),
                "code": d.code.as_str(),
                "message": d.message,
            })
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&items).expect("diagnostics serialize");
    s.push('\n');
    s
}

fn load_and_analyze(inputs: &Inputs, profile: Profile) -> Result<Result<Analysis, Vec<Diagnostic>>, Failure> {
    let src = load::load(&inputs.paths, &inputs.types).map_err(Failure::Usage)?;
    if !src.syntax.is_empty() {
        let mut d = src.syntax;
        maa_core::coco::dedup(&mut d);
        return Ok(Err(d));
    }
    Ok(Ok(analyze(&src.units, &src.types, profile)))
}

fn check(a: CheckArgs) -> Result<u8, Failure> {
    let diags = match load_and_analyze(&a.inputs, a.profile)? {
        Ok(an) => an.diagnostics,
        Err(syn) => syn,
    };
    let text = match a.format {
        Format::Text => text_lines(&diags),
        Format::Json => json_diags(&diags),
    };
    emit(&a.inputs.out, &text)?;
    Ok(u8::from(diags.iter().any(Diagnostic::is_error)))
}

/// Analyzes under `profile`; errors always block, warnings unless forced.
fn prepare(run: &Run, profile: Profile) -> Result<Analysis, Failure> {
    let an = match load_and_analyze(&run.inputs, profile)? {
        Ok(an) => an,
        Err(syn) => {
            eprint!("{}", text_lines(&syn));
            return Err(Failure::Invalid(String::new()));
        }
    };
    eprint!("{}", text_lines(&an.diagnostics));
    if an.has_errors() {
        return Err(Failure::Invalid(format!("model is not well-formed under the {profile} profile")));
    }
    if !an.diagnostics.is_empty() && !run.force {
        return Err(Failure::Invalid("warnings block simulation; pass --force to run anyway".into()));
    }
    Ok(an)
}

fn policy(run: &Run, enumerate: bool, bound: usize) -> Result<Policy, Failure> {
    let p = match (run.policy, enumerate) {
        (Some(PolicyArg::Enumerate), _) | (None, true) => PolicyArg::Enumerate,
        (Some(p), true) if p != PolicyArg::Enumerate => {
            return Err(Failure::Usage("--enumerate conflicts with --policy".into()))
        }
        (Some(p), _) => p,
        (None, false) if run.seed.is_some() => PolicyArg::Seeded,
        (None, false) => PolicyArg::First,
    };
    Ok(match p {
        PolicyArg::First => Policy::FirstDeclared,
        PolicyArg::Seeded => Policy::Seeded(run.seed.unwrap_or(0)),
        PolicyArg::Enumerate => {
            if bound == 0 {
                return Err(Failure::Usage("--bound must be at least 1".into()));
            }
            Policy::Exhaustive(bound)
        }
    })
}

fn sim_ts(a: SimTsArgs) -> Result<u8, Failure> {
    let policy = policy(&a.run, a.enumerate, a.bound)?;
    let an = prepare(&a.run, Profile::Ts)?;
    let main = &a.run.main;
    let stimulus = match &a.stimulus {
        Some(p) => exec::parse_stimulus(&read(p)?, &an.model, main)
            .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        None => Vec::new(),
    };
    let cycles = a.cycles.unwrap_or(stimulus.len().max(1));
    if cycles == 0 {
        return Err(Failure::Usage("--cycles must be at least 1".into()));
    }
    let text = match policy {
        Policy::Exhaustive(bound) => {
            let traces = exec::enumerate_ts(&an.model, main, &stimulus, cycles, bound)?;
            let mut s = String::new();
            for t in &traces {
                s.push_str(&exec::trace_tsv(t));
                s.push('\n');
            }
            s.push_str(&format!("traces: {}\n", traces.len()));
            s
        }
        p => exec::trace_tsv(&exec::run_ts(&an.model, main, &stimulus, cycles, p)?),
    };
    emit(&a.run.inputs.out, &text)?;
    Ok(0)
}

fn sim_ed(a: SimEdArgs) -> Result<u8, Failure> {
    let policy = policy(&a.run, false, 1)?;
    if let Policy::Exhaustive(_) = policy {
        return Err(Failure::Usage("enumeration is available for sim-ts only".into()));
    }
    let an = prepare(&a.run, Profile::Ed)?;
    let script = exec::parse_script(&read(&a.script)?, &an.model, &a.run.main)
        .map_err(|e| Failure::Usage(format!("{}: {e}", a.script.display())))?;
    let trace = exec::run_ed(&an.model, &a.run.main, &script, policy)?;
    emit(&a.run.inputs.out, &exec::event_log(&trace))?;
    Ok(0)
}

fn export_ir(a: ExportArgs) -> Result<u8, Failure> {
    let src = load::load(&a.inputs.paths, &a.inputs.types).map_err(Failure::Usage)?;
    if !src.syntax.is_empty() {
        eprint!("{}", text_lines(&src.syntax));
        return Err(Failure::Invalid(String::new()));
    }
    let (model, diags) = resolve(&src.units, &src.types);
    if diags.iter().any(Diagnostic::is_error) {
        eprint!("{}", text_lines(&diags));
        return Err(Failure::Invalid("model does not resolve".into()));
    }
    let mut text = serde_json::to_string_pretty(&ir::export(&model, a.profile)).expect("IR serializes");
    text.push('\n');
    emit(&a.inputs.out, &text)?;
    Ok(0)
}
