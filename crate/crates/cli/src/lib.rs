//! Command-line front end for `framing-core`.
//!
//! Every subcommand is a thin adapter: it loads its inputs, makes one
//! library call and writes that call's serialization. [`run`] executes a
//! command line in-process and returns the exit status.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use framing_core::evolution::{compare_with_phi, moran_simulate_recorded, MoranConfig, MoranEstimate};
use framing_core::framing::shipped_assessor;
use framing_core::qre::{default_lambda_max, limit_equilibrium, BranchOptions, BranchTrace};
use framing_core::{
    abundance_order, frame_sensitivity, gen_coordination, gen_coordination_eps, gen_travelers, load_game, save_game,
    selection_favors, trace_branch, Assessment, Error, Game, PlayerSide,
};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Purity threshold used to label the end of a branch trace.
pub const LIMIT_PURITY: f64 = 0.99;

#[derive(Debug, Parser)]
#[command(name = "framing", version, about = "Logit QRE, Moran and framing experiments on bimatrix games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace the principal logit branch from the centroid.
    QreTrace(QreTraceArgs),
    /// Evaluate an assessment for one player.
    Assess(AssessArgs),
    /// Run the two-population Moran process.
    Moran(MoranArgs),
    /// Compare an assessor across duplicated-column representations.
    Frame(FrameArgs),
    /// Write a generated game file.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct QreTraceArgs {
    #[arg(long)]
    pub game: PathBuf,
    /// Defaults to 50 / payoff range.
    #[arg(long)]
    pub lambda_max: Option<f64>,
    /// Trace CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Row,
    Col,
}

impl From<SideArg> for PlayerSide {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Row => PlayerSide::Row,
            SideArg::Col => PlayerSide::Column,
        }
    }
}

#[derive(Debug, Args)]
pub struct AssessArgs {
    #[arg(long)]
    pub game: PathBuf,
    /// phi, qre-at-lambda, qre-terminal or nash-argmax.
    #[arg(long, default_value = "phi")]
    pub method: String,
    #[arg(long, value_enum, default_value = "row")]
    pub side: SideArg,
    /// Rationality for qre-at-lambda.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Trace end for qre-terminal.
    #[arg(long)]
    pub lambda_max: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MoranArgs {
    #[arg(long)]
    pub game: PathBuf,
    #[arg(long, default_value_t = 10_000_000)]
    pub steps: u64,
    #[arg(long, default_value_t = 100_000)]
    pub burn_in: u64,
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.05)]
    pub mutation: f64,
    /// Row and column population sizes.
    #[arg(long, default_value = "40,40", value_parser = parse_pop)]
    pub pop: (u64, u64),
    /// A fresh seed is drawn and reported when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    pub batches: usize,
    /// Summary JSON destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Trajectory CSV destination.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    /// Record the counts every this many steps.
    #[arg(long, default_value_t = 10_000)]
    pub thin: u64,
}

#[derive(Debug, Args)]
pub struct FrameArgs {
    #[arg(long)]
    pub game: PathBuf,
    #[arg(long, default_value = "phi")]
    pub method: String,
    #[arg(long, default_value_t = 1)]
    pub max_dups: usize,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub lambda_max: Option<f64>,
    /// Report JSON destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the plain-text table instead of JSON on stdout.
    #[arg(long)]
    pub table: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub kind: GenKind,
    /// Game file destination; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Coordination game with `n_outside` safe options for the column player.
    Coordination { x: f64, n_outside: usize },
    /// Two-outside-option coordination game with one entry perturbed by `eps`.
    CoordinationEps { x: f64, eps: f64 },
    /// Traveler's dilemma over claims `lo..=hi`.
    Travelers { lo: i64, hi: i64, reward: f64 },
}

fn parse_pop(s: &str) -> Result<(u64, u64), String> {
    let (r, c) = s.split_once(',').ok_or_else(|| format!("expected <n,n>, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(r)?, parse(c)?))
}

/// A failed command with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), message: e.to_string() }
    }
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence { .. } | Error::LinearProgram(_) => EXIT_NUMERICAL,
        Error::Representation { source, .. } => exit_code(source),
        _ => EXIT_INPUT,
    }
}

/// Hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub sha256: String,
}

/// Everything needed to repeat a run bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest<P: Serialize> {
    pub command: String,
    pub params: P,
    pub seeds: Vec<u64>,
    pub version: String,
    pub inputs: Vec<InputDigest>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoranParams {
    #[serde(flatten)]
    pub config: MoranConfig,
    pub thin: u64,
}

fn read_game(path: &Path) -> Result<(Game<f64>, Vec<u8>), Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let game = load_game(text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok((game, bytes))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

/// Writes `contents` to `path`, or to `stdout` when there is no path.
fn emit(path: Option<&Path>, contents: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => write_file(p, contents),
        None => stdout.write_all(contents.as_bytes()).map_err(|e| Failure::input(format!("stdout: {e}"))),
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Library call behind `qre-trace`.
pub fn qre_trace(g: &Game<f64>, lambda_max: Option<f64>) -> framing_core::Result<BranchTrace<f64>> {
    let lambda_max = lambda_max.unwrap_or_else(|| default_lambda_max(g));
    trace_branch(g, lambda_max, &BranchOptions::default())
}

/// One-line description of where a trace ended.
pub fn trace_summary(g: &Game<f64>, trace: &BranchTrace<f64>) -> String {
    let limit = limit_equilibrium(trace, LIMIT_PURITY);
    let p = &trace.terminal().profile;
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(", ");
    format!(
        "terminal lambda={} row=[{}] col=[{}]\nlimit {}\n",
        trace.terminal_lambda(),
        fmt(&p.row),
        fmt(&p.col),
        limit.describe(g)
    )
}

/// Library call behind `assess`, serialized.
pub fn assessment_json(
    g: &Game<f64>,
    method: &str,
    side: PlayerSide,
    lambda: Option<f64>,
    lambda_max: Option<f64>,
) -> framing_core::Result<serde_json::Value> {
    let param = if method == "qre-terminal" { lambda_max } else { lambda };
    let assessor = shipped_assessor(method, param)?;
    let a = assessor.assess(g, side)?;
    Ok(render_assessment(g, method, &a))
}

fn render_assessment(g: &Game<f64>, method: &str, a: &Assessment<f64>) -> serde_json::Value {
    let side = a.side;
    let label = |k: usize| g.label(side, k);
    let favored: Vec<bool> = if method == "phi" {
        selection_favors(a)
    } else {
        let mean = a.values.iter().sum::<f64>() / a.len() as f64;
        a.values.iter().map(|&v| v > mean).collect()
    };
    let ranking = abundance_order(a);
    serde_json::json!({
        "method": method,
        "side": side,
        "labels": (0..a.len()).map(label).collect::<Vec<_>>(),
        "values": a.values,
        "favored": favored.iter().enumerate().filter(|(_, &f)| f).map(|(k, _)| label(k)).collect::<Vec<_>>(),
        "ordering": ranking.tiers.iter().map(|t| t.iter().map(|&k| label(k)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// Library calls behind `moran`: the summary JSON and the trajectory CSV.
pub fn moran_outputs(
    g: &Game<f64>,
    game_bytes: &[u8],
    cfg: &MoranConfig,
    thin: u64,
) -> framing_core::Result<(serde_json::Value, String)> {
    let (estimate, trajectory) = moran_simulate_recorded(g, cfg, thin)?;
    let report = compare_with_phi(g, cfg, estimate.clone());
    let manifest = RunManifest {
        command: "moran".to_string(),
        params: MoranParams { config: cfg.clone(), thin },
        seeds: vec![cfg.seed],
        version: env!("CARGO_PKG_VERSION").to_string(),
        inputs: vec![InputDigest { role: "game".to_string(), sha256: sha256_hex(game_bytes) }],
    };
    let json = serde_json::json!({
        "manifest": manifest,
        "summary": estimate.summary_json(),
        "phi_comparison": {
            "entries": report.entries,
            "row_ordering_agrees": report.row_ordering_agrees,
            "col_ordering_agrees": report.col_ordering_agrees,
            "weak_selection_warning": report.weak_selection_warning,
            "unequal_population_warning": report.unequal_population_warning,
        },
    });
    Ok((json, trajectory.to_csv()))
}

/// Abundances from a `moran` summary JSON.
pub fn estimate_from_summary(v: &serde_json::Value) -> Option<MoranEstimate> {
    let floats = |p: &str, k: &str| -> Option<Vec<f64>> {
        v["summary"][p][k].as_array()?.iter().map(serde_json::Value::as_f64).collect()
    };
    Some(MoranEstimate {
        row_abundance: floats("row", "abundance")?,
        col_abundance: floats("col", "abundance")?,
        row_std_error: floats("row", "std_error")?,
        col_std_error: floats("col", "std_error")?,
        samples: v["summary"]["samples"].as_u64()?,
    })
}

/// Library call behind `gen`.
pub fn generate(kind: &GenKind) -> framing_core::Result<Game<f64>> {
    match *kind {
        GenKind::Coordination { x, n_outside } => {
            if !x.is_finite() {
                return Err(Error::InvalidArgument("x must be finite".into()));
            }
            Ok(gen_coordination(x, n_outside))
        }
        GenKind::CoordinationEps { x, eps } => {
            if !x.is_finite() || !eps.is_finite() {
                return Err(Error::InvalidArgument("x and eps must be finite".into()));
            }
            Ok(gen_coordination_eps(x, eps))
        }
        GenKind::Travelers { lo, hi, reward } => gen_travelers(lo, hi, reward),
    }
}

fn cmd_qre_trace(args: &QreTraceArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let (g, _) = read_game(&args.game)?;
    let trace = qre_trace(&g, args.lambda_max)?;
    let summary = trace_summary(&g, &trace);
    match &args.out {
        Some(path) => {
            write_file(path, &trace.to_csv())?;
            let _ = stdout.write_all(summary.as_bytes());
        }
        None => {
            let _ = stdout.write_all(trace.to_csv().as_bytes());
            let _ = stderr.write_all(summary.as_bytes());
        }
    }
    if !trace.is_complete() {
        let _ = writeln!(stderr, "warning: corrector failed before lambda_max; trace truncated");
    }
    Ok(())
}

fn cmd_assess(args: &AssessArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let (g, _) = read_game(&args.game)?;
    let json = assessment_json(&g, &args.method, args.side.into(), args.lambda, args.lambda_max)?;
    emit(args.out.as_deref(), &json_text(&json), stdout)
}

fn cmd_moran(args: &MoranArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let (g, bytes) = read_game(&args.game)?;
    let seed = match args.seed {
        Some(s) => s,
        None => {
            let s = rand::random::<u64>();
            let _ = writeln!(stderr, "seed: {s}");
            s
        }
    };
    let cfg = MoranConfig {
        n_row: args.pop.0,
        n_col: args.pop.1,
        delta: args.delta,
        mutation: args.mutation,
        steps: args.steps,
        burn_in: args.burn_in,
        seed,
        batches: args.batches,
    };
    let (json, csv) = moran_outputs(&g, &bytes, &cfg, args.thin)?;
    if let Some(path) = &args.trajectory {
        write_file(path, &csv)?;
    }
    emit(args.out.as_deref(), &json_text(&json), stdout)
}

fn cmd_frame(args: &FrameArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let (g, _) = read_game(&args.game)?;
    let param = if args.method == "qre-terminal" { args.lambda_max } else { args.lambda };
    let assessor = shipped_assessor(&args.method, param)?;
    let report = frame_sensitivity(assessor.as_ref(), &g, args.max_dups)?;
    if args.table {
        if let Some(path) = &args.out {
            write_file(path, &json_text(&report.to_json()))?;
        }
        emit(None, &report.render_table(), stdout)
    } else {
        emit(args.out.as_deref(), &json_text(&report.to_json()), stdout)
    }
}

fn cmd_gen(args: &GenArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let g = generate(&args.kind)?;
    emit(args.out.as_deref(), &save_game(&g), stdout)
}

/// Runs one parsed command.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    match &cli.command {
        Command::QreTrace(a) => cmd_qre_trace(a, stdout, stderr),
        Command::Assess(a) => cmd_assess(a, stdout),
        Command::Moran(a) => cmd_moran(a, stdout, stderr),
        Command::Frame(a) => cmd_frame(a, stdout),
        Command::Gen(a) => cmd_gen(a, stdout),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the exit status.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
