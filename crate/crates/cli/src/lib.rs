//! `spaneg`: command-line front end for two-qubit SPA-PT entanglement analysis.
//!
//! Exit codes are a stable contract:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | usage error (unknown flag, missing `--param`, malformed number) |
//! | 2 | input validation failure (invalid state, out-of-range parameter or count) |
//! | 3 | internal invariant failure |

pub mod csv;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use spa_negativity::ensemble::{evaluate, Ensemble, EnsembleSummary};
use spa_negativity::measures::{negativity_exact, nn_from_nd, verstraete_rhs};
use spa_negativity::shotsim::estimate_negativity_with;
use spa_negativity::spa::spa_pt_affine;
use spa_negativity::states::{family_horodecki, family_pure_m, family_quasi};
use spa_negativity::{
    full_report, DensityMatrix, EntanglementReport, Error, Execution, ShotBudget, ShotEstimate, StateSpec,
};

use crate::csv::{float, opt_float, Table};
use crate::verify::{spa_verify, VerifyConfig, INVARIANT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "spaneg",
    version,
    about = "Two-qubit negativity and concurrence via the SPA of partial transpose"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entanglement report for one state.
    Analyze(AnalyzeArgs),
    /// Exact and estimated negativity over a parameter grid of a state family.
    Sweep(SweepArgs),
    /// Invariant checks over a seeded random-state ensemble.
    RandomStudy(RandomStudyArgs),
    /// Finite-shot estimation of the normalized negativity.
    Simulate(SimulateArgs),
    /// Audit of the SPA-PT constructions.
    SpaVerify(VerifyArgs),
    /// SPA-PT utilities; `spa --verify` runs the audit.
    Spa(SpaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    #[value(name = "pure_m")]
    PureM,
    Horodecki,
    Quasi,
    Bell,
    #[value(name = "maximally_mixed")]
    MaximallyMixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepFamily {
    #[value(name = "pure_m")]
    PureM,
    Horodecki,
    Quasi,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct Source {
    /// Named state family.
    #[arg(long, group = "source")]
    pub family: Option<Family>,
    /// JSON state file `{"re": [[..4x4..]], "im": [[..4x4..]]}`.
    #[arg(long, group = "source")]
    pub state: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub source: Source,
    /// Family parameter: M, p or C in [0, 1]; the Bell index 0..=3 for `bell`.
    #[arg(long, allow_negative_numbers = true)]
    pub param: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: SweepFamily,
    /// Number of grid points, including both endpoints (at least 2).
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RandomStudyArgs {
    #[arg(long, default_value_t = 10_000)]
    pub count: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rank of the Ginibre ensemble (1 gives Haar-random pure states).
    #[arg(long, default_value_t = 4)]
    pub rank: usize,
    /// Evaluate states on the calling thread only.
    #[arg(long)]
    pub sequential: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, default_value_t = 100_000)]
    pub shots: u64,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub sequential: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Random states used for the compositional and trace-relation checks.
    #[arg(long, default_value_t = 1000)]
    pub count: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Grid points for the family tables.
    #[arg(long, default_value_t = 11)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpaArgs {
    #[arg(long)]
    pub verify: bool,
    #[command(flatten)]
    pub args: VerifyArgs,
}

/// A failed command: exit code plus message for standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn validation(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoConvergence { .. } | Error::ConstructionInconsistency { .. } => EXIT_INVARIANT,
            _ => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

/// Rendered command output plus whether every internal invariant held.
struct Outcome {
    body: String,
    invariants_hold: bool,
    invariant_note: Option<String>,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome {
            body,
            invariants_hold: true,
            invariant_note: None,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let (result, out) = dispatch(cli.command);
    let outcome = match result {
        Ok(o) => o,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            return f.code;
        }
    };
    let written = match out {
        Some(path) => std::fs::write(&path, &outcome.body).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(outcome.body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(message) = written {
        let _ = writeln!(stderr, "error: cannot write output: {message}");
        return EXIT_VALIDATION;
    }
    if outcome.invariants_hold {
        EXIT_OK
    } else {
        let note = outcome
            .invariant_note
            .unwrap_or_else(|| "invariant check failed".into());
        let _ = writeln!(stderr, "error: {note}");
        EXIT_INVARIANT
    }
}

fn dispatch(command: Command) -> (CmdResult, Option<PathBuf>) {
    match command {
        Command::Analyze(a) => (cmd_analyze(&a), a.output.out),
        Command::Sweep(a) => (cmd_sweep(&a), a.output.out),
        Command::RandomStudy(a) => (cmd_random_study(&a), a.output.out),
        Command::Simulate(a) => (cmd_simulate(&a), a.output.out),
        Command::SpaVerify(a) => (cmd_spa_verify(&a), a.out),
        Command::Spa(a) if a.verify => (cmd_spa_verify(&a.args), a.args.out),
        Command::Spa(_) => (Err(Failure::usage("`spa` requires --verify")), None),
    }
}

fn state_spec(args: &StateArgs) -> Result<StateSpec, Failure> {
    if let Some(path) = &args.source.state {
        if args.param.is_some() {
            return Err(Failure::usage("--param applies to --family, not --state"));
        }
        return Ok(StateSpec::Raw { path: path.clone() });
    }
    let family = args.source.family.expect("clap enforces one source");
    let need = |name: &str| {
        args.param
            .ok_or_else(|| Failure::usage(format!("family `{name}` requires --param")))
    };
    Ok(match family {
        Family::PureM => StateSpec::PureM(need("pure_m")?),
        Family::Horodecki => StateSpec::Horodecki(need("horodecki")?),
        Family::Quasi => StateSpec::Quasi(need("quasi")?),
        Family::Bell => {
            let index = args.param.unwrap_or(0.0);
            if index.fract() != 0.0 || !(0.0..=3.0).contains(&index) {
                return Err(Failure::validation(format!(
                    "bell index {index} is not one of 0, 1, 2, 3"
                )));
            }
            StateSpec::Bell(index as u8)
        }
        Family::MaximallyMixed => {
            if args.param.is_some() {
                return Err(Failure::usage("family `maximally_mixed` takes no --param"));
            }
            StateSpec::MaximallyMixed
        }
    })
}

fn resolve(args: &StateArgs) -> Result<DensityMatrix, Failure> {
    Ok(state_spec(args)?.resolve()?)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn bool_cell(b: bool) -> String {
    b.to_string()
}

fn cmd_analyze(args: &AnalyzeArgs) -> CmdResult {
    let report = full_report(&resolve(&args.state)?);
    Ok(Outcome::ok(match args.output.format.unwrap_or(Format::Json) {
        Format::Json => json(&report),
        Format::Csv => report_csv(&report),
    }))
}

fn report_csv(r: &EntanglementReport) -> String {
    let mut t = Table::new(&[
        "nd",
        "nn",
        "bias",
        "lower_bound",
        "mu_min",
        "concurrence",
        "ppt",
        "concurrence_pure",
        "concurrence_quasi",
        "ls_bound",
    ]);
    t.row([
        float(r.nd),
        float(r.nn),
        float(r.bias),
        float(r.lower_bound),
        float(r.mu_min),
        float(r.concurrence),
        bool_cell(r.ppt),
        opt_float(r.concurrence_pure),
        opt_float(r.concurrence_quasi),
        opt_float(r.ls_bound),
    ]);
    t.finish()
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub nd_definition: f64,
    pub nd_closed_form: f64,
    pub mu_min: f64,
    pub nn_pipeline: f64,
    pub nn_closed_form: f64,
    pub abs_gap: f64,
}

pub const SWEEP_HEADER: [&str; 7] = [
    "param",
    "nd_definition",
    "nd_closed_form",
    "mu_min",
    "nn_pipeline",
    "nn_closed_form",
    "abs_gap",
];

pub fn sweep_row(family: SweepFamily, x: f64) -> spa_negativity::Result<SweepRow> {
    let (rho, nd_cf, nn_cf) = match family {
        SweepFamily::PureM => {
            let n = 2.0 * (x * (1.0 - x)).sqrt();
            (family_pure_m(x)?, n, 54.0 * n / 9153.0 * (169.0 + n / 2.0))
        }
        SweepFamily::Horodecki => {
            let n = ((1.0 - x).powi(2) + x * x).sqrt() - (1.0 - x);
            (family_horodecki(x)?, n, nn_from_nd(n))
        }
        SweepFamily::Quasi => {
            let n = verstraete_rhs(x)?;
            (family_quasi(x)?, n, nn_from_nd(n))
        }
    };
    let nd = negativity_exact(&rho);
    let nn = full_report(&rho).nn;
    Ok(SweepRow {
        param: x,
        nd_definition: nd,
        nd_closed_form: nd_cf,
        mu_min: spa_pt_affine(&rho).mu_min,
        nn_pipeline: nn,
        nn_closed_form: nn_cf,
        abs_gap: (nn - nd).abs(),
    })
}

fn cmd_sweep(args: &SweepArgs) -> CmdResult {
    if args.points < 2 {
        return Err(Failure::validation(format!(
            "--points must be at least 2, got {}",
            args.points
        )));
    }
    let last = (args.points - 1) as f64;
    let rows = (0..args.points)
        .map(|k| sweep_row(args.family, k as f64 / last))
        .collect::<spa_negativity::Result<Vec<_>>>()?;
    Ok(Outcome::ok(match args.output.format.unwrap_or(Format::Csv) {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut t = Table::new(&SWEEP_HEADER);
            for r in &rows {
                t.row(
                    [
                        r.param,
                        r.nd_definition,
                        r.nd_closed_form,
                        r.mu_min,
                        r.nn_pipeline,
                        r.nn_closed_form,
                        r.abs_gap,
                    ]
                    .map(float),
                );
            }
            t.finish()
        }
    }))
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn cmd_random_study(args: &RandomStudyArgs) -> CmdResult {
    if args.count < 1 {
        return Err(Failure::validation("--count must be at least 1"));
    }
    if !(1..=4).contains(&args.rank) {
        return Err(Failure::validation(format!(
            "--rank must be in 1..=4, got {}",
            args.rank
        )));
    }
    let rows = evaluate(
        Ensemble::Mixed(args.rank),
        args.count,
        args.seed,
        execution(args.sequential),
    )?;
    let summary = EnsembleSummary::from_rows(&rows);
    let body = match args.output.format.unwrap_or(Format::Csv) {
        Format::Json => {
            #[derive(Serialize)]
            struct Study<'a> {
                seed: u64,
                rows: &'a [spa_negativity::ensemble::EnsembleRow],
                summary: &'a EnsembleSummary,
            }
            json(&Study {
                seed: args.seed,
                rows: &rows,
                summary: &summary,
            })
        }
        Format::Csv => {
            let mut t = Table::new(&[
                "seed_index",
                "rank",
                "nd",
                "nn",
                "mu_min",
                "concurrence",
                "ppt",
                "neg_pt_eigs",
            ]);
            for r in &rows {
                t.row([
                    r.seed_index.to_string(),
                    r.rank.to_string(),
                    float(r.nd),
                    float(r.nn),
                    float(r.mu_min),
                    float(r.concurrence),
                    bool_cell(r.ppt),
                    r.neg_pt_eigs.to_string(),
                ]);
            }
            t.comment(&format!(
                "summary,rows={},max_tightness_violation={},max_universal_violation={},\
                 max_verstraete_violation={},rows_with_multiple_negative_pt_eigs={},invalid_spa_outputs={},entangled={}",
                summary.rows,
                float(summary.max_tightness_violation),
                float(summary.max_universal_violation),
                float(summary.max_verstraete_violation),
                summary.rows_with_multiple_negative_pt_eigs,
                summary.invalid_spa_outputs,
                summary.entangled
            ));
            t.finish()
        }
    };
    let hold = summary.max_tightness_violation <= INVARIANT_TOL
        && summary.max_universal_violation <= INVARIANT_TOL
        && summary.max_verstraete_violation <= INVARIANT_TOL
        && summary.rows_with_multiple_negative_pt_eigs == 0
        && summary.invalid_spa_outputs == 0;
    Ok(Outcome {
        body,
        invariants_hold: hold,
        invariant_note: (!hold).then(|| format!("ensemble invariants violated: {summary:?}")),
    })
}

#[derive(Debug, Serialize)]
pub struct SimulateOutput {
    #[serde(flatten)]
    pub estimate: ShotEstimate,
    pub exact_nn: f64,
}

fn cmd_simulate(args: &SimulateArgs) -> CmdResult {
    let rho = resolve(&args.state)?;
    let estimate = estimate_negativity_with(
        &rho,
        ShotBudget::Finite(args.shots),
        args.trials,
        args.seed,
        execution(args.sequential),
    )?;
    let out = SimulateOutput {
        estimate,
        exact_nn: full_report(&rho).nn,
    };
    Ok(Outcome::ok(match args.output.format.unwrap_or(Format::Json) {
        Format::Json => json(&out),
        Format::Csv => {
            let e = &out.estimate;
            let mut t = Table::new(&[
                "favg_true",
                "favg_hat",
                "mu_hat",
                "nn_hat",
                "shots",
                "trials",
                "seed",
                "mean_favg",
                "std_favg",
                "mean_nn",
                "std_nn",
                "ci95_lo",
                "ci95_hi",
                "clamp_events",
                "exact_nn",
            ]);
            t.row([
                float(e.favg_true),
                float(e.favg_hat),
                float(e.mu_hat),
                float(e.nn_hat),
                e.shots.map(|s| s.to_string()).unwrap_or_default(),
                e.trials.to_string(),
                e.seed.to_string(),
                float(e.mean_favg),
                float(e.std_favg),
                float(e.mean_nn),
                float(e.std_nn),
                float(e.ci95.0),
                float(e.ci95.1),
                e.clamp_events.to_string(),
                float(out.exact_nn),
            ]);
            t.finish()
        }
    }))
}

fn cmd_spa_verify(args: &VerifyArgs) -> CmdResult {
    if args.points < 2 {
        return Err(Failure::validation(format!(
            "--points must be at least 2, got {}",
            args.points
        )));
    }
    let report = spa_verify(VerifyConfig {
        count: args.count,
        seed: args.seed,
        points: args.points,
    })?;
    Ok(Outcome {
        body: report.text,
        invariants_hold: report.affine_ok,
        invariant_note: (!report.affine_ok).then(|| "affine SPA-PT invariants failed".into()),
    })
}
