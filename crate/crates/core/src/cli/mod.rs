//! Command-line front end: `solve`, `sweep`, `verify` and `check-pt`.
//!
//! [`run`] takes the argument list and two writers and returns the process
//! exit code, so the whole surface can be driven in-process from tests.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 singular model point,
//! 3 verification failure.

pub mod range;
pub mod window_file;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{run_sweep, run_sweep_with_threads, ModelTemplate, SweepSpec};
use crate::lattice::{energy_from_phi, LatticeConvention, PhiAngle};
use crate::model::ModelFamily;
use crate::solver::{solve, SolverKind};
use crate::verify::{run_suite, Suite};
use crate::window::{is_pt_symmetric, pt_violation, InteractionWindow};
use window_file::{load_window, WindowFileError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SINGULAR: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

/// Environment variable capping sweep worker threads.
pub const THREADS_ENV: &str = "SCATTER_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] crate::Error),
    #[error(transparent)]
    WindowFile(#[from] WindowFileError),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    VerifyFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if e.is_singular() => EXIT_SINGULAR,
            CliError::VerifyFailed(_) => EXIT_VERIFY_FAILED,
            _ => EXIT_USAGE,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(
    name = "scatter",
    version,
    about = "Plane-wave scattering on a discrete lattice"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a single (model, phi) point.
    Solve(SolveArgs),
    /// Sweep couplings, angles and distances, writing CSV or JSON.
    Sweep(SweepArgs),
    /// Run the built-in consistency suites.
    Verify(VerifyArgs),
    /// Check whether an interaction commutes with PT.
    CheckPt(ModelArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    PtPair,
    Ultralocal,
    Custom,
}

#[derive(Debug, Clone, Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    /// Distance parameter of the PT pair.
    #[arg(long = "M")]
    m: Option<u32>,
    /// Coupling of the PT pair (also accepted for the ultralocal block).
    #[arg(long, allow_negative_numbers = true)]
    x: Option<f64>,
    /// Coupling of the ultralocal block.
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// JSON window file for `--model custom`.
    #[arg(long)]
    window: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PointSolver {
    Matching,
    Transfer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepSolver {
    Matching,
    Transfer,
    ClosedForm,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Convention {
    Unshifted,
    Shifted,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Energy angle in radians, strictly inside (0, pi).
    #[arg(long)]
    phi: f64,
    #[arg(long, value_enum, default_value = "matching")]
    solver: PointSolver,
    #[arg(long, value_enum, default_value = "text")]
    format: TextFormat,
    /// Lattice stepsize used for the reported energies.
    #[arg(long, default_value_t = 1.0)]
    h: f64,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Coupling grid lo:hi:step (x for the PT pair, a for the ultralocal block,
    /// a scale factor for custom windows).
    #[arg(
        long = "x-range",
        visible_alias = "a-range",
        allow_hyphen_values = true
    )]
    x_range: Option<String>,
    #[arg(long = "phi-range", allow_hyphen_values = true)]
    phi_range: String,
    /// Comma-separated distances for the PT pair.
    #[arg(long = "M-list")]
    m_list: Option<String>,
    #[arg(long, value_enum, default_value = "matching")]
    solver: SweepSolver,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
    #[arg(long, value_enum, default_value = "unshifted")]
    convention: Convention,
    #[arg(long, default_value_t = 1.0)]
    h: f64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long = "M-max", default_value_t = 8)]
    m_max: u32,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

/// Machine-readable result of `solve --format json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveOutput {
    pub model: String,
    #[serde(rename = "M")]
    pub m: Option<u32>,
    pub coupling: Option<f64>,
    pub phi: f64,
    pub solver: SolverKind,
    #[serde(rename = "E_unshifted")]
    pub energy_unshifted: f64,
    #[serde(rename = "E_shifted")]
    pub energy_shifted: f64,
    #[serde(rename = "reR")]
    pub re_r: f64,
    #[serde(rename = "imR")]
    pub im_r: f64,
    #[serde(rename = "reT")]
    pub re_t: f64,
    #[serde(rename = "imT")]
    pub im_t: f64,
    #[serde(rename = "abs_R2")]
    pub abs_r2: f64,
    #[serde(rename = "abs_T2")]
    pub abs_t2: f64,
    pub prob_sum: f64,
    pub defect: f64,
    pub residual: f64,
    pub condition: f64,
}

impl ModelArgs {
    fn coupling(&self) -> Option<f64> {
        self.x.or(self.a)
    }

    fn kind(&self) -> Result<ModelKind, CliError> {
        match (self.model, &self.window) {
            (Some(k), _) => Ok(k),
            (None, Some(_)) => Ok(ModelKind::Custom),
            (None, None) => Err(usage("--model is required (pt-pair, ultralocal or custom)")),
        }
    }

    fn custom_window(&self) -> Result<InteractionWindow, CliError> {
        let path = self
            .window
            .as_ref()
            .ok_or_else(|| usage("--model custom needs --window <path>"))?;
        Ok(load_window(path)?)
    }

    /// The single model named by the flags.
    fn family(&self) -> Result<ModelFamily, CliError> {
        match self.kind()? {
            ModelKind::PtPair => {
                let m = self.m.ok_or_else(|| usage("--model pt-pair needs --M"))?;
                let x = self
                    .coupling()
                    .ok_or_else(|| usage("--model pt-pair needs --x"))?;
                Ok(ModelFamily::pt_delta_pair(m, x)?)
            }
            ModelKind::Ultralocal => {
                let a = self
                    .coupling()
                    .ok_or_else(|| usage("--model ultralocal needs --a"))?;
                Ok(ModelFamily::ultralocal(a)?)
            }
            ModelKind::Custom => Ok(ModelFamily::Custom(self.custom_window()?)),
        }
    }
}

fn complex(z: num_complex::Complex64) -> String {
    format!("{:e}{:+e}i", z.re, z.im)
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let model = args.model.family()?;
    let phi = PhiAngle::new(args.phi)?;
    let kind = match args.solver {
        PointSolver::Matching => SolverKind::Matching,
        PointSolver::Transfer => SolverKind::Transfer,
    };
    let e_unshifted = energy_from_phi(phi, LatticeConvention::unshifted(args.h)?);
    let e_shifted = energy_from_phi(phi, LatticeConvention::shifted(args.h)?);
    let rep = solve(&model.window(), phi, kind)?;
    let a = rep.amplitudes;
    let (m, coupling) = match &model {
        ModelFamily::PtDeltaPair { m, x } => (Some(*m), Some(*x)),
        ModelFamily::Ultralocal { a } => (None, Some(*a)),
        ModelFamily::Custom(_) => (None, None),
    };
    let record = SolveOutput {
        model: model.tag().to_string(),
        m,
        coupling,
        phi: phi.value(),
        solver: kind,
        energy_unshifted: e_unshifted,
        energy_shifted: e_shifted,
        re_r: a.r().re,
        im_r: a.r().im,
        re_t: a.t().re,
        im_t: a.t().im,
        abs_r2: a.reflectance(),
        abs_t2: a.transmittance(),
        prob_sum: a.prob_sum(),
        defect: a.defect(),
        residual: rep.residual_max,
        condition: rep.condition_estimate,
    };
    let io = |e: std::io::Error| CliError::Output {
        path: "<stdout>".into(),
        source: e,
    };
    match args.format {
        TextFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &record).map_err(|e| io(e.into()))?;
            writeln!(out).map_err(io)?;
        }
        TextFormat::Text => {
            let f = crate::analysis::format_float;
            let lines = [
                format!("model      {model}"),
                format!("solver     {kind}"),
                format!("phi        {}", f(record.phi)),
                format!(
                    "E          {} (unshifted)  {} (shifted), h = {}",
                    f(e_unshifted),
                    f(e_shifted),
                    args.h
                ),
                format!("R          {}", complex(a.r())),
                format!("T          {}", complex(a.t())),
                format!("|R|^2      {}", f(record.abs_r2)),
                format!("|T|^2      {}", f(record.abs_t2)),
                format!("prob_sum   {}", f(record.prob_sum)),
                format!("defect     {}", f(record.defect)),
                format!("residual   {:.3e}", record.residual),
                format!("condition  {:.3e}", record.condition),
            ];
            for l in lines {
                writeln!(out, "{l}").map_err(io)?;
            }
        }
    }
    Ok(())
}

fn sweep_threads() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(usage(format!(
                "{THREADS_ENV} must be a positive integer, got '{v}'"
            ))),
        },
    }
}

fn build_sweep_spec(args: &SweepArgs) -> Result<SweepSpec, CliError> {
    let kind = args.model.kind()?;
    let template = match kind {
        ModelKind::PtPair => ModelTemplate::PtDeltaPair,
        ModelKind::Ultralocal => ModelTemplate::Ultralocal,
        ModelKind::Custom => ModelTemplate::Custom(args.model.custom_window()?),
    };
    let couplings = match (&args.x_range, args.model.coupling()) {
        (Some(r), _) => range::parse_range(r).map_err(usage)?,
        (None, Some(c)) => vec![c],
        (None, None) if kind == ModelKind::Custom => vec![1.0],
        (None, None) => return Err(usage("sweep needs --x-range (or --x / --a)")),
    };
    let phis = range::parse_range(&args.phi_range)
        .map_err(usage)?
        .into_iter()
        .map(PhiAngle::new)
        .collect::<crate::Result<Vec<_>>>()?;
    let m_list = match (kind, &args.m_list, args.model.m) {
        (ModelKind::PtPair, Some(s), _) => range::parse_m_list(s).map_err(usage)?,
        (ModelKind::PtPair, None, Some(m)) => vec![m],
        (ModelKind::PtPair, None, None) => return Err(usage("--model pt-pair needs --M-list")),
        _ => Vec::new(),
    };
    let solvers = match args.solver {
        SweepSolver::Matching => vec![SolverKind::Matching],
        SweepSolver::Transfer => vec![SolverKind::Transfer],
        SweepSolver::ClosedForm => vec![SolverKind::ClosedForm],
        SweepSolver::All => vec![
            SolverKind::ClosedForm,
            SolverKind::Matching,
            SolverKind::Transfer,
        ],
    };
    if couplings.is_empty() || phis.is_empty() {
        return Err(usage("sweep grid is empty"));
    }
    let convention = match args.convention {
        Convention::Unshifted => LatticeConvention::unshifted(args.h)?,
        Convention::Shifted => LatticeConvention::shifted(args.h)?,
    };
    Ok(SweepSpec {
        model: template,
        couplings,
        phis,
        m_list,
        solvers,
        convention,
    })
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let spec = build_sweep_spec(args)?;
    let table = match sweep_threads()? {
        Some(n) => run_sweep_with_threads(&spec, n)?,
        None => run_sweep(&spec)?,
    };

    let mut buf = Vec::new();
    match args.format {
        TableFormat::Csv => table
            .write_csv(&mut buf)
            .map_err(|e| usage(format!("csv: {e}")))?,
        TableFormat::Json => {
            table
                .write_json(&mut buf)
                .map_err(|e| usage(format!("json: {e}")))?;
            buf.push(b'\n');
        }
    }
    match &args.out {
        Some(path) => {
            std::fs::write(path, &buf).map_err(|source| CliError::Output {
                path: path.display().to_string(),
                source,
            })?;
            let _ = writeln!(
                out,
                "wrote {} rows to {} ({} errored points, max |defect| {:.3e})",
                table.rows.len(),
                path.display(),
                table.errors.len(),
                table.max_abs_defect()
            );
        }
        None => out.write_all(&buf).map_err(|source| CliError::Output {
            path: "<stdout>".into(),
            source,
        })?,
    }
    for e in &table.errors {
        let _ = writeln!(
            err,
            "skipped {} M={} coupling={} phi={} solver={}: {}",
            e.model, e.m, e.coupling, e.phi, e.solver, e.reason
        );
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let suite: Suite = args.suite.parse().map_err(usage)?;
    if args.m_max == 0 {
        return Err(usage("--M-max must be at least 1"));
    }
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(usage("--tol must be positive"));
    }
    let lines = run_suite(suite, args.m_max, args.tol);
    let failed = lines.iter().filter(|l| !l.passed).count();
    for l in &lines {
        let _ = writeln!(out, "{l}");
    }
    if failed > 0 {
        return Err(CliError::VerifyFailed(format!(
            "{failed} of {} checks failed at tol {:e}",
            lines.len(),
            args.tol
        )));
    }
    let _ = writeln!(out, "all {} checks passed", lines.len());
    Ok(())
}

fn cmd_check_pt(args: &ModelArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let win = args.family()?.window();
    let io = |source| CliError::Output {
        path: "<stdout>".into(),
        source,
    };
    writeln!(out, "pt_symmetric: {}", is_pt_symmetric(&win)).map_err(io)?;
    if let Some(v) = pt_violation(&win) {
        writeln!(
            out,
            "violation at ({}, {}): W[{}][{}] = {}, conj(W[{}][{}]) = {}",
            v.i,
            v.j,
            v.i,
            v.j,
            complex(v.entry),
            -v.i,
            -v.j,
            complex(v.mirror)
        )
        .map_err(io)?;
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let res = match &cli.command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Sweep(a) => cmd_sweep(a, out, err),
        Command::Verify(a) => cmd_verify(a, out),
        Command::CheckPt(a) => cmd_check_pt(a, out),
    };
    match res {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
