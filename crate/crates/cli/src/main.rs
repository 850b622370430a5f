//! `pt2`: parameter sweeps over two-level PT-symmetric Hamiltonians,
//! emitted as CSV or JSON tables.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod table;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Report;

/// Exit code 1: the inputs were rejected before any numerics ran.
const EXIT_VALIDATION: u8 = 1;
/// Exit code 2: the numerics failed (near an EP, no convergence, ...).
const EXIT_NUMERICAL: u8 = 2;

#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Numerical(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Validation(m) => write!(f, "invalid input: {m}"),
            Failure::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

impl From<pt2::Error> for Failure {
    fn from(e: pt2::Error) -> Self {
        use pt2::Error::*;
        let name = format!("{e:?}");
        let name = name
            .split([' ', '(', '{'])
            .next()
            .unwrap_or_default()
            .to_owned();
        match e {
            NonConvergence { .. }
            | NearEP { .. }
            | EPHasNoMetric
            | NonDiagonalizablePath
            | DegenerateMixing => Failure::Numerical(format!("{name}: {e}")),
            _ => Failure::Validation(format!("{name}: {e}")),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "pt2",
    version,
    about = "Sweeps over PT-symmetric two-level Hamiltonians"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Table format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Output file. Relative paths are placed under $PT2_OUTPUT_DIR when it
    /// is set; without this flag the table goes to $PT2_OUTPUT_DIR/<command>.<format>
    /// or, if that is unset, to stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// H = [[ρe^{iφ}, σe^{iϕ}], [σe^{−iϕ}, ρe^{−iφ}]]
#[derive(Args, Debug, Clone)]
pub struct PtArgs {
    #[arg(long)]
    pub rho: f64,
    #[arg(long)]
    pub sigma: f64,
    /// Diagonal phase φ (radians unless --degrees).
    #[arg(long, allow_hyphen_values = true)]
    pub varphi: f64,
    /// Off-diagonal phase ϕ (radians unless --degrees).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    /// Read --varphi and --phi in degrees.
    #[arg(long)]
    pub degrees: bool,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_max: f64,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 101)]
    pub n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StateArg {
    A,
    B,
    TildeA,
    TildeB,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    /// ω₁ = ω₂ = ω, widths γ and γ₂
    I,
    /// passive PT: widths γ + χ and −γ + χ
    Ii,
    /// balanced gain and loss: widths γ and −γ
    Iii,
    /// one lossy level: widths γ and 0
    Iv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Phase of the Hamiltonian (symmetric, broken or ep) with α or α′.
    Classify(PtArgs),
    /// Eigenvalues and normalized eigenvectors.
    Eigen(PtArgs),
    /// Flavor state evolved with the closed-form propagator (broken phase).
    Evolve {
        #[command(flatten)]
        pt: PtArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = StateArg::A)]
        state: StateArg,
    },
    /// PT-paired flavor transition probabilities (broken phase).
    Probs {
        #[command(flatten)]
        pt: PtArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Transition probabilities onto the CPT flavor states (broken phase).
    CptProbs {
        #[command(flatten)]
        pt: PtArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Neutral-meson transition probabilities from a JSON parameter file.
    Meson {
        /// Flat JSON object: m11, m22, m12_re, m12_im, g11, g22, g12_re, g12_im.
        #[arg(long)]
        params: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Ordinary probabilities of the passive system H − iχ·1.
    Decayed {
        #[command(flatten)]
        pt: PtArgs,
        #[arg(long)]
        chi: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Exceptional-point scan over the coupling κ for one parameter family.
    EpScan {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        omega: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        gamma: f64,
        /// Second width for case i.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        gamma2: f64,
        /// Global decay for case ii.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        chi: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        kappa_min: f64,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        kappa_max: f64,
        #[arg(long, default_value_t = 201)]
        n: usize,
        #[arg(long, default_value_t = pt2::exceptional::DEFAULT_EP_TOL)]
        tol: f64,
    },
    /// λ±/σ against sinφ for ρ = ξσ, with the EP locus.
    Fig1 {
        /// ξ = ρ/σ; repeat for several curves.
        #[arg(long, default_values_t = vec![2.0, 3.0, 4.0])]
        xi: Vec<f64>,
        #[arg(long, default_value_t = 401)]
        n: usize,
    },
    /// Closed-form probabilities against the series oracle on random points.
    OracleCheck {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        n_params: usize,
        #[arg(long, default_value_t = 20)]
        n_times: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::Eigen(_) => "eigen",
            Command::Evolve { .. } => "evolve",
            Command::Probs { .. } => "probs",
            Command::CptProbs { .. } => "cpt-probs",
            Command::Meson { .. } => "meson",
            Command::Decayed { .. } => "decayed",
            Command::EpScan { .. } => "ep-scan",
            Command::Fig1 { .. } => "fig1",
            Command::OracleCheck { .. } => "oracle-check",
        }
    }

    fn run(&self) -> Result<Report, Failure> {
        match self {
            Command::Classify(pt) => commands::classify(pt),
            Command::Eigen(pt) => commands::eigen(pt),
            Command::Evolve { pt, grid, state } => commands::evolve(pt, grid, *state),
            Command::Probs { pt, grid } => commands::probs(pt, grid),
            Command::CptProbs { pt, grid } => commands::cpt_probs(pt, grid),
            Command::Meson { params, grid } => commands::meson(params, grid),
            Command::Decayed { pt, chi, grid } => commands::decayed(pt, *chi, grid),
            Command::EpScan {
                case,
                omega,
                gamma,
                gamma2,
                chi,
                kappa_min,
                kappa_max,
                n,
                tol,
            } => commands::ep_scan(
                commands::case_from_args(*case, *omega, *gamma, *gamma2, *chi)?,
                *kappa_min,
                *kappa_max,
                *n,
                *tol,
            ),
            Command::Fig1 { xi, n } => commands::fig1(xi, *n),
            Command::OracleCheck {
                seed,
                n_params,
                n_times,
            } => commands::oracle_check(*seed, *n_params, *n_times),
        }
    }
}

fn output_path(out: &OutArgs, command: &str) -> Option<PathBuf> {
    let dir = std::env::var_os("PT2_OUTPUT_DIR").map(PathBuf::from);
    match (&out.output, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(d)) => Some(d.join(format!("{command}.{}", out.format.extension()))),
        (None, None) => None,
    }
}

fn emit(table: &table::Table, out: &OutArgs, command: &str) -> io::Result<()> {
    let sink: Box<dyn Write> = match output_path(out, command) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            Box::new(BufWriter::new(File::create(path)?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match out.format {
        Format::Csv => table.write_csv(sink).map_err(io::Error::other),
        Format::Json => table.write_json(sink),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let report = match cli.command.run() {
        Ok(r) => r,
        Err(f) => {
            eprintln!("pt2 {name}: {f}");
            return ExitCode::from(f.exit_code());
        }
    };
    if let Err(e) = emit(&report.table, &cli.out, name) {
        eprintln!("pt2 {name}: cannot write output: {e}");
        return ExitCode::from(EXIT_VALIDATION);
    }
    if let Some(note) = &report.note {
        eprintln!("pt2 {name}: {note}");
    }
    match report.failure {
        None => ExitCode::SUCCESS,
        Some(f) => {
            eprintln!("pt2 {name}: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
