use std::path::PathBuf;

use abm::poly::{DEFAULT_FIXED_DX, DEFAULT_X0, DEFAULT_X_END, DEFAULT_Y0};
use abm::tov::{
    DEFAULT_BRACKET_TOLERANCE, REFERENCE_MASS_MSUN, REFERENCE_P_CENTRAL, REFERENCE_RADIUS_KM,
};
use abm::{Mode, DEFAULT_GROWTH_CAP, MAX_ORDER};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Initial step for adaptive polynomial runs when `--dx` is absent.
pub const DEFAULT_ADAPTIVE_DX: f64 = 1e-4;
pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "abm",
    version,
    about = "Adaptive Adams-Bashforth-Moulton studies"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the quartic test problem and compare with its exact solution.
    Poly(PolyArgs),
    /// Integrate one neutron star outward from its centre.
    Tov(TovArgs),
    /// Search a central-pressure bracket for the heaviest star.
    Sieve(SieveArgs),
    /// Integrate one star for every (order, tolerance) pair.
    Sweep(SweepArgs),
    /// Re-run a command from the manifest it wrote.
    Replay(ReplayArgs),
    /// Print the JSON schema that JSON outputs and manifests follow.
    Schema,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    AbFixed,
    AbmFixed,
    AbmAdaptive,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::AbFixed => Mode::AbFixed,
            ModeArg::AbmFixed => Mode::AbmFixed,
            ModeArg::AbmAdaptive => Mode::AbmAdaptive,
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Data file; a manifest is written next to it as `<PATH>.manifest.json`.
    /// Without it the data goes to stdout and no manifest is written.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// Controller settings shared by every command.
#[derive(Debug, Args)]
pub struct ControlArgs {
    /// Upper bound on the step-to-step growth ratio.
    #[arg(long, default_value_t = DEFAULT_GROWTH_CAP, value_parser = positive)]
    pub growth_cap: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: usize,
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    #[arg(long, value_enum, default_value = "abm-adaptive")]
    pub mode: ModeArg,
    /// Adams-Bashforth order; the corrector runs one order higher.
    #[arg(long, value_parser = order)]
    pub order: usize,
    /// Step for the fixed modes, initial step for the adaptive one
    /// [default: 0.25 fixed, 1e-4 adaptive].
    #[arg(long, value_parser = positive)]
    pub dx: Option<f64>,
    /// Smallest step the controller may choose.
    #[arg(long, default_value_t = 0.0, value_parser = non_negative)]
    pub dxmin: f64,
    /// Target fractional correction per step.
    #[arg(long, default_value_t = 1e-8, value_parser = positive)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_X0, value_parser = finite, allow_negative_numbers = true)]
    pub x0: f64,
    #[arg(long, default_value_t = DEFAULT_Y0, value_parser = finite, allow_negative_numbers = true)]
    pub y0: f64,
    #[arg(long, default_value_t = DEFAULT_X_END, value_parser = finite, allow_negative_numbers = true)]
    pub xend: f64,
    #[command(flatten)]
    pub control: ControlArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl PolyArgs {
    pub fn resolved_dx(&self) -> f64 {
        self.dx.unwrap_or(match self.mode {
            ModeArg::AbmAdaptive => DEFAULT_ADAPTIVE_DX,
            _ => DEFAULT_FIXED_DX,
        })
    }
}

/// Star integration settings, CGS.
#[derive(Debug, Args)]
pub struct StarArgs {
    #[arg(long, default_value_t = 6, value_parser = order)]
    pub order: usize,
    #[arg(long, default_value_t = 1e-8, value_parser = positive)]
    pub tol: f64,
    /// Initial radial step, cm.
    #[arg(long, default_value_t = 10.0, value_parser = positive)]
    pub dx0: f64,
    /// Minimum radial step, cm.
    #[arg(long, default_value_t = 10.0, value_parser = non_negative)]
    pub dxmin: f64,
    /// JSON file overriding the physical constants (m_n, c, h, g, m_sun).
    #[arg(long, value_name = "PATH")]
    pub constants: Option<PathBuf>,
    #[command(flatten)]
    pub control: ControlArgs,
}

#[derive(Debug, Args)]
pub struct TovArgs {
    /// Central pressure, erg cm^-3.
    #[arg(long, value_parser = positive)]
    pub pc: f64,
    #[command(flatten)]
    pub star: StarArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SieveArgs {
    /// Lower end of the central-pressure bracket, erg cm^-3.
    #[arg(long, default_value_t = 1e35, value_parser = positive)]
    pub lo: f64,
    /// Upper end of the central-pressure bracket, erg cm^-3.
    #[arg(long, default_value_t = 1e36, value_parser = positive)]
    pub hi: f64,
    /// Stop once the bracket is this narrow relative to its midpoint.
    #[arg(long, default_value_t = DEFAULT_BRACKET_TOLERANCE, value_parser = positive)]
    pub bracket_tol: f64,
    /// Concurrent star integrations; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[command(flatten)]
    pub star: StarArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderList(pub Vec<usize>);

#[derive(Debug, Clone, PartialEq)]
pub struct TolList(pub Vec<f64>);

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Orders as an inclusive range `A..B`, a comma list, or both (`3..5,9`).
    #[arg(long, value_parser = order_list)]
    pub orders: OrderList,
    /// Comma-separated target corrections.
    #[arg(long, value_parser = tol_list, default_value = "1e-2,1e-3,1e-4,1e-5,1e-6,1e-7,1e-8")]
    pub tols: TolList,
    /// Central pressure, erg cm^-3.
    #[arg(long, default_value_t = REFERENCE_P_CENTRAL, value_parser = positive)]
    pub pc: f64,
    /// Reference mass for the relative differences, M_sun.
    #[arg(long, default_value_t = REFERENCE_MASS_MSUN, value_parser = positive)]
    pub ref_mass: f64,
    /// Reference radius for the relative differences, km.
    #[arg(long, default_value_t = REFERENCE_RADIUS_KM, value_parser = positive)]
    pub ref_radius: f64,
    /// Initial radial step, cm.
    #[arg(long, default_value_t = 10.0, value_parser = positive)]
    pub dx0: f64,
    /// Minimum radial step, cm.
    #[arg(long, default_value_t = 10.0, value_parser = non_negative)]
    pub dxmin: f64,
    #[arg(long, value_name = "PATH")]
    pub constants: Option<PathBuf>,
    /// Concurrent star integrations; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[command(flatten)]
    pub control: ControlArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    pub manifest: PathBuf,
    /// Where to write the data [default: the path recorded in the manifest].
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

fn number(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| format!("`{s}` is not a number: {e}"))
}

fn finite(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` must be finite"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("`{s}` must be finite and positive"))
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("`{s}` must be finite and non-negative"))
    }
}

fn order(s: &str) -> Result<usize, String> {
    let v: usize = s
        .trim()
        .parse()
        .map_err(|e| format!("`{s}` is not an order: {e}"))?;
    if (1..=MAX_ORDER).contains(&v) {
        Ok(v)
    } else {
        Err(format!("order must lie in 1..={MAX_ORDER}, got {v}"))
    }
}

fn order_list(s: &str) -> Result<OrderList, String> {
    let mut out = Vec::new();
    for piece in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match piece.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (order(a)?, order(b.trim_start_matches('='))?);
                if a > b {
                    return Err(format!("empty order range `{piece}`"));
                }
                out.extend(a..=b);
            }
            None => out.push(order(piece)?),
        }
    }
    if out.is_empty() {
        return Err("no orders given".into());
    }
    Ok(OrderList(out))
}

fn tol_list(s: &str) -> Result<TolList, String> {
    let tols = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(positive)
        .collect::<Result<Vec<_>, _>>()?;
    if tols.is_empty() {
        return Err("no tolerances given".into());
    }
    Ok(TolList(tols))
}
