//! Command-line front end: waves, Bloch spectra, stability indices,
//! collision tables and exact expansions.
//!
//! Exit codes: 0 success, 1 golden mismatch, 2 indeterminate verdict,
//! 3 solver failure (reason as JSON on stderr), 4 configuration error.

pub mod commands;
pub mod config;
pub mod format;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use commands::Failure;
use config::{ConfigError, MuGrid, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_GOLDEN_MISMATCH: i32 = 1;
pub const EXIT_INDETERMINATE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;

/// Environment variable capping the number of sweep threads.
pub const THREADS_ENV: &str = "MWSTAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "mwstab", version, about = "Modulational stability of small periodic waves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve for a periodic traveling wave.
    Wave(CommonArgs),
    /// Bloch spectrum over a grid of Floquet exponents.
    Spectrum(CommonArgs),
    /// Discriminant sweep and stability verdict.
    Index(IndexArgs),
    /// Collisions of the zero-amplitude spectrum.
    Collisions(CollisionArgs),
    /// Exact series expansions of the projected operator.
    Expand(ExpandArgs),
}

#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// A or B.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Fourier cutoff N (modes -N..=N).
    #[arg(long)]
    pub modes: Option<String>,
    /// start:stop:count.
    #[arg(long = "mu-grid", allow_hyphen_values = true)]
    pub mu_grid: Option<String>,
    #[arg(long)]
    pub tol: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<String>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct IndexArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Lower end of the γ bracket for the threshold bisection.
    #[arg(long = "gamma-lo", allow_hyphen_values = true, requires = "gamma_hi")]
    pub gamma_lo: Option<f64>,
    #[arg(long = "gamma-hi", allow_hyphen_values = true, requires = "gamma_lo")]
    pub gamma_hi: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct CollisionArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Most negative mode index searched.
    #[arg(long = "n-min", default_value_t = -3, allow_hyphen_values = true)]
    pub n_min: i64,
}

#[derive(Args, Debug, Clone)]
pub struct ExpandArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Compare against the golden expansions and print the leading discriminant.
    #[arg(long = "check-paper")]
    pub check_paper: bool,
}

/// Default grid for each subcommand.
pub fn default_grid(command: &Command) -> MuGrid {
    match command {
        Command::Index(_) => MuGrid { start: 0.001, stop: 0.05, count: 50 },
        _ => MuGrid { start: 0.0, stop: 0.5, count: mwstab_core::bloch::DEFAULT_MU_POINTS },
    }
}

/// Builds the configuration: defaults, then the config file, then flags.
pub fn resolve_config(common: &CommonArgs, grid: MuGrid) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::with_grid(grid);
    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        cfg.merge_text(&text)?;
    }
    let flags = [
        ("model", &common.model),
        ("k", &common.k),
        ("a", &common.a),
        ("gamma", &common.gamma),
        ("n_modes", &common.modes),
        ("mu_grid", &common.mu_grid),
        ("tol", &common.tol),
        ("out_path", &common.out),
        ("format", &common.format),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn configure_threads() -> Result<(), ConfigError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ConfigError(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    // a second initialisation in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses arguments, runs the subcommand and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let outcome = configure_threads()
        .map_err(Failure::Config)
        .and_then(|()| commands::dispatch(&cli.command));
    match outcome {
        Ok(code) => code,
        Err(failure) => failure.report(),
    }
}
