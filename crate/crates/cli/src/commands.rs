//! The subcommands. Each renders its artifact to text, then writes it out.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use mwstab_core::bloch::{find_collisions, sweep};
use mwstab_core::modulation::{discriminant_sweep, threshold_bisect, Verdict};
use mwstab_core::series::{check_golden, det_and_discriminant, engine_objects, SeriesModel};
use mwstab_core::stokes::solve_wave;

use crate::config::{ConfigError, Format, ModelName, RunConfig};
use crate::format::{csv, fmt_f64};
use crate::{
    default_grid, resolve_config, CollisionArgs, Command, CommonArgs, ExpandArgs, IndexArgs,
    EXIT_CONFIG, EXIT_GOLDEN_MISMATCH, EXIT_INDETERMINATE, EXIT_OK, EXIT_SOLVER,
};

/// Why a run stopped early.
#[derive(Debug)]
pub enum Failure {
    Config(ConfigError),
    Solver(mwstab_core::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<mwstab_core::Error> for Failure {
    fn from(e: mwstab_core::Error) -> Self {
        Failure::Solver(e)
    }
}

fn error_kind(e: &mwstab_core::Error) -> &'static str {
    use mwstab_core::Error::*;
    match e {
        Dimension { .. } => "dimension",
        Domain(_) => "domain",
        Validity { .. } => "validity",
        Convergence { .. } => "convergence",
        Singularity { .. } => "singularity",
        Numeric(_) => "numeric",
        Conditioning(_) => "conditioning",
        Precondition(_) => "precondition",
        Consistency(_) => "consistency",
        Parse(_) => "parse",
    }
}

impl Failure {
    /// Prints the machine-readable reason to stderr and returns the exit code.
    pub fn report(&self) -> i32 {
        let (code, kind, message) = match self {
            Failure::Config(e) => (EXIT_CONFIG, "config", e.to_string()),
            Failure::Solver(e) => (EXIT_SOLVER, error_kind(e), e.to_string()),
        };
        eprintln!("{}", json!({ "error": kind, "message": message }));
        code
    }
}

type Run = Result<i32, Failure>;

pub fn dispatch(command: &Command) -> Run {
    let grid = default_grid(command);
    let cfg = |common: &CommonArgs| resolve_config(common, grid);
    match command {
        Command::Wave(common) => cmd_wave(&cfg(common)?),
        Command::Spectrum(common) => cmd_spectrum(&cfg(common)?),
        Command::Index(args) => cmd_index(&cfg(&args.common)?, args),
        Command::Collisions(args) => cmd_collisions(&cfg(&args.common)?, args),
        Command::Expand(args) => cmd_expand(&cfg(&args.common)?, args),
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), Failure> {
    if cfg.out_path.is_empty() {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(&cfg.out_path, text)
            .map_err(|e| ConfigError(format!("cannot write {}: {e}", cfg.out_path)).into())
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("artifacts serialise");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct WaveArtifact {
    model: String,
    gamma: f64,
    k: f64,
    a: f64,
    c: f64,
    cos_coeffs: Vec<f64>,
    residual_norm: f64,
}

pub fn cmd_wave(cfg: &RunConfig) -> Run {
    let branch = solve_wave(cfg.model_tag(), cfg.a, cfg.k, cfg.n_modes, cfg.tol)?;
    let text = match cfg.format {
        Format::Json => to_json(&WaveArtifact {
            model: cfg.model.to_string(),
            gamma: cfg.model_tag().gamma(),
            k: cfg.k,
            a: cfg.a,
            c: branch.c,
            cos_coeffs: branch.eta.cos_coeffs().to_vec(),
            residual_norm: branch.residual_norm,
        }),
        Format::Csv => csv(
            &["harmonic", "cos_coeff"],
            branch
                .eta
                .cos_coeffs()
                .iter()
                .enumerate()
                .map(|(h, c)| vec![h.to_string(), fmt_f64(*c)]),
        ),
    };
    emit(cfg, &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SpectrumRow {
    mu: f64,
    re_lambda: f64,
    im_lambda: f64,
    branch_id: i64,
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Run {
    let branch = solve_wave(cfg.model_tag(), cfg.a, cfg.k, cfg.n_modes, cfg.tol)?;
    let samples = sweep(&branch, &cfg.mu_grid.points(), cfg.n_modes)?;
    let mut rows = Vec::new();
    for sample in &samples {
        let ids = sample.branch_ids.clone().expect("sweep labels every sample");
        let mut block: Vec<SpectrumRow> = sample
            .eigenvalues
            .iter()
            .zip(ids)
            .map(|(l, id)| SpectrumRow { mu: sample.mu, re_lambda: l.re, im_lambda: l.im, branch_id: id })
            .collect();
        block.sort_by_key(|r| r.branch_id);
        rows.extend(block);
    }
    let text = match cfg.format {
        Format::Json => to_json(&rows),
        Format::Csv => csv(
            &["mu", "re_lambda", "im_lambda", "branch_id"],
            rows.iter().map(|r| {
                vec![fmt_f64(r.mu), fmt_f64(r.re_lambda), fmt_f64(r.im_lambda), r.branch_id.to_string()]
            }),
        ),
    };
    emit(cfg, &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct DiscSample {
    mu: f64,
    disc: f64,
}

#[derive(Serialize)]
struct IndexArtifact {
    model: String,
    gamma: f64,
    k: f64,
    a: f64,
    verdict: Verdict,
    disc_samples: Vec<DiscSample>,
    max_growth: f64,
    threshold_estimate: Option<f64>,
}

pub fn cmd_index(cfg: &RunConfig, args: &IndexArgs) -> Run {
    let threshold = match (args.gamma_lo, args.gamma_hi) {
        (Some(lo), Some(hi)) => {
            if cfg.model != ModelName::B {
                return Err(ConfigError("the gamma threshold exists only for model B".into()).into());
            }
            Some(threshold_bisect(cfg.k, cfg.a, lo, hi, cfg.n_modes)?)
        }
        _ => None,
    };
    let mut report = discriminant_sweep(cfg.model_tag(), cfg.a, cfg.k, &cfg.mu_grid.points(), cfg.n_modes)?;
    report.threshold_estimate = threshold;
    let samples: Vec<DiscSample> = report.disc_samples.iter().map(|&(mu, disc)| DiscSample { mu, disc }).collect();
    let text = match cfg.format {
        Format::Json => to_json(&IndexArtifact {
            model: cfg.model.to_string(),
            gamma: cfg.model_tag().gamma(),
            k: cfg.k,
            a: cfg.a,
            verdict: report.verdict,
            disc_samples: samples,
            max_growth: report.max_growth,
            threshold_estimate: report.threshold_estimate,
        }),
        Format::Csv => csv(&["mu", "disc"], samples.iter().map(|s| vec![fmt_f64(s.mu), fmt_f64(s.disc)])),
    };
    emit(cfg, &text)?;
    Ok(match report.verdict {
        Verdict::Indeterminate => EXIT_INDETERMINATE,
        _ => EXIT_OK,
    })
}

/// Tolerance on `|Ω_n − Ω_m|` for a tabulated collision.
const COLLISION_TOL: f64 = 1e-12;

pub fn cmd_collisions(cfg: &RunConfig, args: &CollisionArgs) -> Run {
    let rows = find_collisions(args.n_min, COLLISION_TOL, cfg.k);
    let text = match cfg.format {
        Format::Json => to_json(&rows),
        Format::Csv => csv(
            &["n", "m", "mu0", "omega"],
            rows.iter().map(|r| vec![r.n.to_string(), r.m.to_string(), fmt_f64(r.mu0), fmt_f64(r.omega)]),
        ),
    };
    emit(cfg, &text)?;
    Ok(EXIT_OK)
}

fn series_model(cfg: &RunConfig) -> SeriesModel {
    match cfg.model {
        ModelName::A => SeriesModel::A,
        ModelName::B => SeriesModel::B,
    }
}

fn expansion_dump(cfg: &RunConfig) -> Result<String, Failure> {
    let model = series_model(cfg);
    let objects = engine_objects(model)?;
    Ok(match cfg.format {
        Format::Json => {
            let maps: BTreeMap<&String, BTreeMap<String, String>> =
                objects.iter().map(|(name, s)| (name, s.to_map())).collect();
            let leading = det_and_discriminant(model)?.disc_leading_string();
            to_json(&json!({ "model": model.label(), "disc_leading": leading, "objects": maps }))
        }
        Format::Csv => csv(
            &["object", "key", "coefficient"],
            objects.iter().flat_map(|(name, s)| {
                s.to_map().into_iter().map(move |(key, coeff)| vec![name.clone(), key, coeff])
            }),
        ),
    })
}

pub fn cmd_expand(cfg: &RunConfig, args: &ExpandArgs) -> Run {
    if !args.check_paper {
        emit(cfg, &expansion_dump(cfg)?)?;
        return Ok(EXIT_OK);
    }
    if !cfg.out_path.is_empty() {
        emit(cfg, &expansion_dump(cfg)?)?;
    }
    let model = series_model(cfg);
    let report = check_golden(model)?;
    let leading = det_and_discriminant(model)?.disc_leading_string();
    println!(
        "model {}: {} objects, {} terms checked, {} diffs",
        report.model,
        report.objects_checked,
        report.terms_checked,
        report.diffs.len()
    );
    for d in &report.diffs {
        println!(
            "diff {} [{}]: expected {} found {}",
            d.object,
            d.key,
            d.expected.as_deref().unwrap_or("-"),
            d.found.as_deref().unwrap_or("-")
        );
    }
    println!("disc_leading: {leading}");
    Ok(if report.passed() { EXIT_OK } else { EXIT_GOLDEN_MISMATCH })
}
