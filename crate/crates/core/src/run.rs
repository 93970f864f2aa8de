//! End-to-end experiment driver: evaluates the configured curves and writes
//! CSV files plus a reloadable run manifest into the output directory.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::analytic::{analytic_curve, distance_cdf, distance_quantile, AnalyticParams};
use crate::config::{ConfigError, Figure, RunConfig, PROVENANCE_TABLE};
use crate::error::Error;
use crate::geometry::Window;
use crate::montecarlo::{
    drop_rng, estimate_distance_cdfs, estimate_success, DistanceCdfs, McConfig,
};
use crate::output::{
    deployment_csv, distance_csv, empirical_rows, pairing_csv, scenario_csv, success_csv, CdfRow,
};
use crate::pairing::Direction;
use crate::quadrature::QuadratureSpec;
use crate::results::{radius_grid, SuccessCurve};
use crate::scenario::{build_scenario, Scheme};

pub const SUCCESS_FILE: &str = "success_curve.csv";
pub const DISTANCE_FILE: &str = "distance_cdf.csv";
pub const MANIFEST_FILE: &str = "run_manifest.toml";

/// Radii per distance CDF in the output file.
pub const CDF_GRID_POINTS: usize = 201;

/// Link-type label of the nearest-neighbour reference rows.
pub const ANALYTIC_SIGNAL_LABEL: &str = "signal_analytic";

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Model(#[from] Error),

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl RunError {
    /// Process exit code: 2 for configuration problems, 3 for numerical or
    /// model failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Model(Error::Parameter(_)) => 2,
            RunError::Model(_) => 3,
            RunError::Io { .. } => 1,
        }
    }
}

/// Everything a run computed, before anything is written.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutputs {
    pub success: Vec<SuccessCurve>,
    pub distances: Vec<DistanceCdfs>,
    pub cdf_rows: Vec<CdfRow>,
    /// `(file name, contents)` of one-drop snapshot dumps.
    pub snapshots: Vec<(String, String)>,
}

fn directions(figure: Option<Figure>) -> Vec<Direction> {
    match figure {
        None => vec![Direction::Uplink, Direction::Downlink],
        Some(Figure::UplinkSuccess) => vec![Direction::Uplink],
        Some(Figure::DownlinkSuccess) => vec![Direction::Downlink],
        Some(Figure::DistanceCdfs) => Vec::new(),
    }
}

fn wants_distances(figure: Option<Figure>) -> bool {
    matches!(figure, None | Some(Figure::DistanceCdfs))
}

pub fn mc_config(config: &RunConfig, scheme: Scheme) -> Result<McConfig, RunError> {
    let window = Window::new(config.window_km)?;
    let mut mc = McConfig::new(scheme, config.lambda(scheme), window, config.channel());
    mc.drops = config.drops;
    mc.guard_fraction = config.guard_fraction;
    mc.thresholds_db = config.beta_db.clone();
    mc.seed = config.seed;
    mc.typical_only = config.typical_only;
    Ok(mc)
}

fn snapshots(config: &RunConfig, scheme: Scheme) -> Result<Vec<(String, String)>, RunError> {
    let window = Window::new(config.window_km)?;
    let mut rng = drop_rng(config.seed, 0);
    let scenario = build_scenario(scheme, config.lambda(scheme), window, &mut rng)?;
    let tag = scheme.as_str();
    let mut out = vec![
        (
            format!("deployment_{tag}.csv"),
            deployment_csv(scenario.bs_positions()),
        ),
        (format!("scenario_{tag}.csv"), scenario_csv(&scenario)),
    ];
    if let Some(p) = scenario.pairing() {
        out.push((format!("pairing_{tag}.csv"), pairing_csv(p)));
    }
    Ok(out)
}

/// Computes all outputs selected by `config` without touching the disk.
pub fn compute(config: &RunConfig) -> Result<RunOutputs, RunError> {
    config.validate()?;
    let quad = QuadratureSpec::default();
    let analytic = AnalyticParams::new(config.lambda_c, config.lambda_f, &config.channel())?;
    let mut out = RunOutputs {
        success: Vec::new(),
        distances: Vec::new(),
        cdf_rows: Vec::new(),
        snapshots: Vec::new(),
    };

    for &scheme in &config.schemes {
        for dir in directions(config.figure) {
            if config.mode.includes_mc() {
                out.success
                    .push(estimate_success(&mc_config(config, scheme)?, dir)?);
            }
            if config.mode.includes_analytic() {
                out.success.push(analytic_curve(
                    scheme,
                    dir,
                    &analytic,
                    &config.beta_db,
                    &quad,
                )?);
            }
        }
        if config.mode.includes_mc() {
            out.snapshots.extend(snapshots(config, scheme)?);
            if wants_distances(config.figure) {
                out.distances
                    .push(estimate_distance_cdfs(&mc_config(config, scheme)?)?);
            }
        }
    }

    if wants_distances(config.figure) {
        let mut r_max = out
            .distances
            .iter()
            .flat_map(|d| d.all())
            .filter_map(|c| c.max())
            .fold(0.0, f64::max);
        if r_max == 0.0 {
            let sparsest = config
                .schemes
                .iter()
                .map(|&s| config.lambda(s))
                .fold(f64::INFINITY, f64::min);
            r_max = distance_quantile(0.999, sparsest);
        }
        let radii = radius_grid(r_max, CDF_GRID_POINTS);
        for d in &out.distances {
            for cdf in d.all() {
                out.cdf_rows.extend(empirical_rows(cdf, &radii));
            }
        }
        for &scheme in &config.schemes {
            let lambda = config.lambda(scheme);
            out.cdf_rows.extend(radii.iter().map(|&r| CdfRow {
                scheme,
                link_type: ANALYTIC_SIGNAL_LABEL.into(),
                r_km: r,
                cdf: distance_cdf(r, lambda),
            }));
        }
    }
    Ok(out)
}

/// Manifest text: the effective configuration plus a provenance table.
pub fn manifest(config: &RunConfig, outputs: &RunOutputs, files: &[String]) -> String {
    let mut text = config.to_toml();
    let _ = writeln!(text, "\n[{PROVENANCE_TABLE}]");
    let _ = writeln!(text, "crate_version = \"{}\"", env!("CARGO_PKG_VERSION"));
    let list: Vec<String> = files.iter().map(|f| format!("\"{f}\"")).collect();
    let _ = writeln!(text, "files = [{}]", list.join(", "));
    for c in &outputs.success {
        if c.drops > 0 {
            let _ = writeln!(
                text,
                "{}_{}_{}_skipped_drops = {}",
                c.scheme.as_str(),
                c.direction.as_str(),
                c.source,
                c.skipped_drops
            );
        }
    }
    for d in &outputs.distances {
        let _ = writeln!(
            text,
            "{}_distance_skipped_drops = {}",
            d.ul_signal.scheme.as_str(),
            d.skipped_drops
        );
    }
    text
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), RunError> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| RunError::Io { path, source })
}

/// Computes and writes every output; returns what was computed.
pub fn run(config: &RunConfig) -> Result<RunOutputs, RunError> {
    let outputs = compute(config)?;
    let dir = &config.out_dir;
    std::fs::create_dir_all(dir).map_err(|source| RunError::Io {
        path: dir.clone(),
        source,
    })?;
    let mut files = Vec::new();
    if !outputs.success.is_empty() {
        write(dir, SUCCESS_FILE, &success_csv(&outputs.success))?;
        files.push(SUCCESS_FILE.to_string());
    }
    if !outputs.cdf_rows.is_empty() {
        write(dir, DISTANCE_FILE, &distance_csv(&outputs.cdf_rows))?;
        files.push(DISTANCE_FILE.to_string());
    }
    for (name, contents) in &outputs.snapshots {
        write(dir, name, contents)?;
        files.push(name.clone());
    }
    write(dir, MANIFEST_FILE, &manifest(config, &outputs, &files))?;
    Ok(outputs)
}
