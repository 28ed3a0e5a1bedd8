//! Reproducible experiment harness: JSON experiment configs, predefined
//! verification suites, deterministic CSV reports, and a manifest carrying
//! the config hash.
//!
//! Determinism contract: a config fully determines the report. Replicate i
//! always consumes stream i of the master seed, merges are order-insensitive,
//! and rows are emitted in a fixed order, so the CSV is byte-identical across
//! reruns and worker counts. Wall-clock runtimes are recorded in the manifest
//! only, never in the CSV.

mod suites;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::limits::RegimeSpec;
use crate::localstats::RootPolicy;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),
}

/// A fully reproducible experiment description. Fields not used by a suite
/// are rejected when set, so configs stay unambiguous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicates: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<RootPolicy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime: Option<RegimeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_tries: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<String>,
}

impl ExperimentConfig {
    pub fn new(suite: &str, seed: u64) -> Self {
        ExperimentConfig {
            suite: suite.to_string(),
            seed,
            n: None,
            m: None,
            q: None,
            k: None,
            radius: None,
            replicates: None,
            policy: None,
            regime: None,
            tolerance: None,
            max_tries: None,
            burn_in: None,
            spacing: None,
            output: None,
            manifest: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// One verified statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub suite: String,
    pub params: String,
    pub statistic: String,
    pub observed: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seed: u64,
    pub note: String,
}

impl ReportRow {
    /// Pass iff |observed - reference| <= tolerance.
    #[allow(clippy::too_many_arguments)]
    fn gap(
        suite: &str,
        params: &str,
        statistic: &str,
        observed: f64,
        reference: f64,
        tolerance: f64,
        seed: u64,
        note: &str,
    ) -> Self {
        ReportRow {
            suite: suite.into(),
            params: params.into(),
            statistic: statistic.into(),
            observed,
            reference,
            tolerance,
            pass: (observed - reference).abs() <= tolerance,
            seed,
            note: note.into(),
        }
    }

    /// Pass iff observed >= reference (threshold statistics).
    fn at_least(
        suite: &str,
        params: &str,
        statistic: &str,
        observed: f64,
        reference: f64,
        seed: u64,
        note: &str,
    ) -> Self {
        ReportRow {
            suite: suite.into(),
            params: params.into(),
            statistic: statistic.into(),
            observed,
            reference,
            tolerance: 0.0,
            pass: observed >= reference,
            seed,
            note: format!("predicate=at-least{}{}", if note.is_empty() { "" } else { "; " }, note),
        }
    }

    /// Pass iff observed <= reference.
    fn at_most(
        suite: &str,
        params: &str,
        statistic: &str,
        observed: f64,
        reference: f64,
        seed: u64,
        note: &str,
    ) -> Self {
        ReportRow {
            suite: suite.into(),
            params: params.into(),
            statistic: statistic.into(),
            observed,
            reference,
            tolerance: 0.0,
            pass: observed <= reference,
            seed,
            note: format!("predicate=at-most{}{}", if note.is_empty() { "" } else { "; " }, note),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub rows: Vec<ReportRow>,
    /// Wall-clock seconds; manifest-only, excluded from CSV for determinism.
    pub runtime_secs: f64,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_csv(&self) -> String {
        render_csv(&self.rows)
    }
}

pub const CSV_HEADER: &str = "suite,params,statistic,observed,reference,tolerance,pass,seed,note";

/// Floating-point values are printed with nine significant digits.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    format!("{x:.8e}")
}

pub fn render_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        debug_assert!(
            !r.params.contains(',') && !r.statistic.contains(',') && !r.note.contains(','),
            "report fields must stay comma-free"
        );
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.suite,
            r.params,
            r.statistic,
            format_sig(r.observed),
            format_sig(r.reference),
            format_sig(r.tolerance),
            r.pass,
            r.seed,
            r.note
        ));
    }
    out
}

/// SHA-256 of the canonical JSON serialization of the config.
pub fn config_hash(config: &ExperimentConfig) -> String {
    let canon = serde_json::to_string(config).expect("config serializes");
    hex::encode(Sha256::digest(canon.as_bytes()))
}

/// Manifest JSON written next to each report.
pub fn manifest_json(config: &ExperimentConfig, report: &SuiteReport, started_unix: u64) -> serde_json::Value {
    serde_json::json!({
        "config_hash": config_hash(config),
        "version": env!("CARGO_PKG_VERSION"),
        "started": started_unix,
        "runtime_secs": report.runtime_secs,
        "rows": report.rows,
    })
}

/// Deterministic, collision-free mapping from (master seed, stream index) to
/// a generator state. Streams 0.. are used for replicates; see
/// [`crate::rng::STREAM_REFERENCE`] and [`crate::rng::STREAM_ROOT_DRAWS`]
/// for the reserved high streams.
pub fn derive_seed(master: u64, stream: u64) -> crate::rng::RngState {
    crate::rng::RngState::derive(master, stream)
}

pub const ALL_SUITES: [&str; 12] = [
    "enumeration-uniformity",
    "borel",
    "er-census",
    "noncomplex-limit",
    "complexpart-limit",
    "core-kernel-limit",
    "subdivision-growth",
    "tree-distance",
    "gw-conditioning",
    "planar-regime1",
    "mixture-identity",
    "mcmc-structure",
];

/// Runs a suite on a worker pool. `workers` overrides the LOCALLIM_THREADS
/// environment variable (which itself overrides the core count); the worker
/// count never affects the report bytes.
pub fn run_suite(config: &ExperimentConfig, workers: Option<usize>) -> Result<SuiteReport, ConfigError> {
    let threads = workers
        .or_else(|| {
            std::env::var("LOCALLIM_THREADS")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ConfigError::Invalid(format!("worker pool: {e}")))?;
    let start = std::time::Instant::now();
    let rows = pool.install(|| suites::dispatch(config))?;
    Ok(SuiteReport {
        rows,
        runtime_secs: start.elapsed().as_secs_f64(),
    })
}
