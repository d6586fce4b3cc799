//! Batch runner for the atom-array reproductions: named experiments, seeded
//! runs with byte-stable outputs, manifests and report diffs.

pub mod config;
pub mod diff;
pub mod error;
pub mod experiments;
pub mod manifest;
pub mod report;
pub mod tools;

pub use config::{Experiment, ExperimentConfig, NoiseSpec, ResolvedConfig, VERSION};
pub use diff::{diff_reports, MetricDelta, ReportDiff};
pub use error::CliError;
pub use experiments::{execute, Artifact, RunOutput, REPORT_FILE};
pub use manifest::{git_style_hash, input_hash, run_experiment, RunManifest, MANIFEST_FILE};
pub use report::{Metric, Report};

/// Reads a report from a file, or from `report.json` inside a run directory.
pub fn load_report(path: &std::path::Path) -> Result<Report, CliError> {
    let p = if path.is_dir() { path.join(REPORT_FILE) } else { path.to_path_buf() };
    let text = config::read_text(&p)?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))
}

/// Sizes the rayon pool from ATOMARRAY_THREADS when set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("ATOMARRAY_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation(format!("ATOMARRAY_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(error::ctx("thread pool"))
}
