use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, ResolvedConfig};
use crate::error::CliError;
use crate::experiments::{execute, Artifact};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Record of one run. Timestamps live only here, so every other output file
/// is a pure function of the input hash.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub input_hash: String,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<OutputFile>,
}

#[derive(Serialize)]
struct HashedInputs<'a> {
    experiment: &'a str,
    version: &'a str,
    shots: Option<usize>,
    seed: u64,
    noise: &'a str,
    noise_file: Option<&'a str>,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// sha256 over "blob <len>\0<content>", the way git names objects.
pub fn git_style_hash(content: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", content.len()).as_bytes());
    h.update(content);
    hex(&h.finalize())
}

/// Hash of everything that determines the results. The output directory is
/// not an input, and a noise file counts by its contents, not its path.
pub fn input_hash(r: &ResolvedConfig) -> String {
    let inputs = HashedInputs {
        experiment: r.experiment.name(),
        version: &r.version,
        shots: r.shots,
        seed: r.seed,
        noise: if r.noise_text.is_some() { "file" } else { &r.noise_label },
        noise_file: r.noise_text.as_deref(),
    };
    git_style_hash(&serde_json::to_vec(&inputs).expect("inputs serialize"))
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<OutputFile>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut out = Vec::with_capacity(artifacts.len());
    for a in artifacts {
        let p = dir.join(&a.name);
        fs::write(&p, &a.bytes).map_err(|e| CliError::io(&p, e))?;
        out.push(OutputFile { path: a.name.clone(), bytes: a.bytes.len(), sha256: hex(&Sha256::digest(&a.bytes)) });
    }
    Ok(out)
}

/// Runs the configured experiment and writes report, tables and manifest into `cfg.out`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunManifest, CliError> {
    let resolved = cfg.resolve()?;
    let started = now();
    let run = execute(&resolved)?;
    let outputs = write_artifacts(&cfg.out, &run.artifacts)?;
    let manifest =
        RunManifest { config: cfg.clone(), input_hash: input_hash(&resolved), started, finished: now(), outputs };
    let p = cfg.out.join(MANIFEST_FILE);
    let mut bytes = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    bytes.push(b'\n');
    fs::write(&p, bytes).map_err(|e| CliError::io(&p, e))?;
    Ok(manifest)
}
