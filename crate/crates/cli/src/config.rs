use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use atomarray_manybody::MappingErrorModel;
use atomarray_stabilizer::NoiseModel;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Version stamp written into every report and manifest.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The shipped reproductions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    #[value(name = "surface-code-ed6")]
    SurfaceCodeEd6,
    #[value(name = "toric-code-ed6")]
    ToricCodeEd6,
    #[value(name = "cluster-fig2")]
    ClusterFig2,
    #[value(name = "steane-fig2")]
    SteaneFig2,
    #[value(name = "bell-transport-fig1d")]
    BellTransportFig1d,
    #[value(name = "entropy-fig4")]
    EntropyFig4,
    #[value(name = "scar-ed9")]
    ScarEd9,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::SurfaceCodeEd6,
        Experiment::ToricCodeEd6,
        Experiment::ClusterFig2,
        Experiment::SteaneFig2,
        Experiment::BellTransportFig1d,
        Experiment::EntropyFig4,
        Experiment::ScarEd9,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::SurfaceCodeEd6 => "surface-code-ed6",
            Experiment::ToricCodeEd6 => "toric-code-ed6",
            Experiment::ClusterFig2 => "cluster-fig2",
            Experiment::SteaneFig2 => "steane-fig2",
            Experiment::BellTransportFig1d => "bell-transport-fig1d",
            Experiment::EntropyFig4 => "entropy-fig4",
            Experiment::ScarEd9 => "scar-ed9",
        }
    }

    /// Built-in code sampled by the experiment, if it is a code experiment.
    pub fn code(self) -> Option<&'static str> {
        match self {
            Experiment::SurfaceCodeEd6 => Some("surface-19"),
            Experiment::ToricCodeEd6 => Some("toric-24"),
            Experiment::ClusterFig2 => Some("cluster-12"),
            Experiment::SteaneFig2 => Some("steane-7"),
            _ => None,
        }
    }

    /// Whether the experiment draws random numbers at all.
    pub fn is_stochastic(self) -> bool {
        !matches!(self, Experiment::BellTransportFig1d | Experiment::ScarEd9)
    }

    pub fn default_shots(self) -> Option<usize> {
        match self {
            Experiment::SurfaceCodeEd6 | Experiment::ToricCodeEd6 => Some(50_000),
            Experiment::ClusterFig2 | Experiment::SteaneFig2 => Some(10_000),
            Experiment::EntropyFig4 => Some(2000),
            Experiment::BellTransportFig1d | Experiment::ScarEd9 => None,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| CliError::UnknownExperiment(s.to_string()))
    }
}

/// Noise selection: none, the experiment's calibrated default, or a JSON file.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum NoiseSpec {
    Zero,
    #[default]
    Default,
    File(PathBuf),
}

impl fmt::Display for NoiseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseSpec::Zero => f.write_str("zero"),
            NoiseSpec::Default => f.write_str("default"),
            NoiseSpec::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl FromStr for NoiseSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "" => return Err(CliError::Validation("empty noise specification".into())),
            "zero" | "none" => NoiseSpec::Zero,
            "default" => NoiseSpec::Default,
            path => NoiseSpec::File(PathBuf::from(path)),
        })
    }
}

impl From<NoiseSpec> for String {
    fn from(n: NoiseSpec) -> String {
        n.to_string()
    }
}

impl TryFrom<String> for NoiseSpec {
    type Error = CliError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub shots: Option<usize>,
    pub seed: Option<u64>,
    pub noise: NoiseSpec,
    pub out: PathBuf,
    pub version: String,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            shots: None,
            seed: None,
            noise: NoiseSpec::Default,
            out: PathBuf::from(format!("runs/{experiment}")),
            version: VERSION.to_string(),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let e = self.experiment;
        if self.version != VERSION {
            return Err(CliError::Validation(format!("config version {} does not match {VERSION}", self.version)));
        }
        if !e.is_stochastic() {
            if self.shots.is_some() {
                return Err(CliError::Validation(format!("{e} is deterministic and takes no --shots")));
            }
            if let NoiseSpec::File(_) = self.noise {
                return Err(CliError::Validation(format!("{e} has no noise model")));
            }
            return Ok(());
        }
        if self.shots == Some(0) {
            return Err(CliError::Validation("--shots must be positive".into()));
        }
        if self.noise != NoiseSpec::Zero && self.seed.is_none() {
            return Err(CliError::Validation(format!("{e} with noise `{}` needs --seed", self.noise)));
        }
        Ok(())
    }

    /// Checks the config and loads the noise model it names.
    pub fn resolve(&self) -> Result<ResolvedConfig, CliError> {
        self.validate()?;
        let e = self.experiment;
        let text = match &self.noise {
            NoiseSpec::File(p) => Some(std::fs::read_to_string(p).map_err(|err| CliError::io(p, err))?),
            _ => None,
        };
        let noise = if e.code().is_some() {
            let m = match (&self.noise, &text) {
                (NoiseSpec::Zero, _) => NoiseModel::zero(),
                (NoiseSpec::Default, _) => NoiseModel::empirical(),
                (NoiseSpec::File(p), Some(t)) => {
                    NoiseModel::from_json(t).map_err(|err| CliError::Validation(format!("{}: {err}", p.display())))?
                }
                _ => unreachable!(),
            };
            LoadedNoise::Circuit(m)
        } else if e == Experiment::EntropyFig4 {
            LoadedNoise::Mapping(load_mapping(&self.noise, text.as_deref())?)
        } else {
            LoadedNoise::None
        };
        // noiseless runs still draw numbers (readout of superpositions), default seed 0
        let seed = self.seed.unwrap_or(0);
        Ok(ResolvedConfig {
            experiment: e,
            shots: self.shots.or(e.default_shots()),
            seed,
            noise_label: self.noise.to_string(),
            noise_text: text,
            noise,
            version: self.version.clone(),
        })
    }
}

/// Parses a mapping error model from `spec`; `text` holds the file contents for `File`.
pub fn load_mapping(spec: &NoiseSpec, text: Option<&str>) -> Result<MappingErrorModel, CliError> {
    let m = match spec {
        NoiseSpec::Zero => MappingErrorModel::zeroed(),
        NoiseSpec::Default => MappingErrorModel::default(),
        NoiseSpec::File(p) => {
            let t = text.ok_or_else(|| CliError::Validation(format!("{} was not read", p.display())))?;
            serde_json::from_str(t).map_err(|err| CliError::Validation(format!("{}: {err}", p.display())))?
        }
    };
    m.validate().map_err(|err| CliError::Validation(err.to_string()))?;
    Ok(m)
}

pub fn read_text(p: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))
}

#[derive(Debug, Clone, PartialEq)]
pub enum LoadedNoise {
    Circuit(NoiseModel),
    Mapping(MappingErrorModel),
    None,
}

/// A validated config with defaults filled in and the noise model loaded.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedConfig {
    pub experiment: Experiment,
    pub shots: Option<usize>,
    pub seed: u64,
    pub noise_label: String,
    /// Raw noise file, part of the input hash.
    pub noise_text: Option<String>,
    pub noise: LoadedNoise,
    pub version: String,
}
