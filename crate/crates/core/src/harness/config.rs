use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algorithms::{Algorithm, AlgorithmParams, ParamOverrides};
use crate::error::{Error, Result};
use crate::metrics::GD_REFERENCE_POINTS;
use crate::objectives::{Problem, ProblemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::UnknownName {
                kind: "format",
                name: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

/// Everything needed to reproduce a batch of runs. Deserializes from TOML;
/// omitted keys take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithms: Vec<Algorithm>,
    pub problems: Vec<Problem>,
    pub swarm_size: usize,
    pub iterations: usize,
    pub runs: usize,
    pub bits_per_variable: usize,
    pub base_seed: u64,
    /// Per-algorithm parameter overrides, keyed by algorithm name.
    pub params: BTreeMap<String, ParamOverrides>,
    pub output_dir: Option<PathBuf>,
    pub workers: usize,
    pub format: OutputFormat,
    /// Optional cap on the global archive; `None` keeps every
    /// non-dominated point.
    pub archive_capacity: Option<usize>,
    /// Analytic front samples used as the GD reference.
    pub reference_points: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            algorithms: Algorithm::ALL.to_vec(),
            problems: Problem::ALL.to_vec(),
            swarm_size: 100,
            iterations: 300,
            runs: 100,
            bits_per_variable: 20,
            base_seed: 0,
            params: BTreeMap::new(),
            output_dir: None,
            workers: 1,
            format: OutputFormat::Csv,
            archive_capacity: None,
            reference_points: GD_REFERENCE_POINTS,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::invalid("runs", "must be at least 1"));
        }
        if self.swarm_size < 2 {
            return Err(Error::invalid("swarm_size", "must be at least 2"));
        }
        if self.workers == 0 {
            return Err(Error::invalid("workers", "must be at least 1"));
        }
        if self.reference_points < 2 {
            return Err(Error::invalid("reference_points", "must be at least 2"));
        }
        if self.archive_capacity == Some(0) {
            return Err(Error::invalid("archive_capacity", "must be at least 1"));
        }
        if self.base_seed.checked_add(self.runs as u64).is_none() {
            return Err(Error::invalid("base_seed", "seed range overflows u64"));
        }
        ProblemSpec::new(Problem::Zdt1, self.bits_per_variable)?;
        for name in self.params.keys() {
            name.parse::<Algorithm>()?;
        }
        for &algorithm in &self.algorithms {
            self.params_for(algorithm)?.validate()?;
        }
        Ok(())
    }

    /// Defaults for `algorithm` with any configured overrides applied.
    pub fn params_for(&self, algorithm: Algorithm) -> Result<AlgorithmParams> {
        let mut params = AlgorithmParams::defaults(algorithm);
        for (name, overrides) in &self.params {
            if name.parse::<Algorithm>()? == algorithm {
                overrides.apply(&mut params);
            }
        }
        Ok(params)
    }

    /// Seeds of the runs of every cell: `base_seed .. base_seed + runs`.
    pub fn seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.runs as u64).map(move |i| self.base_seed + i)
    }
}
