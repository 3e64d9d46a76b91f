//! Experiment configuration files.
//!
//! A config is TOML (or JSON when the file name ends in `.json`). Only
//! `environment` and `algorithm` are required; everything else falls back to
//! defaults that depend on the chosen world. The resolved form written next
//! to the results is itself a valid config.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::agme::AgmeConfig;
use crate::babbling::{BabblingConfig, DEFAULT_K_INVERSE, DEFAULT_SIGMA_BUBBLE};
use crate::environment::ObservationMode;
use crate::error::{Error, Result};
use crate::eval::{regular_schedule, EvalConfig, DEFAULT_EPSILON, DEFAULT_EVAL_EVERY, DEFAULT_N_GOALS};
use crate::manifold::DEFAULT_K;
use crate::worlds::{World, WorldKind};

/// Overrides the directory that relative `output_dir` values resolve against.
pub const OUTPUT_ROOT_VAR: &str = "AGME_OUTPUT_ROOT";
pub const DEFAULT_OUTPUT_ROOT: &str = "runs";
pub const DEFAULT_TRIALS: usize = 2000;
pub const DEFAULT_SEEDS: [u64; 5] = [0, 1, 2, 3, 4];
pub const DEFAULT_SNAPSHOTS: [usize; 3] = [100, 500, 2000];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmKind {
    Agme,
    Babbling,
}

impl AlgorithmKind {
    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Agme => "agme",
            AlgorithmKind::Babbling => "babbling",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgmeSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BabblingSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_bubble: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_policy: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_inverse: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_goals: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Evaluate every this many trials (ignored when `schedule` is given).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub every: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<usize>>,
}

/// The config file as written by a user: every field but `environment` and
/// `algorithm` optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub environment: WorldKind,
    #[serde(default = "default_mode")]
    pub mode: ObservationMode,
    pub algorithm: AlgorithmKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot_trials: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agme: Option<AgmeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub babbling: Option<BabblingSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval: Option<EvalSection>,
}

fn default_mode() -> ObservationMode {
    ObservationMode::GroundTruth
}

impl ConfigFile {
    pub fn new(environment: WorldKind, mode: ObservationMode, algorithm: AlgorithmKind) -> Self {
        ConfigFile {
            environment,
            mode,
            algorithm,
            trials: None,
            seeds: None,
            snapshot_trials: None,
            output_dir: None,
            agme: None,
            babbling: None,
            eval: None,
        }
    }

    pub fn parse_toml(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::parse(origin, e.message()))
    }

    pub fn parse_json(text: &str, origin: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(origin, e))
    }

    /// Reads a config file; `.json` files are JSON, anything else TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        if path.extension().is_some_and(|e| e == "json") {
            ConfigFile::parse_json(&text, path)
        } else {
            ConfigFile::parse_toml(&text, path)
        }
    }

    /// Fills defaults and validates. Relative output directories resolve
    /// against `output_root`.
    pub fn resolve(&self, output_root: &Path) -> Result<RunConfig> {
        let world = World::new(self.environment);
        let policy_dim = world.policy_dim();
        let trials = self.trials.unwrap_or(DEFAULT_TRIALS);
        let seeds = self.seeds.clone().unwrap_or_else(|| DEFAULT_SEEDS.to_vec());
        if seeds.is_empty() {
            return Err(Error::config("seeds", "at least one replicate seed is required"));
        }
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::config("seeds", "seeds must be distinct"));
        }

        let algorithm = match self.algorithm {
            AlgorithmKind::Agme => {
                if self.babbling.is_some() {
                    return Err(Error::config("babbling", "section given but algorithm is `agme`"));
                }
                let s = self.agme.clone().unwrap_or_default();
                let cfg = AgmeConfig {
                    k: s.k.unwrap_or(DEFAULT_K),
                    sigma: s.sigma.unwrap_or_else(|| world.default_sigma()),
                    trials,
                    rng_seed: 0,
                };
                cfg.validate(policy_dim)?;
                AlgorithmConfig::Agme(cfg)
            }
            AlgorithmKind::Babbling => {
                if self.agme.is_some() {
                    return Err(Error::config("agme", "section given but algorithm is `babbling`"));
                }
                let s = self.babbling.clone().unwrap_or_default();
                let cfg = BabblingConfig {
                    sigma_bubble: s.sigma_bubble.unwrap_or(DEFAULT_SIGMA_BUBBLE),
                    sigma_policy: s.sigma_policy.unwrap_or_else(|| world.default_sigma()),
                    k_inverse: s.k_inverse.unwrap_or(DEFAULT_K_INVERSE),
                    trials,
                    rng_seed: 0,
                };
                cfg.validate(policy_dim)?;
                AlgorithmConfig::Babbling(cfg)
            }
        };

        let e = self.eval.clone().unwrap_or_default();
        let schedule = match e.schedule {
            Some(mut s) => {
                if let Some(&t) = s.iter().find(|&&t| t > trials) {
                    return Err(Error::config(
                        "eval.schedule",
                        format!("trial {t} is beyond the budget of {trials}"),
                    ));
                }
                s.sort_unstable();
                s.dedup();
                s
            }
            None => {
                let every = e.every.unwrap_or(DEFAULT_EVAL_EVERY);
                if every == 0 {
                    return Err(Error::config("eval.every", "must be at least 1"));
                }
                regular_schedule(every, trials)
            }
        };
        let eval = EvalConfig {
            n_goals: e.n_goals.unwrap_or(DEFAULT_N_GOALS),
            epsilon: e.epsilon.unwrap_or(DEFAULT_EPSILON),
            eval_rng_seed: e.seed.unwrap_or(0),
            schedule,
        };
        eval.validate()?;

        let mut snapshot_trials = self
            .snapshot_trials
            .clone()
            .unwrap_or_else(|| DEFAULT_SNAPSHOTS.to_vec());
        snapshot_trials.sort_unstable();
        snapshot_trials.dedup();

        let dir = self.output_dir.clone().unwrap_or_else(|| {
            PathBuf::from(format!(
                "{}_{}_{}",
                self.environment.name(),
                mode_name(self.mode),
                self.algorithm.name()
            ))
        });
        Ok(RunConfig {
            environment: self.environment,
            mode: self.mode,
            algorithm,
            trials,
            seeds,
            eval,
            snapshot_trials,
            output_dir: output_root.join(dir),
        })
    }
}

pub fn mode_name(mode: ObservationMode) -> &'static str {
    match mode {
        ObservationMode::GroundTruth => "ground_truth",
        ObservationMode::Image => "image",
    }
}

/// Output root from [`OUTPUT_ROOT_VAR`], else [`DEFAULT_OUTPUT_ROOT`].
pub fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_VAR)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_ROOT))
}

#[derive(Clone, Debug, PartialEq)]
pub enum AlgorithmConfig {
    Agme(AgmeConfig),
    Babbling(BabblingConfig),
}

impl AlgorithmConfig {
    pub fn kind(&self) -> AlgorithmKind {
        match self {
            AlgorithmConfig::Agme(_) => AlgorithmKind::Agme,
            AlgorithmConfig::Babbling(_) => AlgorithmKind::Babbling,
        }
    }
}

/// A fully resolved experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub environment: WorldKind,
    pub mode: ObservationMode,
    pub algorithm: AlgorithmConfig,
    pub trials: usize,
    pub seeds: Vec<u64>,
    pub eval: EvalConfig,
    pub snapshot_trials: Vec<usize>,
    pub output_dir: PathBuf,
}

impl RunConfig {
    /// Loads and resolves a config file against [`output_root`].
    pub fn load(path: &Path) -> Result<Self> {
        ConfigFile::load(path)?.resolve(&output_root())
    }

    /// Shorthand for a default experiment in memory.
    pub fn defaults(
        environment: WorldKind,
        mode: ObservationMode,
        algorithm: AlgorithmKind,
        output_dir: impl Into<PathBuf>,
    ) -> Self {
        let mut file = ConfigFile::new(environment, mode, algorithm);
        file.output_dir = Some(output_dir.into());
        file.resolve(Path::new(""))
            .expect("built-in defaults are valid")
    }

    /// Overrides the trial budget, regenerating the default schedule when
    /// `every` is given.
    pub fn with_trials(mut self, trials: usize, every: Option<usize>) -> Self {
        self.trials = trials;
        match &mut self.algorithm {
            AlgorithmConfig::Agme(c) => c.trials = trials,
            AlgorithmConfig::Babbling(c) => c.trials = trials,
        }
        match every {
            Some(every) => self.eval.schedule = regular_schedule(every, trials),
            None => self.eval.schedule.retain(|&t| t <= trials),
        }
        self
    }

    /// The fully explicit config file equivalent to `self`.
    pub fn to_file(&self) -> ConfigFile {
        let mut file = ConfigFile::new(self.environment, self.mode, self.algorithm.kind());
        file.trials = Some(self.trials);
        file.seeds = Some(self.seeds.clone());
        file.snapshot_trials = Some(self.snapshot_trials.clone());
        file.output_dir = Some(self.output_dir.clone());
        match &self.algorithm {
            AlgorithmConfig::Agme(c) => {
                file.agme = Some(AgmeSection {
                    k: Some(c.k),
                    sigma: Some(c.sigma.clone()),
                })
            }
            AlgorithmConfig::Babbling(c) => {
                file.babbling = Some(BabblingSection {
                    sigma_bubble: Some(c.sigma_bubble),
                    sigma_policy: Some(c.sigma_policy.clone()),
                    k_inverse: Some(c.k_inverse),
                })
            }
        }
        file.eval = Some(EvalSection {
            n_goals: Some(self.eval.n_goals),
            epsilon: Some(self.eval.epsilon),
            seed: Some(self.eval.eval_rng_seed),
            every: None,
            schedule: Some(self.eval.schedule.clone()),
        });
        file
    }

    /// Checks that the schedule ends on the trial budget and validates the
    /// algorithm block against the world.
    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::config("seeds", "at least one replicate seed is required"));
        }
        let dim = World::new(self.environment).policy_dim();
        match &self.algorithm {
            AlgorithmConfig::Agme(c) => c.validate(dim)?,
            AlgorithmConfig::Babbling(c) => c.validate(dim)?,
        }
        if let Some(&t) = self.eval.schedule.iter().find(|&&t| t > self.trials) {
            return Err(Error::config(
                "eval.schedule",
                format!("trial {t} is beyond the budget of {}", self.trials),
            ));
        }
        self.eval.validate()
    }
}
