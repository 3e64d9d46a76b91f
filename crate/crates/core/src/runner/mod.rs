//! Experiment orchestration: replicates, metric files, snapshots, run
//! comparison and dump replay.
//!
//! Output layout under `output_dir`:
//!
//! ```text
//! config.json              resolved config
//! seed_<s>/metrics.csv     trial,perf,dispersion,repertoire_size
//! seed_<s>/outcomes_t<t>.csv
//! seed_<s>/scene_t<t>.ppm
//! ```

mod config;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{
    mode_name, output_root, AgmeSection, AlgorithmConfig, AlgorithmKind, BabblingSection,
    ConfigFile, EvalSection, RunConfig, DEFAULT_OUTPUT_ROOT, DEFAULT_SEEDS, DEFAULT_SNAPSHOTS,
    DEFAULT_TRIALS, OUTPUT_ROOT_VAR,
};

use crate::agme::{agme_run, AgmeConfig};
use crate::babbling::{babbling_run, BabblingConfig};
use crate::camera::{draw_scene, raster_clear, raster_disk, Image, Rgb, Scene, PIXELS_PER_UNIT};
use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::eval::{dispersion, perf_on_goals, sample_goal_set};
use crate::explore::RunOutput;
use crate::repertoire::Repertoire;
use crate::skill::ParameterizedSkill;
use crate::worlds::SimEnvironment;

pub const CONFIG_FILE: &str = "config.json";
pub const METRICS_FILE: &str = "metrics.csv";

/// One row of `metrics.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub trial: usize,
    pub perf: f64,
    pub dispersion: f64,
    pub repertoire_size: usize,
}

/// Everything one replicate produced, before anything touches the disk.
#[derive(Clone, Debug)]
pub struct Replicate {
    pub seed: u64,
    pub metrics: Vec<MetricRow>,
    pub repertoire: Repertoire,
}

impl Replicate {
    pub fn final_metrics(&self) -> &MetricRow {
        self.metrics.last().expect("the schedule is never empty")
    }

    pub fn at(&self, trial: usize) -> Option<&MetricRow> {
        self.metrics.iter().find(|m| m.trial == trial)
    }
}

pub fn environment_for(config: &RunConfig) -> SimEnvironment {
    SimEnvironment::new(config.environment, config.mode)
}

fn with_seed_agme(c: &AgmeConfig, seed: u64) -> AgmeConfig {
    AgmeConfig { rng_seed: seed, ..c.clone() }
}

fn with_seed_babbling(c: &BabblingConfig, seed: u64) -> BabblingConfig {
    BabblingConfig { rng_seed: seed, ..c.clone() }
}

/// Runs one replicate in memory, evaluating on the config's schedule. The
/// evaluation goal set is drawn once and shared by every evaluation.
pub fn run_replicate(config: &RunConfig, seed: u64) -> Result<Replicate> {
    config.validate()?;
    let mut env = environment_for(config);
    let goals = sample_goal_set(&env, config.eval.n_goals, config.eval.eval_rng_seed)?;
    let epsilon = config.eval.epsilon;
    let hook = |trial: usize, rep: &Repertoire, env: &SimEnvironment| {
        let perf = perf_on_goals(&ParameterizedSkill::new(rep), env, &goals, epsilon)?;
        let dispersion = if rep.len() < 2 { 0.0 } else { dispersion(rep, env)? };
        Ok(MetricRow {
            trial,
            perf,
            dispersion,
            repertoire_size: rep.len(),
        })
    };
    let schedule = &config.eval.schedule;
    let RunOutput {
        repertoire,
        samples,
    } = match &config.algorithm {
        AlgorithmConfig::Agme(c) => agme_run(&mut env, &with_seed_agme(c, seed), schedule, hook)?,
        AlgorithmConfig::Babbling(c) => {
            babbling_run(&mut env, &with_seed_babbling(c, seed), schedule, hook)?
        }
    };
    Ok(Replicate {
        seed,
        metrics: samples.into_iter().map(|(_, m)| m).collect(),
        repertoire,
    })
}

/// Writes metric rows as CSV with LF line endings.
pub fn write_metrics<W: Write>(rows: &[MetricRow], writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    let fail = |e: csv::Error| Error::io("metrics.csv", std::io::Error::other(e));
    w.write_record(["trial", "perf", "dispersion", "repertoire_size"])
        .map_err(fail)?;
    for r in rows {
        w.write_record([
            r.trial.to_string(),
            r.perf.to_string(),
            r.dispersion.to_string(),
            r.repertoire_size.to_string(),
        ])
        .map_err(fail)?;
    }
    w.flush().map_err(|e| Error::io("metrics", e))?;
    Ok(())
}

pub fn read_metrics(path: &Path) -> Result<Vec<MetricRow>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    rdr.deserialize()
        .map(|r| r.map_err(|e| Error::parse(path, e)))
        .collect()
}

/// All ground-truth states of `rep` drawn into one frame: whole arm poses
/// for the arm, a dot in the object's colour for the other worlds.
pub fn superposition(rep: &Repertoire, env: &SimEnvironment) -> Result<Image> {
    let mut img = raster_clear(Rgb::WHITE);
    for policy in rep.policies() {
        let rollout = env.rollout(policy)?;
        match &rollout.scene {
            Scene::Arm { .. } => draw_scene(&mut img, &rollout.scene),
            Scene::Disk { color, .. } => {
                raster_disk(&mut img, rollout.state, 0.75 / PIXELS_PER_UNIT, *color)
            }
        }
    }
    Ok(img)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// Trials at which dumps and snapshots are written: the configured ones
/// within budget, plus the final trial.
pub fn snapshot_schedule(config: &RunConfig) -> Vec<usize> {
    let mut s: Vec<usize> = config
        .snapshot_trials
        .iter()
        .copied()
        .filter(|&t| t <= config.trials)
        .collect();
    s.push(config.trials);
    s.sort_unstable();
    s.dedup();
    s
}

pub fn seed_dir(output_dir: &Path, seed: u64) -> PathBuf {
    output_dir.join(format!("seed_{seed}"))
}

/// Writes one replicate's files into `dir`.
pub fn write_replicate(config: &RunConfig, replicate: &Replicate, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(METRICS_FILE);
    let mut w = create(&path)?;
    write_metrics(&replicate.metrics, &mut w)?;
    finish(w, &path)?;

    let env = environment_for(config);
    for trial in snapshot_schedule(config) {
        let rep = replicate.repertoire.truncated(trial + 1);
        let path = dir.join(format!("outcomes_t{trial}.csv"));
        let mut w = create(&path)?;
        rep.write_csv(&mut w)
            .map_err(|e| Error::io(&path, std::io::Error::other(e)))?;
        finish(w, &path)?;

        let path = dir.join(format!("scene_t{trial}.ppm"));
        let mut w = create(&path)?;
        superposition(&rep, &env)?
            .write_ppm(&mut w)
            .map_err(|e| Error::io(&path, e))?;
        finish(w, &path)?;
    }
    Ok(())
}

/// Runs every replicate (in parallel) and writes the output tree.
pub fn run_experiment(config: &RunConfig) -> Result<Vec<Replicate>> {
    config.validate()?;
    let out = &config.output_dir;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let path = out.join(CONFIG_FILE);
    let json = serde_json::to_string_pretty(&config.to_file())
        .map_err(|e| Error::io(&path, std::io::Error::other(e)))?;
    fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))?;

    config
        .seeds
        .par_iter()
        .map(|&seed| {
            let replicate = run_replicate(config, seed)?;
            write_replicate(config, &replicate, &seed_dir(out, seed))?;
            Ok(replicate)
        })
        .collect()
}

/// Per-trial mean performance of two output trees.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub trials: Vec<usize>,
    pub mean_perf_a: Vec<f64>,
    pub mean_perf_b: Vec<f64>,
    pub seeds_a: usize,
    pub seeds_b: usize,
}

impl Comparison {
    /// `mean_a - mean_b` at the last common trial.
    pub fn final_difference(&self) -> f64 {
        self.mean_perf_a.last().unwrap_or(&0.0) - self.mean_perf_b.last().unwrap_or(&0.0)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "trial,mean_perf_a,mean_perf_b,difference")?;
        for ((t, a), b) in self.trials.iter().zip(&self.mean_perf_a).zip(&self.mean_perf_b) {
            writeln!(w, "{t},{a},{b},{}", a - b)?;
        }
        Ok(())
    }
}

/// Reads `seed_*/metrics.csv` under `dir`, sorted by seed.
fn read_run(dir: &Path) -> Result<Vec<(u64, Vec<MetricRow>)>> {
    let entries = fs::read_dir(dir)
        .map_err(|e| Error::Comparison(format!("cannot read {}: {e}", dir.display())))?;
    let mut runs = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::Comparison(e.to_string()))?;
        let name = entry.file_name();
        let Some(seed) = name
            .to_str()
            .and_then(|n| n.strip_prefix("seed_"))
            .and_then(|s| s.parse::<u64>().ok())
        else {
            continue;
        };
        let path = entry.path().join(METRICS_FILE);
        if !path.is_file() {
            return Err(Error::Comparison(format!("missing {}", path.display())));
        }
        let rows = read_metrics(&path).map_err(|e| Error::Comparison(e.to_string()))?;
        runs.push((seed, rows));
    }
    if runs.is_empty() {
        return Err(Error::Comparison(format!(
            "no seed_*/{METRICS_FILE} under {}",
            dir.display()
        )));
    }
    runs.sort_by_key(|r| r.0);
    Ok(runs)
}

fn mean_curve(runs: &[(u64, Vec<MetricRow>)], dir: &Path) -> Result<(Vec<usize>, Vec<f64>)> {
    let trials: Vec<usize> = runs[0].1.iter().map(|r| r.trial).collect();
    for (seed, rows) in runs {
        if rows.iter().map(|r| r.trial).ne(trials.iter().copied()) {
            return Err(Error::Comparison(format!(
                "seed {seed} in {} has a different evaluation schedule",
                dir.display()
            )));
        }
    }
    let means = (0..trials.len())
        .map(|i| runs.iter().map(|(_, rows)| rows[i].perf).sum::<f64>() / runs.len() as f64)
        .collect();
    Ok((trials, means))
}

pub fn compare_runs(dir_a: &Path, dir_b: &Path) -> Result<Comparison> {
    let a = read_run(dir_a)?;
    let b = read_run(dir_b)?;
    let (trials, mean_perf_a) = mean_curve(&a, dir_a)?;
    let (trials_b, mean_perf_b) = mean_curve(&b, dir_b)?;
    if trials != trials_b {
        return Err(Error::Comparison("evaluation schedules differ".into()));
    }
    Ok(Comparison {
        trials,
        mean_perf_a,
        mean_perf_b,
        seeds_a: a.len(),
        seeds_b: b.len(),
    })
}

/// Finds `config.json` next to a dump or one directory up.
pub fn config_for_dump(dump: &Path) -> Result<RunConfig> {
    let dir = dump.parent().unwrap_or(Path::new("."));
    let candidates = [dir.join(CONFIG_FILE), dir.join("..").join(CONFIG_FILE)];
    let path = candidates.iter().find(|p| p.is_file()).ok_or_else(|| {
        Error::parse(dump, format!("no {CONFIG_FILE} beside the dump or in its parent"))
    })?;
    ConfigFile::load(path)?.resolve(Path::new(""))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReplayResult {
    pub index: usize,
    pub matched: bool,
}

/// Re-executes the policies of a dump and compares the outcomes bit for bit.
pub struct Replayer {
    repertoire: Repertoire,
    env: SimEnvironment,
}

impl Replayer {
    pub fn open(dump: &Path) -> Result<Self> {
        let config = config_for_dump(dump)?;
        let file = File::open(dump).map_err(|e| Error::io(dump, e))?;
        let repertoire = Repertoire::read_csv(std::io::BufReader::new(file), dump)?;
        let env = environment_for(&config);
        if repertoire.outcome_dim() != env.outcome_dim() || repertoire.policy_dim() != env.policy_dim()
        {
            return Err(Error::parse(dump, "dump dimensions do not match its config"));
        }
        Ok(Replayer { repertoire, env })
    }

    pub fn len(&self) -> usize {
        self.repertoire.len()
    }

    pub fn is_empty(&self) -> bool {
        self.repertoire.is_empty()
    }

    pub fn replay(&mut self, index: usize) -> Result<ReplayResult> {
        if index >= self.repertoire.len() {
            return Err(Error::InsufficientData {
                needed: index + 1,
                available: self.repertoire.len(),
            });
        }
        let outcome = self.env.execute(self.repertoire.policy(index))?;
        Ok(ReplayResult {
            index,
            matched: outcome == self.repertoire.outcome(index),
        })
    }

    pub fn replay_all(&mut self) -> Result<Vec<ReplayResult>> {
        (0..self.len()).map(|i| self.replay(i)).collect()
    }
}

pub fn replay(dump: &Path, index: usize) -> Result<ReplayResult> {
    Replayer::open(dump)?.replay(index)
}
