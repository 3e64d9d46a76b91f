//! Active goal manifold exploration.
//!
//! Each trial picks the basis goal from the neighbour graph of everything
//! achieved so far, perturbs the basis goal's policy with Gaussian noise,
//! runs it, and stores the new pair. No goal is ever sampled from sensor
//! space, so the loop only ever visits achievable outcomes.

use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::environment::Environment;
use crate::error::{check_dim, Error, Result};
use crate::explore::{explore, Explorer, RunOutput};
use crate::manifold::{ManifoldGraph, DEFAULT_K};
use crate::repertoire::Repertoire;
use crate::sensor::PolicyParams;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgmeConfig {
    pub k: usize,
    /// Per-dimension standard deviation of the policy noise.
    pub sigma: Vec<f64>,
    pub trials: usize,
    pub rng_seed: u64,
}

impl AgmeConfig {
    pub fn new(sigma: Vec<f64>, trials: usize, rng_seed: u64) -> Self {
        AgmeConfig {
            k: DEFAULT_K,
            sigma,
            trials,
            rng_seed,
        }
    }

    pub fn validate(&self, policy_dim: usize) -> Result<()> {
        if self.k == 0 {
            return Err(Error::config("agme.k", "must be at least 1"));
        }
        if self.sigma.len() != policy_dim {
            return Err(Error::config(
                "agme.sigma",
                format!(
                    "has {} entries but the policy has {policy_dim} dimensions",
                    self.sigma.len()
                ),
            ));
        }
        if !self.sigma.iter().all(|s| s.is_finite() && *s >= 0.0) {
            return Err(Error::config("agme.sigma", "entries must be finite and non-negative"));
        }
        Ok(())
    }
}

/// Adds `sigma[i] * N(0, 1)` to every parameter.
pub(crate) fn perturb(policy: &PolicyParams, sigma: &[f64], rng: &mut dyn RngCore) -> PolicyParams {
    PolicyParams::new(
        policy
            .values()
            .iter()
            .zip(sigma)
            .map(|(p, s)| {
                let z: f64 = StandardNormal.sample(rng);
                p + s * z
            })
            .collect(),
    )
}

/// AGME with a memoised neighbour graph carried across trials.
#[derive(Clone, Debug)]
pub struct Agme {
    config: AgmeConfig,
    graph: ManifoldGraph,
}

impl Agme {
    pub fn new(config: AgmeConfig) -> Self {
        let graph = ManifoldGraph::new(config.k.max(1));
        Agme { config, graph }
    }

    pub fn config(&self) -> &AgmeConfig {
        &self.config
    }

    /// Basis goal of the current repertoire.
    pub fn basis(&mut self, rep: &Repertoire) -> Result<usize> {
        self.graph.sync(rep);
        self.graph.basis()
    }
}

impl Explorer for Agme {
    fn step(
        &mut self,
        rep: &mut Repertoire,
        env: &mut dyn Environment,
        rng: &mut dyn RngCore,
    ) -> Result<()> {
        check_dim(env.policy_dim(), self.config.sigma.len())?;
        let basis = self.basis(rep)?;
        let policy = perturb(rep.policy(basis), &self.config.sigma, rng);
        let outcome = env.execute(&policy)?;
        rep.add(outcome, policy)
    }
}

/// One AGME trial on `rep`, building the neighbour graph from scratch.
pub fn agme_step(
    rep: &mut Repertoire,
    env: &mut dyn Environment,
    config: &AgmeConfig,
    rng: &mut dyn RngCore,
) -> Result<()> {
    Agme::new(config.clone()).step(rep, env, rng)
}

/// Seeds from the environment and runs `config.trials` AGME trials, calling
/// `hook` at each trial number in `schedule`.
pub fn agme_run<E: Environment, M>(
    env: &mut E,
    config: &AgmeConfig,
    schedule: &[usize],
    hook: impl FnMut(usize, &Repertoire, &E) -> Result<M>,
) -> Result<RunOutput<M>> {
    config.validate(env.policy_dim())?;
    let mut agme = Agme::new(config.clone());
    explore(&mut agme, env, config.trials, config.rng_seed, schedule, hook)
}
