//! Skill babbling baseline.
//!
//! A simplified goal-babbling loop: pick a known outcome uniformly, jitter
//! it in sensor space to get a target, map the target to a policy with a
//! distance-weighted nearest-neighbour inverse model, add policy noise, and
//! run it. In image spaces the jittered target is almost never a picture
//! the world can produce, which is the failure mode AGME avoids.

use rand::{Rng, RngCore};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::agme::perturb;
use crate::environment::Environment;
use crate::error::{check_dim, Error, Result};
use crate::explore::{explore, Explorer, RunOutput};
use crate::repertoire::Repertoire;
use crate::sensor::{PolicyParams, SensorVector};

pub const DEFAULT_SIGMA_BUBBLE: f64 = 0.05;
pub const DEFAULT_K_INVERSE: usize = 3;

/// Added to neighbour distances before inverting them into weights.
const WEIGHT_EPS: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BabblingConfig {
    /// Standard deviation of the sensor-space jitter, per dimension.
    pub sigma_bubble: f64,
    pub sigma_policy: Vec<f64>,
    pub k_inverse: usize,
    pub trials: usize,
    pub rng_seed: u64,
}

impl BabblingConfig {
    pub fn new(sigma_policy: Vec<f64>, trials: usize, rng_seed: u64) -> Self {
        BabblingConfig {
            sigma_bubble: DEFAULT_SIGMA_BUBBLE,
            sigma_policy,
            k_inverse: DEFAULT_K_INVERSE,
            trials,
            rng_seed,
        }
    }

    pub fn validate(&self, policy_dim: usize) -> Result<()> {
        if self.k_inverse == 0 {
            return Err(Error::config("babbling.k_inverse", "must be at least 1"));
        }
        if !(self.sigma_bubble.is_finite() && self.sigma_bubble >= 0.0) {
            return Err(Error::config(
                "babbling.sigma_bubble",
                "must be finite and non-negative",
            ));
        }
        if self.sigma_policy.len() != policy_dim {
            return Err(Error::config(
                "babbling.sigma_policy",
                format!(
                    "has {} entries but the policy has {policy_dim} dimensions",
                    self.sigma_policy.len()
                ),
            ));
        }
        if !self.sigma_policy.iter().all(|s| s.is_finite() && *s >= 0.0) {
            return Err(Error::config(
                "babbling.sigma_policy",
                "entries must be finite and non-negative",
            ));
        }
        Ok(())
    }
}

/// Inverse-distance weighted mean of the policies of the `k` outcomes
/// nearest to `target`. An exact match returns its policy unchanged.
pub fn inverse_model(rep: &Repertoire, target: &SensorVector, k: usize) -> Result<PolicyParams> {
    let nearest = rep.k_nearest(target, k.max(1))?;
    if nearest[0].1 == 0.0 {
        return Ok(rep.policy(nearest[0].0).clone());
    }
    let weights: Vec<f64> = nearest.iter().map(|&(_, d)| 1.0 / (d + WEIGHT_EPS)).collect();
    let total: f64 = weights.iter().sum();
    let mut out = vec![0.0; rep.policy_dim()];
    for (&(i, _), w) in nearest.iter().zip(&weights) {
        for (o, p) in out.iter_mut().zip(rep.policy(i).values()) {
            *o += w / total * p;
        }
    }
    Ok(PolicyParams::new(out))
}

#[derive(Clone, Debug)]
pub struct SkillBabbling {
    config: BabblingConfig,
}

impl SkillBabbling {
    pub fn new(config: BabblingConfig) -> Self {
        SkillBabbling { config }
    }

    pub fn config(&self) -> &BabblingConfig {
        &self.config
    }
}

impl Explorer for SkillBabbling {
    fn step(
        &mut self,
        rep: &mut Repertoire,
        env: &mut dyn Environment,
        rng: &mut dyn RngCore,
    ) -> Result<()> {
        check_dim(env.policy_dim(), self.config.sigma_policy.len())?;
        if rep.is_empty() {
            return Err(Error::EmptyRepertoire);
        }
        let anchor = rng.random_range(0..rep.len());
        let sigma = self.config.sigma_bubble;
        let target = SensorVector::new(
            rep.outcome(anchor)
                .values()
                .iter()
                .map(|v| {
                    let z: f64 = StandardNormal.sample(rng);
                    v + sigma * z
                })
                .collect(),
        );
        let guess = inverse_model(rep, &target, self.config.k_inverse)?;
        let policy = perturb(&guess, &self.config.sigma_policy, rng);
        let outcome = env.execute(&policy)?;
        rep.add(outcome, policy)
    }
}

/// One babbling trial on `rep`.
pub fn babbling_step(
    rep: &mut Repertoire,
    env: &mut dyn Environment,
    config: &BabblingConfig,
    rng: &mut dyn RngCore,
) -> Result<()> {
    SkillBabbling::new(config.clone()).step(rep, env, rng)
}

/// Seeds from the environment and runs `config.trials` babbling trials,
/// calling `hook` at each trial number in `schedule`.
pub fn babbling_run<E: Environment, M>(
    env: &mut E,
    config: &BabblingConfig,
    schedule: &[usize],
    hook: impl FnMut(usize, &Repertoire, &E) -> Result<M>,
) -> Result<RunOutput<M>> {
    config.validate(env.policy_dim())?;
    let mut babbling = SkillBabbling::new(config.clone());
    explore(&mut babbling, env, config.trials, config.rng_seed, schedule, hook)
}
