//! Success-rate performance and coverage metrics.
//!
//! Performance is the fraction of a fixed set of test goals that a skill
//! reaches. Success is judged on ground-truth states even when the goals
//! are images, so curves from both observation modes share a scale.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::environment::{Environment, TestGoal};
use crate::error::{check_dim, Error, Result};
use crate::geometry::Point;
use crate::repertoire::Repertoire;
use crate::rng::evaluation_rng;
use crate::sensor::{squared_distance, PolicyParams, SensorVector};
use crate::skill::Skill;

pub const DEFAULT_N_GOALS: usize = 100;
pub const DEFAULT_EPSILON: f64 = 0.05;
pub const DEFAULT_EVAL_EVERY: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub n_goals: usize,
    pub epsilon: f64,
    pub eval_rng_seed: u64,
    /// Trial numbers after which to evaluate.
    pub schedule: Vec<usize>,
}

impl EvalConfig {
    /// Defaults with evaluations at `0, every, 2·every, …` and at `trials`.
    pub fn every(every: usize, trials: usize, eval_rng_seed: u64) -> Self {
        EvalConfig {
            n_goals: DEFAULT_N_GOALS,
            epsilon: DEFAULT_EPSILON,
            eval_rng_seed,
            schedule: regular_schedule(every, trials),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_goals == 0 {
            return Err(Error::config("eval.n_goals", "must be at least 1"));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::config("eval.epsilon", "must be positive"));
        }
        Ok(())
    }
}

/// `0, every, 2·every, …` up to `trials`, plus `trials` itself.
pub fn regular_schedule(every: usize, trials: usize) -> Vec<usize> {
    let mut s: Vec<usize> = (0..=trials).step_by(every.max(1)).collect();
    if s.last() != Some(&trials) {
        s.push(trials);
    }
    s
}

/// 1 when the states are within `epsilon` (inclusive), else 0.
pub fn dist_indicator(goal_state: &[f64], achieved_state: &[f64], epsilon: f64) -> Result<u8> {
    check_dim(goal_state.len(), achieved_state.len())?;
    Ok(u8::from(squared_distance(goal_state, achieved_state).sqrt() <= epsilon))
}

/// `n` test goals from the evaluation stream of `seed`.
pub fn sample_goal_set(env: &dyn Environment, n: usize, seed: u64) -> Result<Vec<TestGoal>> {
    let mut rng = evaluation_rng(seed);
    (0..n).map(|_| env.sample_test_goal(&mut rng)).collect()
}

/// Success rate when goal `i` is attempted with `policy_for(i, goal)`.
///
/// Goals are attempted in parallel; only pure ground-truth simulation is
/// used, so nothing is written to the environment.
pub fn success_rate<E, F>(env: &E, goals: &[TestGoal], epsilon: f64, policy_for: F) -> Result<f64>
where
    E: Environment + Sync + ?Sized,
    F: Fn(usize, &SensorVector) -> Result<PolicyParams> + Sync,
{
    if goals.is_empty() {
        return Err(Error::InsufficientData {
            needed: 1,
            available: 0,
        });
    }
    let hits = goals
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let policy = policy_for(i, &g.goal)?;
            let reached = env.ground_truth(&policy)?;
            dist_indicator(&g.state.to_array(), &reached.to_array(), epsilon)
        })
        .collect::<Result<Vec<u8>>>()?;
    let total: usize = hits.iter().map(|&h| h as usize).sum();
    Ok(total as f64 / goals.len() as f64)
}

/// Success rate of `skill` on a fixed goal set.
pub fn perf_on_goals<E, S>(skill: &S, env: &E, goals: &[TestGoal], epsilon: f64) -> Result<f64>
where
    E: Environment + Sync + ?Sized,
    S: Skill + Sync + ?Sized,
{
    success_rate(env, goals, epsilon, |_, g| skill.query(g))
}

/// Success rate of `skill` on a fresh goal set drawn from `config`.
pub fn perf<E, S>(skill: &S, env: &E, config: &EvalConfig) -> Result<f64>
where
    E: Environment + Sync,
    S: Skill + Sync + ?Sized,
{
    config.validate()?;
    let goals = sample_goal_set(env, config.n_goals, config.eval_rng_seed)?;
    perf_on_goals(skill, env, &goals, config.epsilon)
}

/// Success rate of the skill that answers every goal with the policy that
/// generated it.
pub fn oracle_perf<E>(env: &E, goals: &[TestGoal], epsilon: f64) -> Result<f64>
where
    E: Environment + Sync + ?Sized,
{
    success_rate(env, goals, epsilon, |i, _| Ok(goals[i].policy.clone()))
}

/// Mean pairwise distance among `states`.
pub fn dispersion_of_states(states: &[Point]) -> Result<f64> {
    let n = states.len();
    if n < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            available: n,
        });
    }
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            sum += states[i].distance(states[j]);
        }
    }
    Ok(sum / (n * (n - 1) / 2) as f64)
}

/// Ground-truth states of every stored policy, re-simulated.
pub fn ground_truth_states<E>(rep: &Repertoire, env: &E) -> Result<Vec<Point>>
where
    E: Environment + ?Sized,
{
    rep.policies().iter().map(|p| env.ground_truth(p)).collect()
}

/// Mean pairwise distance among the ground-truth states of the repertoire.
pub fn dispersion<E>(rep: &Repertoire, env: &E) -> Result<f64>
where
    E: Environment + ?Sized,
{
    dispersion_of_states(&ground_truth_states(rep, env)?)
}
