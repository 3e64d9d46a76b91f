//! The outer trial loop shared by every exploration algorithm.

use rand::RngCore;

use crate::environment::Environment;
use crate::error::Result;
use crate::repertoire::Repertoire;
use crate::rng::training_rng;

/// One trial of an exploration algorithm: pick a policy, run it, store the
/// pair. Implementations grow the repertoire by exactly one.
pub trait Explorer {
    fn step(&mut self, rep: &mut Repertoire, env: &mut dyn Environment, rng: &mut dyn RngCore)
        -> Result<()>;
}

/// Final repertoire plus whatever the hook returned at each scheduled trial.
#[derive(Clone, Debug)]
pub struct RunOutput<M> {
    pub repertoire: Repertoire,
    pub samples: Vec<(usize, M)>,
}

/// Seeds the repertoire with the environment's seed pair, runs `trials`
/// steps from the training stream of `rng_seed`, and calls `hook` after
/// trial `t` for every `t` in `schedule` (`t = 0` is the seed alone).
///
/// The hook only sees the environment by shared reference, so evaluation
/// cannot disturb the training trajectory.
pub fn explore<E, X, M>(
    explorer: &mut X,
    env: &mut E,
    trials: usize,
    rng_seed: u64,
    schedule: &[usize],
    mut hook: impl FnMut(usize, &Repertoire, &E) -> Result<M>,
) -> Result<RunOutput<M>>
where
    E: Environment,
    X: Explorer + ?Sized,
{
    let mut rng = training_rng(rng_seed);
    let seed_policy = env.seed_policy();
    let seed_outcome = env.execute(&seed_policy)?;
    let mut rep = Repertoire::seeded(seed_outcome, seed_policy);
    let mut samples = Vec::new();
    let due = |t: usize| schedule.contains(&t);
    if due(0) {
        samples.push((0, hook(0, &rep, env)?));
    }
    for t in 1..=trials {
        explorer.step(&mut rep, env, &mut rng)?;
        debug_assert_eq!(rep.len(), t + 1);
        if due(t) {
            samples.push((t, hook(t, &rep, env)?));
        }
    }
    Ok(RunOutput {
        repertoire: rep,
        samples,
    })
}
