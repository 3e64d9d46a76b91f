//! The parameterized skill: goal in, policy out.

use crate::error::Result;
use crate::repertoire::Repertoire;
use crate::sensor::{PolicyParams, SensorVector};

pub trait Skill {
    fn query(&self, goal: &SensorVector) -> Result<PolicyParams>;
}

/// Nearest-neighbour retrieval over a repertoire: the policy of the stored
/// outcome closest to the goal.
#[derive(Clone, Copy, Debug)]
pub struct ParameterizedSkill<'r> {
    repertoire: &'r Repertoire,
}

impl<'r> ParameterizedSkill<'r> {
    pub fn new(repertoire: &'r Repertoire) -> Self {
        ParameterizedSkill { repertoire }
    }

    pub fn repertoire(&self) -> &'r Repertoire {
        self.repertoire
    }
}

impl Skill for ParameterizedSkill<'_> {
    fn query(&self, goal: &SensorVector) -> Result<PolicyParams> {
        let i = self.repertoire.nearest(goal)?;
        Ok(self.repertoire.policy(i).clone())
    }
}

impl<F> Skill for F
where
    F: Fn(&SensorVector) -> Result<PolicyParams>,
{
    fn query(&self, goal: &SensorVector) -> Result<PolicyParams> {
        self(goal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::{Environment, ObservationMode};
    use crate::error::Error;
    use crate::worlds::{SimEnvironment, WorldKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_pair_always_returned() {
        let rep = Repertoire::seeded([0.2, 0.2].into(), [7.0].into());
        let skill = ParameterizedSkill::new(&rep);
        for g in [[0.0, 0.0], [0.9, 0.1], [0.2, 0.2]] {
            assert_eq!(skill.query(&g.into()).unwrap().values(), &[7.0]);
        }
    }

    #[test]
    fn empty_repertoire_is_an_error() {
        let rep = Repertoire::new(2, 1);
        assert!(matches!(
            ParameterizedSkill::new(&rep).query(&[0.0, 0.0].into()),
            Err(Error::EmptyRepertoire)
        ));
    }

    #[test]
    fn matches_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut rep = Repertoire::new(2, 1);
        let mut pts = Vec::new();
        for i in 0..500 {
            let p = [rng.random::<f64>(), rng.random::<f64>()];
            rep.add(p.into(), [i as f64].into()).unwrap();
            pts.push(p);
        }
        let skill = ParameterizedSkill::new(&rep);
        for _ in 0..100 {
            let g = [rng.random::<f64>(), rng.random::<f64>()];
            let mut best = 0;
            let d = |p: [f64; 2]| (p[0] - g[0]).powi(2) + (p[1] - g[1]).powi(2);
            for (i, p) in pts.iter().enumerate() {
                if d(*p) < d(pts[best]) {
                    best = i;
                }
            }
            assert_eq!(skill.query(&g.into()).unwrap().values(), &[best as f64]);
        }
    }

    #[test]
    fn stored_outcomes_are_reproduced() {
        let mut env = SimEnvironment::new(WorldKind::Arm, ObservationMode::Image);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut rep = Repertoire::new(env.outcome_dim(), env.policy_dim());
        for _ in 0..40 {
            let g = env.sample_test_goal(&mut rng).unwrap();
            rep.add(g.goal, g.policy).unwrap();
        }
        let skill = ParameterizedSkill::new(&rep);
        for i in 0..rep.len() {
            let o = rep.outcome(i);
            let p = skill.query(&o).unwrap();
            assert_eq!(env.execute(&p).unwrap(), o);
        }
    }
}
