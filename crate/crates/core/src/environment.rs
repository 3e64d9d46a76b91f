//! The contract every simulated world satisfies.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::Point;
use crate::sensor::{PolicyParams, SensorVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservationMode {
    /// The low-dimensional state itself (2-D in every bundled world).
    GroundTruth,
    /// A rendered 50×50 RGB frame.
    Image,
}

/// A goal drawn from the achievable set, together with the state it
/// represents and a policy known to produce it.
#[derive(Clone, Debug, PartialEq)]
pub struct TestGoal {
    pub goal: SensorVector,
    pub state: Point,
    pub policy: PolicyParams,
}

/// Policy in, outcome out.
///
/// `execute` must be deterministic: equal policies give bit-identical
/// outcomes. Every execution starts from a reset scene.
pub trait Environment {
    fn policy_dim(&self) -> usize;

    fn outcome_dim(&self) -> usize;

    fn observation_mode(&self) -> ObservationMode;

    fn execute(&mut self, policy: &PolicyParams) -> Result<SensorVector>;

    /// Ground-truth state reached by the most recent `execute`.
    fn ground_truth_of_last(&self) -> Option<Point>;

    /// Ground-truth state `policy` would reach; never touches `last`.
    fn ground_truth(&self, policy: &PolicyParams) -> Result<Point>;

    fn sample_test_goal(&self, rng: &mut dyn RngCore) -> Result<TestGoal>;

    fn seed_policy(&self) -> PolicyParams;
}
