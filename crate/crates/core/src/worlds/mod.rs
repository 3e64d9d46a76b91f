//! The four simulated worlds and the environment wrapper that observes them
//! either as 2-D ground truth or through the camera.
//!
//! Everything lives in the unit square with the object (or arm base) at its
//! centre. Out-of-range policy parameters are clamped at execution so any
//! perturbed policy stays executable.

mod arm;
mod color;
mod pusher;

use std::f64::consts::TAU;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::camera::{render_scene, Rgb, Scene, IMAGE_LEN};
use crate::environment::{Environment, ObservationMode, TestGoal};
use crate::error::{check_dim, Error, Result};
use crate::geometry::Point;
use crate::sensor::{PolicyParams, SensorVector};

pub use arm::{arm_fk, ArmSpec};
pub use color::{color_execute, hue_at, Touch};
pub use pusher::{pusher_linear_execute, DmpPusher, Push};

pub const CENTER: Point = Point::new(0.5, 0.5);
pub const OBJECT_RADIUS: f64 = 0.1;

/// Rejection budget for the DMP test-goal sampler.
pub const DMP_SAMPLER_ATTEMPTS: usize = 10_000;
/// Range of DMP weights drawn by the test-goal sampler.
pub const DMP_SAMPLER_WEIGHT: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorldKind {
    Arm,
    PusherLinear,
    PusherDmp,
    Color,
}

impl WorldKind {
    pub const ALL: [WorldKind; 4] = [
        WorldKind::Arm,
        WorldKind::PusherLinear,
        WorldKind::PusherDmp,
        WorldKind::Color,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WorldKind::Arm => "arm",
            WorldKind::PusherLinear => "pusher_linear",
            WorldKind::PusherDmp => "pusher_dmp",
            WorldKind::Color => "color",
        }
    }
}

impl std::str::FromStr for WorldKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        WorldKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown environment `{s}`"))
    }
}

/// End-of-trial picture plus the ground-truth state it encodes.
#[derive(Clone, Debug, PartialEq)]
pub struct Rollout {
    pub scene: Scene,
    pub state: Point,
    /// Whether the effector made contact (always true for the arm).
    pub touched: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum World {
    Arm(ArmSpec),
    PusherLinear,
    PusherDmp(DmpPusher),
    Color,
}

fn object_scene(center: Point, color: Rgb) -> Scene {
    Scene::Disk {
        center,
        radius: OBJECT_RADIUS,
        color,
    }
}

fn four(policy: &[f64]) -> [f64; 4] {
    [policy[0], policy[1], policy[2], policy[3]]
}

impl World {
    pub fn new(kind: WorldKind) -> World {
        match kind {
            WorldKind::Arm => World::Arm(ArmSpec::default()),
            WorldKind::PusherLinear => World::PusherLinear,
            WorldKind::PusherDmp => World::PusherDmp(DmpPusher::default()),
            WorldKind::Color => World::Color,
        }
    }

    pub fn kind(&self) -> WorldKind {
        match self {
            World::Arm(_) => WorldKind::Arm,
            World::PusherLinear => WorldKind::PusherLinear,
            World::PusherDmp(_) => WorldKind::PusherDmp,
            World::Color => WorldKind::Color,
        }
    }

    pub fn policy_dim(&self) -> usize {
        match self {
            World::Arm(_) => 3,
            World::PusherLinear | World::Color => 4,
            World::PusherDmp(_) => DmpPusher::POLICY_DIM,
        }
    }

    /// Runs one trial from the reset scene.
    pub fn simulate(&self, policy: &[f64]) -> Result<Rollout> {
        check_dim(self.policy_dim(), policy.len())?;
        if !policy.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("policy parameters"));
        }
        Ok(match self {
            World::Arm(spec) => {
                let joints = spec.points([policy[0], policy[1], policy[2]]);
                Rollout {
                    state: joints[3],
                    scene: Scene::Arm { joints },
                    touched: true,
                }
            }
            World::PusherLinear => {
                let push = pusher_linear_execute(four(policy));
                Rollout {
                    scene: object_scene(push.object, Rgb::RED),
                    state: push.object,
                    touched: push.touched,
                }
            }
            World::PusherDmp(pusher) => {
                let push = pusher.execute(policy)?;
                Rollout {
                    scene: object_scene(push.object, Rgb::RED),
                    state: push.object,
                    touched: push.touched,
                }
            }
            World::Color => {
                let touch = color_execute(four(policy));
                Rollout {
                    scene: object_scene(CENTER, touch.color),
                    state: touch.point,
                    touched: touch.touched,
                }
            }
        })
    }

    /// The fixed starting policy: straight arm; sweeps through (or into)
    /// the object; colour hit at angle 0.
    pub fn seed_policy(&self) -> PolicyParams {
        match self {
            World::Arm(_) => PolicyParams::from([0.0; 3]),
            World::PusherLinear => PolicyParams::from([0.3, 0.5, 0.7, 0.5]),
            World::PusherDmp(_) => {
                let mut p = vec![0.0; DmpPusher::POLICY_DIM];
                p[10] = 0.5;
                p[11] = 0.8;
                PolicyParams::new(p)
            }
            World::Color => PolicyParams::from([0.9, 0.5, 0.5, 0.5]),
        }
    }

    /// Default per-dimension exploration noise.
    pub fn default_sigma(&self) -> Vec<f64> {
        match self {
            World::Arm(_) => vec![0.15; 3],
            World::PusherLinear | World::Color => vec![0.1; 4],
            World::PusherDmp(_) => {
                let mut s = vec![15.0; 10];
                s.extend([0.1, 0.1]);
                s
            }
        }
    }

    /// A policy whose outcome is a uniformly drawn member of the achievable
    /// set (uniform over the sampler's construction, not over the set).
    pub fn sample_test_policy(&self, rng: &mut dyn RngCore) -> Result<PolicyParams> {
        match self {
            World::Arm(spec) => {
                let l = spec.joint_limit;
                Ok(PolicyParams::new(
                    (0..3).map(|_| rng.random_range(-l..=l)).collect(),
                ))
            }
            World::PusherLinear => {
                let end = Point::new(rng.random(), rng.random());
                // point reflection through the centre: the sweep crosses it
                let start = CENTER * 2.0 - end;
                Ok(PolicyParams::from([start.x, start.y, end.x, end.y]))
            }
            World::PusherDmp(pusher) => {
                for _ in 0..DMP_SAMPLER_ATTEMPTS {
                    let mut p: Vec<f64> = (0..10)
                        .map(|_| rng.random_range(-DMP_SAMPLER_WEIGHT..=DMP_SAMPLER_WEIGHT))
                        .collect();
                    p.push(rng.random());
                    p.push(rng.random());
                    if pusher.execute(&p)?.touched {
                        return Ok(PolicyParams::new(p));
                    }
                }
                Err(Error::SamplerExhausted(DMP_SAMPLER_ATTEMPTS))
            }
            World::Color => {
                let phi = rng.random_range(0.0..TAU);
                let start = CENTER + Point::new(phi.cos(), phi.sin()) * (4.0 * OBJECT_RADIUS);
                Ok(PolicyParams::from([start.x, start.y, CENTER.x, CENTER.y]))
            }
        }
    }
}

/// A world observed in a fixed mode.
#[derive(Clone, Debug)]
pub struct SimEnvironment {
    world: World,
    mode: ObservationMode,
    last: Option<Point>,
}

impl SimEnvironment {
    pub fn new(kind: WorldKind, mode: ObservationMode) -> Self {
        SimEnvironment {
            world: World::new(kind),
            mode,
            last: None,
        }
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    pub fn kind(&self) -> WorldKind {
        self.world.kind()
    }

    pub fn observe(&self, rollout: &Rollout) -> SensorVector {
        match self.mode {
            ObservationMode::GroundTruth => SensorVector::from(rollout.state.to_array()),
            ObservationMode::Image => render_scene(&rollout.scene),
        }
    }

    pub fn rollout(&self, policy: &PolicyParams) -> Result<Rollout> {
        self.world.simulate(policy.values())
    }
}

impl Environment for SimEnvironment {
    fn policy_dim(&self) -> usize {
        self.world.policy_dim()
    }

    fn outcome_dim(&self) -> usize {
        match self.mode {
            ObservationMode::GroundTruth => 2,
            ObservationMode::Image => IMAGE_LEN,
        }
    }

    fn observation_mode(&self) -> ObservationMode {
        self.mode
    }

    fn execute(&mut self, policy: &PolicyParams) -> Result<SensorVector> {
        let rollout = self.rollout(policy)?;
        self.last = Some(rollout.state);
        Ok(self.observe(&rollout))
    }

    fn ground_truth_of_last(&self) -> Option<Point> {
        self.last
    }

    fn ground_truth(&self, policy: &PolicyParams) -> Result<Point> {
        Ok(self.rollout(policy)?.state)
    }

    fn sample_test_goal(&self, rng: &mut dyn RngCore) -> Result<TestGoal> {
        let policy = self.world.sample_test_policy(rng)?;
        let rollout = self.rollout(&policy)?;
        Ok(TestGoal {
            goal: self.observe(&rollout),
            state: rollout.state,
            policy,
        })
    }

    fn seed_policy(&self) -> PolicyParams {
        self.world.seed_policy()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::segment_circle_hit;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn env(kind: WorldKind, mode: ObservationMode) -> SimEnvironment {
        SimEnvironment::new(kind, mode)
    }

    #[test]
    fn arm_observations() {
        let mut gt = env(WorldKind::Arm, ObservationMode::GroundTruth);
        let o = gt.execute(&PolicyParams::from([0.0; 3])).unwrap();
        assert!((o.values()[0] - 0.95).abs() < 1e-12 && o.values()[1] == 0.5);

        let mut img = env(WorldKind::Arm, ObservationMode::Image);
        let a = img.execute(&PolicyParams::from([0.0; 3])).unwrap();
        let b = img.execute(&PolicyParams::from([0.0; 3])).unwrap();
        assert_eq!(a.len(), 7500);
        assert_eq!(a, b);
        assert!(a.values().iter().all(|c| (0.0..=1.0).contains(c)));
    }

    #[test]
    fn policy_dimension_is_checked() {
        let mut e = env(WorldKind::PusherLinear, ObservationMode::GroundTruth);
        assert!(matches!(
            e.execute(&PolicyParams::from([0.0; 3])),
            Err(Error::Dimension { expected: 4, actual: 3 })
        ));
    }

    #[test]
    fn execution_is_deterministic_and_isolated() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for kind in WorldKind::ALL {
            for mode in [ObservationMode::GroundTruth, ObservationMode::Image] {
                let mut e = env(kind, mode);
                let seed = e.seed_policy();
                let first = e.execute(&seed).unwrap();
                // any number of other trials in between leaves no trace
                for _ in 0..5 {
                    let g = e.sample_test_goal(&mut rng).unwrap();
                    e.execute(&g.policy).unwrap();
                }
                let again = e.execute(&seed).unwrap();
                assert_eq!(first, again, "{kind:?} {mode:?}");
                assert_eq!(e.ground_truth_of_last(), Some(e.ground_truth(&seed).unwrap()));
            }
        }
    }

    #[test]
    fn test_goals_are_closed_under_execution() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for kind in WorldKind::ALL {
            for mode in [ObservationMode::GroundTruth, ObservationMode::Image] {
                let mut e = env(kind, mode);
                for _ in 0..20 {
                    let g = e.sample_test_goal(&mut rng).unwrap();
                    assert_eq!(e.execute(&g.policy).unwrap(), g.goal);
                    assert_eq!(e.ground_truth_of_last(), Some(g.state));
                }
            }
        }
    }

    #[test]
    fn linear_pusher_test_sweeps_always_hit() {
        let e = env(WorldKind::PusherLinear, ObservationMode::GroundTruth);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let p = e.world().sample_test_policy(&mut rng).unwrap();
            let v = p.values();
            let (a, b) = (Point::new(v[0], v[1]), Point::new(v[2], v[3]));
            // reflection oracle: the midpoint of the sweep is the centre
            assert!((a + b) * 0.5 == CENTER || ((a + b) * 0.5).distance(CENTER) < 1e-12);
            assert!(segment_circle_hit(a, b, CENTER, OBJECT_RADIUS).is_hit());
        }
    }

    #[test]
    fn color_test_states_lie_on_the_boundary() {
        let e = env(WorldKind::Color, ObservationMode::GroundTruth);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..2000 {
            let g = e.sample_test_goal(&mut rng).unwrap();
            assert!((g.state.distance(CENTER) - OBJECT_RADIUS).abs() < 1e-9);
        }
    }

    #[test]
    fn dmp_test_goals_touch_the_object() {
        let e = env(WorldKind::PusherDmp, ObservationMode::GroundTruth);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let p = e.world().sample_test_policy(&mut rng).unwrap();
            assert!(e.rollout(&p).unwrap().touched);
        }
    }

    #[test]
    fn seed_policies_touch_and_sigmas_fit() {
        for kind in WorldKind::ALL {
            let w = World::new(kind);
            assert!(w.simulate(w.seed_policy().values()).unwrap().touched, "{kind:?}");
            assert_eq!(w.default_sigma().len(), w.policy_dim());
            assert_eq!(w.seed_policy().len(), w.policy_dim());
        }
    }

    #[test]
    fn moved_disk_images_differ() {
        let mut e = env(WorldKind::PusherLinear, ObservationMode::Image);
        let home = e.execute(&PolicyParams::from([0.1, 0.1, 0.5, 0.5])).unwrap();
        let moved = e.execute(&PolicyParams::from([0.2, 0.2, 0.8, 0.8])).unwrap();
        let differing = home
            .values()
            .chunks(3)
            .zip(moved.values().chunks(3))
            .filter(|(a, b)| a != b)
            .count();
        assert!(differing >= 60, "{differing}");
    }

    #[test]
    fn recolored_disk_keeps_its_support() {
        let mut e = env(WorldKind::Color, ObservationMode::Image);
        let red = e.execute(&PolicyParams::from([1.0, 0.5, 0.5, 0.5])).unwrap();
        // hit from the left: angle 180°, hue 0.5, cyan
        let cyan = e.execute(&PolicyParams::from([0.0, 0.5, 0.5, 0.5])).unwrap();
        let white = [1.0, 1.0, 1.0];
        let mut differ = 0;
        for (a, b) in red.values().chunks(3).zip(cyan.values().chunks(3)) {
            assert_eq!(a == white, b == white);
            if a != white {
                assert_eq!(a, [1.0, 0.0, 0.0]);
                assert_eq!(b, [0.0, 1.0, 1.0]);
                differ += 1;
            }
        }
        assert!(differ > 60);
    }

    #[test]
    fn arm_images_separate_distinct_end_points() {
        let e = env(WorldKind::Arm, ObservationMode::Image);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..2000 {
            let a = e.sample_test_goal(&mut rng).unwrap();
            let b = e.sample_test_goal(&mut rng).unwrap();
            if a.state.distance(b.state) > 0.06 {
                assert_ne!(a.goal, b.goal);
            }
        }
    }
}
