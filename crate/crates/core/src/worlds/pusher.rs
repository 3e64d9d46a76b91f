//! Pushing a disk by sweeping an effector through it.
//!
//! The object starts at the workspace centre every trial. If the effector
//! path touches it, the object ends up where the path ends; otherwise it
//! stays put.

use crate::dmp::{dmp_rollout, DmpIntegrationSpec, DmpParams, BASIS_PER_AXIS};
use crate::error::Result;
use crate::geometry::{segment_circle_hit, Point};
use crate::worlds::{CENTER, OBJECT_RADIUS};

/// Final object position and whether the effector touched it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Push {
    pub object: Point,
    pub touched: bool,
}

/// Straight sweep `(x1, y1) → (x2, y2)`; coordinates clamped to the square.
pub fn pusher_linear_execute(policy: [f64; 4]) -> Push {
    let p1 = Point::new(policy[0], policy[1]).clamp_unit();
    let p2 = Point::new(policy[2], policy[3]).clamp_unit();
    if segment_circle_hit(p1, p2, CENTER, OBJECT_RADIUS).is_hit() {
        Push {
            object: p2,
            touched: true,
        }
    } else {
        Push {
            object: CENTER,
            touched: false,
        }
    }
}

/// A DMP-driven effector starting from a fixed point.
#[derive(Clone, Debug, PartialEq)]
pub struct DmpPusher {
    pub start: Point,
    pub integration: DmpIntegrationSpec,
}

impl Default for DmpPusher {
    fn default() -> Self {
        DmpPusher {
            start: Point::new(0.5, 0.1),
            integration: DmpIntegrationSpec::default(),
        }
    }
}

impl DmpPusher {
    pub const POLICY_DIM: usize = 2 * BASIS_PER_AXIS + 2;

    /// Policy layout: 5 x-weights, 5 y-weights, goal x, goal y. The goal is
    /// clamped to the square.
    pub fn params(&self, policy: &[f64]) -> DmpParams {
        let mut weights_x = [0.0; BASIS_PER_AXIS];
        let mut weights_y = [0.0; BASIS_PER_AXIS];
        weights_x.copy_from_slice(&policy[..BASIS_PER_AXIS]);
        weights_y.copy_from_slice(&policy[BASIS_PER_AXIS..2 * BASIS_PER_AXIS]);
        DmpParams {
            weights_x,
            weights_y,
            goal: Point::new(policy[10], policy[11]).clamp_unit(),
            start: self.start,
        }
    }

    pub fn path(&self, policy: &[f64]) -> Result<Vec<Point>> {
        dmp_rollout(&self.params(policy), &self.integration)
    }

    /// Any contact teleports the object to the final path point, clamped to
    /// the square.
    pub fn execute(&self, policy: &[f64]) -> Result<Push> {
        let path = self.path(policy)?;
        let touched = path
            .windows(2)
            .any(|w| segment_circle_hit(w[0], w[1], CENTER, OBJECT_RADIUS).is_hit());
        Ok(if touched {
            Push {
                object: path[path.len() - 1].clamp_unit(),
                touched,
            }
        } else {
            Push {
                object: CENTER,
                touched,
            }
        })
    }
}
