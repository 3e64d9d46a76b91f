//! Planar three-link arm with its base at the workspace centre.

use std::f64::consts::FRAC_PI_3;

use crate::geometry::Point;
use crate::worlds::CENTER;

#[derive(Clone, Debug, PartialEq)]
pub struct ArmSpec {
    pub base: Point,
    pub link_lengths: [f64; 3],
    /// Symmetric limit on every joint, radians.
    pub joint_limit: f64,
}

impl Default for ArmSpec {
    fn default() -> Self {
        ArmSpec {
            base: CENTER,
            link_lengths: [0.15, 0.15, 0.15],
            joint_limit: FRAC_PI_3,
        }
    }
}

impl ArmSpec {
    pub fn clamp(&self, joints: [f64; 3]) -> [f64; 3] {
        joints.map(|q| q.clamp(-self.joint_limit, self.joint_limit))
    }

    /// Base, elbow, wrist and tip positions. Joint angles are relative; the
    /// first is measured from the +x axis.
    pub fn points(&self, joints: [f64; 3]) -> [Point; 4] {
        let joints = self.clamp(joints);
        let mut points = [self.base; 4];
        let mut heading = 0.0;
        for k in 0..3 {
            heading += joints[k];
            let link = Point::new(heading.cos(), heading.sin()) * self.link_lengths[k];
            points[k + 1] = points[k] + link;
        }
        points
    }

    pub fn reach(&self) -> f64 {
        self.link_lengths.iter().sum()
    }
}

/// End-point of the default arm; joints beyond ±60° are clamped.
pub fn arm_fk(joints: [f64; 3]) -> Point {
    ArmSpec::default().points(joints)[3]
}
