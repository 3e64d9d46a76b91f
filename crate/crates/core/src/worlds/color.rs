//! Touching a disk recolours it by where it was hit.

use std::f64::consts::TAU;

use crate::camera::Rgb;
use crate::geometry::{segment_circle_hit, Contact, Point};
use crate::worlds::{CENTER, OBJECT_RADIUS};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Touch {
    /// Boundary point that was hit, or the centre when nothing was hit.
    pub point: Point,
    pub color: Rgb,
    pub touched: bool,
}

/// Hue of a boundary point: its polar angle around the centre, in turns.
pub fn hue_at(point: Point) -> f64 {
    let phi = (point.y - CENTER.y).atan2(point.x - CENTER.x);
    (phi / TAU).rem_euclid(1.0)
}

/// Straight sweep `(x1, y1) → (x2, y2)`, clamped to the square. Only a
/// crossing of the boundary from outside counts; a sweep that starts
/// inside the disk leaves it red.
pub fn color_execute(policy: [f64; 4]) -> Touch {
    let p1 = Point::new(policy[0], policy[1]).clamp_unit();
    let p2 = Point::new(policy[2], policy[3]).clamp_unit();
    match segment_circle_hit(p1, p2, CENTER, OBJECT_RADIUS) {
        Contact::Boundary(p) => Touch {
            point: p,
            color: Rgb::from_hue(hue_at(p)),
            touched: true,
        },
        Contact::Inside | Contact::Miss => Touch {
            point: CENTER,
            color: Rgb::RED,
            touched: false,
        },
    }
}
