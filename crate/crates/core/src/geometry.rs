//! Planar points and the segment/circle contact test.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm_squared().sqrt()
    }

    pub fn clamp_unit(self) -> Point {
        Point::new(self.x.clamp(0.0, 1.0), self.y.clamp(0.0, 1.0))
    }

    pub fn to_array(self) -> [f64; 2] {
        [self.x, self.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// Result of sweeping a segment against a circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Contact {
    Miss,
    /// The segment starts strictly inside the circle.
    Inside,
    /// First boundary crossing, measured from the segment start.
    Boundary(Point),
}

impl Contact {
    pub fn is_hit(&self) -> bool {
        !matches!(self, Contact::Miss)
    }
}

/// Segments passing this close to a circle count as touching it.
pub const CONTACT_TOLERANCE: f64 = 1e-6;

/// First contact of the segment `p1 → p2` with the circle boundary.
///
/// Tangency counts as a hit, and so does a segment that comes within
/// [`CONTACT_TOLERANCE`] of the circle without crossing it; such a grazing
/// contact is reported at the boundary point nearest to the segment. A
/// zero-length segment is a hit only when it lies inside, on or grazing the
/// circle.
pub fn segment_circle_hit(p1: Point, p2: Point, center: Point, radius: f64) -> Contact {
    let r2 = radius * radius;
    let w = p1 - center;
    let start2 = w.norm_squared();
    if start2 < r2 {
        return Contact::Inside;
    }
    if start2 == r2 {
        return Contact::Boundary(p1);
    }
    let d = p2 - p1;
    let a = d.norm_squared();
    // parameter of the point on the carrier line closest to the center
    let t_mid = if a == 0.0 { 0.0 } else { -w.dot(d) / a };
    if a > 0.0 {
        let h2 = (p1 + d * t_mid - center).norm_squared();
        if h2 <= r2 {
            let t0 = t_mid - ((r2 - h2) / a).sqrt();
            if (0.0..=1.0).contains(&t0) {
                return Contact::Boundary(p1 + d * t0);
            }
        }
    }
    let nearest = p1 + d * t_mid.clamp(0.0, 1.0);
    let gap = nearest.distance(center);
    if gap <= radius + CONTACT_TOLERANCE {
        Contact::Boundary(center + (nearest - center) * (radius / gap))
    } else {
        Contact::Miss
    }
}
