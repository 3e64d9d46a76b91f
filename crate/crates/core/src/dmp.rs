//! Discrete dynamic movement primitives in the plane.
//!
//! Each axis is a critically damped spring pulled toward the goal and pushed
//! by a phase-gated forcing term built from five Gaussian basis functions:
//!
//! ```text
//! s(t)  = exp(-alpha_s t)
//! f(s)  = s * Σ ψ_i(s) w_i / Σ ψ_i(s),   ψ_i(s) = exp(-h_i (s - c_i)^2)
//! y''   = alpha_z (beta_z (g - y) - y') + f(s)
//! ```
//!
//! integrated with explicit Euler from `y(0) = start`, `y'(0) = 0`. The
//! forcing term is not scaled by `g - y(0)`, so a weight has the same
//! effect whether or not the goal sits on top of the start.

use crate::error::{Error, Result};
use crate::geometry::Point;

pub const BASIS_PER_AXIS: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct DmpParams {
    pub weights_x: [f64; BASIS_PER_AXIS],
    pub weights_y: [f64; BASIS_PER_AXIS],
    pub goal: Point,
    pub start: Point,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DmpIntegrationSpec {
    pub alpha_z: f64,
    pub beta_z: f64,
    pub alpha_s: f64,
    pub steps: usize,
    pub dt: f64,
    pub centers: [f64; BASIS_PER_AXIS],
    pub widths: [f64; BASIS_PER_AXIS],
}

/// Value two neighbouring basis functions share at their midpoint.
const BASIS_OVERLAP: f64 = 0.55;

impl DmpIntegrationSpec {
    /// Basis centres spaced evenly in time over the rollout, hence
    /// logarithmically in phase; widths chosen so adjacent Gaussians cross
    /// at [`BASIS_OVERLAP`].
    pub fn new(alpha_z: f64, alpha_s: f64, steps: usize, dt: f64) -> Self {
        let duration = steps as f64 * dt;
        let mut centers = [0.0; BASIS_PER_AXIS];
        for (i, c) in centers.iter_mut().enumerate() {
            let t = duration * i as f64 / (BASIS_PER_AXIS - 1) as f64;
            *c = (-alpha_s * t).exp();
        }
        let mut widths = [0.0; BASIS_PER_AXIS];
        for i in 0..BASIS_PER_AXIS {
            let gap = if i + 1 < BASIS_PER_AXIS {
                centers[i] - centers[i + 1]
            } else {
                centers[i - 1] - centers[i]
            };
            widths[i] = -BASIS_OVERLAP.ln() / (0.5 * gap).powi(2);
        }
        DmpIntegrationSpec {
            alpha_z,
            beta_z: alpha_z / 4.0,
            alpha_s,
            steps,
            dt,
            centers,
            widths,
        }
    }

    pub fn with_steps(&self, steps: usize, dt: f64) -> Self {
        DmpIntegrationSpec::new(self.alpha_z, self.alpha_s, steps, dt)
    }

    /// Phase at time `t`.
    pub fn phase(&self, t: f64) -> f64 {
        (-self.alpha_s * t).exp()
    }

    fn forcing(&self, s: f64, weights: &[f64; BASIS_PER_AXIS]) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..BASIS_PER_AXIS {
            let psi = (-self.widths[i] * (s - self.centers[i]).powi(2)).exp();
            num += psi * weights[i];
            den += psi;
        }
        if den > 0.0 {
            s * num / den
        } else {
            0.0
        }
    }
}

impl Default for DmpIntegrationSpec {
    fn default() -> Self {
        DmpIntegrationSpec::new(25.0, 5.0, 100, 0.01)
    }
}

/// Integrates the primitive; returns `steps + 1` points starting at `start`.
pub fn dmp_rollout(params: &DmpParams, spec: &DmpIntegrationSpec) -> Result<Vec<Point>> {
    let finite = params
        .weights_x
        .iter()
        .chain(&params.weights_y)
        .chain(&[params.goal.x, params.goal.y, params.start.x, params.start.y])
        .all(|v| v.is_finite());
    if !finite {
        return Err(Error::NonFinite("dmp parameters"));
    }

    let mut pos = params.start;
    let mut vel = Point::default();
    let mut path = Vec::with_capacity(spec.steps + 1);
    path.push(pos);
    for n in 0..spec.steps {
        let s = spec.phase(n as f64 * spec.dt);
        let force = Point::new(
            spec.forcing(s, &params.weights_x),
            spec.forcing(s, &params.weights_y),
        );
        let acc = ((params.goal - pos) * spec.beta_z - vel) * spec.alpha_z + force;
        pos = pos + vel * spec.dt;
        vel = vel + acc * spec.dt;
        path.push(pos);
    }
    Ok(path)
}
