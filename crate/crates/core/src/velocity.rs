//! Analytic, wall-tangential, divergence-free velocity fields.
//!
//! All parameters are dimensionless. The wall is the line `x2 = 0`; every
//! variant has a vanishing second component there.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geometry::{Rect, Vec2};

/// Velocity gradient `g[i][j] = d v_i / d x_j`.
pub type Gradient = [[f64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum VelocityField {
    /// `v = (v0 + c1 x1 + c2 x2, -c1 x2)`.
    Linear { v0: f64, c1: f64, c2: f64 },
    /// Vortex-in-a-box,
    /// `v = v0 cos(pi t / tau) (-sin(pi x1) cos(pi x2), cos(pi x1) sin(pi x2))`.
    Vortex { v0: f64, tau: f64 },
    /// The linear field modulated by `cos(pi t / tau)`.
    TimeLinear { v0: f64, c1: f64, c2: f64, tau: f64 },
}

impl VelocityField {
    /// The concrete linear example `(-0.2 + 0.1 x1 - 2 x2, -0.1 x2)`.
    pub const LINEAR_EXAMPLE: VelocityField = VelocityField::Linear {
        v0: -0.2,
        c1: 0.1,
        c2: -2.0,
    };

    pub const VORTEX_EXAMPLE: VelocityField = VelocityField::Vortex { v0: 0.1, tau: 0.2 };

    pub const TIME_LINEAR_EXAMPLE: VelocityField = VelocityField::TimeLinear {
        v0: -0.2,
        c1: 0.1,
        c2: -2.0,
        tau: 0.2,
    };

    pub fn name(&self) -> &'static str {
        match self {
            VelocityField::Linear { .. } => "linear",
            VelocityField::Vortex { .. } => "vortex",
            VelocityField::TimeLinear { .. } => "time_linear",
        }
    }

    pub fn eval(&self, t: f64, x: Vec2) -> Vec2 {
        match *self {
            VelocityField::Linear { v0, c1, c2 } => linear(v0, c1, c2, x),
            VelocityField::Vortex { v0, tau } => {
                let a = v0 * (PI * t / tau).cos();
                let (s1, c1) = (PI * x.x).sin_cos();
                let (s2, c2) = (PI * x.y).sin_cos();
                Vec2::new(-a * s1 * c2, a * c1 * s2)
            }
            VelocityField::TimeLinear { v0, c1, c2, tau } => {
                linear(v0, c1, c2, x) * (PI * t / tau).cos()
            }
        }
    }

    pub fn gradient(&self, t: f64, x: Vec2) -> Gradient {
        match *self {
            VelocityField::Linear { c1, c2, .. } => [[c1, c2], [0.0, -c1]],
            VelocityField::Vortex { v0, tau } => {
                let a = v0 * (PI * t / tau).cos() * PI;
                let (s1, c1) = (PI * x.x).sin_cos();
                let (s2, c2) = (PI * x.y).sin_cos();
                [[-a * c1 * c2, a * s1 * s2], [-a * s1 * s2, a * c1 * c2]]
            }
            VelocityField::TimeLinear { c1, c2, tau, .. } => {
                let m = (PI * t / tau).cos();
                [[m * c1, m * c2], [0.0, -m * c1]]
            }
        }
    }

    pub fn divergence(&self, t: f64, x: Vec2) -> f64 {
        let g = self.gradient(t, x);
        g[0][0] + g[1][1]
    }

    /// Maximum speed over `domain` (and all times), evaluated analytically.
    ///
    /// For the linear variants `|v|^2` is a convex quadratic, so the maximum
    /// sits on a corner; the time modulation peaks at `t = 0`.
    pub fn max_speed(&self, domain: &Rect) -> f64 {
        match *self {
            VelocityField::Linear { v0, c1, c2 } | VelocityField::TimeLinear { v0, c1, c2, .. } => {
                corners(domain)
                    .iter()
                    .map(|&p| linear(v0, c1, c2, p).norm())
                    .fold(0.0, f64::max)
            }
            VelocityField::Vortex { v0, .. } => v0.abs(),
        }
    }

    /// Time period parameter of the modulated variants.
    pub fn tau(&self) -> Option<f64> {
        match *self {
            VelocityField::Linear { .. } => None,
            VelocityField::Vortex { tau, .. } | VelocityField::TimeLinear { tau, .. } => Some(tau),
        }
    }

    pub(crate) fn validate(&self) -> Result<(), String> {
        let finite = |v: f64| v.is_finite();
        match *self {
            VelocityField::Linear { v0, c1, c2 } => {
                if ![v0, c1, c2].into_iter().all(finite) {
                    return Err("linear field parameters must be finite".into());
                }
            }
            VelocityField::Vortex { v0, tau } => {
                if !finite(v0) || !(tau > 0.0) || !finite(tau) {
                    return Err("vortex needs finite v0 and tau > 0".into());
                }
            }
            VelocityField::TimeLinear { v0, c1, c2, tau } => {
                if ![v0, c1, c2].into_iter().all(finite) || !(tau > 0.0) || !finite(tau) {
                    return Err("time_linear needs finite coefficients and tau > 0".into());
                }
            }
        }
        Ok(())
    }
}

#[inline]
fn linear(v0: f64, c1: f64, c2: f64, x: Vec2) -> Vec2 {
    Vec2::new(v0 + c1 * x.x + c2 * x.y, -c1 * x.y)
}

fn corners(r: &Rect) -> [Vec2; 4] {
    [
        r.min,
        Vec2::new(r.max.x, r.min.y),
        r.max,
        Vec2::new(r.min.x, r.max.y),
    ]
}
