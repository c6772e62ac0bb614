//! Reference solutions for the contact point on the wall `x2 = 0`.
//!
//! The contact angle is measured through the fluid, `cos theta = n2` for the
//! outward interface normal `n`. Along a flat wall the point moves with the
//! wall-tangential velocity and the angle obeys `theta' = <grad v . tau, n>`,
//! where `tau` is the interface tangent pointing away from the wall.
//!
//! For the linear field `(v0 + c1 x1 + c2 x2, -c1 x2)` the substitution
//! `f = -cot theta` linearizes the angle equation to `f' = 2 c1 f -+ c2`
//! (minus on the left point), which gives the closed forms below.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::NumericsError;
use crate::geometry::Vec2;
use crate::velocity::{Gradient, VelocityField};

/// Below this `|c1|` the closed forms switch to their `c1 -> 0` limits.
const C1_LIMIT: f64 = 1e-12;

/// Which end of the wetted wall segment is tracked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Fluid lies to the right of the contact point.
    Left,
    /// Fluid lies to the left of the contact point.
    Right,
}

impl Side {
    /// `+1` for the right point, `-1` for the left one; the sign in front of
    /// `c2` in the angle equation.
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }

    /// Outward interface normal at the contact point for angle `theta`.
    pub fn normal(self, theta: f64) -> Vec2 {
        let (s, c) = theta.sin_cos();
        Vec2::new(self.sign() * s, c)
    }

    /// Interface tangent at the contact point, pointing into the domain.
    pub fn tangent(self, theta: f64) -> Vec2 {
        let (s, c) = theta.sin_cos();
        Vec2::new(-self.sign() * c, s)
    }
}

impl std::str::FromStr for Side {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(format!("unknown side `{other}` (expected left|right)")),
        }
    }
}

/// Initial contact point and angle of the disk `(center, radius)` cut by the
/// wall. `None` if the disk does not cross the wall.
pub fn cap_contact_state(center: Vec2, radius: f64, side: Side) -> Option<(f64, f64)> {
    let h = -center.y;
    if !(h.abs() < radius) {
        return None;
    }
    let half_chord = (radius * radius - h * h).sqrt();
    let x = center.x + side.sign() * half_chord;
    Some((x, (h / radius).acos()))
}

/// `(e^{c1 t} - 1) / c1`, continuous through `c1 = 0`.
fn expm1_over(c1: f64, t: f64) -> f64 {
    if c1.abs() < C1_LIMIT {
        t
    } else {
        (c1 * t).exp_m1() / c1
    }
}

/// Contact-point abscissa in the linear field.
pub fn exact_contactline_linear(t: f64, x0: f64, v0: f64, c1: f64) -> f64 {
    if c1.abs() < C1_LIMIT {
        x0 + v0 * t
    } else {
        x0 * (c1 * t).exp() + v0 * expm1_over(c1, t)
    }
}

fn check_angle(theta0: f64) -> Result<(), NumericsError> {
    if theta0 > 0.0 && theta0 < PI {
        Ok(())
    } else {
        Err(NumericsError::AngleOutOfRange { t: 0.0 })
    }
}

/// Contact angle in the linear field.
pub fn exact_theta_linear(
    t: f64,
    theta0: f64,
    c1: f64,
    c2: f64,
    side: Side,
) -> Result<f64, NumericsError> {
    check_angle(theta0)?;
    let f0 = -1.0 / theta0.tan();
    let f = if c1.abs() < C1_LIMIT {
        f0 + side.sign() * c2 * t
    } else {
        let e = (2.0 * c1 * t).exp();
        f0 * e + side.sign() * c2 * (2.0 * c1 * t).exp_m1() / (2.0 * c1)
    };
    Ok(FRAC_PI_2 + f.atan())
}

/// Effective time of the `cos(pi t / tau)`-modulated field.
pub fn modulated_time(t: f64, tau: f64) -> f64 {
    tau * (PI * t / tau).sin() / PI
}

/// `(x_cl, theta)` in the time-modulated linear field.
#[allow(clippy::too_many_arguments)]
pub fn exact_time_dependent(
    t: f64,
    x0: f64,
    theta0: f64,
    v0: f64,
    c1: f64,
    c2: f64,
    tau: f64,
    side: Side,
) -> Result<(f64, f64), NumericsError> {
    let s = modulated_time(t, tau);
    Ok((
        exact_contactline_linear(s, x0, v0, c1),
        exact_theta_linear(s, theta0, c1, c2, side)?,
    ))
}

/// Angle rate `<grad v . tau, n>` for a contact point with angle `theta`.
pub fn theta_rate(g: &Gradient, theta: f64, side: Side) -> f64 {
    let tau = side.tangent(theta);
    let n = side.normal(theta);
    let gt = Vec2::new(
        g[0][0] * tau.x + g[0][1] * tau.y,
        g[1][0] * tau.x + g[1][1] * tau.y,
    );
    gt.dot(n)
}

/// Time derivative of the unit normal transported by the flow,
/// `-(I - n n^T) grad v^T n`.
pub fn normal_rate(g: &Gradient, n: Vec2) -> Vec2 {
    let gtn = Vec2::new(g[0][0] * n.x + g[1][0] * n.y, g[0][1] * n.x + g[1][1] * n.y);
    -(gtn - n * n.dot(gtn))
}

/// Sampled contact-point history.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactTrajectory {
    pub side: Side,
    pub times: Vec<f64>,
    pub x_cl: Vec<f64>,
    pub theta: Vec<f64>,
    /// `(dx/dt, dtheta/dt)` at every node; drives the cubic dense output.
    rates: Vec<(f64, f64)>,
    /// Time at which the angle left `(0, pi)`, if it did.
    pub truncated_at: Option<f64>,
}

impl ContactTrajectory {
    pub fn end_time(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    /// Cubic Hermite interpolation between RK4 nodes. `None` outside the
    /// covered interval.
    pub fn at(&self, t: f64) -> Option<(f64, f64)> {
        let n = self.times.len();
        if n == 0 || t < self.times[0] - 1e-12 || t > self.end_time() + 1e-12 {
            return None;
        }
        if n == 1 {
            return Some((self.x_cl[0], self.theta[0]));
        }
        let k = match self.times.partition_point(|&s| s <= t) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let (t0, t1) = (self.times[k], self.times[k + 1]);
        let h = t1 - t0;
        let s = ((t - t0) / h).clamp(0.0, 1.0);
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let herm =
            |y0: f64, y1: f64, d0: f64, d1: f64| h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
        Some((
            herm(
                self.x_cl[k],
                self.x_cl[k + 1],
                self.rates[k].0,
                self.rates[k + 1].0,
            ),
            herm(
                self.theta[k],
                self.theta[k + 1],
                self.rates[k].1,
                self.rates[k + 1].1,
            ),
        ))
    }

    /// Writes `t,x_cl,theta_deg` rows at the given times.
    pub fn write_csv<W: Write>(&self, mut w: W, times: &[f64]) -> io::Result<()> {
        writeln!(w, "t,x_cl,theta_deg")?;
        for &t in times {
            if let Some((x, th)) = self.at(t) {
                writeln!(w, "{t:.16e},{x:.16e},{:.16e}", th.to_degrees())?;
            }
        }
        Ok(())
    }
}

/// RK4 integration of the wall-restricted contact-point system
/// `x1' = v1(t, (x1, 0))`, `theta' = <grad v . tau, n>`.
///
/// The step is shrunk so that `T` is hit exactly. Integration stops early if
/// `theta` leaves `(0, pi)`.
pub fn ode_reference(
    field: &VelocityField,
    x0: f64,
    theta0: f64,
    side: Side,
    t_end: f64,
    dt_ode: f64,
) -> Result<ContactTrajectory, NumericsError> {
    check_angle(theta0)?;
    if !(dt_ode > 0.0) || !(t_end >= 0.0) {
        return Err(NumericsError::Diagnostics(format!(
            "ode_reference needs dt_ode > 0 and T >= 0 (got {dt_ode}, {t_end})"
        )));
    }
    let rhs = |t: f64, x: f64, th: f64| {
        let p = Vec2::new(x, 0.0);
        (
            field.eval(t, p).x,
            theta_rate(&field.gradient(t, p), th, side),
        )
    };
    let steps = (t_end / dt_ode).ceil().max(0.0) as usize;
    let h = if steps == 0 {
        0.0
    } else {
        t_end / steps as f64
    };
    let mut traj = ContactTrajectory {
        side,
        times: vec![0.0],
        x_cl: vec![x0],
        theta: vec![theta0],
        rates: vec![rhs(0.0, x0, theta0)],
        truncated_at: None,
    };
    let (mut x, mut th) = (x0, theta0);
    for k in 0..steps {
        let t = k as f64 * h;
        let k1 = rhs(t, x, th);
        let k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1.0, th + 0.5 * h * k1.1);
        let k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2.0, th + 0.5 * h * k2.1);
        let k4 = rhs(t + h, x + h * k3.0, th + h * k3.1);
        x += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        th += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        let t_next = if k + 1 == steps {
            t_end
        } else {
            (k + 1) as f64 * h
        };
        if !(th > 0.0 && th < PI) {
            log::warn!("contact angle left (0, pi) at t = {t_next}; reference truncated");
            traj.truncated_at = Some(t_next);
            break;
        }
        traj.times.push(t_next);
        traj.x_cl.push(x);
        traj.theta.push(th);
        traj.rates.push(rhs(t_next, x, th));
    }
    Ok(traj)
}

/// Reference contact state for a case: closed forms where available,
/// otherwise an RK4 trajectory.
#[derive(Clone, Debug)]
pub enum ReferenceSolution {
    Linear {
        x0: f64,
        theta0: f64,
        v0: f64,
        c1: f64,
        c2: f64,
        side: Side,
    },
    TimeLinear {
        x0: f64,
        theta0: f64,
        v0: f64,
        c1: f64,
        c2: f64,
        tau: f64,
        side: Side,
    },
    Ode(ContactTrajectory),
}

impl ReferenceSolution {
    /// Picks the closed form for linear fields and integrates otherwise.
    pub fn for_field(
        field: &VelocityField,
        x0: f64,
        theta0: f64,
        side: Side,
        t_end: f64,
        dt_ode: f64,
    ) -> Result<Self, NumericsError> {
        check_angle(theta0)?;
        Ok(match *field {
            VelocityField::Linear { v0, c1, c2 } => ReferenceSolution::Linear {
                x0,
                theta0,
                v0,
                c1,
                c2,
                side,
            },
            VelocityField::TimeLinear { v0, c1, c2, tau } => ReferenceSolution::TimeLinear {
                x0,
                theta0,
                v0,
                c1,
                c2,
                tau,
                side,
            },
            VelocityField::Vortex { .. } => {
                ReferenceSolution::Ode(ode_reference(field, x0, theta0, side, t_end, dt_ode)?)
            }
        })
    }

    /// `(x_cl, theta)` at time `t`, `None` where the reference is undefined.
    pub fn at(&self, t: f64) -> Option<(f64, f64)> {
        match *self {
            ReferenceSolution::Linear {
                x0,
                theta0,
                v0,
                c1,
                c2,
                side,
            } => Some((
                exact_contactline_linear(t, x0, v0, c1),
                exact_theta_linear(t, theta0, c1, c2, side).ok()?,
            )),
            ReferenceSolution::TimeLinear {
                x0,
                theta0,
                v0,
                c1,
                c2,
                tau,
                side,
            } => exact_time_dependent(t, x0, theta0, v0, c1, c2, tau, side).ok(),
            ReferenceSolution::Ode(ref traj) => traj.at(t),
        }
    }
}
