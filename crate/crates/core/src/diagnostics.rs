//! Contact-state extraction, error norms, convergence fits and the
//! translation test.

use std::io::{self, Write};

use crate::error::NumericsError;
use crate::geometry::{rect_fraction, Vec2};
use crate::grid::{Grid, ScalarField};
use crate::kinematics::{ReferenceSolution, Side};
use crate::reconstruction::{
    boundary_elvira_normal, boundary_youngs_normal, elvira_normal, youngs_normal, Block, PlicField,
    Stencil3, WallStencil,
};

/// Contact state read off the wall row at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContactSample {
    pub t: f64,
    /// Wall abscissa of the contact point; NaN when irregular.
    pub x_cl: f64,
    /// Contact angle in radians; NaN when irregular.
    pub theta: f64,
    pub cell_i: Option<usize>,
    pub regular: bool,
}

impl ContactSample {
    pub fn irregular(t: f64) -> Self {
        Self {
            t,
            x_cl: f64::NAN,
            theta: f64::NAN,
            cell_i: None,
            regular: false,
        }
    }
}

/// Scans the wall-row PLIC elements for contact-point cells, i.e. cells
/// whose interface line meets the wall inside the cell's own wall segment
/// and whose normal faces away from the fluid on `side`. The outermost
/// qualifying cell is reported.
pub fn extract_contact_state(plic: &PlicField, grid: &Grid, side: Side, t: f64) -> ContactSample {
    let wall_y = grid.origin.y;
    let mut best: Option<ContactSample> = None;
    for e in plic.elements().iter().filter(|e| e.j == 0) {
        let n = e.plane.normal;
        // the fluid lies to the right of a left contact point, so its
        // outward normal points left (and vice versa)
        let facing = match side {
            Side::Left => n.x < 0.0,
            Side::Right => n.x > 0.0,
        };
        if !facing || n.x.abs() < 1e-14 {
            continue;
        }
        let c = e.plane.anchor;
        let x = c.x - ((wall_y - c.y) * n.y + e.plane.offset) / n.x;
        let rect = grid.cell_rect(e.i as isize, 0);
        if !(x >= rect.min.x && x <= rect.max.x) {
            continue;
        }
        // cos(theta) = -<n, n_wall> with n_wall = (0, -1)
        let theta = n.y.clamp(-1.0, 1.0).acos();
        let sample = ContactSample {
            t,
            x_cl: x,
            theta,
            cell_i: Some(e.i),
            regular: true,
        };
        let better = match (&best, side) {
            (None, _) => true,
            (Some(b), Side::Left) => e.i < b.cell_i.unwrap(),
            (Some(b), Side::Right) => e.i > b.cell_i.unwrap(),
        };
        if better {
            best = Some(sample);
        }
    }
    best.unwrap_or_else(|| ContactSample::irregular(t))
}

/// Maximum-norm contact errors over the regular samples of a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorNorms {
    /// `max |theta_num - theta_ref|` in degrees.
    pub e_theta_deg: f64,
    /// `max |x_num - x_ref| / R0`.
    pub e_cl: f64,
    pub regular: usize,
    pub irregular: usize,
}

/// Error norms over samples with `t` in `window`. Irregular samples are
/// counted but never enter the maxima.
pub fn error_norms(
    samples: &[ContactSample],
    reference: &ReferenceSolution,
    r0: f64,
    window: (f64, f64),
) -> Result<ErrorNorms, NumericsError> {
    let mut norms = ErrorNorms {
        e_theta_deg: 0.0,
        e_cl: 0.0,
        regular: 0,
        irregular: 0,
    };
    for s in samples
        .iter()
        .filter(|s| s.t >= window.0 && s.t <= window.1)
    {
        if !s.regular {
            norms.irregular += 1;
            continue;
        }
        let (x_ref, th_ref) = reference.at(s.t).ok_or_else(|| {
            NumericsError::Diagnostics(format!("reference undefined at t = {}", s.t))
        })?;
        norms.regular += 1;
        norms.e_theta_deg = norms.e_theta_deg.max((s.theta - th_ref).abs().to_degrees());
        norms.e_cl = norms.e_cl.max(((s.x_cl - x_ref) / r0).abs());
    }
    if norms.regular == 0 {
        return Err(NumericsError::Diagnostics(
            "no regular contact samples in the evaluation window".into(),
        ));
    }
    Ok(norms)
}

/// Discrete L1 distance of two volume-fraction fields on the same grid.
pub fn l1_error(a: &ScalarField, b: &ScalarField, grid: &Grid) -> Result<f64, NumericsError> {
    if !a.same_shape(b) || a.nx() != grid.nx || a.ny() != grid.ny {
        return Err(NumericsError::Diagnostics(
            "l1_error: fields do not share the grid".into(),
        ));
    }
    let sum: f64 = a
        .interior()
        .zip(b.interior())
        .map(|((_, _, x), (_, _, y))| (x - y).abs())
        .sum();
    Ok(sum * grid.cell_area())
}

/// Least-squares slope of `ln(error)` against `ln(dx)`.
///
/// Non-positive or non-finite errors are dropped with a warning.
pub fn convergence_order(pairs: &[(f64, f64)]) -> Result<f64, NumericsError> {
    let pts: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|&&(h, e)| {
            let ok = h > 0.0 && e > 0.0 && e.is_finite() && h.is_finite();
            if !ok {
                log::warn!("convergence_order: dropping point (dx = {h}, error = {e})");
            }
            ok
        })
        .map(|&(h, e)| (h.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(NumericsError::Diagnostics(format!(
            "convergence_order needs at least 2 usable points, got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return Err(NumericsError::Diagnostics(
            "convergence_order needs distinct mesh sizes".into(),
        ));
    }
    Ok(sxy / sxx)
}

/// Reconstruction scheme exercised by [`translation_test`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TranslationScheme {
    Youngs,
    Elvira,
    BoundaryYoungs,
    BoundaryElvira,
}

impl TranslationScheme {
    pub const ALL: [TranslationScheme; 4] = [
        TranslationScheme::Youngs,
        TranslationScheme::Elvira,
        TranslationScheme::BoundaryYoungs,
        TranslationScheme::BoundaryElvira,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TranslationScheme::Youngs => "youngs",
            TranslationScheme::Elvira => "elvira",
            TranslationScheme::BoundaryYoungs => "boundary-youngs",
            TranslationScheme::BoundaryElvira => "boundary-elvira",
        }
    }
}

impl std::str::FromStr for TranslationScheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TranslationScheme::ALL
            .into_iter()
            .find(|m| m.label() == s)
            .ok_or_else(|| format!("unknown scheme `{s}`"))
    }
}

/// One offset of the translation test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TranslationSample {
    /// Signed distance of the line from the cell center, in cell units of
    /// the line's half-extent (`-1..1` spans the cell).
    pub offset: f64,
    pub angle_deg: f64,
    pub error_deg: f64,
}

/// Exact fractions of the fluid half-plane `{(x - c) . n + d <= 0}` on a
/// block of unit cells whose center slot has center `c`.
fn synthesize<const W: usize, const H: usize>(
    n: Vec2,
    d: f64,
    center_col: usize,
    center_row: usize,
) -> Block<W, H> {
    let mut values = [[0.0; H]; W];
    for (c, col) in values.iter_mut().enumerate() {
        for (r, v) in col.iter_mut().enumerate() {
            let sx = c as f64 - center_col as f64;
            let sy = r as f64 - center_row as f64;
            *v = rect_fraction(n, d + sx * n.x + sy * n.y, 1.0, 1.0);
        }
    }
    Block {
        values,
        dx: 1.0,
        dy: 1.0,
        center_col,
        center_row,
    }
}

/// Moves a straight line with fixed orientation through a cell and records
/// the reconstructed orientation at `offsets` evenly spaced positions.
///
/// `angle_deg` is the polar angle of the fluid's outward normal measured
/// from the wall direction `x1`, so the line itself is inclined by
/// `angle_deg + 90` degrees. Degenerate Youngs gradients are reported as NaN.
pub fn translation_test(
    angle_deg: f64,
    scheme: TranslationScheme,
    offsets: usize,
) -> Vec<TranslationSample> {
    let a = angle_deg.to_radians();
    let n = Vec2::new(a.cos(), a.sin());
    let half = 0.5 * (n.x.abs() + n.y.abs());
    (0..offsets)
        .map(|k| {
            let s = -1.0 + (2.0 * k as f64 + 1.0) / offsets as f64;
            let d = s * half;
            let got = match scheme {
                TranslationScheme::Youngs => youngs_normal(&synthesize::<3, 3>(n, d, 1, 1)).ok(),
                TranslationScheme::Elvira => Some(elvira_normal(&synthesize::<3, 3>(n, d, 1, 1))),
                TranslationScheme::BoundaryYoungs => {
                    let s: Stencil3 = synthesize(n, d, 1, 0);
                    boundary_youngs_normal(&s).ok()
                }
                TranslationScheme::BoundaryElvira => {
                    let s: WallStencil = synthesize(n, d, 2, 0);
                    Some(boundary_elvira_normal(&s))
                }
            };
            let angle = got.map_or(f64::NAN, |m| m.y.atan2(m.x).to_degrees());
            // wrap into (-180, 180]
            let mut error = angle - angle_deg;
            if error > 180.0 {
                error -= 360.0;
            } else if error <= -180.0 {
                error += 360.0;
            }
            TranslationSample {
                offset: s,
                angle_deg: angle,
                error_deg: error,
            }
        })
        .collect()
}

/// Angle in radians between the exact outward normal `n` and the ELVIRA
/// estimate on a stencil cut by that line. `s` in `(-1, 1)` places the line
/// across the center cell. With `boundary` set the center cell is a wall cell
/// and Boundary ELVIRA is used.
pub fn exact_line_error(n: Vec2, s: f64, boundary: bool) -> f64 {
    let d = s * 0.5 * (n.x.abs() + n.y.abs());
    let m = if boundary {
        boundary_elvira_normal(&synthesize::<5, 3>(n, d, 2, 0))
    } else {
        elvira_normal(&synthesize::<3, 3>(n, d, 1, 1))
    };
    (m.x * n.y - m.y * n.x).atan2(m.dot(n)).abs()
}

/// Largest absolute error of a translation run (NaN entries propagate).
pub fn max_translation_error(samples: &[TranslationSample]) -> f64 {
    samples.iter().fold(0.0f64, |m, s| {
        if s.error_deg.is_nan() {
            f64::NAN
        } else {
            m.max(s.error_deg.abs())
        }
    })
}

pub fn write_translation_csv<W: Write>(mut w: W, samples: &[TranslationSample]) -> io::Result<()> {
    writeln!(w, "offset,angle_deg,error_deg")?;
    for s in samples {
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e}",
            s.offset, s.angle_deg, s.error_deg
        )?;
    }
    Ok(())
}

/// Writes the contact time series with reference values.
pub fn write_timeseries_csv<W: Write>(
    mut w: W,
    samples: &[ContactSample],
    reference: Option<&ReferenceSolution>,
) -> io::Result<()> {
    writeln!(
        w,
        "t,x_cl_num,theta_num_deg,x_cl_ref,theta_ref_deg,cell_i,regular"
    )?;
    for s in samples {
        let (xr, tr) = reference
            .and_then(|r| r.at(s.t))
            .unwrap_or((f64::NAN, f64::NAN));
        let cell = s.cell_i.map_or(String::new(), |i| i.to_string());
        writeln!(
            w,
            "{:.16e},{},{},{:.16e},{:.16e},{},{}",
            s.t,
            fmt_opt(s.x_cl),
            fmt_opt(s.theta.to_degrees()),
            xr,
            tr.to_degrees(),
            cell,
            s.regular as u8
        )?;
    }
    Ok(())
}

fn fmt_opt(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:.16e}")
    }
}

/// One mesh level of a convergence table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SummaryRow {
    pub n: usize,
    pub dx_over_r0: f64,
    pub e_theta_deg: f64,
    pub e_cl: f64,
    pub e1: f64,
}

/// Convergence table with fitted orders repeated on every row.
pub fn write_summary_csv<W: Write>(
    mut w: W,
    rows: &[SummaryRow],
    order_theta: f64,
    order_cl: f64,
) -> io::Result<()> {
    writeln!(w, "N,dx_over_R0,E_theta_deg,E_cl,E1,order_theta,order_cl")?;
    for r in rows {
        writeln!(
            w,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.6},{:.6}",
            r.n, r.dx_over_r0, r.e_theta_deg, r.e_cl, r.e1, order_theta, order_cl
        )?;
    }
    Ok(())
}
