//! Structured grid, cell-centered volume fractions and staggered face
//! velocities.
//!
//! Interior cells are indexed `i in 0..nx`, `j in 0..ny`; ghost layers extend
//! the index range by `ghost` on every side. Row `j = 0` touches the solid
//! wall `x2 = origin.y`. Vertical face `i` sits at `x1 = origin.x + i dx`
//! between cells `i - 1` and `i`; horizontal face `j` likewise in `x2`.

use std::io::{self, Write};

use crate::config::CaseConfig;
use crate::error::ConfigError;
use crate::geometry::{circle_cell_fraction, Rect, Vec2};
use crate::velocity::VelocityField;

pub const GHOST_WIDTH: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub origin: Vec2,
    pub ghost: usize,
}

impl Grid {
    pub fn new(nx: usize, ny: usize, dx: f64, dy: f64, origin: Vec2) -> Result<Self, ConfigError> {
        if nx == 0 || ny == 0 {
            return Err(ConfigError::invalid(
                "grid",
                "needs at least one cell per direction",
            ));
        }
        if !(dx > 0.0 && dy > 0.0) || !dx.is_finite() || !dy.is_finite() {
            return Err(ConfigError::invalid("grid", "mesh widths must be positive"));
        }
        Ok(Self {
            nx,
            ny,
            dx,
            dy,
            origin,
            ghost: GHOST_WIDTH,
        })
    }

    #[inline]
    pub fn cell_center(&self, i: isize, j: isize) -> Vec2 {
        Vec2::new(
            self.origin.x + (i as f64 + 0.5) * self.dx,
            self.origin.y + (j as f64 + 0.5) * self.dy,
        )
    }

    #[inline]
    pub fn cell_rect(&self, i: isize, j: isize) -> Rect {
        Rect::from_center(self.cell_center(i, j), self.dx, self.dy)
    }

    #[inline]
    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    pub fn extent(&self) -> Rect {
        Rect::new(
            self.origin,
            self.origin + Vec2::new(self.nx as f64 * self.dx, self.ny as f64 * self.dy),
        )
    }

    #[inline]
    pub fn is_interior(&self, i: isize, j: isize) -> bool {
        i >= 0 && j >= 0 && (i as usize) < self.nx && (j as usize) < self.ny
    }
}

/// Grid for a case: `n x n/4` cells on `[0,1] x [0,0.25]`.
pub fn build_grid(config: &CaseConfig) -> Result<Grid, ConfigError> {
    let n = config.n;
    if n < 4 || !n.is_multiple_of(4) {
        return Err(ConfigError::invalid(
            "case.n",
            format!("{n} must be a positive multiple of 4"),
        ));
    }
    let h = 1.0 / n as f64;
    Grid::new(n, n / 4, h, h, CaseConfig::domain().min)
}

/// Cell-centered scalar (the volume fraction) including ghost layers.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    nx: usize,
    ny: usize,
    ghost: usize,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: &Grid) -> Self {
        let g = grid.ghost;
        Self {
            nx: grid.nx,
            ny: grid.ny,
            ghost: g,
            values: vec![0.0; (grid.nx + 2 * g) * (grid.ny + 2 * g)],
        }
    }

    /// Field with interior values `f(i, j)`; ghosts are filled by continuation.
    pub fn from_fn(grid: &Grid, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut s = Self::zeros(grid);
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                s.set(i as isize, j as isize, f(i, j));
            }
        }
        apply_ghost_bc(&mut s);
        s
    }

    #[inline]
    fn index(&self, i: isize, j: isize) -> usize {
        let g = self.ghost as isize;
        debug_assert!(i >= -g && i < self.nx as isize + g, "i = {i} out of range");
        debug_assert!(j >= -g && j < self.ny as isize + g, "j = {j} out of range");
        ((j + g) as usize) * (self.nx + 2 * self.ghost) + (i + g) as usize
    }

    #[inline]
    pub fn get(&self, i: isize, j: isize) -> f64 {
        self.values[self.index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: isize, j: isize, v: f64) {
        let k = self.index(i, j);
        self.values[k] = v;
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn ghost(&self) -> usize {
        self.ghost
    }

    pub fn same_shape(&self, other: &ScalarField) -> bool {
        self.nx == other.nx && self.ny == other.ny && self.ghost == other.ghost
    }

    pub fn interior(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.ny)
            .flat_map(move |j| (0..self.nx).map(move |i| (i, j, self.get(i as isize, j as isize))))
    }

    pub fn interior_sum(&self) -> f64 {
        self.interior().map(|(_, _, v)| v).sum()
    }

    pub fn interior_min_max(&self) -> (f64, f64) {
        self.interior()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, _, v)| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Plain-text dump: one line per grid row (wall row first), 17 significant
    /// digits, interior cells only.
    pub fn write_snapshot<W: Write>(&self, mut w: W) -> io::Result<()> {
        for j in 0..self.ny as isize {
            let row: Vec<String> = (0..self.nx as isize)
                .map(|i| format!("{:.16e}", self.get(i, j)))
                .collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Volume fractions of the disk `(cap_center, r0)` restricted to the grid.
pub fn init_volume_fractions(grid: &Grid, cap_center: Vec2, r0: f64) -> ScalarField {
    ScalarField::from_fn(grid, |i, j| {
        circle_cell_fraction(cap_center, r0, &grid.cell_rect(i as isize, j as isize))
    })
}

/// Fills every ghost cell with the value of the nearest interior cell.
///
/// This is the homogeneous Neumann condition used on the artificial
/// boundaries; along the wall the ghost values are never read by the
/// boundary reconstruction but get the same treatment.
pub fn apply_ghost_bc(alpha: &mut ScalarField) {
    let g = alpha.ghost as isize;
    let (nx, ny) = (alpha.nx as isize, alpha.ny as isize);
    for j in -g..ny + g {
        let jc = j.clamp(0, ny - 1);
        for i in -g..nx + g {
            if i >= 0 && i < nx && j >= 0 && j < ny {
                continue;
            }
            let ic = i.clamp(0, nx - 1);
            let v = alpha.get(ic, jc);
            alpha.set(i, j, v);
        }
    }
}

/// Face-normal velocity components on the staggered grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceVelocityField {
    nx: usize,
    ny: usize,
    /// `v1` on vertical faces, `(nx + 1) x ny`.
    u: Vec<f64>,
    /// `v2` on horizontal faces, `nx x (ny + 1)`.
    w: Vec<f64>,
}

impl FaceVelocityField {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            nx: grid.nx,
            ny: grid.ny,
            u: vec![0.0; (grid.nx + 1) * grid.ny],
            w: vec![0.0; grid.nx * (grid.ny + 1)],
        }
    }

    /// `v1` on vertical face `i` (between cells `i-1` and `i`) of row `j`.
    #[inline]
    pub fn u(&self, i: usize, j: usize) -> f64 {
        self.u[j * (self.nx + 1) + i]
    }

    /// `v2` on horizontal face `j` (between cells `j-1` and `j`) of column `i`.
    #[inline]
    pub fn w(&self, i: usize, j: usize) -> f64 {
        self.w[j * self.nx + i]
    }

    pub fn set_u(&mut self, i: usize, j: usize, v: f64) {
        self.u[j * (self.nx + 1) + i] = v;
    }

    pub fn set_w(&mut self, i: usize, j: usize, v: f64) {
        self.w[j * self.nx + i] = v;
    }

    pub fn max_abs(&self) -> (f64, f64) {
        let m = |v: &[f64]| v.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        (m(&self.u), m(&self.w))
    }
}

/// Point values of the field at the face centroids; the wall faces get
/// `w = 0` exactly.
pub fn sample_face_velocities(grid: &Grid, field: &VelocityField, t: f64) -> FaceVelocityField {
    let mut f = FaceVelocityField::zeros(grid);
    for j in 0..grid.ny {
        let y = grid.origin.y + (j as f64 + 0.5) * grid.dy;
        for i in 0..=grid.nx {
            let x = grid.origin.x + i as f64 * grid.dx;
            f.set_u(i, j, field.eval(t, Vec2::new(x, y)).x);
        }
    }
    for j in 1..=grid.ny {
        let y = grid.origin.y + j as f64 * grid.dy;
        for i in 0..grid.nx {
            let x = grid.origin.x + (i as f64 + 0.5) * grid.dx;
            f.set_w(i, j, field.eval(t, Vec2::new(x, y)).y);
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(n: usize) -> CaseConfig {
        CaseConfig {
            n,
            ..CaseConfig::default()
        }
    }

    #[test]
    fn build_grid_shapes() {
        let g = build_grid(&config(128)).unwrap();
        assert_eq!((g.nx, g.ny), (128, 32));
        assert_eq!(g.dx, 1.0 / 128.0);
        assert_eq!(g.dy, 1.0 / 128.0);
        let tiny = build_grid(&config(4)).unwrap();
        assert_eq!((tiny.nx, tiny.ny), (4, 1));
        assert!(build_grid(&config(130)).is_err());
        assert!(build_grid(&config(0)).is_err());
    }

    #[test]
    fn ghost_fill_is_constant_continuation_and_idempotent() {
        let g = Grid::new(5, 4, 0.1, 0.1, Vec2::default()).unwrap();
        let mut a = ScalarField::from_fn(&g, |i, j| (i * 10 + j) as f64 / 100.0);
        a.set(0, 0, 0.37);
        apply_ghost_bc(&mut a);
        assert_eq!(a.get(-1, 0), 0.37);
        assert_eq!(a.get(-2, -2), 0.37);
        assert_eq!(a.get(0, -1), 0.37);
        assert_eq!(a.get(6, 5), a.get(4, 3));
        let before = a.clone();
        apply_ghost_bc(&mut a);
        assert_eq!(a, before);

        let mut z = ScalarField::from_fn(&g, |_, j| if j == 3 { 0.0 } else { 1.0 });
        apply_ghost_bc(&mut z);
        for i in -2..7 {
            assert_eq!(z.get(i, 4), 0.0);
            assert_eq!(z.get(i, 5), 0.0);
        }
    }

    #[test]
    fn corner_boundary_stencil_is_defined_after_fill() {
        let g = Grid::new(6, 3, 0.1, 0.1, Vec2::default()).unwrap();
        let a = ScalarField::from_fn(&g, |i, j| 0.1 * (i + j) as f64);
        for (ci, cj) in [(0isize, 0isize), (5, 0)] {
            for k in -2..=2 {
                for l in 0..3 {
                    assert!(a.get(ci + k, cj + l).is_finite());
                }
            }
        }
    }

    #[test]
    fn face_sampling() {
        let g = build_grid(&config(8)).unwrap();
        let uniform = VelocityField::Linear {
            v0: 1.0,
            c1: 0.0,
            c2: 0.0,
        };
        let f = sample_face_velocities(&g, &uniform, 0.0);
        assert_eq!(f.max_abs(), (1.0, 0.0));

        let vortex = VelocityField::Vortex { v0: 1.0, tau: 1.0 };
        let f = sample_face_velocities(&g, &vortex, 0.5);
        let (mu, mw) = f.max_abs();
        assert!(mu < 1e-15 && mw < 1e-15);

        // x1 = 0.5 is vertical face 4 at N=8; x2 = 0.125 is the center of row 0 when dy = 0.25.
        let coarse = Grid::new(4, 1, 0.25, 0.25, Vec2::default()).unwrap();
        let f = sample_face_velocities(&coarse, &VelocityField::LINEAR_EXAMPLE, 0.0);
        assert!((f.u(2, 0) - (-0.4)).abs() < 1e-15);
        for i in 0..coarse.nx {
            assert_eq!(f.w(i, 0), 0.0);
        }
    }

    #[test]
    fn cap_initialisation() {
        let g = build_grid(&config(64)).unwrap();
        let a = init_volume_fractions(&g, Vec2::new(0.4, -0.1), 0.2);
        let half_angle = (0.1f64 / 0.2).acos();
        let exact = 0.04 * (half_angle - half_angle.sin() * half_angle.cos());
        let total = a.interior_sum() * g.cell_area();
        assert!(((total - exact) / exact).abs() < 1e-8, "{total} vs {exact}");

        let below = init_volume_fractions(&g, Vec2::new(0.4, -0.3), 0.2);
        assert_eq!(below.interior_sum(), 0.0);
    }

    #[test]
    fn snapshot_format() {
        let g = Grid::new(2, 2, 1.0, 1.0, Vec2::default()).unwrap();
        let a = ScalarField::from_fn(&g, |i, j| if i == 1 && j == 0 { 0.25 } else { 0.0 });
        let mut buf = Vec::new();
        a.write_snapshot(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "0.0000000000000000e0 2.5000000000000000e-1");
    }
}
