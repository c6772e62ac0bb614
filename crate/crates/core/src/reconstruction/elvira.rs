//! ELVIRA: least-squares selection among finitely many candidate normals.
//!
//! Candidate slopes come from differences of column sums (interface as a
//! graph `x2 = m x1 + b`) and of row sums (`x1 = m x2 + b`). Each slope gives
//! two normals, one per fluid orientation:
//! `(-m, 1)`/`(-m, -1)` for graphs over `x1` and `(1, -m)`/`(-1, -m)` for
//! graphs over `x2`. Every candidate is positioned to match the center
//! fraction; the one whose extended line best reproduces the whole block
//! (sum of squared per-cell deviations) wins, ties going to the earlier
//! candidate.

use super::stencil::{Block, Stencil3, WallStencil};
use crate::geometry::Vec2;

#[inline]
fn graph_over_x1(m: f64) -> [Vec2; 2] {
    let s = 1.0 / (1.0 + m * m).sqrt();
    [Vec2::new(-m * s, s), Vec2::new(-m * s, -s)]
}

#[inline]
fn graph_over_x2(m: f64) -> [Vec2; 2] {
    let s = 1.0 / (1.0 + m * m).sqrt();
    [Vec2::new(s, -m * s), Vec2::new(-s, -m * s)]
}

/// Winner of a candidate set with its functional value.
fn select<const W: usize, const H: usize>(
    block: &Block<W, H>,
    candidates: impl IntoIterator<Item = Vec2>,
) -> (Vec2, f64) {
    let mut best = (Vec2::new(0.0, 1.0), f64::INFINITY);
    for n in candidates {
        let f = block.deviation(n);
        if f < best.1 {
            best = (n, f);
        }
    }
    best
}

/// The 12 bulk candidates in enumeration order:
/// `m1^b, m1^c, m1^f` (column sums), then `m2^b, m2^c, m2^f` (row sums),
/// each in both orientations.
pub fn elvira_candidates(s: &Stencil3) -> [Vec2; 12] {
    let (dx, dy) = (s.dx, s.dy);
    let cs = [s.column_sum(0), s.column_sum(1), s.column_sum(2)];
    let rs = [s.row_sum(0), s.row_sum(1), s.row_sum(2)];
    let m1 = [
        dy / dx * (cs[1] - cs[0]),
        dy / (2.0 * dx) * (cs[2] - cs[0]),
        dy / dx * (cs[2] - cs[1]),
    ];
    let m2 = [
        dx / dy * (rs[1] - rs[0]),
        dx / (2.0 * dy) * (rs[2] - rs[0]),
        dx / dy * (rs[2] - rs[1]),
    ];
    let mut out = [Vec2::default(); 12];
    for (k, &m) in m1.iter().enumerate() {
        out[2 * k..2 * k + 2].copy_from_slice(&graph_over_x1(m));
    }
    for (k, &m) in m2.iter().enumerate() {
        out[6 + 2 * k..8 + 2 * k].copy_from_slice(&graph_over_x2(m));
    }
    out
}

/// The 16 wall candidates in enumeration order:
/// `m1^c, m1^b, m1^b*, m1^f, m1^f*` from 3-row column sums, then
/// `m2^f, m2^f*, m2^f**` from 5-column row sums, each in both orientations.
pub fn boundary_elvira_candidates(s: &WallStencil) -> [Vec2; 16] {
    let (dx, dy) = (s.dx, s.dy);
    let cs: [f64; 5] = std::array::from_fn(|c| s.column_sum(c));
    let rs = [s.row_sum(0), s.row_sum(1), s.row_sum(2)];
    let m1 = [
        dy / (2.0 * dx) * (cs[3] - cs[1]),
        dy / dx * (cs[2] - cs[1]),
        dy / dx * (cs[1] - cs[0]),
        dy / dx * (cs[3] - cs[2]),
        dy / dx * (cs[4] - cs[3]),
    ];
    let m2 = [
        dx / dy * (rs[1] - rs[0]),
        dx / (2.0 * dy) * (rs[2] - rs[0]),
        dx / dy * (rs[2] - rs[1]),
    ];
    let mut out = [Vec2::default(); 16];
    for (k, &m) in m1.iter().enumerate() {
        out[2 * k..2 * k + 2].copy_from_slice(&graph_over_x1(m));
    }
    for (k, &m) in m2.iter().enumerate() {
        out[10 + 2 * k..12 + 2 * k].copy_from_slice(&graph_over_x2(m));
    }
    out
}

/// Bulk ELVIRA normal on a centered 3x3 block.
pub fn elvira_normal(s: &Stencil3) -> Vec2 {
    select(s, elvira_candidates(s)).0
}

/// Wall ELVIRA normal on the 5x3 block above a wall cell.
pub fn boundary_elvira_normal(s: &WallStencil) -> Vec2 {
    select(s, boundary_elvira_candidates(s)).0
}

/// Like [`boundary_elvira_normal`] but also returns the minimal functional.
pub fn boundary_elvira_with_residual(s: &WallStencil) -> (Vec2, f64) {
    select(s, boundary_elvira_candidates(s))
}

/// Like [`elvira_normal`] but also returns the minimal functional.
pub fn elvira_with_residual(s: &Stencil3) -> (Vec2, f64) {
    select(s, elvira_candidates(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rect_fraction, Vec2};

    /// Independent generator: exact fractions of a line through a block.
    fn sample<const W: usize, const H: usize>(
        normal: Vec2,
        offset_at_center: f64,
        dx: f64,
        dy: f64,
        center_col: usize,
        center_row: usize,
    ) -> Block<W, H> {
        let mut values = [[0.0; H]; W];
        for (c, col) in values.iter_mut().enumerate() {
            for (r, v) in col.iter_mut().enumerate() {
                let sx = (c as f64 - center_col as f64) * dx;
                let sy = (r as f64 - center_row as f64) * dy;
                *v = rect_fraction(
                    normal,
                    offset_at_center + sx * normal.x + sy * normal.y,
                    dx,
                    dy,
                );
            }
        }
        Block {
            values,
            dx,
            dy,
            center_col,
            center_row,
        }
    }

    fn angle_between(a: Vec2, b: Vec2) -> f64 {
        (a.x * b.y - a.y * b.x).atan2(a.dot(b)).abs()
    }

    #[test]
    fn recovers_line_with_given_slope_and_intercept() {
        // x2 = 0.37 x1 + 0.11 (unit cells, center cell at origin), fluid below
        let (m, b) = (0.37, 0.11);
        let n = Vec2::new(-m, 1.0).normalized().unwrap();
        // line: n . x + d = 0 passes through (0, b)
        let d = -n.y * b;
        let s: Stencil3 = sample(n, d, 1.0, 1.0, 1, 1);
        let got = elvira_normal(&s);
        assert!(angle_between(got, n) < 1e-9);
    }

    #[test]
    fn horizontal_stratification_exact() {
        let s = Stencil3::centered([[1.0, 0.5, 0.0]; 3], 0.1, 0.1);
        assert_eq!(elvira_normal(&s), Vec2::new(0.0, 1.0));
        let flipped = Stencil3::centered([[0.0, 0.5, 1.0]; 3], 0.1, 0.1);
        assert_eq!(elvira_normal(&flipped), Vec2::new(0.0, -1.0));
    }

    #[test]
    fn wall_line_recovered() {
        // x2 = 0.3 x1 + 0.2 with the wall cell spanning [-0.5, 0.5] x [0, 1]
        let n = Vec2::new(-0.3, 1.0).normalized().unwrap();
        // in wall-cell coordinates the center is (0, 0.5)
        let d = n.y * (0.5 - 0.2);
        let s: WallStencil = sample(n, d, 1.0, 1.0, 2, 0);
        let (got, residual) = boundary_elvira_with_residual(&s);
        assert!(angle_between(got, n) < 1e-9, "{got:?}");
        assert!(residual < 1e-28);
    }

    #[test]
    fn wall_parallel_interface() {
        let s = WallStencil::wall5([[0.5, 0.0, 0.0]; 5], 0.1, 0.1);
        assert_eq!(boundary_elvira_normal(&s), Vec2::new(0.0, 1.0));
    }

    #[test]
    fn candidate_counts_and_units() {
        let s = Stencil3::centered(
            [[0.9, 0.4, 0.0], [0.7, 0.2, 0.0], [0.3, 0.05, 0.0]],
            0.1,
            0.2,
        );
        for n in elvira_candidates(&s) {
            assert!((n.norm() - 1.0).abs() < 1e-15);
        }
        let w = WallStencil::wall5([[0.9, 0.4, 0.0]; 5], 0.1, 0.2);
        assert_eq!(boundary_elvira_candidates(&w).len(), 16);
    }
}
