//! Gradient-based normals: the classical Youngs scheme and its wall variant.

use super::stencil::Stencil3;
use crate::error::ReconstructionError;
use crate::geometry::Vec2;

const MIN_GRADIENT: f64 = 1e-12;

fn normal_from_gradient(gx: f64, gy: f64) -> Result<Vec2, ReconstructionError> {
    let magnitude = gx.hypot(gy);
    if !(magnitude > MIN_GRADIENT) {
        return Err(ReconstructionError::DegenerateGradient { magnitude });
    }
    Ok(Vec2::new(-gx / magnitude, -gy / magnitude))
}

/// `-grad alpha / |grad alpha|` with the 1/2, 1/4, 1/4 weighted central
/// differences on a centered 3x3 block.
pub fn youngs_normal(s: &Stencil3) -> Result<Vec2, ReconstructionError> {
    let a = |k: isize, l: isize| s.at((1 + k) as usize, (1 + l) as usize);
    let gx =
        (0.5 * (a(1, 0) - a(-1, 0)) + 0.25 * (a(1, 1) - a(-1, 1)) + 0.25 * (a(1, -1) - a(-1, -1)))
            / (2.0 * s.dx);
    let gy =
        (0.5 * (a(0, 1) - a(0, -1)) + 0.25 * (a(1, 1) - a(1, -1)) + 0.25 * (a(-1, 1) - a(-1, -1)))
            / (2.0 * s.dy);
    normal_from_gradient(gx, gy)
}

/// Wall variant on a block whose bottom row is the wall row: central
/// differences along the wall (wall row only) and weighted second-order
/// one-sided differences normal to it.
pub fn boundary_youngs_normal(s: &Stencil3) -> Result<Vec2, ReconstructionError> {
    // columns: 0 = i-1, 1 = i, 2 = i+1; rows: 0 = wall row
    let one_sided = |c: usize| -s.at(c, 2) + 4.0 * s.at(c, 1) - 3.0 * s.at(c, 0);
    let gx = (s.at(2, 0) - s.at(0, 0)) / (2.0 * s.dx);
    let gy =
        one_sided(1) / (4.0 * s.dy) + one_sided(2) / (8.0 * s.dy) + one_sided(0) / (8.0 * s.dy);
    normal_from_gradient(gx, gy)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Columns left to right, each column bottom to top.
    fn rows_to_block(bottom: f64, middle: f64, top: f64) -> [[f64; 3]; 3] {
        [[bottom, middle, top]; 3]
    }

    #[test]
    fn horizontal_stratification() {
        let s = Stencil3::centered(rows_to_block(1.0, 0.5, 0.0), 0.1, 0.1);
        assert_eq!(youngs_normal(&s).unwrap(), Vec2::new(0.0, 1.0));
    }

    #[test]
    fn vertical_stratification() {
        let s = Stencil3::centered([[1.0; 3], [0.5; 3], [0.0; 3]], 0.1, 0.1);
        assert_eq!(youngs_normal(&s).unwrap(), Vec2::new(1.0, 0.0));
    }

    #[test]
    fn uniform_block_is_degenerate() {
        let s = Stencil3::centered([[0.5; 3]; 3], 0.1, 0.1);
        assert!(matches!(
            youngs_normal(&s),
            Err(ReconstructionError::DegenerateGradient { .. })
        ));
        assert!(boundary_youngs_normal(&Stencil3::wall([[0.5; 3]; 3], 0.1, 0.1)).is_err());
    }

    #[test]
    fn boundary_variant_axis_cases() {
        let dy = 0.1;
        let s = Stencil3::wall(rows_to_block(1.0, 0.5, 0.0), 0.1, dy);
        // (-0 + 4 * 0.5 - 3 * 1) / (2 dy) * (1 + 1/2 + 1/2) / 2
        let expected_gy = (-0.0 + 4.0 * 0.5 - 3.0 * 1.0) / (2.0 * dy) * (1.0 + 0.5 + 0.5) / 2.0;
        assert!(expected_gy < 0.0);
        assert_eq!(boundary_youngs_normal(&s).unwrap(), Vec2::new(0.0, 1.0));
        let v = Stencil3::wall([[1.0; 3], [0.5; 3], [0.0; 3]], 0.1, dy);
        assert_eq!(boundary_youngs_normal(&v).unwrap(), Vec2::new(1.0, 0.0));
    }

    #[test]
    fn mirror_symmetry() {
        let vals = [[0.9, 0.4, 0.0], [0.7, 0.2, 0.0], [0.3, 0.05, 0.0]];
        for s in [
            Stencil3::centered(vals, 0.1, 0.1),
            Stencil3::wall(vals, 0.1, 0.1),
        ] {
            let f = if s.center_row == 1 {
                youngs_normal
            } else {
                boundary_youngs_normal
            };
            let n = f(&s).unwrap();
            let m = f(&s.mirrored()).unwrap();
            assert!((n.x + m.x).abs() < 1e-15 && (n.y - m.y).abs() < 1e-15);
        }
    }
}
