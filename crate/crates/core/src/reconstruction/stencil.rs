use crate::geometry::{rect_fraction, rect_offset, Vec2};
use crate::grid::ScalarField;

/// Rectangular block of volume fractions around a reconstruction cell.
///
/// `values[c][r]` is column `c` (left to right) and row `r` (bottom to top).
/// The reconstruction cell sits at `(center_col, center_row)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Block<const W: usize, const H: usize> {
    pub values: [[f64; H]; W],
    pub dx: f64,
    pub dy: f64,
    pub center_col: usize,
    pub center_row: usize,
}

/// 3x3 block centered on the reconstruction cell.
pub type Stencil3 = Block<3, 3>;

/// 5x3 block whose bottom-middle cell touches the wall.
pub type WallStencil = Block<5, 3>;

impl<const W: usize, const H: usize> Block<W, H> {
    #[inline]
    pub fn at(&self, col: usize, row: usize) -> f64 {
        self.values[col][row]
    }

    #[inline]
    pub fn center_value(&self) -> f64 {
        self.values[self.center_col][self.center_row]
    }

    /// Column sum `sum_r values[col][r]`.
    #[inline]
    pub fn column_sum(&self, col: usize) -> f64 {
        self.values[col].iter().sum()
    }

    /// Row sum `sum_c values[c][row]`.
    #[inline]
    pub fn row_sum(&self, row: usize) -> f64 {
        self.values.iter().map(|c| c[row]).sum()
    }

    /// The block reflected about the vertical axis through its center column.
    pub fn mirrored(&self) -> Self {
        let mut m = *self;
        for c in 0..W {
            m.values[c] = self.values[W - 1 - c];
        }
        m.center_col = W - 1 - self.center_col;
        m
    }

    /// Squared deviation between the block and the fractions induced by the
    /// line with `normal` that reproduces the center value.
    pub fn deviation(&self, normal: Vec2) -> f64 {
        let offset = rect_offset(normal, self.center_value(), self.dx, self.dy);
        let mut sum = 0.0;
        for c in 0..W {
            let sx = (c as f64 - self.center_col as f64) * self.dx;
            for r in 0..H {
                let sy = (r as f64 - self.center_row as f64) * self.dy;
                let shifted = offset + sx * normal.x + sy * normal.y;
                let d = rect_fraction(normal, shifted, self.dx, self.dy) - self.values[c][r];
                sum += d * d;
            }
        }
        sum
    }

    /// Copies the block around cell `(i, j)` out of a field. `(i, j)` lands on
    /// the block's center slot.
    pub fn gather(
        field: &ScalarField,
        i: isize,
        j: isize,
        center_col: usize,
        center_row: usize,
        dx: f64,
        dy: f64,
    ) -> Self {
        let mut values = [[0.0; H]; W];
        for (c, col) in values.iter_mut().enumerate() {
            for (r, v) in col.iter_mut().enumerate() {
                *v = field.get(
                    i + c as isize - center_col as isize,
                    j + r as isize - center_row as isize,
                );
            }
        }
        Self {
            values,
            dx,
            dy,
            center_col,
            center_row,
        }
    }
}

impl Stencil3 {
    pub fn centered(values: [[f64; 3]; 3], dx: f64, dy: f64) -> Self {
        Self {
            values,
            dx,
            dy,
            center_col: 1,
            center_row: 1,
        }
    }

    /// Boundary-cell block: center column, bottom row.
    pub fn wall(values: [[f64; 3]; 3], dx: f64, dy: f64) -> Self {
        Self {
            values,
            dx,
            dy,
            center_col: 1,
            center_row: 0,
        }
    }
}

impl WallStencil {
    pub fn wall5(values: [[f64; 3]; 5], dx: f64, dy: f64) -> Self {
        Self {
            values,
            dx,
            dy,
            center_col: 2,
            center_row: 0,
        }
    }
}
