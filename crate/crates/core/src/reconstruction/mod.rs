//! PLIC reconstruction: normals per interface cell, then a line positioned to
//! match the cell's volume fraction.
//!
//! Cells above the wall row use the bulk scheme of the selected [`Method`];
//! the wall row (`j = 0`) uses its boundary variant.

mod elvira;
mod stencil;
mod youngs;

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

pub use elvira::{
    boundary_elvira_candidates, boundary_elvira_normal, boundary_elvira_with_residual,
    elvira_candidates, elvira_normal, elvira_with_residual,
};
pub use stencil::{Block, Stencil3, WallStencil};
pub use youngs::{boundary_youngs_normal, youngs_normal};

use crate::error::ReconstructionError;
use crate::geometry::{position_plic, HalfPlane, Vec2};
use crate::grid::{Grid, ScalarField};

/// Cells with `EPS_REC < alpha < 1 - EPS_REC` are interface cells.
pub const EPS_REC: f64 = 1e-6;

#[inline]
pub fn is_interface(alpha: f64) -> bool {
    alpha > EPS_REC && alpha < 1.0 - EPS_REC
}

/// Reconstruction family; the wall row always uses the matching boundary
/// variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Youngs,
    Elvira,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Youngs => "youngs",
            Method::Elvira => "elvira",
        }
    }

    pub fn boundary_label(&self) -> &'static str {
        match self {
            Method::Youngs => "boundary-youngs",
            Method::Elvira => "boundary-elvira",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "youngs" => Ok(Method::Youngs),
            "elvira" => Ok(Method::Elvira),
            other => Err(format!("unknown method `{other}` (expected youngs|elvira)")),
        }
    }
}

/// What to do when a Youngs gradient vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FallbackPolicy {
    /// Reuse the cell's normal from the previous reconstruction, or the wall
    /// normal `(0, 1)` if there is none.
    PreviousNormal,
    /// Fail with the cell index.
    Error,
}

/// Reconstructed interface in one cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlicElement {
    pub i: usize,
    pub j: usize,
    pub normal: Vec2,
    pub plane: HalfPlane,
    pub alpha: f64,
}

/// All PLIC elements of a field, with O(1) lookup by cell.
#[derive(Clone, Debug, Default)]
pub struct PlicField {
    nx: usize,
    elements: Vec<PlicElement>,
    lookup: Vec<u32>,
    fallbacks: Vec<(usize, usize)>,
}

const NONE: u32 = u32::MAX;

impl PlicField {
    /// An empty field for `grid`.
    pub fn new(grid: &Grid) -> Self {
        Self {
            nx: grid.nx,
            elements: Vec::new(),
            lookup: vec![NONE; grid.nx * grid.ny],
            fallbacks: Vec::new(),
        }
    }

    /// Adds `e`, replacing any element already stored for its cell.
    pub fn insert(&mut self, e: PlicElement) {
        let slot = &mut self.lookup[e.j * self.nx + e.i];
        if *slot == NONE {
            *slot = self.elements.len() as u32;
            self.elements.push(e);
        } else {
            self.elements[*slot as usize] = e;
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&PlicElement> {
        let k = *self.lookup.get(j * self.nx + i)?;
        (k != NONE).then(|| &self.elements[k as usize])
    }

    pub fn elements(&self) -> &[PlicElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Cells whose normal came from the degenerate-gradient fallback.
    pub fn fallback_cells(&self) -> &[(usize, usize)] {
        &self.fallbacks
    }

    /// One line per element: `i j n1 n2 offset alpha`, 17 significant digits.
    pub fn write_dump<W: Write>(&self, mut w: W) -> io::Result<()> {
        for e in &self.elements {
            writeln!(
                w,
                "{} {} {:.16e} {:.16e} {:.16e} {:.16e}",
                e.i, e.j, e.normal.x, e.normal.y, e.plane.offset, e.alpha
            )?;
        }
        Ok(())
    }
}

/// Normal for interface cell `(i, j)` from the configured scheme.
pub fn cell_normal(
    alpha: &ScalarField,
    grid: &Grid,
    method: Method,
    i: usize,
    j: usize,
) -> Result<Vec2, ReconstructionError> {
    let (ii, jj) = (i as isize, j as isize);
    let (dx, dy) = (grid.dx, grid.dy);
    match (method, j == 0) {
        (Method::Youngs, false) => youngs_normal(&Stencil3::gather(alpha, ii, jj, 1, 1, dx, dy)),
        (Method::Youngs, true) => {
            boundary_youngs_normal(&Stencil3::gather(alpha, ii, jj, 1, 0, dx, dy))
        }
        (Method::Elvira, false) => Ok(elvira_normal(&Stencil3::gather(
            alpha, ii, jj, 1, 1, dx, dy,
        ))),
        (Method::Elvira, true) => Ok(boundary_elvira_normal(&WallStencil::gather(
            alpha, ii, jj, 2, 0, dx, dy,
        ))),
    }
}

/// Reconstructs every interface cell of `alpha`. Ghost layers must be filled.
///
/// `previous` supplies fallback normals under
/// [`FallbackPolicy::PreviousNormal`].
pub fn reconstruct(
    alpha: &ScalarField,
    grid: &Grid,
    method: Method,
    policy: FallbackPolicy,
    previous: Option<&PlicField>,
) -> Result<PlicField, ReconstructionError> {
    let mut out = PlicField::new(grid);
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let a = alpha.get(i as isize, j as isize);
            if !is_interface(a) {
                continue;
            }
            let normal = match cell_normal(alpha, grid, method, i, j) {
                Ok(n) => n,
                Err(ReconstructionError::DegenerateGradient { .. }) => match policy {
                    FallbackPolicy::Error => {
                        return Err(ReconstructionError::DegenerateCell { i, j })
                    }
                    FallbackPolicy::PreviousNormal => {
                        out.fallbacks.push((i, j));
                        previous
                            .and_then(|p| p.get(i, j))
                            .map(|e| e.normal)
                            .unwrap_or(Vec2::new(0.0, 1.0))
                    }
                },
                Err(e) => return Err(e),
            };
            let plane = position_plic(normal, a, &grid.cell_rect(i as isize, j as isize))?;
            out.insert(PlicElement {
                i,
                j,
                normal: plane.normal,
                plane,
                alpha: a,
            });
        }
    }
    Ok(out)
}
