//! Fixtures shared by the criterion benches: a cap case at a given mesh
//! size and the stencils of its interface cells.

use clvof_core::advection::StepSettings;
use clvof_core::grid::{apply_ghost_bc, build_grid, init_volume_fractions};
use clvof_core::reconstruction::{is_interface, Stencil3, WallStencil};
use clvof_core::runner::time_step;
use clvof_core::{CaseConfig, Grid, HalfPlane, Method, ScalarField, Vec2};

/// Initial state of the default linear-field case at `n` cells.
pub struct CapCase {
    pub config: CaseConfig,
    pub grid: Grid,
    pub alpha: ScalarField,
    pub dt: f64,
}

impl CapCase {
    pub fn new(n: usize, method: Method) -> Self {
        let config = CaseConfig {
            n,
            method,
            ..CaseConfig::default()
        };
        let grid = build_grid(&config).expect("benchmark sizes are valid");
        let mut alpha = init_volume_fractions(&grid, config.cap_center, config.radius);
        apply_ghost_bc(&mut alpha);
        let (dt, _) = time_step(&config, &grid);
        Self {
            config,
            grid,
            alpha,
            dt,
        }
    }

    pub fn settings(&self) -> StepSettings {
        StepSettings {
            method: self.config.method,
            beta: self.config.beta,
            fallback: self.config.fallback,
        }
    }

    /// 3x3 stencils of all interface cells above the wall row.
    pub fn bulk_stencils(&self) -> Vec<Stencil3> {
        self.interface_cells(|j| j > 0)
            .map(|(i, j)| Stencil3::gather(&self.alpha, i, j, 1, 1, self.grid.dx, self.grid.dy))
            .collect()
    }

    /// 5x3 stencils of the interface cells in the wall row.
    pub fn wall_stencils(&self) -> Vec<WallStencil> {
        self.interface_cells(|j| j == 0)
            .map(|(i, j)| WallStencil::gather(&self.alpha, i, j, 2, 0, self.grid.dx, self.grid.dy))
            .collect()
    }

    fn interface_cells(
        &self,
        rows: fn(usize) -> bool,
    ) -> impl Iterator<Item = (isize, isize)> + '_ {
        self.alpha
            .interior()
            .filter(move |&(_, j, a)| rows(j) && is_interface(a))
            .map(|(i, j, _)| (i as isize, j as isize))
    }
}

/// `count` half-planes through the unit cell centered at the origin with
/// normals spread over the circle and offsets spread across the cell.
pub fn line_family(count: usize) -> Vec<HalfPlane> {
    (0..count)
        .map(|k| {
            let phi = std::f64::consts::TAU * (k as f64 + 0.37) / count as f64;
            let n = Vec2::new(phi.cos(), phi.sin());
            let half = 0.5 * (n.x.abs() + n.y.abs());
            let s = ((k * 7919) % count) as f64 / count as f64 * 1.8 - 0.9;
            HalfPlane::new(n, s * half, Vec2::new(0.0, 0.0)).expect("unit normal")
        })
        .collect()
}
