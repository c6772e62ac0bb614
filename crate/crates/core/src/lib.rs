//! Geometric volume-of-fluid advection on a Cartesian grid with a flat solid
//! wall, PLIC reconstruction that treats the wall row specially, and
//! reference solutions for the contact point.
//!
//! The usual entry point is [`runner::run_case`] with a [`CaseConfig`].

// Checks like `!(x > 0.0)` are written that way on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod advection;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod kinematics;
pub mod reconstruction;
pub mod runner;
pub mod velocity;

pub use config::CaseConfig;
pub use diagnostics::{ContactSample, ErrorNorms, TranslationScheme};
pub use error::{ConfigError, Error, GeometryError, NumericsError, ReconstructionError, Result};
pub use geometry::{ConvexPolygon, HalfPlane, Rect, Vec2};
pub use grid::{FaceVelocityField, Grid, ScalarField};
pub use kinematics::{ContactTrajectory, ReferenceSolution, Side};
pub use reconstruction::{FallbackPolicy, Method, PlicElement, PlicField};
pub use runner::{run_case, run_sweep, RunResult, SweepReport};
pub use velocity::VelocityField;
