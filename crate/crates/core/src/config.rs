//! Case configuration.
//!
//! The on-disk format is a small TOML document with four sections:
//!
//! ```toml
//! [case]
//! n = 128              # cells along x1; the grid is n x n/4
//! cfl = 0.2            # Courant number, (0, 1]
//! t_end = 0.4
//! method = "elvira"    # "youngs" | "elvira" (the boundary row uses the matching boundary variant)
//! side = "left"        # contact point that is tracked
//! beta = 0.5           # implicitness of the divergence correction
//! sample_stride = 1    # record a contact sample every k steps
//! fallback = "previous_normal"   # or "error": handling of degenerate Youngs gradients
//!
//! [field]
//! kind = "linear"      # "linear" | "vortex" | "time_linear"
//! v0 = -0.2
//! c1 = 0.1
//! c2 = -2.0
//!
//! [cap]
//! center = [0.4, -0.1]
//! radius = 0.2
//!
//! [output]
//! dir = "out"
//! ```
//!
//! Every key except `field` has a default, so a file may be partial.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::geometry::{Rect, Vec2};
use crate::kinematics::Side;
use crate::reconstruction::{FallbackPolicy, Method};
use crate::velocity::VelocityField;

/// Fully resolved description of one simulation case.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseConfig {
    pub field: VelocityField,
    pub n: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub method: Method,
    pub cap_center: Vec2,
    pub radius: f64,
    pub side: Side,
    pub beta: f64,
    pub sample_stride: usize,
    pub fallback: FallbackPolicy,
    pub out_dir: PathBuf,
}

impl Default for CaseConfig {
    fn default() -> Self {
        Self {
            field: VelocityField::LINEAR_EXAMPLE,
            n: 128,
            cfl: 0.2,
            t_end: 0.4,
            method: Method::Elvira,
            cap_center: Vec2::new(0.4, -0.1),
            radius: 0.2,
            side: Side::Left,
            beta: 0.5,
            sample_stride: 1,
            fallback: FallbackPolicy::PreviousNormal,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl CaseConfig {
    /// Computational domain `[0,1] x [0,0.25]`.
    pub fn domain() -> Rect {
        Rect::new(Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.25))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n < 4 || !self.n.is_multiple_of(4) {
            return Err(ConfigError::invalid(
                "case.n",
                format!("{} must be a positive multiple of 4", self.n),
            ));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(ConfigError::invalid(
                "case.cfl",
                format!("{} must lie in (0, 1]", self.cfl),
            ));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(ConfigError::invalid(
                "case.t_end",
                "must be finite and >= 0",
            ));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(ConfigError::invalid("case.beta", "must lie in [0, 1]"));
        }
        if self.sample_stride == 0 {
            return Err(ConfigError::invalid("case.sample_stride", "must be >= 1"));
        }
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(ConfigError::invalid("cap.radius", "must be positive"));
        }
        if !self.cap_center.is_finite() {
            return Err(ConfigError::invalid("cap.center", "must be finite"));
        }
        self.field
            .validate()
            .map_err(|reason| ConfigError::invalid("field", reason))?;
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let file: FileLayout =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        let cfg = file.into_config();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            ConfigError::Parse(msg) => ConfigError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Serialized form that parses back to an identical config.
    pub fn to_toml_string(&self) -> String {
        toml::to_string(&FileLayout::from_config(self)).expect("config is always serializable")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileLayout {
    #[serde(default)]
    case: CaseSection,
    field: VelocityField,
    #[serde(default)]
    cap: CapSection,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct CaseSection {
    n: usize,
    cfl: f64,
    t_end: f64,
    method: Method,
    side: Side,
    beta: f64,
    sample_stride: usize,
    fallback: FallbackPolicy,
}

impl Default for CaseSection {
    fn default() -> Self {
        let d = CaseConfig::default();
        Self {
            n: d.n,
            cfl: d.cfl,
            t_end: d.t_end,
            method: d.method,
            side: d.side,
            beta: d.beta,
            sample_stride: d.sample_stride,
            fallback: d.fallback,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct CapSection {
    center: [f64; 2],
    radius: f64,
}

impl Default for CapSection {
    fn default() -> Self {
        let d = CaseConfig::default();
        Self {
            center: [d.cap_center.x, d.cap_center.y],
            radius: d.radius,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct OutputSection {
    dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: CaseConfig::default().out_dir,
        }
    }
}

impl FileLayout {
    fn into_config(self) -> CaseConfig {
        CaseConfig {
            field: self.field,
            n: self.case.n,
            cfl: self.case.cfl,
            t_end: self.case.t_end,
            method: self.case.method,
            cap_center: Vec2::new(self.cap.center[0], self.cap.center[1]),
            radius: self.cap.radius,
            side: self.case.side,
            beta: self.case.beta,
            sample_stride: self.case.sample_stride,
            fallback: self.case.fallback,
            out_dir: self.output.dir,
        }
    }

    fn from_config(c: &CaseConfig) -> Self {
        Self {
            case: CaseSection {
                n: c.n,
                cfl: c.cfl,
                t_end: c.t_end,
                method: c.method,
                side: c.side,
                beta: c.beta,
                sample_stride: c.sample_stride,
                fallback: c.fallback,
            },
            field: c.field,
            cap: CapSection {
                center: [c.cap_center.x, c.cap_center.y],
                radius: c.radius,
            },
            output: OutputSection {
                dir: c.out_dir.clone(),
            },
        }
    }
}
