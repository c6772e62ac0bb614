//! Case orchestration: time stepping, contact sampling, reference errors,
//! artifacts, and mesh/CFL sweeps.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::advection::{advance_timestep, AuditRecord, StepSettings};
use crate::config::CaseConfig;
use crate::diagnostics::{
    error_norms, extract_contact_state, l1_error, write_summary_csv, write_timeseries_csv,
    ContactSample, ErrorNorms, SummaryRow,
};
use crate::error::{NumericsError, Result};
use crate::grid::{apply_ghost_bc, build_grid, init_volume_fractions, Grid, ScalarField};
use crate::kinematics::{cap_contact_state, ReferenceSolution};
use crate::reconstruction::{reconstruct, PlicField};

/// Time step and step count of a case.
///
/// `dt = CFL dx / max|v|`, shrunk so that `T` is hit after an integer
/// number of steps. For modulated fields whose end time is a whole number
/// of periods `tau`, every multiple of `tau` is hit as well.
pub fn time_step(config: &CaseConfig, grid: &Grid) -> (f64, usize) {
    let t_end = config.t_end;
    if t_end <= 0.0 {
        return (0.0, 0);
    }
    let speed = config.field.max_speed(&grid.extent());
    if speed <= 0.0 {
        return (t_end, 1);
    }
    let dt0 = config.cfl * grid.dx.min(grid.dy) / speed;
    let mut steps = (t_end / dt0 - 1e-9).ceil().max(1.0) as usize;
    if let Some(k) = whole_periods(config) {
        steps = steps.div_ceil(k) * k;
    }
    (t_end / steps as f64, steps)
}

/// `T / tau` when it is a positive integer.
fn whole_periods(config: &CaseConfig) -> Option<usize> {
    let tau = config.field.tau()?;
    let ratio = config.t_end / tau;
    let k = ratio.round();
    (k >= 1.0 && (ratio - k).abs() < 1e-9).then_some(k as usize)
}

/// Everything a finished case produced.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub config: CaseConfig,
    pub grid: Grid,
    pub dt: f64,
    pub steps: usize,
    pub samples: Vec<ContactSample>,
    pub reference: Option<ReferenceSolution>,
    /// Contact errors over `[0, T]`; `None` without reference or without any
    /// regular sample.
    pub norms: Option<ErrorNorms>,
    pub initial: ScalarField,
    pub final_field: ScalarField,
    /// L1 distance to the initial field when the exact solution returns to
    /// it at `T` (modulated fields run for whole periods).
    pub e1: Option<f64>,
    /// `|V(T) - V(0)| / V(0)`.
    pub volume_drift: f64,
    pub min_alpha: f64,
    pub max_alpha: f64,
    /// Volume fraction removed by redistribution clamps over the run.
    pub discarded: f64,
    pub fallback_cells: usize,
    pub audit: Vec<AuditRecord>,
}

impl RunResult {
    pub fn e_theta_deg(&self) -> f64 {
        self.norms.map_or(f64::NAN, |n| n.e_theta_deg)
    }

    pub fn e_cl(&self) -> f64 {
        self.norms.map_or(f64::NAN, |n| n.e_cl)
    }

    /// Sample closest to `t`.
    pub fn sample_near(&self, t: f64) -> Option<&ContactSample> {
        self.samples
            .iter()
            .min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
    }

    pub fn summary_row(&self) -> SummaryRow {
        SummaryRow {
            n: self.config.n,
            dx_over_r0: self.grid.dx / self.config.radius,
            e_theta_deg: self.e_theta_deg(),
            e_cl: self.e_cl(),
            e1: self.e1.unwrap_or(f64::NAN),
        }
    }
}

/// Runs one case to `T`.
pub fn run_case(config: &CaseConfig) -> Result<RunResult> {
    config.validate()?;
    let grid = build_grid(config)?;
    let (dt, steps) = time_step(config, &grid);
    log::info!(
        "case {} N={} method={} dt={dt:.6e} steps={steps}",
        config.field.name(),
        config.n,
        config.method.label()
    );
    let settings = StepSettings {
        method: config.method,
        beta: config.beta,
        fallback: config.fallback,
    };
    let mut alpha = init_volume_fractions(&grid, config.cap_center, config.radius);
    apply_ghost_bc(&mut alpha);
    let initial = alpha.clone();
    let volume0 = initial.interior_sum() * grid.cell_area();

    let reference = match cap_contact_state(config.cap_center, config.radius, config.side) {
        Some((x0, theta0)) => {
            let dt_ode = if dt > 0.0 { (dt / 4.0).min(1e-3) } else { 1e-3 };
            Some(ReferenceSolution::for_field(
                &config.field,
                x0,
                theta0,
                config.side,
                config.t_end,
                dt_ode,
            )?)
        }
        None => None,
    };

    let mut samples = Vec::new();
    let mut audit = Vec::with_capacity(steps);
    let mut previous: Option<PlicField> = None;
    let mut discarded = 0.0;
    let mut fallback_cells = 0;
    for step in 0..steps {
        let t = step as f64 * dt;
        let report = advance_timestep(
            &mut alpha,
            &grid,
            &config.field,
            t,
            dt,
            step,
            &settings,
            previous.as_ref(),
        )?;
        if step % config.sample_stride == 0 {
            samples.push(extract_contact_state(
                &report.initial_plic,
                &grid,
                config.side,
                t,
            ));
        }
        discarded += report
            .redistribution
            .iter()
            .map(|r| r.discarded)
            .sum::<f64>();
        fallback_cells +=
            report.initial_plic.fallback_cells().len() + report.final_plic.fallback_cells().len();
        audit.push(report.audit);
        previous = Some(report.final_plic);
    }
    let t_final = if steps == 0 { 0.0 } else { config.t_end };
    let final_plic = reconstruct(
        &alpha,
        &grid,
        config.method,
        config.fallback,
        previous.as_ref(),
    )?;
    samples.push(extract_contact_state(
        &final_plic,
        &grid,
        config.side,
        t_final,
    ));

    let norms = match &reference {
        Some(r) => match error_norms(&samples, r, config.radius, (0.0, t_final)) {
            Ok(n) => Some(n),
            Err(NumericsError::Diagnostics(msg)) => {
                log::warn!("N={}: {msg}", config.n);
                None
            }
            Err(e) => return Err(e.into()),
        },
        None => None,
    };
    let e1 = match whole_periods(config) {
        Some(_) => Some(l1_error(&alpha, &initial, &grid)?),
        None => None,
    };
    let volume = alpha.interior_sum() * grid.cell_area();
    let volume_drift = if volume0 > 0.0 {
        (volume - volume0).abs() / volume0
    } else {
        volume.abs()
    };
    let (min_alpha, max_alpha) = alpha.interior_min_max();
    Ok(RunResult {
        config: config.clone(),
        grid,
        dt,
        steps,
        samples,
        reference,
        norms,
        initial,
        final_field: alpha,
        e1,
        volume_drift,
        min_alpha,
        max_alpha,
        discarded,
        fallback_cells,
        audit,
    })
}

/// Writes `timeseries.csv`, `audit.log`, `final_alpha.txt` and
/// `resolved.toml` into `dir`.
pub fn write_artifacts(result: &RunResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut ts = BufWriter::new(File::create(dir.join("timeseries.csv"))?);
    write_timeseries_csv(&mut ts, &result.samples, result.reference.as_ref())?;
    ts.flush()?;

    let mut log = BufWriter::new(File::create(dir.join("audit.log"))?);
    writeln!(log, "{}", AuditRecord::HEADER)?;
    for rec in &result.audit {
        writeln!(log, "{rec}")?;
    }
    log.flush()?;

    let mut field = BufWriter::new(File::create(dir.join("final_alpha.txt"))?);
    result.final_field.write_snapshot(&mut field)?;
    field.flush()?;

    let mut resolved = result.config.clone();
    resolved.out_dir = dir.to_path_buf();
    fs::write(dir.join("resolved.toml"), resolved.to_toml_string())?;
    Ok(())
}

/// One case of a sweep: the run or the reason it failed.
#[derive(Debug)]
pub struct SweepEntry {
    pub config: CaseConfig,
    pub outcome: std::result::Result<RunResult, String>,
}

/// Mesh-refinement table with fitted orders.
#[derive(Debug)]
pub struct SweepReport {
    pub entries: Vec<SweepEntry>,
    pub order_theta: f64,
    pub order_cl: f64,
    pub order_e1: f64,
}

impl SweepReport {
    pub fn rows(&self) -> Vec<SummaryRow> {
        self.entries
            .iter()
            .map(|e| match &e.outcome {
                Ok(r) => r.summary_row(),
                Err(_) => SummaryRow {
                    n: e.config.n,
                    dx_over_r0: 1.0 / (e.config.n as f64 * e.config.radius),
                    e_theta_deg: f64::NAN,
                    e_cl: f64::NAN,
                    e1: f64::NAN,
                },
            })
            .collect()
    }

    pub fn runs(&self) -> impl Iterator<Item = &RunResult> {
        self.entries.iter().filter_map(|e| e.outcome.as_ref().ok())
    }

    pub fn write_summary(&self, w: impl Write) -> std::io::Result<()> {
        write_summary_csv(w, &self.rows(), self.order_theta, self.order_cl)
    }
}

fn fitted(rows: &[SummaryRow], pick: impl Fn(&SummaryRow) -> f64) -> f64 {
    let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.dx_over_r0, pick(r))).collect();
    // metrics that are undefined for the whole sweep (E1 off-period) stay NaN quietly
    if pairs.iter().all(|p| !p.1.is_finite()) {
        return f64::NAN;
    }
    crate::diagnostics::convergence_order(&pairs).unwrap_or(f64::NAN)
}

/// Runs `base` at every mesh size in `ns` in parallel and fits orders.
pub fn run_sweep(base: &CaseConfig, ns: &[usize]) -> SweepReport {
    let configs: Vec<CaseConfig> = ns
        .iter()
        .map(|&n| CaseConfig { n, ..base.clone() })
        .collect();
    let entries: Vec<SweepEntry> = configs
        .into_par_iter()
        .map(|config| {
            let outcome = run_case(&config).map_err(|e| {
                log::error!("N={} failed: {e}", config.n);
                e.to_string()
            });
            SweepEntry { config, outcome }
        })
        .collect();
    let mut report = SweepReport {
        entries,
        order_theta: f64::NAN,
        order_cl: f64::NAN,
        order_e1: f64::NAN,
    };
    let rows = report.rows();
    report.order_theta = fitted(&rows, |r| r.e_theta_deg);
    report.order_cl = fitted(&rows, |r| r.e_cl);
    report.order_e1 = fitted(&rows, |r| r.e1);
    report
}

/// A mesh sweep per Courant number.
pub fn cfl_study(base: &CaseConfig, cfls: &[f64], ns: &[usize]) -> Vec<(f64, SweepReport)> {
    cfls.par_iter()
        .map(|&cfl| {
            (
                cfl,
                run_sweep(
                    &CaseConfig {
                        cfl,
                        ..base.clone()
                    },
                    ns,
                ),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::velocity::VelocityField;

    #[test]
    fn zero_end_time_outputs_initial_state() {
        let cfg = CaseConfig {
            n: 32,
            t_end: 0.0,
            ..CaseConfig::default()
        };
        let r = run_case(&cfg).unwrap();
        assert_eq!(r.steps, 0);
        assert_eq!(r.samples.len(), 1);
        assert_eq!(r.final_field, r.initial);
        assert!(r.audit.is_empty());
        assert_eq!(r.volume_drift, 0.0);
    }

    #[test]
    fn time_step_hits_end_time_and_periods() {
        let cfg = CaseConfig {
            n: 128,
            field: VelocityField::TIME_LINEAR_EXAMPLE,
            t_end: 0.4,
            ..CaseConfig::default()
        };
        let g = build_grid(&cfg).unwrap();
        let (dt, steps) = time_step(&cfg, &g);
        assert_eq!(steps % 2, 0);
        assert!((dt * steps as f64 - 0.4).abs() < 1e-14);
        let speed = cfg.field.max_speed(&g.extent());
        assert!(dt * speed / g.dx <= cfg.cfl + 1e-12);
    }

    #[test]
    fn short_linear_run_is_conservative_and_bounded() {
        let cfg = CaseConfig {
            n: 64,
            t_end: 0.05,
            ..CaseConfig::default()
        };
        let r = run_case(&cfg).unwrap();
        assert!(r.volume_drift < 1e-12, "{:e}", r.volume_drift);
        assert!(r.min_alpha >= 0.0 && r.max_alpha <= 1.0);
        assert!(r.norms.is_some());
        assert_eq!(r.audit.len(), r.steps);
    }

    #[test]
    fn artifacts_and_config_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = CaseConfig {
            n: 32,
            t_end: 0.02,
            ..CaseConfig::default()
        };
        let r = run_case(&cfg).unwrap();
        write_artifacts(&r, dir.path()).unwrap();
        for f in [
            "timeseries.csv",
            "audit.log",
            "final_alpha.txt",
            "resolved.toml",
        ] {
            assert!(dir.path().join(f).is_file(), "{f}");
        }
        let again = CaseConfig::from_path(&dir.path().join("resolved.toml")).unwrap();
        let r2 = run_case(&again).unwrap();
        assert_eq!(r.final_field, r2.final_field);
        let ts = std::fs::read_to_string(dir.path().join("timeseries.csv")).unwrap();
        assert_eq!(ts.lines().count(), r.samples.len() + 1);
    }

    #[test]
    fn sweep_records_failures_and_continues() {
        let base = CaseConfig {
            t_end: 0.01,
            ..CaseConfig::default()
        };
        let report = run_sweep(&base, &[32, 30, 64]);
        assert_eq!(report.entries.len(), 3);
        assert!(report.entries[1].outcome.is_err());
        assert_eq!(report.runs().count(), 2);
    }
}
