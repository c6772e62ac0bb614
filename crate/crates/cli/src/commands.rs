use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clvof_core::diagnostics::{
    exact_line_error, max_translation_error, translation_test, write_translation_csv,
    TranslationScheme,
};
use clvof_core::runner::{cfl_study, run_case, run_sweep, write_artifacts, RunResult, SweepReport};
use clvof_core::{CaseConfig, ConfigError, Error, Method, Vec2, VelocityField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{CaseArgs, CflArgs, Command, RunArgs, Status, SweepArgs, TranslateArgs, VortexArgs};

/// `println!` that tolerates a closed stdout (for example `clvof ... | head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

const VOLUME_TOL: f64 = 1e-9;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Config(_) => Status::Config,
            CliError::Numerical(_) => Status::Numerical,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

// Output paths come from the user, so write failures count as configuration
// problems rather than numerical ones.
impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o: {e}"))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(c) => c.into(),
            Error::Numerics(n) => CliError::Numerical(n.to_string()),
            Error::Io(io) => io.into(),
        }
    }
}

type CliResult = Result<Status, CliError>;

pub fn dispatch(cmd: Command) -> CliResult {
    match cmd {
        Command::Run(a) => run(a),
        Command::Sweep(a) => sweep(a),
        Command::CflStudy(a) => cfl(a),
        Command::TranslateTest(a) => translate(a),
        Command::VortexTest(a) => vortex(a),
    }
}

/// Loads the case file (or the default case) and applies flag overrides.
fn load_case(args: &CaseArgs, default: CaseConfig) -> Result<CaseConfig, CliError> {
    let mut cfg = match &args.config {
        Some(p) => CaseConfig::from_path(p)?,
        None => default,
    };
    if let Some(m) = args.method {
        cfg.method = m;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(c) = args.cfl {
        cfg.cfl = c;
    }
    if let Some(o) = &args.out {
        cfg.out_dir = o.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn validate_sizes(base: &CaseConfig, ns: &[usize]) -> Result<(), CliError> {
    if ns.len() < 2 {
        return Err(CliError::Config(
            "a sweep needs at least two mesh sizes".into(),
        ));
    }
    for &n in ns {
        CaseConfig { n, ..base.clone() }.validate()?;
    }
    Ok(())
}

/// Collects threshold failures for `--check`.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
}

impl Checks {
    fn require(&mut self, ok: bool, what: String) {
        if !ok {
            self.failures.push(what);
        }
    }

    fn conservation(&mut self, r: &RunResult) {
        self.require(
            r.volume_drift <= VOLUME_TOL,
            format!(
                "N={}: relative volume error {:.3e} > {VOLUME_TOL:e}",
                r.config.n, r.volume_drift
            ),
        );
        self.require(
            r.min_alpha >= 0.0 && r.max_alpha <= 1.0,
            format!("N={}: alpha outside [0, 1]", r.config.n),
        );
    }

    /// Order thresholds for a mesh sweep of `base`.
    fn sweep(&mut self, base: &CaseConfig, rep: &SweepReport) {
        for r in rep.runs() {
            self.conservation(r);
        }
        if base.method == Method::Elvira {
            self.require(
                rep.order_theta >= 0.8,
                format!("E_theta order {:.3} < 0.8", rep.order_theta),
            );
        }
        self.require(
            rep.order_cl >= 0.8,
            format!("E_cl order {:.3} < 0.8", rep.order_cl),
        );
        if rep.order_e1.is_finite() {
            let min = match base.method {
                Method::Elvira => 1.5,
                Method::Youngs => 0.8,
            };
            self.require(
                rep.order_e1 >= min,
                format!("E1 order {:.3} < {min}", rep.order_e1),
            );
        }
    }

    fn finish(self, enabled: bool, base: Status) -> Status {
        if !enabled {
            return base;
        }
        for f in &self.failures {
            eprintln!("check failed: {f}");
        }
        if self.failures.is_empty() {
            base
        } else {
            Status::Regression
        }
    }
}

fn print_run(r: &RunResult) {
    out!(
        "case       {} / {} / N={}",
        r.config.field.name(),
        r.config.method.boundary_label(),
        r.config.n
    );
    out!("steps      {} (dt = {:.6e})", r.steps, r.dt);
    if let Some(nm) = &r.norms {
        out!(
            "E_theta    {:.6} deg   E_cl {:.6e}   ({} regular, {} irregular samples)",
            nm.e_theta_deg,
            nm.e_cl,
            nm.regular,
            nm.irregular
        );
    }
    if let Some(e1) = r.e1 {
        out!("E1         {e1:.6e}");
    }
    out!(
        "volume     relative drift {:.3e}, alpha in [{:e}, {}]",
        r.volume_drift,
        r.min_alpha,
        r.max_alpha
    );
    if r.fallback_cells > 0 {
        out!("fallbacks  {}", r.fallback_cells);
    }
}

fn run(a: RunArgs) -> CliResult {
    let cfg = load_case(&a.case, CaseConfig::default())?;
    let r = run_case(&cfg)?;
    write_artifacts(&r, &cfg.out_dir)?;
    print_run(&r);
    out!("artifacts  {}", cfg.out_dir.display());
    let mut checks = Checks::default();
    checks.conservation(&r);
    Ok(checks.finish(a.case.check, Status::Ok))
}

fn print_sweep(label: &str, rep: &SweepReport) {
    out!("{label}");
    out!(
        "  {:>6} {:>12} {:>12} {:>12} {:>12}",
        "N",
        "dx/R0",
        "E_theta",
        "E_cl",
        "E1"
    );
    for row in rep.rows() {
        out!(
            "  {:>6} {:>12.4e} {:>12.6} {:>12.4e} {:>12.4e}",
            row.n,
            row.dx_over_r0,
            row.e_theta_deg,
            row.e_cl,
            row.e1
        );
    }
    out!(
        "  orders: E_theta {:.3}, E_cl {:.3}, E1 {:.3}",
        rep.order_theta,
        rep.order_cl,
        rep.order_e1
    );
}

/// Summary table plus per-size artifacts under `dir`. Returns
/// `Status::Numerical` if any size failed.
fn write_sweep(rep: &SweepReport, dir: &Path) -> Result<Status, CliError> {
    fs::create_dir_all(dir)?;
    let mut w = BufWriter::new(File::create(dir.join("summary.csv"))?);
    rep.write_summary(&mut w)?;
    w.flush()?;
    let mut status = Status::Ok;
    for e in &rep.entries {
        match &e.outcome {
            Ok(r) => write_artifacts(r, &dir.join(format!("n{}", e.config.n)))?,
            Err(msg) => {
                eprintln!("N={} failed: {msg}", e.config.n);
                status = Status::Numerical;
            }
        }
    }
    Ok(status)
}

fn sweep(a: SweepArgs) -> CliResult {
    let base = load_case(&a.case, CaseConfig::default())?;
    let mut ns = a.ns.clone();
    if let Some(n) = a.case.n {
        if !ns.contains(&n) {
            ns.push(n);
            ns.sort_unstable();
        }
    }
    validate_sizes(&base, &ns)?;
    let rep = run_sweep(&base, &ns);
    print_sweep(
        &format!("{} / {}", base.field.name(), base.method.boundary_label()),
        &rep,
    );
    let status = write_sweep(&rep, &base.out_dir)?;
    let mut checks = Checks::default();
    checks.sweep(&base, &rep);
    Ok(checks.finish(a.case.check, status))
}

fn cfl(a: CflArgs) -> CliResult {
    let base = load_case(&a.case, CaseConfig::default())?;
    validate_sizes(&base, &a.ns)?;
    for &c in &a.cfls {
        CaseConfig {
            cfl: c,
            ..base.clone()
        }
        .validate()?;
    }
    let studies = cfl_study(&base, &a.cfls, &a.ns);
    fs::create_dir_all(&base.out_dir)?;
    let mut table = BufWriter::new(File::create(base.out_dir.join("cfl_summary.csv"))?);
    writeln!(table, "cfl,order_theta,order_cl,order_e1")?;
    let mut status = Status::Ok;
    let mut checks = Checks::default();
    for (c, rep) in &studies {
        writeln!(
            table,
            "{c},{},{},{}",
            rep.order_theta, rep.order_cl, rep.order_e1
        )?;
        print_sweep(&format!("CFL {c}"), rep);
        if write_sweep(rep, &base.out_dir.join(format!("cfl_{c}")))? != Status::Ok {
            status = Status::Numerical;
        }
        checks.sweep(
            &CaseConfig {
                cfl: *c,
                ..base.clone()
            },
            rep,
        );
    }
    table.flush()?;
    Ok(checks.finish(a.case.check, status))
}

fn translate(a: TranslateArgs) -> CliResult {
    if a.offsets == 0 {
        return Err(CliError::Config("--offsets must be at least 1".into()));
    }
    if !a.angle.is_finite() {
        return Err(CliError::Config("--angle must be finite".into()));
    }
    fs::create_dir_all(&a.out)?;
    let mut checks = Checks::default();
    out!(
        "translation test, normal polar angle {} deg, {} positions",
        a.angle,
        a.offsets
    );
    for scheme in TranslationScheme::ALL {
        let samples = translation_test(a.angle, scheme, a.offsets);
        let path = a.out.join(format!("translation_{}.csv", scheme.label()));
        write_translation_csv(BufWriter::new(File::create(&path)?), &samples)?;
        let max = max_translation_error(&samples);
        out!("  {:<16} max |error| {max:.6e} deg", scheme.label());
        match scheme {
            TranslationScheme::Elvira | TranslationScheme::BoundaryElvira => {
                checks.require(
                    max <= 1e-7,
                    format!("{} error {max:e} deg > 1e-7", scheme.label()),
                );
            }
            // the Youngs bands are calibrated for the 60 degree case only
            TranslationScheme::Youngs if a.angle == 60.0 => {
                checks.require(
                    (0.5..=2.5).contains(&max),
                    format!("youngs error {max} outside [0.5, 2.5]"),
                );
            }
            TranslationScheme::BoundaryYoungs if a.angle == 60.0 => {
                checks.require(
                    (10.0..=25.0).contains(&max),
                    format!("boundary-youngs error {max} outside [10, 25]"),
                );
            }
            _ => {}
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let (mut bulk, mut wall) = (0.0f64, 0.0f64);
    for _ in 0..a.lines {
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let n = Vec2::new(phi.cos(), phi.sin());
        let s: f64 = rng.gen_range(-1.0..1.0);
        bulk = bulk.max(exact_line_error(n, s, false));
        let s: f64 = rng.gen_range(-1.0..1.0);
        wall = wall.max(exact_line_error(n, s, true));
    }
    out!("exact lines (seed {}, {} lines)", a.seed, a.lines);
    out!("  elvira           max normal error {bulk:.3e} rad");
    out!("  boundary-elvira  max normal error {wall:.3e} rad");
    checks.require(
        bulk <= 1e-9,
        format!("ELVIRA exact-line error {bulk:e} rad > 1e-9"),
    );
    checks.require(
        wall <= 1e-9,
        format!("Boundary ELVIRA exact-line error {wall:e} rad > 1e-9"),
    );
    Ok(checks.finish(a.check, Status::Ok))
}

fn vortex(a: VortexArgs) -> CliResult {
    let default = CaseConfig {
        field: VelocityField::VORTEX_EXAMPLE,
        t_end: 0.2,
        out_dir: PathBuf::from("out/vortex"),
        ..CaseConfig::default()
    };
    let base = load_case(&a.case, default)?;
    if !matches!(base.field, VelocityField::Vortex { .. }) {
        return Err(CliError::Config(format!(
            "vortex-test needs a vortex field, the case file has `{}`",
            base.field.name()
        )));
    }
    validate_sizes(&base, &a.ns)?;
    let methods = match a.case.method {
        Some(m) => vec![m],
        None => vec![Method::Youngs, Method::Elvira],
    };
    let mut status = Status::Ok;
    let mut checks = Checks::default();
    for m in methods {
        let cfg = CaseConfig {
            method: m,
            ..base.clone()
        };
        let rep = run_sweep(&cfg, &a.ns);
        print_sweep(m.boundary_label(), &rep);
        if write_sweep(&rep, &cfg.out_dir.join(m.label()))? != Status::Ok {
            status = Status::Numerical;
        }
        checks.sweep(&cfg, &rep);
    }
    Ok(checks.finish(a.case.check, status))
}
