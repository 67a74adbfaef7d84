//! Command-line front end: profiles, evolutions, moment sweeps and the two
//! figure datasets, all written as CSV.

use std::fmt;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use levy_voigt::evolution::EVOLUTION_TOL;
use levy_voigt::moments::{log_space, write_moment_csv, SERIES_TOL};
use levy_voigt::stable::{stable_on_grid, DEFAULT_PDF_TOL};
use levy_voigt::{
    auto_grid, fit_scaling_exponent, grid_for_symbol, moment_quadrature, moment_series_large_tau,
    moment_series_small_tau, profile_on_grid, solve_exact_spectral, solve_stepping, ClassicVoigtSpec, EvolutionProblem,
    Grid1D, InitialCondition, InvariantTolerances, MomentMethod, MomentQuery, MomentResult, ProfileSamples,
    StableParams, Symbol, Tolerance, VoigtSpec,
};

/// Points on a grid whose extent is given but whose size is not.
pub const DEFAULT_GRID_N: usize = 4097;

pub const FIG1_WEIGHTS: [f64; 4] = [0.01, 0.1, 1.0, 2.0];
pub const FIG1_OMEGA_G: f64 = 2.0;
pub const FIG1_EXTENT: f64 = 50.0;
pub const FIG1_N: usize = 20001;

pub const FIG2_PAIRS: [(f64, f64); 4] = [(0.5, 2.0), (1.5, 2.0), (0.5, 1.5), (1.0, 1.5)];
pub const FIG2_TAUS: [f64; 3] = [0.1, 1.0, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    InvalidInput,
    Numerical,
    Io,
}

impl ErrorKind {
    pub fn exit_code(self) -> u8 {
        match self {
            ErrorKind::InvalidInput => 2,
            ErrorKind::Numerical => 3,
            ErrorKind::Io => 4,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::InvalidInput, message: message.into() }
    }

    fn numerical(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Numerical, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<levy_voigt::Error> for CliError {
    fn from(e: levy_voigt::Error) -> Self {
        let kind = if e.is_invalid_input() {
            ErrorKind::InvalidInput
        } else if e.is_io() {
            ErrorKind::Io
        } else {
            ErrorKind::Numerical
        };
        CliError { kind, message: e.to_string() }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError { kind: ErrorKind::Io, message: e.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "levy-voigt",
    version,
    about = "Stable densities, generalized Voigt profiles, fractional diffusion and moments"
)]
pub struct Cli {
    /// TOML file with default parameter values; flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generalized Voigt profile of L_{alpha1} and L_{alpha2} at scale-factor tau
    #[command(allow_negative_numbers = true)]
    Profile(ProfileArgs),
    /// Classic Voigt profile from Gaussian and Lorentzian widths
    #[command(allow_negative_numbers = true)]
    Classic(ClassicArgs),
    /// Solve dV/dtau = D^{alpha1} V + D^{alpha2} V from a delta at the origin
    #[command(allow_negative_numbers = true)]
    Evolve(EvolveArgs),
    /// Fractional moments <|x|^q> of the generalized profile
    #[command(allow_negative_numbers = true)]
    Moments(MomentsArgs),
    /// Fit the low- and high-tau scaling exponents of <|x|^q>^{1/q}
    #[command(allow_negative_numbers = true)]
    Scaling(ScalingArgs),
    /// Classic Voigt, Gauss and Lorentz curves for a = 0.01, 0.1, 1, 2
    Fig1(FigureArgs),
    /// Evolution profiles for four order pairs at tau = 0.1, 1, 10
    Fig2(FigureArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OrderArgs {
    /// First order, in (0, 2] [default: 1]
    #[arg(long)]
    pub alpha1: Option<f64>,
    /// Second order, in (0, 2] [default: 2]
    #[arg(long)]
    pub alpha2: Option<f64>,
    /// Scale-factor [default: 1]
    #[arg(long)]
    pub tau: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Half-width of the symmetric grid [default: auto, edge density below 1e-8]
    #[arg(long)]
    pub grid_extent: Option<f64>,
    /// Number of grid points [default: auto; 4097 when only the extent is given]
    #[arg(long)]
    pub grid_n: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub orders: OrderArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Absolute tolerance of the sampled values [default: 1e-10]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output CSV file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ClassicArgs {
    /// Gaussian width omega_G [default: 2]
    #[arg(long)]
    pub omega_g: Option<f64>,
    /// Lorentzian width omega_L [default: 1]
    #[arg(long)]
    pub omega_l: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Absolute tolerance of the sampled values [default: 1e-10]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output CSV file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub orders: OrderArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Propagator steps; 1 applies the exact solution in one shot [default: 1]
    #[arg(long)]
    pub n_steps: Option<usize>,
    /// Absolute tolerance of the solution [default: 1e-11]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output CSV file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub orders: OrderArgs,
    /// Moment order, 0 < q < min(alpha1, alpha2) unless both orders are 2 [default: 0.5]
    #[arg(long)]
    pub q: Option<f64>,
    /// Start of a log-spaced tau sweep; replaces --tau
    #[arg(long)]
    pub tau_min: Option<f64>,
    /// End of the tau sweep
    #[arg(long)]
    pub tau_max: Option<f64>,
    /// Points in the tau sweep [default: 5]
    #[arg(long)]
    pub n_tau: Option<usize>,
    /// auto, quadrature, series_small_tau or series_large_tau [default: auto]
    #[arg(long)]
    pub method: Option<String>,
    /// Relative tolerance of the series [default: 1e-12]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output CSV file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ScalingArgs {
    /// First order [default: 1]
    #[arg(long)]
    pub alpha1: Option<f64>,
    /// Second order [default: 2]
    #[arg(long)]
    pub alpha2: Option<f64>,
    /// Moment order [default: 0.5]
    #[arg(long)]
    pub q: Option<f64>,
    /// Low-tau fit range start [default: 1e-6]
    #[arg(long)]
    pub low_min: Option<f64>,
    /// Low-tau fit range end [default: 1e-4]
    #[arg(long)]
    pub low_max: Option<f64>,
    /// High-tau fit range start [default: 1e2]
    #[arg(long)]
    pub high_min: Option<f64>,
    /// High-tau fit range end [default: 1e4]
    #[arg(long)]
    pub high_max: Option<f64>,
    /// Log-spaced fit points per range [default: 5]
    #[arg(long)]
    pub n_points: Option<usize>,
    /// Output CSV file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    /// Output directory, created if missing
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Absolute tolerance of the sampled values [default: 1e-10 for fig1, 1e-11 for fig2]
    #[arg(long)]
    pub tol: Option<f64>,
}

/// Keys accepted in the `--config` file. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub alpha1: Option<f64>,
    pub alpha2: Option<f64>,
    pub tau: Option<f64>,
    pub q: Option<f64>,
    pub grid_extent: Option<f64>,
    pub grid_n: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub omega_g: Option<f64>,
    pub omega_l: Option<f64>,
    pub n_steps: Option<usize>,
    pub tau_min: Option<f64>,
    pub tau_max: Option<f64>,
    pub n_tau: Option<usize>,
    pub method: Option<String>,
    pub low_min: Option<f64>,
    pub low_max: Option<f64>,
    pub high_min: Option<f64>,
    pub high_max: Option<f64>,
    pub n_points: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError { kind: ErrorKind::Io, message: format!("{}: {e}", path.display()) })?;
        toml::from_str(&text).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
    }
}

fn pick<T: Clone>(flag: &Option<T>, config: &Option<T>, default: T) -> T {
    flag.clone().or_else(|| config.clone()).unwrap_or(default)
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    match &cli.command {
        Command::Profile(a) => run_profile(a, &cfg),
        Command::Classic(a) => run_classic(a, &cfg),
        Command::Evolve(a) => run_evolve(a, &cfg),
        Command::Moments(a) => run_moments(a, &cfg),
        Command::Scaling(a) => run_scaling(a, &cfg),
        Command::Fig1(a) => {
            let dir = figure_dir(a, &cfg)?;
            let report = cmd_fig1_with(&dir, pick(&a.tol, &cfg.tol, DEFAULT_PDF_TOL))?;
            print_table(&report.table())
        }
        Command::Fig2(a) => {
            let dir = figure_dir(a, &cfg)?;
            let report = cmd_fig2_with(&dir, pick(&a.tol, &cfg.tol, EVOLUTION_TOL))?;
            print_table(&report.table())
        }
    }
}

fn print_table(text: &str) -> CliResult<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn figure_dir(a: &FigureArgs, cfg: &ConfigFile) -> CliResult<PathBuf> {
    a.out.clone().or_else(|| cfg.out.clone()).ok_or_else(|| CliError::invalid("figure commands need --out <DIR>"))
}

fn check_tol(tol: f64) -> CliResult<f64> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(CliError::invalid(format!("tolerance must be positive, got {tol}")))
    }
}

/// Resolve the grid flags against an automatic choice.
fn resolve_grid(
    g: &GridArgs,
    cfg: &ConfigFile,
    auto: impl FnOnce() -> levy_voigt::Result<Grid1D>,
) -> CliResult<Grid1D> {
    let extent = g.grid_extent.or(cfg.grid_extent);
    let n = g.grid_n.or(cfg.grid_n);
    let grid = match (extent, n) {
        (Some(e), Some(n)) => Grid1D::new(e, n)?,
        (Some(e), None) => Grid1D::new(e, DEFAULT_GRID_N)?,
        (None, Some(n)) => Grid1D::new(auto()?.extent(), n)?,
        (None, None) => auto()?,
    };
    Ok(grid)
}

/// Invariant suite run before any profile is written. The mass check adds the
/// exact mass outside the grid.
pub fn certify(samples: &ProfileSamples, symbol: &Symbol) -> CliResult<()> {
    let inner = symbol.inner_mass(samples.grid.extent(), Tolerance::absolute(1e-12))?;
    let report = samples.invariants(Some(1.0 - inner.value));
    let d = InvariantTolerances::default();
    let slack = 2.0 * samples.tolerance;
    let tol = InvariantTolerances { positivity: d.positivity.max(slack), unimodality: d.unimodality.max(slack), ..d };
    let v = report.violations(&tol);
    if v.is_empty() {
        Ok(())
    } else {
        Err(CliError::numerical(format!("profile failed its invariant checks: {}", v.join("; "))))
    }
}

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError { kind: ErrorKind::Io, message: format!("{}: {e}", path.display()) })?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(fs::Permissions::from_mode(0o644))?;
    }
    {
        let mut w = BufWriter::new(tmp.as_file());
        body(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path)
        .map_err(|e| CliError { kind: ErrorKind::Io, message: format!("{}: {}", path.display(), e.error) })?;
    Ok(())
}

fn emit(out: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> CliResult<()> {
    match out {
        Some(p) => write_atomic(p, body),
        None => {
            let mut w = BufWriter::new(io::stdout().lock());
            match body(&mut w).and_then(|_| w.flush()) {
                // a closed pipe (`| head`) is not an error
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn grid_comment(grid: &Grid1D) -> String {
    format!("extent={},n={}", grid.extent(), grid.len())
}

fn run_profile(a: &ProfileArgs, cfg: &ConfigFile) -> CliResult<()> {
    let spec = VoigtSpec::new(
        pick(&a.orders.alpha1, &cfg.alpha1, 1.0),
        pick(&a.orders.alpha2, &cfg.alpha2, 2.0),
        pick(&a.orders.tau, &cfg.tau, 1.0),
    )?;
    let tol = check_tol(pick(&a.tol, &cfg.tol, DEFAULT_PDF_TOL))?;
    let symbol = spec.symbol();
    let grid = resolve_grid(&a.grid, cfg, || grid_for_symbol(&symbol, None))?;
    let samples = profile_on_grid(spec, &grid, tol)?;
    certify(&samples, &symbol)?;
    let comment =
        format!("alpha1={},alpha2={},tau={},{}", spec.alpha1(), spec.alpha2(), spec.tau(), grid_comment(&grid));
    let out = a.out.clone().or_else(|| cfg.out.clone());
    emit(out.as_deref(), |w| samples.write_csv(w, &[comment]))
}

fn run_classic(a: &ClassicArgs, cfg: &ConfigFile) -> CliResult<()> {
    let spec = ClassicVoigtSpec::new(pick(&a.omega_g, &cfg.omega_g, 2.0), pick(&a.omega_l, &cfg.omega_l, 1.0))?;
    let tol = check_tol(pick(&a.tol, &cfg.tol, DEFAULT_PDF_TOL))?;
    let symbol = spec.symbol();
    let grid = resolve_grid(&a.grid, cfg, || grid_for_symbol(&symbol, None))?;
    let samples = profile_on_grid(spec, &grid, tol)?;
    certify(&samples, &symbol)?;
    let comment = format!("omega_g={},omega_l={},{}", spec.omega_g(), spec.omega_l(), grid_comment(&grid));
    let out = a.out.clone().or_else(|| cfg.out.clone());
    emit(out.as_deref(), |w| samples.write_csv(w, &[comment]))
}

/// Delta-initialized evolution on `grid`, certified.
fn evolve(alpha1: f64, alpha2: f64, tau: f64, grid: Grid1D, n_steps: usize, tol: f64) -> CliResult<ProfileSamples> {
    let mut problem = EvolutionProblem::new(alpha1, alpha2, tau, InitialCondition::Delta, grid, n_steps)?;
    problem.tol = tol;
    if problem.is_small_tau() {
        eprintln!("warning: tau={tau} is small; the profile is nearly a delta and needs a very fine grid");
    }
    let samples = if n_steps == 1 { solve_exact_spectral(&problem)? } else { solve_stepping(&problem)? };
    certify(&samples, &problem.symbol(tau))?;
    Ok(samples)
}

fn evolve_comment(alpha1: f64, alpha2: f64, tau: f64, grid: &Grid1D) -> String {
    format!("alpha1={alpha1},alpha2={alpha2},tau={tau},{}", grid_comment(grid))
}

fn run_evolve(a: &EvolveArgs, cfg: &ConfigFile) -> CliResult<()> {
    let alpha1 = pick(&a.orders.alpha1, &cfg.alpha1, 1.0);
    let alpha2 = pick(&a.orders.alpha2, &cfg.alpha2, 2.0);
    let tau = pick(&a.orders.tau, &cfg.tau, 1.0);
    let n_steps = pick(&a.n_steps, &cfg.n_steps, 1);
    let tol = check_tol(pick(&a.tol, &cfg.tol, EVOLUTION_TOL))?;
    let grid = resolve_grid(&a.grid, cfg, || auto_grid(alpha1, alpha2, tau))?;
    let samples = evolve(alpha1, alpha2, tau, grid, n_steps, tol)?;
    let comment = evolve_comment(alpha1, alpha2, tau, &grid);
    let out = a.out.clone().or_else(|| cfg.out.clone());
    emit(out.as_deref(), |w| samples.write_csv(w, &[comment]))
}

fn run_moments(a: &MomentsArgs, cfg: &ConfigFile) -> CliResult<()> {
    let alpha1 = pick(&a.orders.alpha1, &cfg.alpha1, 1.0);
    let alpha2 = pick(&a.orders.alpha2, &cfg.alpha2, 2.0);
    let q = pick(&a.q, &cfg.q, 0.5);
    let tol = check_tol(pick(&a.tol, &cfg.tol, SERIES_TOL))?;
    let method = pick(&a.method, &cfg.method, "auto".to_string());
    let method: Option<MomentMethod> = if method == "auto" { None } else { Some(method.parse()?) };

    let taus = match (a.tau_min.or(cfg.tau_min), a.tau_max.or(cfg.tau_max)) {
        (Some(lo), Some(hi)) => {
            let n = pick(&a.n_tau, &cfg.n_tau, 5);
            if !(lo > 0.0 && hi >= lo && n >= 1) {
                return Err(CliError::invalid(format!("bad tau sweep [{lo}, {hi}] with {n} points")));
            }
            log_space(lo, hi, n)
        }
        (None, None) => vec![pick(&a.orders.tau, &cfg.tau, 1.0)],
        _ => return Err(CliError::invalid("--tau-min and --tau-max go together")),
    };

    let mut rows: Vec<(MomentQuery, MomentResult)> = Vec::with_capacity(taus.len());
    for tau in taus {
        let query = MomentQuery::new(VoigtSpec::new(alpha1, alpha2, tau)?, q)?;
        let r = match method {
            Some(m) => moment_with(&query, m, tol)?,
            // a suggested series may still stall short of tol; quadrature always applies
            None => match moment_with(&query, MomentMethod::suggest(query.spec()), tol) {
                Ok(r) => r,
                Err(levy_voigt::Error::SeriesDivergence { .. } | levy_voigt::Error::GammaPole { .. }) => {
                    moment_quadrature(&query)?
                }
                Err(e) => return Err(e.into()),
            },
        };
        rows.push((query, r));
    }
    let out = a.out.clone().or_else(|| cfg.out.clone());
    emit(out.as_deref(), |w| write_moment_csv(w, &rows))
}

fn moment_with(query: &MomentQuery, method: MomentMethod, tol: f64) -> levy_voigt::Result<MomentResult> {
    match method {
        MomentMethod::Quadrature => moment_quadrature(query),
        MomentMethod::SeriesLargeTau => moment_series_large_tau(query, tol),
        MomentMethod::SeriesSmallTau => moment_series_small_tau(query, tol),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub range: (f64, f64),
    pub fitted: f64,
    pub theory: f64,
}

impl ScalingFit {
    pub fn relative_deviation(&self) -> f64 {
        (self.fitted - self.theory).abs() / self.theory
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingReport {
    pub alpha1: f64,
    pub alpha2: f64,
    pub q: f64,
    pub low: ScalingFit,
    pub high: ScalingFit,
}

impl ScalingReport {
    pub fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "regime,tau_min,tau_max,fitted,theory,relative_deviation")?;
        for (name, f) in [("low", &self.low), ("high", &self.high)] {
            writeln!(
                w,
                "{name},{:e},{:e},{:.10},{:.10},{:.3e}",
                f.range.0,
                f.range.1,
                f.fitted,
                f.theory,
                f.relative_deviation()
            )?;
        }
        Ok(())
    }
}

/// Fitted exponents of `<|x|^q>^{1/q}` against `tau`. Small tau follows the
/// larger order (`1/alpha2`), large tau the smaller (`1/alpha1`).
pub fn cmd_scaling(
    alpha1: f64,
    alpha2: f64,
    q: f64,
    low: (f64, f64),
    high: (f64, f64),
    n_points: usize,
) -> CliResult<ScalingReport> {
    let spec = VoigtSpec::new(alpha1, alpha2, 1.0)?;
    MomentQuery::new(spec, q)?;
    let (a1, a2) = (spec.alpha1(), spec.alpha2());
    let fit = |range: (f64, f64), theory: f64| -> CliResult<ScalingFit> {
        Ok(ScalingFit { range, fitted: fit_scaling_exponent(a1, a2, q, range, n_points)?, theory })
    };
    Ok(ScalingReport { alpha1: a1, alpha2: a2, q, low: fit(low, 1.0 / a2)?, high: fit(high, 1.0 / a1)? })
}

fn run_scaling(a: &ScalingArgs, cfg: &ConfigFile) -> CliResult<()> {
    let report = cmd_scaling(
        pick(&a.alpha1, &cfg.alpha1, 1.0),
        pick(&a.alpha2, &cfg.alpha2, 2.0),
        pick(&a.q, &cfg.q, 0.5),
        (pick(&a.low_min, &cfg.low_min, 1e-6), pick(&a.low_max, &cfg.low_max, 1e-4)),
        (pick(&a.high_min, &cfg.high_min, 1e2), pick(&a.high_max, &cfg.high_max, 1e4)),
        pick(&a.n_points, &cfg.n_points, 5),
    )?;
    let out = a.out.clone().or_else(|| cfg.out.clone());
    emit(out.as_deref(), |w| report.write_csv(w))
}

#[derive(Debug, Clone)]
pub struct Fig1Curve {
    pub a: f64,
    pub voigt: ProfileSamples,
    pub gauss: ProfileSamples,
    pub lorentz: ProfileSamples,
    pub files: [PathBuf; 3],
}

impl Fig1Curve {
    pub fn voigt_gauss_distance(&self) -> f64 {
        self.voigt.sup_distance(&self.gauss)
    }

    pub fn voigt_lorentz_distance(&self) -> f64 {
        self.voigt.sup_distance(&self.lorentz)
    }
}

#[derive(Debug, Clone)]
pub struct Fig1Report {
    pub curves: Vec<Fig1Curve>,
}

impl Fig1Report {
    pub fn table(&self) -> String {
        let mut s = String::from("a,omega_l,voigt_peak,gauss_peak,lorentz_peak,sup_voigt_gauss,sup_voigt_lorentz\n");
        for c in &self.curves {
            s += &format!(
                "{},{},{:.10e},{:.10e},{:.10e},{:.3e},{:.3e}\n",
                c.a,
                c.a * FIG1_OMEGA_G,
                c.voigt.center_value(),
                c.gauss.center_value(),
                c.lorentz.center_value(),
                c.voigt_gauss_distance(),
                c.voigt_lorentz_distance()
            );
        }
        s
    }
}

pub fn cmd_fig1(dir: &Path) -> CliResult<Fig1Report> {
    cmd_fig1_with(dir, DEFAULT_PDF_TOL)
}

/// Classic Voigt with `omega_g = 2`, `omega_l = 2a`, and its two limits, on one grid.
pub fn cmd_fig1_with(dir: &Path, tol: f64) -> CliResult<Fig1Report> {
    let tol = check_tol(tol)?;
    fs::create_dir_all(dir)?;
    let grid = Grid1D::new(FIG1_EXTENT, FIG1_N)?;
    let gauss_params = StableParams::new(2.0, 0.25 * FIG1_OMEGA_G * FIG1_OMEGA_G)?;
    let mut curves = Vec::new();
    for a in FIG1_WEIGHTS {
        let omega_l = a * FIG1_OMEGA_G;
        let spec = ClassicVoigtSpec::new(FIG1_OMEGA_G, omega_l)?;
        let lorentz_params = StableParams::new(1.0, omega_l)?;
        let voigt = profile_on_grid(spec, &grid, tol)?;
        let gauss = stable_on_grid(&gauss_params, &grid, tol)?;
        let lorentz = stable_on_grid(&lorentz_params, &grid, tol)?;
        let mut files = Vec::new();
        for (name, samples, symbol) in [
            ("voigt", &voigt, spec.symbol()),
            ("gauss", &gauss, gauss_params.symbol()),
            ("lorentz", &lorentz, lorentz_params.symbol()),
        ] {
            certify(samples, &symbol)?;
            let path = dir.join(format!("fig1_a{a}_{name}.csv"));
            let comment =
                format!("curve={name},a={a},omega_g={FIG1_OMEGA_G},omega_l={omega_l},{}", grid_comment(&grid));
            write_atomic(&path, |w| samples.write_csv(w, &[comment]))?;
            files.push(path);
        }
        let files: [PathBuf; 3] = files.try_into().expect("three curves");
        curves.push(Fig1Curve { a, voigt, gauss, lorentz, files });
    }
    Ok(Fig1Report { curves })
}

#[derive(Debug, Clone)]
pub struct Fig2Curve {
    pub alpha1: f64,
    pub alpha2: f64,
    pub tau: f64,
    pub samples: ProfileSamples,
    pub file: PathBuf,
}

#[derive(Debug, Clone)]
pub struct Fig2Report {
    pub curves: Vec<Fig2Curve>,
}

impl Fig2Report {
    pub fn table(&self) -> String {
        let mut s = String::from("alpha1,alpha2,tau,extent,n,peak\n");
        for c in &self.curves {
            s += &format!(
                "{},{},{},{},{},{:.10e}\n",
                c.alpha1,
                c.alpha2,
                c.tau,
                c.samples.grid.extent(),
                c.samples.grid.len(),
                c.samples.center_value()
            );
        }
        s
    }

    /// Peaks of one pair in increasing tau.
    pub fn peaks(&self, alpha1: f64, alpha2: f64) -> Vec<f64> {
        self.curves
            .iter()
            .filter(|c| c.alpha1 == alpha1 && c.alpha2 == alpha2)
            .map(|c| c.samples.center_value())
            .collect()
    }
}

pub fn cmd_fig2(dir: &Path) -> CliResult<Fig2Report> {
    cmd_fig2_with(dir, EVOLUTION_TOL)
}

/// Delta-initialized solutions for each order pair and scale-factor.
pub fn cmd_fig2_with(dir: &Path, tol: f64) -> CliResult<Fig2Report> {
    let tol = check_tol(tol)?;
    fs::create_dir_all(dir)?;
    let mut curves = Vec::new();
    for (alpha1, alpha2) in FIG2_PAIRS {
        for tau in FIG2_TAUS {
            let grid = auto_grid(alpha1, alpha2, tau)?;
            let samples = evolve(alpha1, alpha2, tau, grid, 1, tol)?;
            let file = dir.join(format!("fig2_a{alpha1}_{alpha2}_tau{tau}.csv"));
            let comment = evolve_comment(alpha1, alpha2, tau, &grid);
            write_atomic(&file, |w| samples.write_csv(w, &[comment]))?;
            curves.push(Fig2Curve { alpha1, alpha2, tau, samples, file });
        }
    }
    Ok(Fig2Report { curves })
}
