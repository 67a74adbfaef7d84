//! Double-order space-fractional diffusion `dV/dtau = D^{alpha1} V + D^{alpha2} V`.
//!
//! In Fourier space the equation is diagonal, `V^(k, tau) = V^(k, 0) exp(-tau psi(k))`
//! with `psi(k) = |k|^{alpha1} + |k|^{alpha2}`, so both solvers apply the exact
//! propagator. A delta initial condition never touches the grid: it starts as
//! the constant spectrum 1.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid1D, ProfileSamples};
use crate::quad::Tolerance;
use crate::spectral::{apply_multiplier, density_on_grid, fft_pair, plan_lattice, SpectralOptions, MAX_FFT_LEN};
use crate::symbol::{PowerTerm, Symbol};

/// Pointwise tolerance for delta-initialized solutions.
pub const EVOLUTION_TOL: f64 = 1e-11;

/// Boundary magnitude accepted when a solution is fed back through a multiplier.
pub const EVOLUTION_DECAY_TOL: f64 = 1e-8;

/// Auto-sized grids have at least this many points.
pub const MIN_AUTO_POINTS: usize = 4097;

/// Below this scale-factor the profile is close to a delta.
pub const SMALL_TAU: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// Unit mass at the origin.
    Delta,
    Samples(ProfileSamples),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionProblem {
    alpha1: f64,
    alpha2: f64,
    tau_end: f64,
    initial: InitialCondition,
    grid: Grid1D,
    n_steps: usize,
    /// Target accuracy for the propagated solution.
    pub tol: f64,
    /// Options for sample initial data and for the residual operator.
    pub spectral: SpectralOptions,
}

impl EvolutionProblem {
    pub fn new(
        alpha1: f64,
        alpha2: f64,
        tau_end: f64,
        initial: InitialCondition,
        grid: Grid1D,
        n_steps: usize,
    ) -> Result<Self> {
        for a in [alpha1, alpha2] {
            if !(a > 0.0 && a <= 2.0) {
                return Err(Error::invalid(format!("order must lie in (0, 2], got {a}")));
            }
        }
        if !(tau_end > 0.0 && tau_end.is_finite()) {
            return Err(Error::invalid(format!("tau_end must be positive and finite, got {tau_end}")));
        }
        if n_steps == 0 {
            return Err(Error::invalid("n_steps must be at least 1"));
        }
        if grid.len() < 2 {
            return Err(Error::invalid("evolution needs a grid of at least two points"));
        }
        if let InitialCondition::Samples(s) = &initial {
            if s.grid != grid {
                return Err(Error::invalid("initial samples must live on the problem grid"));
            }
        }
        Ok(EvolutionProblem {
            alpha1,
            alpha2,
            tau_end,
            initial,
            grid,
            n_steps,
            tol: EVOLUTION_TOL,
            spectral: SpectralOptions { decay_tol: EVOLUTION_DECAY_TOL, ..Default::default() },
        })
    }

    /// Delta initial data on the auto-sized grid, one step.
    pub fn from_delta(alpha1: f64, alpha2: f64, tau_end: f64) -> Result<Self> {
        let grid = auto_grid(alpha1, alpha2, tau_end)?;
        Self::new(alpha1, alpha2, tau_end, InitialCondition::Delta, grid, 1)
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn tau_end(&self) -> f64 {
        self.tau_end
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn initial(&self) -> &InitialCondition {
        &self.initial
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn with_tau_end(&self, tau_end: f64) -> Result<Self> {
        let mut p = Self::new(self.alpha1, self.alpha2, tau_end, self.initial.clone(), self.grid, self.n_steps)?;
        p.tol = self.tol;
        p.spectral = self.spectral;
        Ok(p)
    }

    pub fn with_steps(&self, n_steps: usize) -> Result<Self> {
        let mut p = self.with_tau_end(self.tau_end)?;
        if n_steps == 0 {
            return Err(Error::invalid("n_steps must be at least 1"));
        }
        p.n_steps = n_steps;
        Ok(p)
    }

    /// The profile is close to a delta and needs a fine grid.
    pub fn is_small_tau(&self) -> bool {
        self.tau_end <= SMALL_TAU
    }

    /// `tau psi(k)` as a [`Symbol`].
    pub fn symbol(&self, tau: f64) -> Symbol {
        evolution_symbol(self.alpha1, self.alpha2, tau)
    }
}

fn evolution_symbol(alpha1: f64, alpha2: f64, tau: f64) -> Symbol {
    let terms = if alpha1 == alpha2 {
        vec![PowerTerm { weight: 2.0 * tau, exponent: alpha1 }]
    } else {
        vec![PowerTerm { weight: tau, exponent: alpha1 }, PowerTerm { weight: tau, exponent: alpha2 }]
    };
    Symbol::new(terms).expect("validated orders")
}

/// Grid for the delta solution at `tau`; see [`grid_for_symbol`].
///
/// For `tau <= 1e-3` the spacing is also capped at a tenth of the narrower width
/// `tau^{1/max(alpha)}`.
pub fn auto_grid(alpha1: f64, alpha2: f64, tau: f64) -> Result<Grid1D> {
    for a in [alpha1, alpha2] {
        if !(a > 0.0 && a <= 2.0) {
            return Err(Error::invalid(format!("order must lie in (0, 2], got {a}")));
        }
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid(format!("tau must be positive and finite, got {tau}")));
    }
    let cap = (tau <= SMALL_TAU).then(|| 0.1 * tau.powf(1.0 / alpha1.max(alpha2)));
    grid_for_symbol(&evolution_symbol(alpha1, alpha2, tau), cap)
}

/// Grid for the density of `symbol`.
///
/// Extent starts at 40 widths of the wider component and grows until the
/// density at the edge is below [`EVOLUTION_DECAY_TOL`]. The spacing resolves
/// the spectrum up to the frequency where the `(1 + k^2)`-weighted
/// characteristic-function tail falls below `1e-10`, optionally capped.
pub fn grid_for_symbol(symbol: &Symbol, max_spacing: Option<f64>) -> Result<Grid1D> {
    let mut extent = 40.0 * symbol.max_scale();
    let edge_tol = Tolerance { abs: 1e-3 * EVOLUTION_DECAY_TOL, rel: 1e-6 };
    for _ in 0..400 {
        if symbol.density(extent, edge_tol)?.value < EVOLUTION_DECAY_TOL {
            break;
        }
        extent *= 1.25;
    }
    let weighted_tail = |k: f64| symbol.cf_tail_bound(k) + symbol.cf_moment_tail_bound(k, 2.0);
    let mut k_max = 1.0 / symbol.max_scale();
    while weighted_tail(k_max) > 1e-10 {
        k_max *= 1.1;
    }
    let mut h = std::f64::consts::PI / k_max;
    if let Some(cap) = max_spacing {
        h = h.min(cap);
    }
    let half = ((extent / h).ceil() as usize).max((MIN_AUTO_POINTS - 1) / 2);
    Grid1D::new(extent, 2 * half + 1)
}

/// One-shot solution `F^{-1}[V^(k, 0) exp(-tau_end psi(k))]`.
pub fn solve_exact_spectral(problem: &EvolutionProblem) -> Result<ProfileSamples> {
    let symbol = problem.symbol(problem.tau_end);
    match &problem.initial {
        InitialCondition::Delta => density_on_grid(&symbol, &problem.grid, problem.tol),
        InitialCondition::Samples(init) => {
            let opts = sample_options(problem, init, &symbol);
            apply_multiplier(init, |k| symbol.cf(k), &opts)
        }
    }
}

/// Padding for sample data so the kernel's periodic images stay below `tol`.
fn sample_options(problem: &EvolutionProblem, init: &ProfileSamples, kernel: &Symbol) -> SpectralOptions {
    let y = problem.grid.extent();
    let h = problem.grid.spacing();
    let mass: f64 = h * init.values.iter().map(|v| v.abs()).sum::<f64>();
    let mut period = (2.0 * y + 50.0 * kernel.max_scale()).max(problem.spectral.min_period);
    if !kernel.is_gaussian() {
        let tail = kernel.tail_expansion();
        let images = |p: f64| {
            let e = tail.periodic_images(y, p);
            mass * (e.value.abs() + e.error)
        };
        while images(period) > problem.tol && period / h < MAX_FFT_LEN as f64 / 2.0 {
            period *= 2.0;
        }
    }
    SpectralOptions { min_period: period, ..problem.spectral }
}

/// `n_steps` applications of the one-step propagator `exp(-dtau psi(k))`,
/// returning to real space after every step.
pub fn solve_stepping(problem: &EvolutionProblem) -> Result<ProfileSamples> {
    let dtau = problem.tau_end / problem.n_steps as f64;
    let step = problem.symbol(dtau);
    match &problem.initial {
        InitialCondition::Delta => {
            let full = problem.symbol(problem.tau_end);
            let (lattice, images) = plan_lattice(&full, &problem.grid, problem.tol)?;
            let multipliers: Vec<f64> = (0..lattice.len).map(|k| step.cf(lattice.frequency(k))).collect();
            let mut spec = lattice.delta_spectrum();
            let (fwd, inv) = fft_pair(lattice.len);
            let scale = 1.0 / lattice.len as f64;
            for i in 0..problem.n_steps {
                for (c, m) in spec.iter_mut().zip(&multipliers) {
                    *c *= m;
                }
                if i + 1 < problem.n_steps {
                    round_trip(&mut spec, fwd.as_ref(), inv.as_ref(), scale);
                }
            }
            let roundoff = lattice.roundoff(&spec) * problem.n_steps as f64;
            let bound = lattice.truncation_bound + lattice.image_bound + roundoff;
            let values = lattice.to_grid(spec, &problem.grid, &images);
            let mut s = ProfileSamples::new(problem.grid, values, bound)?;
            s.symmetrize();
            Ok(s)
        }
        InitialCondition::Samples(init) => {
            let opts = sample_options(problem, init, &problem.symbol(problem.tau_end));
            let boundary = init.boundary_value();
            if boundary > opts.decay_tol {
                return Err(Error::InsufficientDecay { boundary, threshold: opts.decay_tol });
            }
            let n = init.values.len();
            let h = problem.grid.spacing();
            let len = (opts.pad_factor * n).max((opts.min_period / h).ceil() as usize).next_power_of_two();
            let (fwd, inv) = fft_pair(len);
            let mut buf = vec![Complex64::new(0.0, 0.0); len];
            for (b, v) in buf.iter_mut().zip(&init.values) {
                b.re = *v;
            }
            let scale = 1.0 / len as f64;
            inv.process(&mut buf);
            let multipliers: Vec<f64> = (0..len).map(|k| step.cf(crate::spectral::bin_frequency(k, len, h))).collect();
            for i in 0..problem.n_steps {
                for (c, m) in buf.iter_mut().zip(&multipliers) {
                    *c *= m;
                }
                if i + 1 < problem.n_steps {
                    // spectrum -> samples -> spectrum, with the inverse/forward roles swapped
                    round_trip(&mut buf, inv.as_ref(), fwd.as_ref(), scale);
                }
            }
            fwd.process(&mut buf);
            let values: Vec<f64> = buf[..n].iter().map(|c| c.re * scale).collect();
            let mut s = ProfileSamples::new(problem.grid, values, init.tolerance)?;
            if init.values.iter().zip(init.values.iter().rev()).all(|(a, b)| a == b) {
                s.symmetrize();
            }
            Ok(s)
        }
    }
}

/// Spectrum to real lattice values and back, discarding the imaginary part in between.
fn round_trip(buf: &mut [Complex64], to_real: &dyn rustfft::Fft<f64>, to_spec: &dyn rustfft::Fft<f64>, scale: f64) {
    to_real.process(buf);
    for c in buf.iter_mut() {
        *c = Complex64::new(c.re, 0.0);
    }
    to_spec.process(buf);
    for c in buf.iter_mut() {
        *c *= scale;
    }
}

/// `sup |dV/dtau - D^{alpha1} V - D^{alpha2} V|` over the grid at `tau`.
///
/// The tau derivative is a centred difference (step `1e-4 tau`) of fresh
/// solves of `problem`; the space operator is the spectral Riesz multiplier.
pub fn residual_check(problem: &EvolutionProblem, solution_at_tau: &ProfileSamples, tau: f64) -> Result<f64> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid(format!("tau must be positive, got {tau}")));
    }
    if solution_at_tau.grid != problem.grid {
        return Err(Error::invalid("solution must live on the problem grid"));
    }
    let d = 1e-4 * tau;
    let plus = solve_exact_spectral(&problem.with_tau_end(tau + d)?)?;
    let minus = solve_exact_spectral(&problem.with_tau_end(tau - d)?)?;
    let (a1, a2) = (problem.alpha1, problem.alpha2);
    let space = apply_multiplier(solution_at_tau, |k| -k.abs().powf(a1) - k.abs().powf(a2), &problem.spectral)?;
    Ok(plus
        .values
        .iter()
        .zip(&minus.values)
        .zip(&space.values)
        .map(|((p, m), s)| ((p - m) / (2.0 * d) - s).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn validation() {
        let g = Grid1D::new(10.0, 101).unwrap();
        assert!(EvolutionProblem::new(0.0, 1.0, 1.0, InitialCondition::Delta, g, 1).is_err());
        assert!(EvolutionProblem::new(1.0, 2.0, 0.0, InitialCondition::Delta, g, 1).is_err());
        assert!(EvolutionProblem::new(1.0, 2.0, 1.0, InitialCondition::Delta, g, 0).is_err());
        let other = Grid1D::new(5.0, 101).unwrap();
        let s = ProfileSamples::new(other, vec![0.0; 101], 0.0).unwrap();
        assert!(EvolutionProblem::new(1.0, 2.0, 1.0, InitialCondition::Samples(s), g, 1).is_err());
    }

    #[test]
    fn double_gaussian_peak() {
        let g = Grid1D::new(20.0, 2001).unwrap();
        let p = EvolutionProblem::new(2.0, 2.0, 0.5, InitialCondition::Delta, g, 1).unwrap();
        let v = solve_exact_spectral(&p).unwrap();
        assert!((v.center_value() - 0.5 / PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn single_step_equals_exact() {
        let g = Grid1D::new(30.0, 1501).unwrap();
        let p = EvolutionProblem::new(1.0, 2.0, 1.0, InitialCondition::Delta, g, 1).unwrap();
        let a = solve_exact_spectral(&p).unwrap();
        let b = solve_stepping(&p).unwrap();
        assert!(a.sup_distance(&b) < 1e-15);
    }

    #[test]
    fn auto_grid_is_odd_and_large() {
        let g = auto_grid(1.0, 2.0, 1.0).unwrap();
        assert!(g.len() % 2 == 1 && g.len() >= MIN_AUTO_POINTS);
        assert!(g.extent() >= 40.0);
    }
}
