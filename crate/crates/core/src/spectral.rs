//! FFT machinery: whole-grid density inversion and Fourier multipliers on samples.
//!
//! Grid inversion samples the characteristic function on an oversampled,
//! zero-centred lattice and transforms once. The result is the periodized
//! density `sum_m V(x + mP)`; the images `m != 0` are removed with the
//! large-|x| expansion (Hurwitz zeta sums), which keeps the period a modest
//! multiple of the grid width even for heavy tails.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Grid1D, ProfileSamples};
use crate::quad::Tolerance;
use crate::symbol::{Symbol, TailExpansion};

/// Largest FFT length used for grid inversion.
pub const MAX_FFT_LEN: usize = 1 << 23;

/// Grids up to this size are evaluated point by point.
const POINTWISE_MAX: usize = 64;

/// Images closer than this many scale lengths are not handed to the tail expansion.
const IMAGE_GAP_SCALES: f64 = 50.0;

/// Options for applying a Fourier multiplier to samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    /// Largest boundary magnitude accepted before the periodic extension is deemed unsafe.
    pub decay_tol: f64,
    /// Zero padding: the transform length is the next power of two of `pad_factor * n`.
    pub pad_factor: usize,
    /// Lower bound on the padded period. Results with slowly decaying tails
    /// (any fractional derivative) wrap around the period, so this sets the
    /// size of that error.
    pub min_period: f64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions { decay_tol: 1e-12, pad_factor: 2, min_period: 0.0 }
    }
}

pub(crate) fn fft_pair(n: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    let mut planner = FftPlanner::new();
    (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
}

/// Angular frequency of FFT bin `k` for a lattice of `n` points with spacing `h`.
pub fn bin_frequency(k: usize, n: usize, h: f64) -> f64 {
    let kk = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
    2.0 * PI * kk / (n as f64 * h)
}

/// Oversampled lattice that carries a grid through the transform.
///
/// Lattice point `j` sits at `x0 + j * h`; grid point `i` is lattice point `i * stride`.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub x0: f64,
    pub h: f64,
    pub len: usize,
    pub stride: usize,
    /// Bound on the frequency truncation error (per point).
    pub truncation_bound: f64,
    /// Bound on the residual after image removal (per point).
    pub image_bound: f64,
}

impl Lattice {
    pub fn period(&self) -> f64 {
        self.len as f64 * self.h
    }

    pub fn frequency(&self, k: usize) -> f64 {
        bin_frequency(k, self.len, self.h)
    }

    /// Spectrum of a unit mass at the origin seen from the lattice origin.
    pub fn delta_spectrum(&self) -> Vec<Complex64> {
        let mut c: Vec<Complex64> =
            (0..self.len).map(|k| Complex64::from_polar(1.0, -self.frequency(k) * self.x0)).collect();
        // split the Nyquist bin evenly between +k and -k
        let nyq = self.len / 2;
        c[nyq] = Complex64::new((self.frequency(nyq) * self.x0).cos(), 0.0);
        c
    }

    /// Roundoff estimate for transforming a spectrum to lattice values.
    pub fn roundoff(&self, spec: &[Complex64]) -> f64 {
        let l1: f64 = spec.iter().map(|c| c.norm()).sum();
        20.0 * f64::EPSILON * (self.len as f64).log2() * l1 / (self.len as f64 * self.h)
    }

    /// Transform a spectrum to values on the grid, removing periodic images of `symbol`.
    pub fn to_grid(&self, spec: Vec<Complex64>, grid: &Grid1D, images: &ImageCorrection) -> Vec<f64> {
        let mut buf = spec;
        let (fwd, _) = fft_pair(self.len);
        fwd.process(&mut buf);
        let norm = 1.0 / (self.len as f64 * self.h);
        (0..grid.len()).map(|i| buf[i * self.stride].re * norm - images.at(grid.point(i), self.period())).collect()
    }
}

/// Sum of periodic images `sum_{m != 0} V(x + mP)` from the tail law.
#[derive(Debug, Clone)]
pub enum ImageCorrection {
    /// Images are below the error budget and left in place.
    None,
    Expansion(TailExpansion),
}

impl ImageCorrection {
    pub fn at(&self, x: f64, period: f64) -> f64 {
        match self {
            ImageCorrection::None => 0.0,
            ImageCorrection::Expansion(t) => t.periodic_images(x, period).value,
        }
    }
}

fn image_bound(symbol: &Symbol, expansion: &TailExpansion, extent: f64, period: f64) -> f64 {
    if let Some(w) = gaussian_weight(symbol) {
        // the nearest image dominates; the rest decay faster than geometrically
        let d = period - extent;
        return 4.0 * (-d * d / (4.0 * w)).exp() / (2.0 * (PI * w).sqrt());
    }
    [-extent, 0.0, extent].iter().map(|&x| expansion.periodic_images(x, period).error).fold(0.0, f64::max)
}

fn gaussian_weight(symbol: &Symbol) -> Option<f64> {
    symbol.is_gaussian().then(|| symbol.terms().iter().map(|t| t.weight).sum())
}

/// Choose the lattice for inverting `symbol` on `grid` to within `tol`.
pub fn plan_lattice(symbol: &Symbol, grid: &Grid1D, tol: f64) -> Result<(Lattice, ImageCorrection)> {
    let h = grid.spacing();
    let y = grid.extent();
    let s_max = symbol.max_scale();
    let budget = tol / 4.0;
    let p_min = (2.0 * y + h).max(y + IMAGE_GAP_SCALES * s_max);

    // frequency cutoff: (1/pi) [dk phi(K) + int_K^inf phi] <= budget
    let dk = 2.0 * PI / p_min;
    let freq_bound = |k: f64| (dk * symbol.cf(k) + symbol.cf_tail_bound(k)) / PI;
    let mut k_need = 1.0 / s_max;
    while freq_bound(k_need) > budget && k_need < 1e300 {
        k_need *= 1.25;
    }
    let stride = ((h * k_need / PI).ceil().max(1.0) as usize).next_power_of_two();
    let h_int = h / stride as f64;
    if grid.len() > MAX_FFT_LEN {
        return Err(Error::invalid(format!(
            "grid of {} points exceeds the largest supported transform ({MAX_FFT_LEN})",
            grid.len()
        )));
    }
    let mut len = ((p_min / h_int).ceil() as usize).next_power_of_two();
    if len > MAX_FFT_LEN {
        // the spacing this tolerance needs cannot cover the grid in one period
        return Err(Error::GridTooCoarse { bound: f64::INFINITY, tolerance: tol });
    }
    let expansion = symbol.tail_expansion();
    loop {
        let period = len as f64 * h_int;
        let alias = image_bound(symbol, &expansion, y, period);
        if alias <= budget || len >= MAX_FFT_LEN {
            let truncation = freq_bound(PI / h_int);
            let bound = truncation + alias;
            if bound > tol {
                return Err(Error::GridTooCoarse { bound, tolerance: tol });
            }
            let correction = if gaussian_weight(symbol).is_some() {
                ImageCorrection::None
            } else {
                ImageCorrection::Expansion(expansion)
            };
            let lattice = Lattice { x0: -y, h: h_int, len, stride, truncation_bound: truncation, image_bound: alias };
            return Ok((lattice, correction));
        }
        len *= 2;
    }
}

/// Density of `symbol` on every grid point, with a certified pointwise bound.
pub fn density_on_grid(symbol: &Symbol, grid: &Grid1D, tol: f64) -> Result<ProfileSamples> {
    if grid.len() <= POINTWISE_MAX {
        let mut values = Vec::with_capacity(grid.len());
        let mut worst: f64 = 0.0;
        for x in grid.points() {
            let e = symbol.density(x, Tolerance::absolute(tol))?;
            values.push(e.value);
            worst = worst.max(e.error);
        }
        let mut s = ProfileSamples::new(*grid, values, worst)?;
        s.symmetrize();
        return Ok(s);
    }
    let (lattice, images) = plan_lattice(symbol, grid, tol)?;
    let mut spec = lattice.delta_spectrum();
    for (k, c) in spec.iter_mut().enumerate() {
        *c *= symbol.cf(lattice.frequency(k));
    }
    let roundoff = lattice.roundoff(&spec);
    let bound = lattice.truncation_bound + lattice.image_bound + roundoff;
    if bound > tol {
        return Err(Error::GridTooCoarse { bound, tolerance: tol });
    }
    let values = lattice.to_grid(spec, grid, &images);
    let mut s = ProfileSamples::new(*grid, values, bound)?;
    s.symmetrize();
    Ok(s)
}

/// Apply the Fourier multiplier `m(k)` to uniformly spaced samples.
///
/// The samples are zero padded and treated as one period; the multiplier must
/// be even in `k` for the result to stay real.
pub fn apply_multiplier(
    samples: &ProfileSamples,
    m: impl Fn(f64) -> f64,
    opts: &SpectralOptions,
) -> Result<ProfileSamples> {
    let n = samples.values.len();
    if n < 2 {
        return Err(Error::invalid("spectral multipliers need at least two samples"));
    }
    if opts.pad_factor == 0 {
        return Err(Error::invalid("pad factor must be at least 1"));
    }
    let boundary = samples.boundary_value();
    if boundary > opts.decay_tol {
        return Err(Error::InsufficientDecay { boundary, threshold: opts.decay_tol });
    }
    let h = samples.grid.spacing();
    let by_period = (opts.min_period / h).ceil() as usize;
    let len = (opts.pad_factor * n).max(by_period).next_power_of_two();
    if len > MAX_FFT_LEN {
        return Err(Error::invalid(format!("padded transform length {len} exceeds {MAX_FFT_LEN}")));
    }
    let (fwd, inv) = fft_pair(len);
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (b, v) in buf.iter_mut().zip(&samples.values) {
        b.re = *v;
    }
    inv.process(&mut buf);
    let mut m_max: f64 = 0.0;
    for (k, c) in buf.iter_mut().enumerate() {
        let mk = m(bin_frequency(k, len, h));
        m_max = m_max.max(mk.abs());
        *c *= mk;
    }
    fwd.process(&mut buf);
    let scale = 1.0 / len as f64;
    let values: Vec<f64> = buf[..n].iter().map(|c| c.re * scale).collect();
    let v_max = samples.values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let roundoff = 20.0 * f64::EPSILON * (len as f64).log2() * m_max * v_max * (n as f64).sqrt();
    let mut out = ProfileSamples::new(samples.grid, values, samples.tolerance * m_max + roundoff)?;
    if is_even(&samples.values) {
        out.symmetrize();
    }
    Ok(out)
}

fn is_even(v: &[f64]) -> bool {
    let n = v.len();
    (0..n / 2).all(|i| v[i] == v[n - 1 - i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bin_frequencies_wrap() {
        assert_eq!(bin_frequency(0, 8, 1.0), 0.0);
        assert!((bin_frequency(1, 8, 1.0) - PI / 4.0).abs() < 1e-15);
        assert!((bin_frequency(7, 8, 1.0) + PI / 4.0).abs() < 1e-15);
        assert!((bin_frequency(4, 8, 1.0) - PI).abs() < 1e-15);
    }

    #[test]
    fn gaussian_on_grid() {
        let s = Symbol::single(1.0, 2.0).unwrap();
        let g = Grid1D::new(10.0, 1001).unwrap();
        let p = density_on_grid(&s, &g, 1e-12).unwrap();
        for (i, v) in p.values.iter().enumerate() {
            let exact = s.gaussian_density(g.point(i)).unwrap();
            assert!((v - exact).abs() < 1e-12, "i={i}");
        }
        assert!(p.tolerance <= 1e-12);
    }

    #[test]
    fn cauchy_on_grid_removes_images() {
        let s = Symbol::single(1.0, 1.0).unwrap();
        let g = Grid1D::new(20.0, 801).unwrap();
        let p = density_on_grid(&s, &g, 1e-11).unwrap();
        let worst = (0..g.len())
            .map(|i| {
                let x = g.point(i);
                (p.values[i] - 1.0 / (PI * (1.0 + x * x))).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-11, "{worst}");
    }

    #[test]
    fn multiplier_second_derivative() {
        let g = Grid1D::new(20.0, 2001).unwrap();
        let f: Vec<f64> = g.points().iter().map(|x| (-x * x / 4.0).exp()).collect();
        let s = ProfileSamples::new(g, f, 0.0).unwrap();
        let d = apply_multiplier(&s, |k| -k * k, &SpectralOptions::default()).unwrap();
        for (i, v) in d.values.iter().enumerate() {
            let x = g.point(i);
            let exact = (x * x / 4.0 - 0.5) * (-x * x / 4.0).exp();
            assert!((v - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn multiplier_refuses_undecayed_samples() {
        let g = Grid1D::new(1.0, 11).unwrap();
        let s = ProfileSamples::new(g, vec![1.0; 11], 0.0).unwrap();
        let e = apply_multiplier(&s, |k| -k * k, &SpectralOptions::default()).unwrap_err();
        assert!(matches!(e, Error::InsufficientDecay { .. }));
    }
}
