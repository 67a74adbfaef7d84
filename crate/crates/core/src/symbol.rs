//! Symmetric densities defined through their characteristic function.
//!
//! A [`Symbol`] is a sum of power terms `psi(k) = sum_i w_i |k|^{a_i}` with
//! `0 < a_i <= 2`; its characteristic function is `exp(-psi(k))`. A single
//! term is a symmetric stable law, two terms with a shared scale-factor give the
//! generalized Voigt profile, and `[(w_L, 1), (w_G^2 / 4, 2)]` is the classic
//! Voigt profile.
//!
//! The density is the cosine integral `(1/pi) int_0^inf exp(-psi(k)) cos(kx) dk`.
//! For `x > 0` it is evaluated as `Re (1/pi) int_0^inf exp(-psi(z)) e^{ixz} dz`
//! along the ray `z = t e^{i theta}`, `theta = min(pi/2, pi / (4 a_max))`.
//! On that ray every `|exp(-w z^a)|` still decays (`a theta <= pi/4`) and
//! `e^{ixz}` gains the factor `e^{-x t sin theta}`, so the integrand loses its
//! slowly damped oscillation. Far out in `x` the constant `1` is subtracted
//! from the characteristic function first: its contribution `i/x` is purely
//! imaginary, and the subtraction keeps relative accuracy in the tails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{geometric_breaks, integrate_breaks, Tolerance};
use crate::special::{gamma, hurwitz_zeta, power_stretched_exp_tail, sin_pi, stretched_exp_tail};

const MAX_SPLITS: usize = 4000;

/// One `w |k|^a` term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub weight: f64,
    pub exponent: f64,
}

/// A value with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    terms: Vec<PowerTerm>,
}

/// Ray geometry for the rotated contour.
#[derive(Debug, Clone, Copy)]
struct Ray {
    sin: f64,
    angle: f64,
}

impl Symbol {
    pub fn new(terms: Vec<PowerTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("symbol needs at least one term"));
        }
        for t in &terms {
            if !(t.weight > 0.0 && t.weight.is_finite()) {
                return Err(Error::invalid(format!("term weight must be positive and finite, got {}", t.weight)));
            }
            if !(t.exponent > 0.0 && t.exponent <= 2.0) {
                return Err(Error::invalid(format!("term exponent must lie in (0, 2], got {}", t.exponent)));
            }
        }
        Ok(Symbol { terms })
    }

    pub fn single(weight: f64, exponent: f64) -> Result<Self> {
        Self::new(vec![PowerTerm { weight, exponent }])
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    /// Multiply every weight by `factor` (advancing the scale-factor).
    pub fn scaled(&self, factor: f64) -> Symbol {
        Symbol {
            terms: self.terms.iter().map(|t| PowerTerm { weight: t.weight * factor, exponent: t.exponent }).collect(),
        }
    }

    pub fn psi(&self, kappa: f64) -> f64 {
        let k = kappa.abs();
        self.terms.iter().map(|t| t.weight * k.powf(t.exponent)).sum()
    }

    /// Characteristic function `exp(-psi(k))`.
    pub fn cf(&self, kappa: f64) -> f64 {
        (-self.psi(kappa)).exp()
    }

    /// Length scale `w^{1/a}` of each term.
    pub fn scales(&self) -> impl Iterator<Item = f64> + '_ {
        self.terms.iter().map(|t| t.weight.powf(1.0 / t.exponent))
    }

    pub fn max_scale(&self) -> f64 {
        self.scales().fold(0.0, f64::max)
    }

    pub fn min_scale(&self) -> f64 {
        self.scales().fold(f64::INFINITY, f64::min)
    }

    pub fn min_exponent(&self) -> f64 {
        self.terms.iter().map(|t| t.exponent).fold(f64::INFINITY, f64::min)
    }

    pub fn max_exponent(&self) -> f64 {
        self.terms.iter().map(|t| t.exponent).fold(0.0, f64::max)
    }

    /// All terms quadratic: the density is Gaussian.
    pub fn is_gaussian(&self) -> bool {
        self.terms.iter().all(|t| t.exponent == 2.0)
    }

    /// Closed-form density when [`Symbol::is_gaussian`] holds.
    pub fn gaussian_density(&self, x: f64) -> Option<f64> {
        if !self.is_gaussian() {
            return None;
        }
        let w: f64 = self.terms.iter().map(|t| t.weight).sum();
        Some((-x * x / (4.0 * w)).exp() / (2.0 * (PI * w).sqrt()))
    }

    /// Upper bound on `int_k^inf exp(-psi) dk`.
    pub fn cf_tail_bound(&self, kappa: f64) -> f64 {
        self.cf_moment_tail_bound(kappa, 0.0)
    }

    /// Upper bound on `int_k^inf k^p exp(-psi) dk`.
    pub fn cf_moment_tail_bound(&self, kappa: f64, p: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| power_stretched_exp_tail(p, t.weight, t.exponent, kappa))
            .fold(f64::INFINITY, f64::min)
    }

    fn ray(&self, rotate: bool) -> Ray {
        let angle = if rotate { FRAC_PI_2.min(FRAC_PI_4 / self.max_exponent()) } else { 0.0 };
        Ray { sin: angle.sin(), angle }
    }

    /// `psi(t e^{i theta})` for `t >= 0`.
    fn psi_on_ray(&self, t: f64, ray: &Ray) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for term in &self.terms {
            let mag = term.weight * t.powf(term.exponent);
            let phase = term.exponent * ray.angle;
            acc += Complex64::from_polar(mag, phase);
        }
        acc
    }

    /// Bound on `int_T^inf |exp(-psi(t e^{i theta}))| dt`.
    fn ray_tail(&self, t: f64, ray: &Ray) -> f64 {
        self.terms
            .iter()
            .map(|term| stretched_exp_tail(term.weight * (term.exponent * ray.angle).cos(), term.exponent, t))
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest T (up to a factor 1.1) with `bound(T) <= eps`.
    fn truncation_point(&self, start: f64, eps: f64, bound: impl Fn(f64) -> f64) -> f64 {
        let mut hi = start.max(f64::MIN_POSITIVE);
        let mut guard = 0;
        while bound(hi) > eps && guard < 2000 {
            hi *= 2.0;
            guard += 1;
        }
        let mut lo = hi / 2.0;
        if bound(lo) <= eps {
            return lo;
        }
        while hi / lo > 1.1 {
            let mid = (lo * hi).sqrt();
            if bound(mid) <= eps {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// Density at `x` by inversion of the characteristic function.
    pub fn density(&self, x: f64, tol: Tolerance) -> Result<Estimate> {
        if !x.is_finite() {
            return Err(Error::invalid(format!("x must be finite, got {x}")));
        }
        let x = x.abs();
        let eps = (0.01 * tol.abs * PI).max(1e-200);
        let k_scale = 1.0 / self.max_scale();

        if x == 0.0 {
            let ray = self.ray(false);
            let t_end = self.truncation_point(k_scale * 1e-3, eps, |t| self.ray_tail(t, &ray));
            let breaks = geometric_breaks(t_end * 1e-6_f64.max(k_scale * 1e-3 / t_end), t_end);
            let r = integrate_breaks(|t| self.cf(t), &breaks, scaled_tol(tol, PI), MAX_SPLITS);
            return finish(r.value / PI, (r.error + self.ray_tail(t_end, &ray)) / PI, r.converged, tol);
        }

        let ray = self.ray(true);
        let damp = x * ray.sin;
        let plain_bound = |t: f64| {
            let tail = self.ray_tail(t, &ray);
            let via_damping = self
                .terms
                .iter()
                .map(|term| (-term.weight * (term.exponent * ray.angle).cos() * t.powf(term.exponent)).exp())
                .fold(f64::INFINITY, f64::min)
                * (-damp * t).exp()
                / damp;
            ((-damp * t).exp() * tail).min(via_damping)
        };
        let sub_bound = |t: f64| 2.0 * (-damp * t).exp() / damp;
        let t_plain = self.truncation_point(k_scale * 1e-3, eps, plain_bound);
        let t_sub = self.truncation_point(k_scale * 1e-3, eps, sub_bound);
        let subtract = t_sub <= 4.0 * t_plain;
        let t_end = if subtract { t_sub } else { t_plain };
        let t_lo = 1e-3 * k_scale.min(1.0 / x);
        let breaks = geometric_breaks(t_lo.min(t_end * 1e-3), t_end);
        let rot = Complex64::from_polar(1.0, ray.angle);
        let integrand = |t: f64| {
            let z = rot * t;
            let osc = (Complex64::i() * z * x).exp();
            let psi = self.psi_on_ray(t, &ray);
            let core = if subtract { expm1(-psi) } else { (-psi).exp() };
            (rot * osc * core).re
        };
        let r = integrate_breaks(integrand, &breaks, scaled_tol(tol, PI), MAX_SPLITS);
        let tail = if subtract { sub_bound(t_end) } else { plain_bound(t_end) };
        finish(r.value / PI, (r.error + tail) / PI, r.converged, tol)
    }

    /// Probability mass in `[-y, y]`, from `(2/pi) int_0^inf exp(-psi(k)) sin(ky)/k dk`.
    pub fn inner_mass(&self, y: f64, tol: Tolerance) -> Result<Estimate> {
        if !y.is_finite() {
            return Err(Error::invalid(format!("y must be finite, got {y}")));
        }
        if y <= 0.0 {
            return Ok(Estimate { value: 0.0, error: 0.0 });
        }
        let ray = self.ray(true);
        let k_scale = 1.0 / self.max_scale();
        let eps = (0.01 * tol.abs * FRAC_PI_2).max(1e-200);
        let bound = |t: f64| 2.0 * self.ray_tail(t, &ray) / t;
        let t_end = self.truncation_point(k_scale * 1e-3, eps, bound);
        let t_lo = 1e-3 * k_scale.min(1.0 / y);
        let breaks = geometric_breaks(t_lo.min(t_end * 1e-3), t_end);
        let rot = Complex64::from_polar(1.0, ray.angle);
        // dz / z = dt / t along the ray
        let integrand = |t: f64| {
            let z = rot * t;
            let psi = self.psi_on_ray(t, &ray);
            ((-psi).exp() * expm1(Complex64::i() * z * y) / t).im
        };
        let r = integrate_breaks(integrand, &breaks, scaled_tol(tol, FRAC_PI_2), MAX_SPLITS);
        let scale = 2.0 / PI;
        finish(r.value * scale, (r.error + bound(t_end)) * scale, r.converged, tol)
    }

    /// Large-|x| expansion of the density.
    pub fn tail_expansion(&self) -> TailExpansion {
        TailExpansion::new(self, 8)
    }
}

fn scaled_tol(tol: Tolerance, factor: f64) -> Tolerance {
    Tolerance { abs: tol.abs * factor, rel: tol.rel }
}

fn finish(value: f64, error: f64, converged: bool, tol: Tolerance) -> Result<Estimate> {
    if !value.is_finite() || (!converged && error > tol.target(value)) {
        return Err(Error::QuadratureNonconvergence { estimate: value, error, tolerance: tol.target(value) });
    }
    Ok(Estimate { value, error })
}

/// `e^w - 1` without cancellation for small `|w|`.
pub(crate) fn expm1(w: Complex64) -> Complex64 {
    let (u, v) = (w.re, w.im);
    let eu = u.exp();
    let half_sin = (0.5 * v).sin();
    Complex64::new(u.exp_m1() * v.cos() - 2.0 * half_sin * half_sin, eu * v.sin())
}

/// Asymptotic expansion `V(x) ~ sum_j A_j |x|^{-1-beta_j}` for large `|x|`.
///
/// Each non-analytic power `|k|^beta` in the Taylor expansion of
/// `exp(-psi(k))` contributes `-(1/pi) Gamma(1+beta) sin(pi beta / 2) |x|^{-1-beta}`.
/// Even integer powers contribute nothing, so a purely Gaussian symbol has an
/// empty expansion.
#[derive(Debug, Clone)]
pub struct TailExpansion {
    terms: Vec<(f64, f64)>,
    next: Option<(f64, f64)>,
}

impl TailExpansion {
    pub fn new(symbol: &Symbol, max_terms: usize) -> Self {
        let exps: Vec<f64> = symbol.terms.iter().map(|t| t.exponent).collect();
        let weights: Vec<f64> = symbol.terms.iter().map(|t| t.weight).collect();
        let a_min = symbol.min_exponent();
        let max_order = 16usize;
        let beta_cap = (max_order as f64 + 0.5) * a_min;
        let mut raw: Vec<(f64, f64)> = Vec::new();
        let mut idx = vec![0usize; exps.len()];
        enumerate(&mut idx, 0, max_order, &mut |idx| {
            let order: usize = idx.iter().sum();
            if order == 0 {
                return;
            }
            let beta: f64 = idx.iter().zip(&exps).map(|(&n, a)| n as f64 * a).sum();
            if beta > beta_cap {
                return;
            }
            let mut coeff = 1.0;
            for (&n, &w) in idx.iter().zip(&weights) {
                let mut f = 1.0;
                for k in 1..=n {
                    f *= -w / k as f64;
                }
                coeff *= f;
            }
            raw.push((beta, coeff));
        });
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (beta, c) in raw {
            match merged.last_mut() {
                Some(last) if (last.0 - beta).abs() < 1e-12 => last.1 += c,
                _ => merged.push((beta, c)),
            }
        }
        let mut out: Vec<(f64, f64)> = merged
            .into_iter()
            .filter_map(|(beta, c)| {
                let s = sin_pi(0.5 * beta);
                if s.abs() < 1e-13 {
                    return None;
                }
                Some((beta, -gamma(1.0 + beta) * s * c / PI))
            })
            .filter(|(_, a)| *a != 0.0 && a.is_finite())
            .collect();
        let next = if out.len() > max_terms { Some(out[max_terms]) } else { None };
        out.truncate(max_terms);
        TailExpansion { terms: out, next }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(beta, A)` pairs in increasing `beta`.
    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    fn error_term(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        match (self.next, self.terms.last()) {
            (Some((b, a)), _) => f(b, a).abs(),
            (None, Some(&(b, a))) => f(b, a).abs(),
            (None, None) => 0.0,
        }
    }

    /// Density estimate and the size of the first omitted term.
    pub fn density(&self, y: f64) -> Estimate {
        let y = y.abs();
        let f = |b: f64, a: f64| a * y.powf(-1.0 - b);
        Estimate { value: self.terms.iter().map(|&(b, a)| f(b, a)).sum(), error: self.error_term(f) }
    }

    /// Mass beyond `y` on one side, `int_y^inf V`.
    pub fn one_sided_mass(&self, y: f64) -> Estimate {
        let f = |b: f64, a: f64| a * y.powf(-b) / b;
        Estimate { value: self.terms.iter().map(|&(b, a)| f(b, a)).sum(), error: self.error_term(f) }
    }

    /// `int_y^inf x^q V(x) dx`, valid for `q` below the smallest exponent.
    pub fn moment_tail(&self, y: f64, q: f64) -> Estimate {
        let f = |b: f64, a: f64| a * y.powf(q - b) / (b - q);
        Estimate { value: self.terms.iter().map(|&(b, a)| f(b, a)).sum(), error: self.error_term(f) }
    }

    /// `sum_{k != 0} V(x + kP)` for `|x| < P`, from the expansion.
    pub fn periodic_images(&self, x: f64, period: f64) -> Estimate {
        let u = x / period;
        let f = |b: f64, a: f64| {
            let s = 1.0 + b;
            a * period.powf(-s) * (hurwitz_zeta(s, 1.0 + u) + hurwitz_zeta(s, 1.0 - u))
        };
        Estimate { value: self.terms.iter().map(|&(b, a)| f(b, a)).sum(), error: self.error_term(f) }
    }
}

fn enumerate(idx: &mut Vec<usize>, pos: usize, budget: usize, visit: &mut impl FnMut(&[usize])) {
    if pos == idx.len() {
        visit(idx);
        return;
    }
    for n in 0..=budget {
        idx[pos] = n;
        enumerate(idx, pos + 1, budget - n, visit);
    }
    idx[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cauchy(x: f64, s: f64) -> f64 {
        s / (PI * (x * x + s * s))
    }

    #[test]
    fn rejects_bad_terms() {
        assert!(Symbol::single(0.0, 1.0).is_err());
        assert!(Symbol::single(1.0, 2.5).is_err());
        assert!(Symbol::single(1.0, 0.0).is_err());
        assert!(Symbol::new(vec![]).is_err());
    }

    #[test]
    fn cauchy_density_by_inversion() {
        let s = Symbol::single(1.3, 1.0).unwrap();
        for &x in &[0.0, 0.2, 1.0, 3.0, 40.0, 2e3] {
            let d = s.density(x, Tolerance::absolute(1e-13)).unwrap();
            assert!((d.value - cauchy(x, 1.3)).abs() < 1e-12, "x={x}: {} vs {}", d.value, cauchy(x, 1.3));
        }
    }

    #[test]
    fn gaussian_density_by_inversion() {
        let s = Symbol::single(0.7, 2.0).unwrap();
        for &x in &[0.0, 0.5, 2.0, 6.0] {
            let d = s.density(x, Tolerance::absolute(1e-13)).unwrap();
            let exact = s.gaussian_density(x).unwrap();
            assert!((d.value - exact).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn far_tail_keeps_relative_accuracy() {
        let s = Symbol::single(1.0, 1.0).unwrap();
        let x = 1e5;
        let d = s.density(x, Tolerance::relative(1e-10)).unwrap();
        assert!((d.value / cauchy(x, 1.0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn inner_mass_cauchy() {
        let s = Symbol::single(1.0, 1.0).unwrap();
        for &y in &[0.5, 1.0, 10.0, 1e3] {
            let m = s.inner_mass(y, Tolerance::absolute(1e-12)).unwrap();
            let exact = 2.0 / PI * y.atan();
            assert!((m.value - exact).abs() < 1e-11, "y={y}");
        }
    }

    #[test]
    fn tail_expansion_of_cauchy_leading_term() {
        let s = Symbol::single(2.0, 1.0).unwrap();
        let t = s.tail_expansion();
        // Cauchy scale 2: 2/(pi x^2) - 8/(pi x^4) + ...
        assert!((t.terms()[0].0 - 1.0).abs() < 1e-15);
        assert!((t.terms()[0].1 - 2.0 / PI).abs() < 1e-14);
        assert!((t.terms()[1].0 - 3.0).abs() < 1e-15);
        assert!((t.terms()[1].1 + 8.0 / PI).abs() < 1e-13);
        let x = 50.0;
        assert!((t.density(x).value - cauchy(x, 2.0)).abs() < 1e-15);
    }

    #[test]
    fn gaussian_has_empty_expansion() {
        let s = Symbol::single(1.0, 2.0).unwrap();
        assert!(s.tail_expansion().is_empty());
    }

    #[test]
    fn periodic_images_of_cauchy() {
        // sum over k != 0 of 1/(pi (x + kP)^2) at leading order, compared with brute force
        let s = Symbol::single(1.0, 1.0).unwrap();
        let t = s.tail_expansion();
        let (x, p) = (3.0, 200.0);
        let brute: f64 =
            (1..200_000).map(|k| cauchy(x + k as f64 * p, 1.0) + cauchy(x - k as f64 * p, 1.0)).sum::<f64>()
                + 2.0 / (PI * p * p * (200_000.0 - 0.5));
        let est = t.periodic_images(x, p);
        assert!((est.value - brute).abs() < 1e-14, "{} vs {}", est.value, brute);
    }
}
