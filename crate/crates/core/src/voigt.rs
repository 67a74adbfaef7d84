//! Classic and generalized Voigt profiles.
//!
//! The classic profile with Gaussian width `omega_g` and Lorentzian width
//! `omega_l` has characteristic function
//! `exp(-omega_l |k| - omega_g^2 k^2 / 4)`; `(omega_g, omega_l) = (2, 1)` is the
//! unit-scale pair of the standard stable laws. The generalized profile
//! convolves `L_{alpha1}(., tau)` and `L_{alpha2}(., tau)`.

use crate::error::{Error, Result};
use crate::grid::{Grid1D, ProfileSamples};
use crate::quad::{integrate_breaks, Tolerance};
use crate::spectral::density_on_grid;
use crate::stable::{stable_pdf_with, StableParams, DEFAULT_PDF_TOL};
use crate::symbol::{PowerTerm, Symbol};

/// Two-exponent profile; stored with `alpha1 <= alpha2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoigtSpec {
    alpha1: f64,
    alpha2: f64,
    tau: f64,
}

impl VoigtSpec {
    pub fn new(alpha1: f64, alpha2: f64, tau: f64) -> Result<Self> {
        for a in [alpha1, alpha2] {
            if !(a > 0.0 && a <= 2.0) {
                return Err(Error::invalid(format!("alpha must lie in (0, 2], got {a}")));
            }
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::invalid(format!("tau must be positive and finite, got {tau}")));
        }
        let (alpha1, alpha2) = if alpha1 <= alpha2 { (alpha1, alpha2) } else { (alpha2, alpha1) };
        Ok(VoigtSpec { alpha1, alpha2, tau })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Self::new(self.alpha1, self.alpha2, tau)
    }

    pub fn is_degenerate(&self) -> bool {
        self.alpha1 == self.alpha2
    }

    pub fn components(&self) -> (StableParams, StableParams) {
        (
            StableParams::new(self.alpha1, self.tau).expect("validated"),
            StableParams::new(self.alpha2, self.tau).expect("validated"),
        )
    }

    /// `tau (|k|^{alpha1} + |k|^{alpha2})`, merged into one term when the exponents agree.
    pub fn symbol(&self) -> Symbol {
        let terms = if self.is_degenerate() {
            vec![PowerTerm { weight: 2.0 * self.tau, exponent: self.alpha1 }]
        } else {
            vec![
                PowerTerm { weight: self.tau, exponent: self.alpha1 },
                PowerTerm { weight: self.tau, exponent: self.alpha2 },
            ]
        };
        Symbol::new(terms).expect("validated")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicVoigtSpec {
    omega_g: f64,
    omega_l: f64,
}

impl ClassicVoigtSpec {
    pub fn new(omega_g: f64, omega_l: f64) -> Result<Self> {
        if !(omega_g > 0.0 && omega_g.is_finite()) {
            return Err(Error::invalid(format!("omega_g must be positive, got {omega_g}")));
        }
        if !(omega_l > 0.0 && omega_l.is_finite()) {
            return Err(Error::invalid(format!("omega_l must be positive, got {omega_l}")));
        }
        Ok(ClassicVoigtSpec { omega_g, omega_l })
    }

    pub fn omega_g(&self) -> f64 {
        self.omega_g
    }

    pub fn omega_l(&self) -> f64 {
        self.omega_l
    }

    /// Weight parameter `a = omega_l / omega_g`.
    pub fn weight_parameter(&self) -> f64 {
        self.omega_l / self.omega_g
    }

    pub fn symbol(&self) -> Symbol {
        Symbol::new(vec![
            PowerTerm { weight: self.omega_l, exponent: 1.0 },
            PowerTerm { weight: 0.25 * self.omega_g * self.omega_g, exponent: 2.0 },
        ])
        .expect("validated")
    }
}

/// Either profile family, for grid evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileSpec {
    Generalized(VoigtSpec),
    Classic(ClassicVoigtSpec),
}

impl ProfileSpec {
    pub fn symbol(&self) -> Symbol {
        match self {
            ProfileSpec::Generalized(s) => s.symbol(),
            ProfileSpec::Classic(s) => s.symbol(),
        }
    }
}

impl From<VoigtSpec> for ProfileSpec {
    fn from(s: VoigtSpec) -> Self {
        ProfileSpec::Generalized(s)
    }
}

impl From<ClassicVoigtSpec> for ProfileSpec {
    fn from(s: ClassicVoigtSpec) -> Self {
        ProfileSpec::Classic(s)
    }
}

pub fn classic_voigt_pdf(spec: &ClassicVoigtSpec, x: f64) -> Result<f64> {
    classic_voigt_pdf_with(spec, x, Tolerance::absolute(DEFAULT_PDF_TOL))
}

pub fn classic_voigt_pdf_with(spec: &ClassicVoigtSpec, x: f64, tol: Tolerance) -> Result<f64> {
    Ok(spec.symbol().density(x, tol)?.value)
}

pub fn generalized_voigt_pdf(spec: &VoigtSpec, x: f64) -> Result<f64> {
    generalized_voigt_pdf_with(spec, x, Tolerance::absolute(DEFAULT_PDF_TOL))
}

pub fn generalized_voigt_pdf_with(spec: &VoigtSpec, x: f64, tol: Tolerance) -> Result<f64> {
    Ok(spec.symbol().density(x, tol)?.value)
}

/// `int L_{alpha1}(y, tau) L_{alpha2}(x - y, tau) dy` by adaptive quadrature.
pub fn generalized_voigt_convolution_oracle(spec: &VoigtSpec, x: f64) -> Result<f64> {
    const TOL: f64 = 1e-11;
    let (p1, p2) = spec.components();
    let inner = Tolerance::absolute(1e-12);
    let s_min = p1.scale().min(p2.scale());
    let s_max = p1.scale().max(p2.scale());
    let lo = x.min(0.0);
    let hi = x.max(0.0);

    let mut failure = None;
    let mut f = |y: f64| match (stable_pdf_with(&p1, y, inner), stable_pdf_with(&p2, x - y, inner)) {
        (Ok(a), Ok(b)) => a * b,
        (Err(e), _) | (_, Err(e)) => {
            failure.get_or_insert(e);
            0.0
        }
    };

    // integrand decays like |y|^{-2-alpha1-alpha2} in both directions
    let decay = 1.0 + spec.alpha1 + spec.alpha2;
    let mut reach = 100.0 * s_max + (hi - lo);
    for _ in 0..200 {
        let tail = (f(hi + reach) + f(lo - reach)) * reach / decay;
        if tail < 1e-3 * TOL {
            break;
        }
        reach *= 2.0;
    }

    let mut breaks = vec![lo - reach, lo, hi, hi + reach, 0.5 * (lo + hi)];
    let mut d = 1e-2 * s_min;
    while d < reach {
        for c in [lo, hi] {
            breaks.push(c - d);
            breaks.push(c + d);
        }
        d *= 2.0;
    }
    breaks.retain(|b| *b >= lo - reach && *b <= hi + reach);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let r = integrate_breaks(&mut f, &breaks, Tolerance::absolute(TOL), 20_000);
    let tail = (f(hi + reach) + f(lo - reach)) * reach / decay;
    if let Some(e) = failure {
        return Err(e);
    }
    let value = r.value + tail;
    if !r.converged {
        return Err(Error::QuadratureNonconvergence { estimate: value, error: r.error, tolerance: TOL });
    }
    Ok(value)
}

/// Profile on every grid point, through one discrete Fourier inversion.
pub fn profile_on_grid(spec: impl Into<ProfileSpec>, grid: &Grid1D, tol: f64) -> Result<ProfileSamples> {
    density_on_grid(&spec.into().symbol(), grid, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ordering_is_canonical() {
        let a = VoigtSpec::new(2.0, 0.5, 1.0).unwrap();
        let b = VoigtSpec::new(0.5, 2.0, 1.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.alpha1(), 0.5);
        assert_eq!(generalized_voigt_pdf(&a, 0.7).unwrap(), generalized_voigt_pdf(&b, 0.7).unwrap());
    }

    #[test]
    fn validation() {
        assert!(VoigtSpec::new(0.0, 1.0, 1.0).is_err());
        assert!(VoigtSpec::new(1.0, 1.0, -1.0).is_err());
        assert!(ClassicVoigtSpec::new(2.0, 0.0).is_err());
        assert_eq!(ClassicVoigtSpec::new(2.0, 1.0).unwrap().weight_parameter(), 0.5);
    }

    #[test]
    fn double_gaussian_peak() {
        let s = VoigtSpec::new(2.0, 2.0, 1.0).unwrap();
        let v = generalized_voigt_pdf(&s, 0.0).unwrap();
        assert!((v - 1.0 / (2.0 * (2.0 * PI).sqrt())).abs() < 1e-12);
    }

    #[test]
    fn oracle_cauchy_pair() {
        let s = VoigtSpec::new(1.0, 1.0, 1.0).unwrap();
        let v = generalized_voigt_convolution_oracle(&s, 0.0).unwrap();
        assert!((v - 0.5 / PI).abs() < 1e-9, "{v}");
    }
}
