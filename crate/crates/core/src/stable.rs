//! Symmetric Lévy stable densities `L_alpha(x, tau)` with characteristic function
//! `exp(-tau |k|^alpha)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{Grid1D, ProfileSamples};
use crate::quad::Tolerance;
use crate::special::gamma;
use crate::spectral::density_on_grid;
use crate::symbol::Symbol;

/// Default absolute tolerance for pointwise densities.
pub const DEFAULT_PDF_TOL: f64 = 1e-10;

/// Exponents this close to 1 or 2 use the closed forms.
const CLOSED_FORM_SNAP: f64 = 1e-12;

/// Beyond this reduced distance the leading tail term is returned.
const FAR_TAIL: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams {
    alpha: f64,
    tau: f64,
}

impl StableParams {
    pub fn new(alpha: f64, tau: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::invalid(format!("alpha must lie in (0, 2], got {alpha}")));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::invalid(format!("tau must be positive and finite, got {tau}")));
        }
        Ok(StableParams { alpha, tau })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Width `tau^{1/alpha}`.
    pub fn scale(&self) -> f64 {
        self.tau.powf(1.0 / self.alpha)
    }

    pub fn symbol(&self) -> Symbol {
        Symbol::single(self.tau, self.alpha).expect("validated parameters")
    }

    fn closed_form(&self) -> Option<ClosedForm> {
        if (self.alpha - 2.0).abs() < CLOSED_FORM_SNAP {
            Some(ClosedForm::Gauss)
        } else if (self.alpha - 1.0).abs() < CLOSED_FORM_SNAP {
            Some(ClosedForm::Cauchy)
        } else {
            None
        }
    }
}

enum ClosedForm {
    Gauss,
    Cauchy,
}

pub fn stable_cf(params: &StableParams, kappa: f64) -> Result<f64> {
    if !kappa.is_finite() {
        return Err(Error::invalid(format!("kappa must be finite, got {kappa}")));
    }
    Ok((-params.tau * kappa.abs().powf(params.alpha)).exp())
}

/// Gaussian `exp(-x^2 / (4 tau)) / (2 sqrt(pi tau))`.
pub fn gauss_pdf(x: f64, tau: f64) -> f64 {
    (-x * x / (4.0 * tau)).exp() / (2.0 * (PI * tau).sqrt())
}

/// Cauchy `tau / (pi (x^2 + tau^2))`.
pub fn cauchy_pdf(x: f64, tau: f64) -> f64 {
    tau / (PI * (x * x + tau * tau))
}

/// Leading tail term `tau Gamma(1+alpha) sin(pi alpha / 2) / (pi |x|^{1+alpha})`.
pub fn stable_tail_leading(params: &StableParams, x: f64) -> f64 {
    let a = params.alpha;
    if a >= 2.0 {
        return 0.0;
    }
    params.tau * gamma(1.0 + a) * (0.5 * PI * a).sin() / (PI * x.abs().powf(1.0 + a))
}

pub fn stable_pdf(params: &StableParams, x: f64) -> Result<f64> {
    stable_pdf_with(params, x, Tolerance::absolute(DEFAULT_PDF_TOL))
}

pub fn stable_pdf_with(params: &StableParams, x: f64, tol: Tolerance) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("x must be finite, got {x}")));
    }
    let x = x.abs();
    match params.closed_form() {
        Some(ClosedForm::Gauss) => return Ok(gauss_pdf(x, params.tau)),
        Some(ClosedForm::Cauchy) => return Ok(cauchy_pdf(x, params.tau)),
        None => {}
    }
    if x / params.scale() > FAR_TAIL {
        return Ok(stable_tail_leading(params, x));
    }
    Ok(params.symbol().density(x, tol)?.value)
}

/// Density by characteristic-function inversion, without the closed-form shortcuts.
pub fn stable_pdf_inversion(params: &StableParams, x: f64, tol: Tolerance) -> Result<f64> {
    Ok(params.symbol().density(x, tol)?.value)
}

/// `tau^{-1/alpha} L_alpha(x tau^{-1/alpha}, 1)`.
pub fn stable_pdf_rescale(params: &StableParams, x: f64) -> Result<f64> {
    let s = params.scale();
    let unit = StableParams::new(params.alpha, 1.0)?;
    let inner = Tolerance::absolute(DEFAULT_PDF_TOL * s);
    Ok(stable_pdf_with(&unit, x / s, inner)? / s)
}

/// Stable density on a grid; closed forms pointwise, otherwise one transform.
pub fn stable_on_grid(params: &StableParams, grid: &Grid1D, tol: f64) -> Result<ProfileSamples> {
    if params.closed_form().is_some() {
        let values = grid.points().iter().map(|&x| stable_pdf(params, x)).collect::<Result<Vec<_>>>()?;
        let mut s = ProfileSamples::new(*grid, values, 4.0 * f64::EPSILON)?;
        s.symmetrize();
        return Ok(s);
    }
    density_on_grid(&params.symbol(), grid, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(StableParams::new(0.0, 1.0).is_err());
        assert!(StableParams::new(2.1, 1.0).is_err());
        assert!(StableParams::new(1.0, 0.0).is_err());
        assert!(StableParams::new(1.0, f64::NAN).is_err());
        assert!(StableParams::new(2.0, 1.0).is_ok());
    }

    #[test]
    fn cf_examples() {
        let p = StableParams::new(2.0, 1.0).unwrap();
        assert_eq!(stable_cf(&p, 0.0).unwrap(), 1.0);
        let p = StableParams::new(1.0, 1.0).unwrap();
        assert!((stable_cf(&p, 1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-16);
        let p = StableParams::new(0.5, 2.0).unwrap();
        assert!((stable_cf(&p, 4.0).unwrap() - (-4.0f64).exp()).abs() < 1e-16);
        assert!(stable_cf(&p, f64::INFINITY).is_err());
    }

    #[test]
    fn peaks() {
        let p = StableParams::new(1.0, 1.0).unwrap();
        assert!((stable_pdf(&p, 0.0).unwrap() - 1.0 / PI).abs() < 1e-16);
        let p = StableParams::new(2.0, 1.0).unwrap();
        assert!((stable_pdf(&p, 0.0).unwrap() - 0.5 / PI.sqrt()).abs() < 1e-16);
        let p = StableParams::new(1.0, 4.0).unwrap();
        assert!((stable_pdf_rescale(&p, 0.0).unwrap() - 0.25 / PI).abs() < 1e-16);
    }

    #[test]
    fn near_one_snaps_to_cauchy() {
        let p = StableParams::new(1.0 + 1e-13, 1.0).unwrap();
        assert_eq!(stable_pdf(&p, 0.3).unwrap(), cauchy_pdf(0.3, 1.0));
    }

    #[test]
    fn far_tail_is_continuous() {
        let p = StableParams::new(0.7, 1.0).unwrap();
        let inside = p.symbol().density(9.9e5, Tolerance::relative(1e-10)).unwrap().value;
        let outside = stable_pdf(&p, 1.01e6).unwrap();
        let ratio = outside / inside * (1.01f64 / 0.99).powf(1.7);
        assert!((ratio - 1.0).abs() < 1e-3, "{ratio}");
    }
}
