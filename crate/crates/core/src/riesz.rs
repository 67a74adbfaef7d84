//! Riesz fractional derivative `D^alpha`, the operator with Fourier symbol `-|k|^alpha`.
//!
//! Two independent routes: a Fourier multiplier on grid samples, and the
//! real-space singular integrals evaluated pointwise.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::ProfileSamples;
use crate::quad::{geometric_breaks, integrate_breaks, Tolerance};
use crate::special::gamma;
use crate::spectral::{apply_multiplier, SpectralOptions};

/// Orders within this distance of 1 take the Hilbert-transform branch.
const NEAR_ONE: f64 = 1e-6;

/// Target accuracy of the pointwise integral route.
pub const INTEGRAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RieszOrder {
    alpha: f64,
}

impl RieszOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::invalid(format!("Riesz order must lie in (0, 2], got {alpha}")));
        }
        Ok(RieszOrder { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The Fourier symbol `-|k|^alpha`.
    pub fn symbol(&self, kappa: f64) -> f64 {
        -kappa.abs().powf(self.alpha)
    }
}

pub fn riesz_apply_spectral(order: &RieszOrder, samples: &ProfileSamples) -> Result<ProfileSamples> {
    riesz_apply_spectral_with(order, samples, &SpectralOptions::default())
}

pub fn riesz_apply_spectral_with(
    order: &RieszOrder,
    samples: &ProfileSamples,
    opts: &SpectralOptions,
) -> Result<ProfileSamples> {
    apply_multiplier(samples, |k| order.symbol(k), opts)
}

/// `D^alpha f(x)` from the real-space representation.
///
/// `f` must be smooth near `x` and decay at infinity.
pub fn riesz_apply_integral(order: &RieszOrder, f: impl Fn(f64) -> f64, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("x must be finite, got {x}")));
    }
    let a = order.alpha;
    if a == 2.0 {
        let d = derivatives(&f, x, 1e-3);
        return if d.second.is_finite() {
            Ok(d.second)
        } else {
            Err(Error::SingularityHandling(format!("f'' is not finite at x={x}")))
        };
    }
    if (a - 1.0).abs() < NEAR_ONE {
        return hilbert_route(&f, x);
    }
    second_difference_route(&f, x, a)
}

struct Derivatives {
    second: f64,
    fourth: f64,
}

fn derivatives(f: &impl Fn(f64) -> f64, x: f64, h: f64) -> Derivatives {
    let (fm2, fm1, f0, fp1, fp2) = (f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h));
    Derivatives {
        second: (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h),
        fourth: (fp2 - 4.0 * fp1 + 6.0 * f0 - 4.0 * fm1 + fm2) / h.powi(4),
    }
}

/// `C int_0^inf (f(x+s) - 2 f(x) + f(x-s)) / s^{1+a} ds`, `C = Gamma(1+a) sin(a pi/2) / pi`.
fn second_difference_route(f: &impl Fn(f64) -> f64, x: f64, a: f64) -> Result<f64> {
    let c = gamma(1.0 + a) * (0.5 * PI * a).sin() / PI;
    let budget = 0.01 * INTEGRAL_TOL / c;
    let d = derivatives(f, x, 1e-2);
    if !(d.second.is_finite() && d.fourth.is_finite()) {
        return Err(Error::SingularityHandling(format!("derivatives of f are not finite at x={x}")));
    }
    // [0, delta]: second difference = f'' s^2 + f'''' s^4 / 12 + O(s^6)
    let mut delta: f64 = 0.5;
    let quartic = |dl: f64| d.fourth.abs() * dl.powf(4.0 - a) / (12.0 * (4.0 - a));
    while quartic(delta) > budget {
        delta *= 0.5;
        if delta < 1e-4 {
            return Err(Error::SingularityHandling(format!(
                "no near-origin split meets the tolerance at x={x} (f'''' = {:e})",
                d.fourth
            )));
        }
    }
    let near = d.second * delta.powf(2.0 - a) / (2.0 - a) + d.fourth * delta.powf(4.0 - a) / (12.0 * (4.0 - a));

    let f0 = f(x);
    let split = 1.0_f64.max(delta);
    let middle = {
        let mut breaks = vec![delta];
        let mut b = 2.0 * delta;
        while b < split {
            breaks.push(b);
            b *= 2.0;
        }
        breaks.push(split);
        integrate_breaks(
            |s| (f(x + s) - 2.0 * f0 + f(x - s)) / s.powf(1.0 + a),
            &breaks,
            Tolerance::absolute(budget),
            2000,
        )
    };
    let (far, far_err) = outward_tail(|s| (f(x + s) + f(x - s)) / s.powf(1.0 + a), split, a, budget)?;
    let constant = -2.0 * f0 * split.powf(-a) / a;
    let total = near + middle.value + far + constant;
    let err = middle.error + far_err;
    if !middle.converged || !total.is_finite() {
        return Err(Error::QuadratureNonconvergence { estimate: c * total, error: c * err, tolerance: INTEGRAL_TOL });
    }
    Ok(c * total)
}

/// `int_from^inf g(s) ds` for `|g(s)| <~ s^{-1-a}` on doubling panels.
fn outward_tail(g: impl Fn(f64) -> f64, from: f64, a: f64, budget: f64) -> Result<(f64, f64)> {
    let mut value = 0.0;
    let mut error = 0.0;
    let mut lo = from;
    for _ in 0..200 {
        let hi = 2.0 * lo;
        let r = integrate_breaks(&g, &[lo, hi], Tolerance::absolute(0.01 * budget), 200);
        value += r.value;
        error += r.error;
        // what remains is at most |g(hi)| hi / a if g keeps decaying like the kernel
        let rest = g(hi).abs() * hi / a.min(1.0);
        if r.value.abs() < 1e-3 * budget && rest < 0.1 * budget {
            return Ok((value, error + rest));
        }
        lo = hi;
    }
    Err(Error::QuadratureNonconvergence { estimate: value, error: f64::INFINITY, tolerance: budget })
}

/// `-(1/pi) d/dx H(x)`, `H(x) = int_0^inf (f(x-u) - f(x+u)) / u du`.
fn hilbert_route(f: &impl Fn(f64) -> f64, x: f64) -> Result<f64> {
    let budget = 1e-11;
    let hilbert = |y: f64| -> Result<f64> {
        let g = |u: f64| if u == 0.0 { 0.0 } else { (f(y - u) - f(y + u)) / u };
        let r = integrate_breaks(g, &geometric_breaks(1e-3, 1.0), Tolerance::absolute(budget), 2000);
        if !r.converged {
            return Err(Error::QuadratureNonconvergence { estimate: r.value, error: r.error, tolerance: budget });
        }
        let (tail, _) = outward_tail(g, 1.0, 1.0, budget)?;
        Ok(r.value + tail)
    };
    let central = |h: f64| -> Result<f64> { Ok((hilbert(x + h)? - hilbert(x - h)?) / (2.0 * h)) };
    let h = 2e-2;
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    let dh = (4.0 * fine - coarse) / 3.0;
    if !dh.is_finite() {
        return Err(Error::SingularityHandling(format!("Hilbert transform derivative is not finite at x={x}")));
    }
    Ok(-dh / PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;

    fn gauss(x: f64) -> f64 {
        (-x * x / 4.0).exp() / (2.0 * PI.sqrt())
    }

    #[test]
    fn order_validation() {
        assert!(RieszOrder::new(0.0).is_err());
        assert!(RieszOrder::new(2.5).is_err());
        assert!(RieszOrder::new(2.0).is_ok());
    }

    #[test]
    fn order_two_is_second_derivative() {
        let o = RieszOrder::new(2.0).unwrap();
        let x = 0.7;
        // d^2/dx^2 e^{-x^2/4} = (x^2/4 - 1/2) e^{-x^2/4}
        let exact = (x * x / 4.0 - 0.5) * gauss(x);
        assert!((riesz_apply_integral(&o, gauss, x).unwrap() - exact).abs() < 1e-8);
    }

    #[test]
    fn cauchy_order_one_at_origin() {
        // D^1 L_1(., 1) = d/dtau L_1(0, tau) at tau = 1, i.e. -1/pi
        let o = RieszOrder::new(1.0).unwrap();
        let v = riesz_apply_integral(&o, |x| 1.0 / (PI * (1.0 + x * x)), 0.0).unwrap();
        assert!((v + 1.0 / PI).abs() < 1e-6, "{v}");
    }

    #[test]
    fn zero_samples_stay_zero() {
        let g = Grid1D::new(5.0, 101).unwrap();
        let s = ProfileSamples::new(g, vec![0.0; 101], 0.0).unwrap();
        let d = riesz_apply_spectral(&RieszOrder::new(0.7).unwrap(), &s).unwrap();
        assert!(d.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn integral_matches_spectral_on_gaussian() {
        let g = Grid1D::new(40.0, 4001).unwrap();
        let s = ProfileSamples::new(g, g.points().iter().map(|&x| gauss(x)).collect(), 0.0).unwrap();
        for a in [0.5, 1.5] {
            let o = RieszOrder::new(a).unwrap();
            let opts = SpectralOptions { min_period: 5e4, ..Default::default() };
            let spec = riesz_apply_spectral_with(&o, &s, &opts).unwrap();
            let i = g.center_index() + 100;
            let v = riesz_apply_integral(&o, gauss, g.point(i)).unwrap();
            assert!((v - spec.values[i]).abs() < 1e-6, "a={a}: {v} vs {}", spec.values[i]);
        }
    }
}
