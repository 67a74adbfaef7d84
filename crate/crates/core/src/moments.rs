//! Fractional absolute moments `<|x|^q> = 2 int_0^inf x^q V(x, tau) dx` of the
//! generalized Voigt profile, finite for `0 < q < alpha1`.
//!
//! Three routes: direct quadrature with an analytic tail, and the two residue
//! series. With `a` the leading and `b` the other exponent,
//!
//! ```text
//! <|x|^q> = -(2 tau^{q/a} / (a pi)) Gamma(q+1) sin(q pi/2)
//!           * sum_n (-1)^n / n! Gamma((b n - q) / a) tau^{-n (b/a - 1)}
//! ```
//!
//! `(a, b) = (alpha2, alpha1)` expands around `tau -> 0`, `(alpha1, alpha2)`
//! around `tau -> inf`. The small-tau series converges for every tau; the
//! large-tau one is asymptotic (its coefficients grow like `n!^{b/a - 1}`), so
//! it is summed only while its terms shrink.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::quad::{geometric_breaks, integrate_breaks, Tolerance};
use crate::special::{gamma, is_gamma_pole, ln_gamma_signed, power_stretched_exp_tail, sin_pi};
use crate::voigt::VoigtSpec;

/// Default relative tolerance for the series.
pub const SERIES_TOL: f64 = 1e-12;

const QUAD_REL_TOL: f64 = 1e-10;
const TAIL_REL_TOL: f64 = 1e-11;
const MAX_SERIES_TERMS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentQuery {
    spec: VoigtSpec,
    q: f64,
}

impl MomentQuery {
    pub fn new(spec: VoigtSpec, q: f64) -> Result<Self> {
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::invalid(format!("moment order must be positive, got {q}")));
        }
        if q >= spec.alpha1() {
            return Err(Error::DivergentMoment { q, limit: spec.alpha1() });
        }
        Ok(MomentQuery { spec, q })
    }

    pub fn spec(&self) -> &VoigtSpec {
        &self.spec
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn tau(&self) -> f64 {
        self.spec.tau()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentMethod {
    Quadrature,
    SeriesLargeTau,
    SeriesSmallTau,
}

impl MomentMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            MomentMethod::Quadrature => "quadrature",
            MomentMethod::SeriesLargeTau => "series_large_tau",
            MomentMethod::SeriesSmallTau => "series_small_tau",
        }
    }

    /// A series when its expansion parameter is below 0.1, quadrature otherwise.
    pub fn suggest(spec: &VoigtSpec) -> Self {
        if spec.is_degenerate() {
            return MomentMethod::Quadrature;
        }
        let (a1, a2, tau) = (spec.alpha1(), spec.alpha2(), spec.tau());
        if tau.powf(1.0 - a1 / a2) < 0.1 {
            MomentMethod::SeriesSmallTau
        } else if tau.powf(-(a2 / a1 - 1.0)) < 0.1 {
            MomentMethod::SeriesLargeTau
        } else {
            MomentMethod::Quadrature
        }
    }
}

impl fmt::Display for MomentMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MomentMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadrature" => Ok(MomentMethod::Quadrature),
            "series_large_tau" | "large" => Ok(MomentMethod::SeriesLargeTau),
            "series_small_tau" | "small" => Ok(MomentMethod::SeriesSmallTau),
            other => Err(Error::invalid(format!("unknown moment method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentResult {
    pub value: f64,
    pub method: MomentMethod,
    pub terms_used: usize,
    pub error_estimate: f64,
}

/// Compute with the given method.
pub fn moment(query: &MomentQuery, method: MomentMethod) -> Result<MomentResult> {
    match method {
        MomentMethod::Quadrature => moment_quadrature(query),
        MomentMethod::SeriesLargeTau => moment_series_large_tau(query, SERIES_TOL),
        MomentMethod::SeriesSmallTau => moment_series_small_tau(query, SERIES_TOL),
    }
}

/// `2 int_0^X x^q V dx` plus the tail from the large-|x| expansion.
pub fn moment_quadrature(query: &MomentQuery) -> Result<MomentResult> {
    let spec = query.spec;
    let q = query.q;
    let symbol = spec.symbol();
    let s_lo = symbol.min_scale();
    let s_hi = symbol.max_scale();
    let pdf_tol = Tolerance { abs: 1e-15 / s_hi, rel: 1e-12 };

    let mut failure = None;
    let mut integrand = |x: f64| {
        if x == 0.0 {
            return 0.0;
        }
        if let Some(v) = symbol.gaussian_density(x) {
            return x.powf(q) * v;
        }
        match symbol.density(x, pdf_tol) {
            Ok(e) => x.powf(q) * e.value,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        }
    };

    let expansion = symbol.tail_expansion();
    let gaussian_w = symbol.is_gaussian().then(|| symbol.terms().iter().map(|t| t.weight).sum::<f64>());
    let tail_at = |x: f64| -> (f64, f64) {
        match gaussian_w {
            Some(w) => {
                let b = power_stretched_exp_tail(q, 0.25 / w, 2.0, x) / (2.0 * (PI * w).sqrt());
                (0.0, b)
            }
            None => {
                let e = expansion.moment_tail(x, q);
                (e.value, e.error)
            }
        }
    };

    // rough size of the answer, to turn relative targets into absolute ones
    let scale = s_hi.powf(q).max(s_lo.powf(q));
    let mut x_max = 100.0 * s_hi;
    let mut guard = 0;
    while tail_at(x_max).1 > TAIL_REL_TOL * 0.5 * scale && guard < 200 {
        x_max *= 2.0;
        guard += 1;
    }
    let (tail, tail_err) = tail_at(x_max);
    let breaks = geometric_breaks(1e-3 * s_lo, x_max);
    let r = integrate_breaks(&mut integrand, &breaks, Tolerance::relative(QUAD_REL_TOL), 5000);
    if let Some(e) = failure {
        return Err(e);
    }
    let value = 2.0 * (r.value + tail);
    let error = 2.0 * (r.error + tail_err);
    if !r.converged || !(value > 0.0) {
        return Err(Error::QuadratureNonconvergence { estimate: value, error, tolerance: 1e-8 * value.abs() });
    }
    Ok(MomentResult { value, method: MomentMethod::Quadrature, terms_used: r.evaluations, error_estimate: error })
}

/// `-(2 (2 tau)^{q/a} / (a pi)) Gamma(q+1) sin(q pi/2) Gamma(-q/a)`: one stable law with weight `2 tau`.
fn degenerate_moment(alpha: f64, tau: f64, q: f64) -> f64 {
    -2.0 * (2.0 * tau).powf(q / alpha) / (alpha * PI) * gamma(q + 1.0) * sin_pi(0.5 * q) * gamma(-q / alpha)
}

fn series(lead: f64, other: f64, q: f64, tau: f64, tol: f64, method: MomentMethod) -> Result<MomentResult> {
    let prefactor = -2.0 * tau.powf(q / lead) / (lead * PI) * gamma(q + 1.0) * sin_pi(0.5 * q);
    let ln_z = -(other / lead - 1.0) * tau.ln();
    let mut sum = 0.0;
    let mut ln_fact = 0.0;
    let mut prev = f64::INFINITY;
    let mut growth = 0;
    let mut best = (f64::INFINITY, 0.0);
    for n in 0..MAX_SERIES_TERMS {
        if n > 0 {
            ln_fact += (n as f64).ln();
        }
        let arg = (other * n as f64 - q) / lead;
        if is_gamma_pole(arg, 1e-12) {
            return Err(Error::GammaPole { term: n, argument: arg });
        }
        let (lg, sign) = ln_gamma_signed(arg);
        let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
        let term = parity * sign * (lg - ln_fact + n as f64 * ln_z).exp();
        sum += term;
        let mag = term.abs();
        if mag < best.0 {
            best = (mag, sum);
        }
        if mag <= tol * sum.abs() {
            let value = prefactor * sum;
            if !(value > 0.0) {
                return Err(Error::SeriesDivergence { terms: n + 1, best: prefactor * best.1 });
            }
            let error = (prefactor * term).abs() + 1e-15 * value * (n as f64 + 1.0);
            return Ok(MomentResult { value, method, terms_used: n + 1, error_estimate: error });
        }
        if n > 0 && mag > prev {
            growth += 1;
            if growth >= 3 {
                return Err(Error::SeriesDivergence { terms: n + 1, best: prefactor * best.1 });
            }
        } else {
            growth = 0;
        }
        prev = mag;
    }
    Err(Error::SeriesDivergence { terms: MAX_SERIES_TERMS, best: prefactor * best.1 })
}

/// Expansion around `tau -> inf`, led by `tau^{q/alpha1}`.
pub fn moment_series_large_tau(query: &MomentQuery, tol: f64) -> Result<MomentResult> {
    let s = query.spec;
    if s.is_degenerate() {
        let value = degenerate_moment(s.alpha1(), s.tau(), query.q);
        return Ok(MomentResult {
            value,
            method: MomentMethod::SeriesLargeTau,
            terms_used: 1,
            error_estimate: 4.0 * f64::EPSILON * value,
        });
    }
    series(s.alpha1(), s.alpha2(), query.q, s.tau(), tol, MomentMethod::SeriesLargeTau)
}

/// Expansion around `tau -> 0`, led by `tau^{q/alpha2}`.
pub fn moment_series_small_tau(query: &MomentQuery, tol: f64) -> Result<MomentResult> {
    let s = query.spec;
    if s.is_degenerate() {
        let value = degenerate_moment(s.alpha1(), s.tau(), query.q);
        return Ok(MomentResult {
            value,
            method: MomentMethod::SeriesSmallTau,
            terms_used: 1,
            error_estimate: 4.0 * f64::EPSILON * value,
        });
    }
    series(s.alpha2(), s.alpha1(), query.q, s.tau(), tol, MomentMethod::SeriesSmallTau)
}

/// `n_points` log-spaced values from `lo` to `hi`.
pub fn log_space(lo: f64, hi: f64, n_points: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n_points).map(|i| (a + (b - a) * i as f64 / (n_points - 1) as f64).exp()).collect()
}

/// Least-squares slope of `ln <|x|^q>^{1/q}` against `ln tau`, moments by quadrature.
pub fn fit_scaling_exponent(alpha1: f64, alpha2: f64, q: f64, tau_range: (f64, f64), n_points: usize) -> Result<f64> {
    let (lo, hi) = tau_range;
    if !(lo > 0.0 && hi.is_finite()) || hi < 100.0 * lo * (1.0 - 1e-12) {
        return Err(Error::invalid(format!("tau range [{lo}, {hi}] must span at least two decades")));
    }
    if n_points < 5 {
        return Err(Error::invalid(format!("need at least 5 fit points, got {n_points}")));
    }
    let mut xs = Vec::with_capacity(n_points);
    let mut ys = Vec::with_capacity(n_points);
    for tau in log_space(lo, hi, n_points) {
        let query = MomentQuery::new(VoigtSpec::new(alpha1, alpha2, tau)?, q)?;
        let m = moment_quadrature(&query)?;
        xs.push(tau.ln());
        ys.push(m.value.ln() / q);
    }
    Ok(least_squares_slope(&xs, &ys))
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Rows of `tau,q,value,method,error_estimate`.
pub fn write_moment_csv<W: Write>(mut w: W, rows: &[(MomentQuery, MomentResult)]) -> io::Result<()> {
    writeln!(w, "tau,q,value,method,error_estimate")?;
    for (query, r) in rows {
        writeln!(w, "{:.16e},{:.16e},{:.16e},{},{:.6e}", query.tau(), query.q(), r.value, r.method, r.error_estimate)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn query(a1: f64, a2: f64, tau: f64, q: f64) -> MomentQuery {
        MomentQuery::new(VoigtSpec::new(a1, a2, tau).unwrap(), q).unwrap()
    }

    #[test]
    fn divergent_orders_rejected() {
        let s = VoigtSpec::new(1.0, 2.0, 1.0).unwrap();
        assert!(matches!(MomentQuery::new(s, 1.0), Err(Error::DivergentMoment { .. })));
        assert!(MomentQuery::new(s, 0.0).is_err());
    }

    #[test]
    fn cauchy_moment_closed_form() {
        // (1, 1) at tau = 1/2 is the standard Cauchy law; <|x|^{1/2}> = sec(pi/4)
        let q = query(1.0, 1.0, 0.5, 0.5);
        let v = moment_series_large_tau(&q, SERIES_TOL).unwrap().value;
        assert!((v - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn gaussian_mean_absolute_value() {
        let q = query(2.0, 2.0, 0.5, 1.0);
        let r = moment_quadrature(&q).unwrap();
        assert!((r.value - 2.0 / PI.sqrt()).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn series_agree_with_quadrature() {
        for (tau, method) in [(0.01, MomentMethod::SeriesSmallTau), (100.0, MomentMethod::SeriesLargeTau)] {
            let q = query(1.0, 2.0, tau, 0.5);
            let s = moment(&q, method).unwrap();
            let r = moment_quadrature(&q).unwrap();
            assert!((s.value / r.value - 1.0).abs() < 1e-8, "tau={tau}: {} vs {}", s.value, r.value);
        }
    }

    #[test]
    fn slope_of_exact_power() {
        let xs: Vec<f64> = (0..5).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.25 * x + 3.0).collect();
        assert!((least_squares_slope(&xs, &ys) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn method_names_round_trip() {
        for m in [MomentMethod::Quadrature, MomentMethod::SeriesLargeTau, MomentMethod::SeriesSmallTau] {
            assert_eq!(m.as_str().parse::<MomentMethod>().unwrap(), m);
        }
    }
}
