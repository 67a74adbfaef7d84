//! Special functions shared by the density, Riesz and moment code.
//!
//! Gamma uses the Lanczos approximation (g = 7, nine coefficients) with the
//! reflection formula below 1/2. Hurwitz zeta uses Euler-Maclaurin summation
//! and only needs to cover `s > 1`, `a > 0`.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `sin(pi x)` with argument reduction, exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let r = x.rem_euclid(2.0);
    let (sign, r) = if r >= 1.0 { (-1.0, r - 1.0) } else { (1.0, r) };
    let v = if r == 0.0 {
        0.0
    } else if r < 0.25 {
        (PI * r).sin()
    } else if r <= 0.75 {
        (PI * (0.5 - r)).cos()
    } else {
        (PI * (1.0 - r)).sin()
    };
    sign * v
}

/// True when `x` is within `tol` of a non-positive integer.
pub fn is_gamma_pole(x: f64, tol: f64) -> bool {
    x <= tol && (x - x.round()).abs() <= tol
}

fn lanczos_sum(z: f64) -> f64 {
    // z is the shifted argument (x - 1)
    let mut a = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    a
}

/// The gamma function. Returns NaN at the poles.
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma(1.0 - x));
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    let a = lanczos_sum(z);
    // split the power to avoid premature overflow near the top of the range
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (-t).exp() * half * a
}

/// Natural log of `|Gamma(x)|` together with the sign of `Gamma(x)`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x.is_nan() || (x <= 0.0 && x == x.floor()) {
        return (f64::INFINITY, f64::NAN);
    }
    if x < 0.5 {
        let s = sin_pi(x);
        let (lg, _) = ln_gamma_signed(1.0 - x);
        return (PI.ln() - s.abs().ln() - lg, s.signum());
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    (LN_SQRT_2PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln(), 1.0)
}

pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_signed(x).0
}

/// Hurwitz zeta `sum_{k>=0} (k + a)^{-s}` for `s > 1`, `a > 0`.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    debug_assert!(s > 1.0 && a > 0.0);
    const N: usize = 9;
    // B_{2j} / (2j)!
    const B: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30_240.0,
        -1.0 / 1_209_600.0,
        1.0 / 47_900_160.0,
        -691.0 / 1_307_674_368_000.0,
        1.0 / 74_724_249_600.0,
    ];
    let mut sum = 0.0;
    for k in 0..N {
        sum += (a + k as f64).powf(-s);
    }
    let w = a + N as f64;
    sum += w.powf(1.0 - s) / (s - 1.0) + 0.5 * w.powf(-s);
    // rising factorial s (s+1) ... (s + 2j - 2)
    let mut rising = s;
    let mut wpow = w.powf(-s - 1.0);
    for (j, b) in B.iter().enumerate() {
        let term = b * rising * wpow;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        let m = 2.0 * j as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        wpow /= w * w;
    }
    sum
}

/// Upper bound on the upper incomplete gamma function `Gamma(s, y)`, `s > 0`.
pub fn upper_gamma_bound(s: f64, y: f64) -> f64 {
    if y <= 0.0 {
        return gamma(s);
    }
    let ln_bound = if s <= 1.0 {
        (s - 1.0) * y.ln() - y
    } else if y > s - 1.0 + 1e-12 {
        (s - 1.0) * y.ln() - y + (y / (y - s + 1.0)).ln()
    } else {
        return gamma(s);
    };
    ln_bound.exp().min(gamma(s))
}

/// Upper bound on `int_T^inf exp(-c t^a) dt` for `c, a > 0`.
pub fn stretched_exp_tail(c: f64, a: f64, t: f64) -> f64 {
    power_stretched_exp_tail(0.0, c, a, t)
}

/// Upper bound on `int_T^inf t^p exp(-c t^a) dt` for `c, a > 0`, `p > -1`.
pub fn power_stretched_exp_tail(p: f64, c: f64, a: f64, t: f64) -> f64 {
    let s = (p + 1.0) / a;
    let y = if t > 0.0 { c * t.powf(a) } else { 0.0 };
    c.powf(-s) / a * upper_gamma_bound(s, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_integers_and_half_integers() {
        let mut fact = 1.0;
        for n in 1..20 {
            assert!((gamma(n as f64) - fact).abs() <= 1e-14 * fact, "n={n}");
            fact *= n as f64;
        }
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn poles_are_nan() {
        assert!(gamma(0.0).is_nan());
        assert!(gamma(-3.0).is_nan());
        assert!(is_gamma_pole(-2.0 + 1e-14, 1e-12));
        assert!(!is_gamma_pole(-1.5, 1e-12));
        assert!(!is_gamma_pole(2.0, 1e-12));
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &x in &[0.1, 0.7, 1.3, 5.5, 30.25, -0.3, -2.7] {
            let (lg, sign) = ln_gamma_signed(x);
            let g = gamma(x);
            assert!((sign * lg.exp() - g).abs() < 1e-13 * g.abs(), "x={x}");
        }
        // beyond the f64 range of gamma itself
        assert!((ln_gamma(200.0) - 857.933_669_825_857_5).abs() < 1e-10);
    }

    #[test]
    fn sin_pi_exact_zeros() {
        assert_eq!(sin_pi(3.0), 0.0);
        assert_eq!(sin_pi(-2.0), 0.0);
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-16);
        assert!((sin_pi(-0.25) + 0.5f64.sqrt()).abs() < 1e-16);
    }

    #[test]
    fn hurwitz_reduces_to_riemann() {
        // zeta(2) = pi^2 / 6, zeta(1.5) = 2.612375348685488
        assert!((hurwitz_zeta(2.0, 1.0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((hurwitz_zeta(1.5, 1.0) - 2.612_375_348_685_488).abs() < 1e-13);
        // zeta(s, a) - zeta(s, a + 1) = a^{-s}
        let (s, a) = (3.25, 0.4);
        assert!((hurwitz_zeta(s, a) - hurwitz_zeta(s, a + 1.0) - a.powf(-s)).abs() < 1e-12);
    }

    #[test]
    fn stretched_tail_bounds_exact_exponential() {
        // a = 1: exact tail is e^{-cT}/c
        let (c, t) = (2.0f64, 3.0f64);
        let exact = (-c * t).exp() / c;
        let b = stretched_exp_tail(c, 1.0, t);
        assert!(b >= exact && b <= 1.0001 * exact);
        // a = 0.5: exact tail 2 (1 + sqrt(T)) e^{-sqrt T}
        let t = 400.0;
        let exact = 2.0 * (1.0 + 20.0) * (-20.0f64).exp();
        let b = stretched_exp_tail(1.0, 0.5, t);
        assert!(b >= exact && b < 1.2 * exact);
    }
}
