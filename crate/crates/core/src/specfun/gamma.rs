//! Gamma-family functions: `ln Gamma`, reflection helpers, digamma and trigamma.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::zeta::{bernoulli, zeta_int};
use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
pub(crate) const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Below this argument the Stirling series is reached by upward recurrence.
const STIRLING_MIN: f64 = 12.0;

/// `ln n!` as an exact sum of logarithms.
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

fn stirling_tail(x: f64) -> f64 {
    // sum_k B_{2k} / (2k (2k-1) x^{2k-1})
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut acc = 0.0;
    for k in 1..=10 {
        let n = 2 * k;
        let term = bernoulli(n) / ((n * (n - 1)) as f64) * pow;
        acc += term;
        if term.abs() < 1e-19 * acc.abs() {
            break;
        }
        pow *= inv2;
    }
    acc
}

fn lgamma_taylor_coeffs() -> &'static [f64; 40] {
    // ln Gamma(1 + e) = -gamma e + sum_{k>=2} (-1)^k zeta(k) e^k / k
    static C: OnceLock<[f64; 40]> = OnceLock::new();
    C.get_or_init(|| {
        let mut c = [0.0; 40];
        c[1] = -EULER_GAMMA;
        for (k, slot) in c.iter_mut().enumerate().skip(2) {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            *slot = sign * zeta_int(k as u32) / k as f64;
        }
        c
    })
}

fn lgamma_near_one(e: f64) -> f64 {
    let c = lgamma_taylor_coeffs();
    let mut acc = 0.0;
    for k in (1..40).rev() {
        acc = acc * e + c[k];
    }
    acc * e
}

/// `ln Gamma(x)` for `x > 0` without domain checking.
pub(crate) fn lgamma_pos(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if (x - 1.0).abs() <= 0.2 {
        return lgamma_near_one(x - 1.0);
    }
    if (x - 2.0).abs() <= 0.2 {
        return (x - 1.0).ln() + lgamma_near_one(x - 2.0);
    }
    if x >= STIRLING_MIN {
        return (x - 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_tail(x);
    }
    let mut prod = 1.0;
    let mut y = x;
    while y < STIRLING_MIN {
        prod *= y;
        y += 1.0;
    }
    (y - 0.5) * y.ln() - y + LN_SQRT_2PI + stirling_tail(y) - prod.ln()
}

/// `ln Gamma(x)` for positive `x`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(lgamma_pos(x))
}

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).floor(); // [0, 2)
    let (r, sign) = if r >= 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    let v = if r <= 0.25 {
        (PI * r).sin()
    } else if r <= 0.75 {
        (PI * (0.5 - r)).cos()
    } else {
        (PI * (1.0 - r)).sin()
    };
    sign * v
}

/// `(ln |Gamma(x)|, sign Gamma(x))` for any real `x` that is not a pole.
pub fn lgamma_signed(x: f64) -> (f64, f64) {
    if x > 0.0 {
        return (lgamma_pos(x), 1.0);
    }
    // Gamma(x) = pi / (sin(pi x) Gamma(1 - x))
    let s = sin_pi(x);
    if s == 0.0 {
        return (f64::INFINITY, f64::NAN);
    }
    (PI.ln() - s.abs().ln() - lgamma_pos(1.0 - x), s.signum())
}

/// `Gamma(x)` for real `x`, `NaN` at the poles.
pub fn gamma(x: f64) -> f64 {
    let (l, s) = lgamma_signed(x);
    s * l.exp()
}

/// `1 / Gamma(x)` for real `x`, exactly zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if x > 0.0 {
        return (-lgamma_pos(x)).exp();
    }
    let s = sin_pi(x);
    if s == 0.0 {
        return 0.0;
    }
    s * (lgamma_pos(1.0 - x) - PI.ln()).exp()
}

/// Digamma `psi(x)` for `x > 0`.
pub(crate) fn digamma_pos(x: f64) -> f64 {
    let mut acc = 0.0;
    let mut y = x;
    while y < STIRLING_MIN {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut pow = inv2;
    let mut series = 0.0;
    for k in 1..=10 {
        let term = bernoulli(2 * k) / (2 * k) as f64 * pow;
        series += term;
        if term.abs() < 1e-19 {
            break;
        }
        pow *= inv2;
    }
    acc + y.ln() - 0.5 / y - series
}

/// Trigamma `psi'(x)` for `x > 0`.
pub(crate) fn trigamma_pos(x: f64) -> f64 {
    let mut acc = 0.0;
    let mut y = x;
    while y < STIRLING_MIN {
        acc += 1.0 / (y * y);
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut pow = inv2 * inv;
    let mut series = inv + 0.5 * inv2;
    for k in 1..=10 {
        let term = bernoulli(2 * k) * pow;
        series += term;
        if term.abs() < 1e-19 {
            break;
        }
        pow *= inv2;
    }
    acc + series
}

/// `(psi(x), psi'(x))` for `x > 0`.
pub fn digamma_trigamma(x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("digamma requires x > 0, got {x}")));
    }
    Ok((digamma_pos(x), trigamma_pos(x)))
}

/// `ln Gamma(z)` for complex `z` with `Re z > 0`, defined up to a multiple of `2 pi i`.
///
/// Callers only exponentiate sums of these values, so the branch is irrelevant.
pub fn lgamma_complex(z: Complex64) -> Complex64 {
    debug_assert!(z.re > 0.0);
    let mut prod = Complex64::new(1.0, 0.0);
    let mut w = z;
    while w.norm() < STIRLING_MIN || w.re < 1.0 {
        prod *= w;
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut tail = Complex64::new(0.0, 0.0);
    for k in 1..=10 {
        let n = 2 * k;
        tail += pow * (bernoulli(n) / ((n * (n - 1)) as f64));
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + tail - prod.ln()
}
