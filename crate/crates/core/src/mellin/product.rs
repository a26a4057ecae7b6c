//! Infinite Gamma-ratio product for `ln M(s)`.
//!
//! With `p_n = a (n + 1)`, `r_n = m + a n` and `D(x) = ln Gamma(x + s) - ln Gamma(x) - s ln x`,
//!
//! `ln M(s) = s ln C + sum_{n >= 0} [D(p_n) - D(r_n)]`, `C = a^{alpha/a} Gamma(m/a)`.
//!
//! The first `N + 1` terms are summed directly. Beyond them `D` is replaced by
//! its large-`x` expansion whose lattice sums are digamma differences and
//! Hurwitz zeta values.

use num_complex::Complex64;

use crate::params::GenStableParams;
use crate::specfun::{bernoulli_poly, digamma_pos, hurwitz_zeta, lgamma_complex, lgamma_pos};

const TAIL_TERMS: usize = 24;

/// Smallest `N` such that the tail starts beyond `max(30, 6 |s|)`.
pub(crate) fn direct_terms(a: f64, s_abs: f64) -> usize {
    let start = 30f64.max(6.0 * s_abs);
    ((start / a).ceil() as usize).max(1)
}

/// `ln M(s)` for real `s > -a` with an estimate of the absolute error.
pub(crate) fn log_mellin_product(p: &GenStableParams, s: f64) -> (f64, f64) {
    let a = p.a();
    let n = direct_terms(a, s.abs()).max(2000);
    let mut sum = 0.0;
    let mut comp = 0.0; // Kahan compensation
    for k in 0..=n {
        let pk = a * (k as f64 + 1.0);
        let rk = p.m() + a * k as f64;
        let term = (lgamma_pos(pk + s) - lgamma_pos(pk))
            - (lgamma_pos(rk + s) - lgamma_pos(rk))
            - s * (pk / rk).ln();
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    let (tail, tail_err) = tail(p, Complex64::new(s, 0.0), n);
    let log_c = p.alpha() / a * a.ln() + lgamma_pos(p.m() / a);
    let value = s * log_c + sum + tail.re;
    let rounding = 1e-15 * (n as f64).sqrt() * (1.0 + value.abs() + (s * log_c).abs());
    (value, tail_err + rounding)
}

/// `ln M(s)` for complex `s` with `Re s > -a`, up to a multiple of `2 pi i`.
pub fn log_mellin_complex(p: &GenStableParams, s: Complex64) -> Complex64 {
    let a = p.a();
    let n = direct_terms(a, s.norm());
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        let pk = a * (k as f64 + 1.0);
        let rk = p.m() + a * k as f64;
        sum += lgamma_complex(s + pk) - lgamma_pos(pk) - lgamma_complex(s + rk) + lgamma_pos(rk)
            - s * (pk / rk).ln();
    }
    let log_c = p.alpha() / a * a.ln() + lgamma_pos(p.m() / a);
    s * log_c + sum + tail(p, s, n).0
}

/// `sum_{k > n} [D(p_k) - D(r_k)]` and the size of the last retained term.
fn tail(p: &GenStableParams, s: Complex64, n: usize) -> (Complex64, f64) {
    let a = p.a();
    let q_p = n as f64 + 2.0; // p_k / a = k + 1
    let q_r = n as f64 + 1.0 + p.m() / a; // r_k / a = k + m / a
    let zero = Complex64::new(0.0, 0.0);
    let mut acc = zero;
    let mut last = 0.0;
    for k in 1..=TAIL_TERMS {
        let coef = (bernoulli_poly(k + 1, s) - bernoulli_poly(k + 1, zero)) / (k * (k + 1)) as f64;
        let lattice = if k == 1 {
            (digamma_pos(q_r) - digamma_pos(q_p)) / a
        } else {
            a.powi(-(k as i32)) * (hurwitz_zeta(k as f64, q_p) - hurwitz_zeta(k as f64, q_r))
        };
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let term = coef * (sign * lattice);
        acc += term;
        last = term.norm();
        if last < 1e-18 * (1.0 + acc.norm()) {
            break;
        }
    }
    (acc, last)
}
