//! Laplace exponent `psi_{m, alpha}` of the spectrally negative Lévy process
//! attached to `G(m, alpha)` when `m > 2 alpha`.

use crate::error::{Error, Result};
use crate::params::GenStableParams;
use crate::quad::{half_line, tanh_sinh_with_distance};
use crate::specfun::lgamma_pos;

/// `psi(s) = a^beta (Gamma(beta + 1) s + int_0^inf (e^{-st} - 1 + st) nu(t) dt)` with
/// `nu(t) = a m beta e^{-mt} / (Gamma(1 - beta) (1 - e^{-at})^{beta + 2})`.
pub fn levy_exponent(p: &GenStableParams, s: f64) -> Result<f64> {
    let (m, a, beta) = (p.m(), p.a(), p.beta());
    if beta >= 1.0 {
        return Err(Error::Domain(format!(
            "beta >= 1, representation invalid (needs m > 2 alpha; m = {m}, alpha = {})",
            p.alpha()
        )));
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!(
            "levy exponent needs s >= 0, got {s}"
        )));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    // nu(t) = c0 t^{-beta-2} r(t), r(0) = 1
    let log_c0 = m.ln() + beta.ln() - (beta + 1.0) * a.ln() - lgamma_pos(1.0 - beta);
    let c0 = log_c0.exp();
    let r = |t: f64| {
        let at = a * t;
        let ratio = if at < 1e-8 {
            1.0 + 0.5 * at
        } else {
            at / -(-at).exp_m1()
        };
        (beta + 2.0) * ratio.ln() - m * t
    };
    // (e^{-st} - 1 + st) / t^2
    let e = |t: f64| {
        let x = s * t;
        if x < 1.0 {
            let mut term = s * s / 2.0;
            let mut sum = term;
            for k in 3..40 {
                term *= -x / k as f64;
                sum += term;
                if term.abs() < 1e-18 * sum.abs() {
                    break;
                }
            }
            sum
        } else {
            ((-x).exp_m1() + x) / (t * t)
        }
    };
    let tol = 1e-12;
    // on (0, 1] subtract the leading c0 s^2 t^{-beta} / 2, integrated exactly
    let near = tanh_sinh_with_distance(
        |_, t, _| {
            if t == 0.0 {
                return 0.0;
            }
            c0 * t.powf(-beta) * (e(t) * r(t).exp() - 0.5 * s * s)
        },
        0.0,
        1.0,
        tol,
    );
    let near_exact = c0 * s * s / (2.0 * (1.0 - beta));
    let far = half_line(|t| c0 * t.powf(-beta) * e(t) * r(t).exp(), 1.0, tol);
    if !(near.converged && far.converged) {
        let total = near.value + near_exact + far.value;
        return Err(Error::Accuracy {
            context: "levy exponent quadrature",
            coarse: total - near.error - far.error,
            fine: total,
        });
    }
    let drift = (lgamma_pos(beta + 1.0)).exp() * s;
    Ok(a.powf(beta) * (drift + near.value + near_exact + far.value))
}
