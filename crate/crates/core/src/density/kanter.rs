//! Density for `m = 1` from Kanter's integral for the positive stable law.
//!
//! For `m = 1`, `X = a^{-1/a} Z` with `E[e^{-lam Z}] = e^{-lam^a}`, and
//!
//! `f_Z(z) = a/(1-a) z^{-1/(1-a)} int_0^1 A(u) exp(-A(u) z^{-a/(1-a)}) du`,
//!
//! `A(u) = (sin(a pi u)^a sin((1-a) pi u)^{1-a} / sin(pi u))^{1/(1-a)}`.

use std::f64::consts::PI;

use super::{DensityEvaluation, Method};
use crate::error::{Error, Result};
use crate::params::{near, GenStableParams};
use crate::quad::tanh_sinh_with_distance;

pub(crate) fn log_kanter_a(a: f64, u: f64, dl: f64, dr: f64) -> f64 {
    let s_pi = (PI * dl.min(dr)).sin();
    let s_a = (a * PI * u).sin();
    let s_b = ((1.0 - a) * PI * u).sin();
    (a * s_a.ln() + (1.0 - a) * s_b.ln() - s_pi.ln()) / (1.0 - a)
}

pub(crate) fn density_kanter(p: &GenStableParams, x: f64) -> Result<DensityEvaluation> {
    if !near(p.m(), 1.0) {
        return Err(Error::Precondition(format!(
            "quadrature (Kanter integral) needs m = 1, got m = {}",
            p.m()
        )));
    }
    let a = p.a();
    let log_z = x.ln() + a.ln() / a;
    let w = (-a / (1.0 - a) * log_z).exp();
    let log_a0 = (a * a.ln() + (1.0 - a) * (1.0 - a).ln()) / (1.0 - a);
    let a0 = log_a0.exp();
    let r = tanh_sinh_with_distance(
        |u, dl, dr| {
            if dl <= 0.0 {
                return a0;
            }
            let big_a = log_kanter_a(a, u, dl, dr).exp();
            big_a * (-(big_a - a0) * w).exp()
        },
        0.0,
        1.0,
        1e-13,
    );
    let log_value = a.ln() / a + (a / (1.0 - a)).ln() - log_z / (1.0 - a) - a0 * w + r.value.ln();
    let value = log_value.exp();
    let rel = r.error / r.value + 1e-14 * (1.0 + log_value.abs());
    let err = value * if r.converged { rel } else { rel.max(1e-8) };
    Ok(DensityEvaluation {
        x,
        value,
        method: Method::Quadrature,
        err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_stable_closed_form() {
        let p = GenStableParams::new(1.0, 0.5).unwrap();
        for &x in &[0.02, 0.3, 1.0, 7.0, 500.0] {
            let v = density_kanter(&p, x).unwrap();
            let want = x.powf(-1.5) * (-1.0 / x).exp() / PI.sqrt();
            assert!(
                (v.value / want - 1.0).abs() < 1e-11,
                "x = {x}: {} vs {want}",
                v.value
            );
            assert!(v.err < 1e-10 * want);
        }
    }

    #[test]
    fn rejects_other_m() {
        let p = GenStableParams::new(2.0, 0.5).unwrap();
        assert!(matches!(
            density_kanter(&p, 1.0),
            Err(Error::Precondition(_))
        ));
    }
}
