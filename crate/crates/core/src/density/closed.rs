use super::{DensityEvaluation, Method};
use crate::params::{near, GenStableParams};
use crate::specfun::{lgamma_pos, log_bessel_k};

/// Closed-form density when one is known: `m = 2 alpha` (inverse Gamma),
/// `alpha = 1` (Fréchet), `alpha = 2` and `m = 3a` (Macdonald functions).
pub(crate) fn closed_form(p: &GenStableParams, x: f64) -> Option<DensityEvaluation> {
    let log_value = log_closed_form(p, x)?;
    let value = log_value.exp();
    let err = value * 1e-14 * (1.0 + log_value.abs());
    Some(DensityEvaluation {
        x,
        value,
        method: Method::Closed,
        err,
    })
}

pub(crate) fn log_closed_form(p: &GenStableParams, x: f64) -> Option<f64> {
    let (m, alpha, a) = (p.m(), p.alpha(), p.a());
    let lx = x.ln();
    if near(m, 2.0 * alpha) {
        return Some(-(alpha + 1.0) * lx - 1.0 / x - lgamma_pos(alpha));
    }
    if near(alpha, 1.0) {
        return Some(-(a + 1.0) * lx - (-a * lx).exp() / a);
    }
    if near(alpha, 2.0) {
        let nu = 1.0 / a;
        let z = 2.0 / a * (-0.5 * a * lx).exp();
        return Some(
            std::f64::consts::LN_2 - (a + 1.5) * lx + log_bessel_k(nu, z)
                - nu * a.ln()
                - lgamma_pos(nu),
        );
    }
    if near(m, 3.0 * a) {
        let z = 2.0 * (-0.5 * lx).exp();
        return Some(
            std::f64::consts::LN_2 - (1.5 * a + 1.0) * lx + log_bessel_k(a, z)
                - lgamma_pos(a)
                - lgamma_pos(2.0 * a),
        );
    }
    None
}
