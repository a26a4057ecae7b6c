use crate::mellin::log_asymptotic_constant;
use crate::params::GenStableParams;
use crate::specfun::lgamma_pos;

/// Value of the exponent `(alpha / a) x^{-a / alpha}` at the deep-left test point.
const DEEP_LEFT_EXPONENT: f64 = 30.0;
/// Exponent beyond which the density is replaced by its leading asymptotics.
const NEGLIGIBLE_EXPONENT: f64 = 45.0;

fn point_at_exponent(p: &GenStableParams, e: f64) -> f64 {
    let ratio = p.alpha() / p.a();
    (ratio / e).powf(ratio)
}

/// Point left of `x` where the exponent `(alpha / a) x^{-a / alpha}` has grown
/// by `drop`, and at least to the negligible level.
pub(crate) fn point_below(p: &GenStableParams, x: f64, drop: f64) -> f64 {
    let ratio = p.alpha() / p.a();
    let e = ratio * (-x.ln() / ratio).exp();
    point_at_exponent(p, (e + drop).max(NEGLIGIBLE_EXPONENT))
}

/// `ln` of [`asymptotic_zero`].
pub fn log_asymptotic_zero(p: &GenStableParams, x: f64) -> f64 {
    let (m, alpha, a) = (p.m(), p.alpha(), p.a());
    let log_c = log_asymptotic_constant(p).expect("a > 0 is a valid double Gamma parameter");
    let lx = x.ln();
    log_c - m * (1.0 + alpha) / (2.0 * alpha) * lx - alpha / a * (-a / alpha * lx).exp()
}

/// Leading behaviour of the density at zero,
/// `c x^{-m(1+alpha)/(2 alpha)} exp(-(alpha/a) x^{-a/alpha})`.
pub fn asymptotic_zero(p: &GenStableParams, x: f64) -> f64 {
    log_asymptotic_zero(p, x).exp()
}

/// Leading behaviour of the density at infinity, `x^{alpha - m - 1} / Gamma(alpha)`.
pub fn asymptotic_infinity(p: &GenStableParams, x: f64) -> f64 {
    ((p.alpha() - p.m() - 1.0) * x.ln() - lgamma_pos(p.alpha())).exp()
}

/// Maximiser of [`asymptotic_zero`]; used to split integrals near the mode.
pub fn mode_estimate(p: &GenStableParams) -> f64 {
    let (m, alpha) = (p.m(), p.alpha());
    (2.0 * alpha / (m * (1.0 + alpha))).powf(alpha / p.a())
}

/// The `x` where `(alpha / a) x^{-a / alpha} = 30`.
pub fn deep_left_point(p: &GenStableParams) -> f64 {
    point_at_exponent(p, DEEP_LEFT_EXPONENT)
}

/// Below this point the density is below `e^{-45}` times a power of `x` and
/// is represented by [`asymptotic_zero`].
pub fn negligible_below(p: &GenStableParams) -> f64 {
    point_at_exponent(p, NEGLIGIBLE_EXPONENT)
}
