use super::asymptotic::{asymptotic_infinity, mode_estimate, negligible_below};
use super::DensityEvaluator;
use crate::error::{Error, Result};
use crate::params::{near, GenStableParams};
use crate::quad::{gauss_kronrod, half_line};
use crate::specfun::{lgamma_pos, log_bessel_k};

/// `E[e^{-lam X}]`.
///
/// Closed forms for `m = 1`, `m = 2` and `m = 2 alpha`; otherwise the density
/// is integrated numerically in `ln x`, split at the mode, with the far tail
/// taken from the asymptotics at infinity.
pub fn laplace_transform(p: &GenStableParams, lam: f64) -> Result<f64> {
    if !(lam >= 0.0 && lam.is_finite()) {
        return Err(Error::Domain(format!(
            "Laplace argument must be finite and >= 0, got {lam}"
        )));
    }
    if lam == 0.0 {
        return Ok(1.0);
    }
    if let Some(v) = log_laplace_closed(p, lam) {
        return Ok(v.exp());
    }
    Ok(laplace_numeric(p, lam))
}

fn log_laplace_closed(p: &GenStableParams, lam: f64) -> Option<f64> {
    let (m, alpha, a) = (p.m(), p.alpha(), p.a());
    let ll = lam.ln();
    if near(m, 1.0) {
        return Some(-(a * ll).exp() / a);
    }
    if near(m, 2.0 * alpha) {
        return Some(
            std::f64::consts::LN_2 + 0.5 * alpha * ll + log_bessel_k(alpha, 2.0 * (0.5 * ll).exp())
                - lgamma_pos(alpha),
        );
    }
    if near(m, 2.0) {
        let nu = 1.0 / a;
        let z = 2.0 * nu * (ll / (2.0 * nu)).exp();
        return Some(
            std::f64::consts::LN_2 + nu * nu.ln() - lgamma_pos(nu) + 0.5 * ll + log_bessel_k(nu, z),
        );
    }
    None
}

pub(crate) fn laplace_numeric(p: &GenStableParams, lam: f64) -> f64 {
    let lo = negligible_below(p);
    let mode = mode_estimate(p);
    let cut = (40.0 / lam).max(50.0 * mode).min(1e5).max(2.0 * mode);
    let eval = DensityEvaluator::new(*p).with_range(lo, cut);
    let g = |u: f64| {
        let x = u.exp();
        x * (-lam * x).exp() * eval.eval_abs(x)
    };
    let (ul, um, uc) = (lo.ln(), mode.ln(), cut.ln());
    let left = gauss_kronrod(&g, ul, um, 1e-14, 1e-11, 500);
    let right = gauss_kronrod(&g, um, uc, 1e-14, 1e-11, 500);
    let tail = half_line(|x| (-lam * x).exp() * asymptotic_infinity(p, x), cut, 1e-10);
    left.value + right.value + tail.value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_k;

    fn p(m: f64, alpha: f64) -> GenStableParams {
        GenStableParams::new(m, alpha).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(laplace_transform(&p(2.7, 1.3), 0.0).unwrap(), 1.0);
        let v = laplace_transform(&p(2.0, 1.0), 1.0).unwrap();
        assert!((v - 2.0 * bessel_k(1.0, 2.0)).abs() < 1e-12);
        assert!((v - 0.279_731_763_9).abs() < 1e-9);
        let v = laplace_transform(&p(1.0, 0.5), 1.0).unwrap();
        assert!((v - (-2f64).exp()).abs() < 1e-14);
        assert!(laplace_transform(&p(2.0, 1.0), -1.0).is_err());
    }

    #[test]
    fn closed_forms_match_numeric_integral() {
        for &(m, alpha) in &[(2.0, 1.0), (2.0, 0.6), (2.0, 1.5), (1.0, 0.4), (3.0, 1.5)] {
            let q = p(m, alpha);
            for &lam in &[0.1, 1.0, 10.0] {
                let closed = log_laplace_closed(&q, lam).unwrap().exp();
                let numeric = laplace_numeric(&q, lam);
                assert!(
                    (closed - numeric).abs() < 1e-8,
                    "{m} {alpha} {lam}: {closed} vs {numeric}"
                );
            }
        }
    }
}
