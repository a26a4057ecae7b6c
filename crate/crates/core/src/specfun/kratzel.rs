//! Kratzel function `Z(rho, nu, lam) = int_0^inf x^{nu-1} exp(-x^rho - lam / x) dx`.

use crate::error::{Error, Result};
use crate::quad::half_line;

/// Evaluates the integral after `x = exp(y)`, where the log-integrand
/// `g(y) = nu y - exp(rho y) - lam exp(-y)` is concave. The two halves on either
/// side of the maximum are integrated separately on half-lines.
pub fn kratzel(rho: f64, nu: f64, lam: f64) -> Result<f64> {
    if !(rho.is_finite() && nu.is_finite() && lam.is_finite()) || lam < 0.0 {
        return Err(Error::Domain(format!(
            "kratzel needs finite parameters and lam >= 0 (rho = {rho}, nu = {nu}, lam = {lam})"
        )));
    }
    let right_ok = rho > 0.0 || nu < 0.0;
    let left_ok = lam > 0.0 || rho < 0.0 || nu > 0.0;
    if !(right_ok && left_ok) {
        return Err(Error::Domain(format!(
            "kratzel integral diverges for rho = {rho}, nu = {nu}, lam = {lam}"
        )));
    }
    let g = |y: f64| nu * y - (rho * y).exp() - lam * (-y).exp();
    let dg = |y: f64| nu - rho * (rho * y).exp() + lam * (-y).exp();
    let d2g = |y: f64| -rho * rho * (rho * y).exp() - lam * (-y).exp();

    // bracket the root of g', which is decreasing
    let mut lo = -1.0;
    let mut hi = 1.0;
    while dg(lo) < 0.0 {
        lo *= 2.0;
    }
    while dg(hi) > 0.0 {
        hi *= 2.0;
    }
    let mut y = 0.5 * (lo + hi);
    for _ in 0..200 {
        let d = dg(y);
        if d > 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let step = d / d2g(y);
        let newton = y - step;
        y = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if step.abs() < 1e-15 * (1.0 + y.abs()) || hi - lo < 1e-15 * (1.0 + y.abs()) {
            break;
        }
    }
    let peak = g(y);
    let tol = 1e-12;
    let right = half_line(|u| (g(y + u) - peak).exp(), 0.0, tol);
    let left = half_line(|u| (g(y - u) - peak).exp(), 0.0, tol);
    let total = right.value + left.value;
    if !(right.converged && left.converged) || (right.error + left.error) > 1e-9 * total {
        return Err(Error::Accuracy {
            context: "kratzel quadrature",
            coarse: total - right.error - left.error,
            fine: total,
        });
    }
    Ok(peak.exp() * total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{bessel_k, lgamma_pos};

    #[test]
    fn gamma_cases() {
        assert!((kratzel(1.0, 2.0, 0.0).unwrap() - 1.0).abs() < 1e-10);
        assert!((kratzel(2.0, 1.0, 0.0).unwrap() - 0.886_226_925_5).abs() < 1e-10);
        // lam = 0: Gamma(nu / rho) / rho
        for &(rho, nu) in &[(0.5, 0.3), (3.0, 7.0), (1.7, 0.05)] {
            let expect = (lgamma_pos(nu / rho)).exp() / rho;
            let got = kratzel(rho, nu, 0.0).unwrap();
            assert!(
                ((got - expect) / expect).abs() < 1e-9,
                "rho = {rho}, nu = {nu}"
            );
        }
    }

    #[test]
    fn bessel_identity() {
        // Z(1, nu, lam) = 2 lam^{nu/2} K_nu(2 sqrt lam)
        let got = kratzel(1.0, 1.0, 1.0).unwrap();
        assert!((got - 2.0 * bessel_k(1.0, 2.0)).abs() < 1e-10);
        assert!((got - 0.279_731_8).abs() < 1e-7);
        for &(nu, lam) in &[(0.3f64, 0.01f64), (-2.5, 4.0), (6.0, 30.0)] {
            let expect = 2.0 * lam.powf(0.5 * nu) * bessel_k(nu.abs(), 2.0 * lam.sqrt());
            let got = kratzel(1.0, nu, lam).unwrap();
            assert!(
                ((got - expect) / expect).abs() < 1e-9,
                "nu = {nu}, lam = {lam}"
            );
        }
    }

    #[test]
    fn negative_rho_reflects() {
        // x -> 1/x maps Z(rho, nu, 0) with rho < 0 to a gamma integral
        let got = kratzel(-2.0, -1.0, 0.0).unwrap();
        let expect = lgamma_pos(0.5).exp() / 2.0;
        assert!(((got - expect) / expect).abs() < 1e-9);
    }

    #[test]
    fn divergent_parameters_rejected() {
        assert!(kratzel(1.0, -1.0, 0.0).is_err());
        assert!(kratzel(-1.0, 1.0, 2.0).is_err());
        assert!(kratzel(1.0, 1.0, -1.0).is_err());
    }
}
