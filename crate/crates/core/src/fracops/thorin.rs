//! Thorin density of `X_{2 alpha, alpha} = Gamma_alpha^{-1}`.
//!
//! `phi(u) = C / (u (J_alpha(2 sqrt u)^2 + Y_alpha(2 sqrt u)^2))`, with
//! `int phi(u) / (u + lam) du = K_{alpha-1}(2 sqrt lam) / (sqrt lam K_alpha(2 sqrt lam))`,
//! the logarithmic derivative of the Laplace transform. That identity holds
//! for `C = 1 / pi^2`; the constant `1 / (4 pi^2)` is kept as an alternative
//! convention for comparison.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::{ResidualPoint, ResidualReport};
use crate::error::{Error, Result};
use crate::quad::{half_line, tanh_sinh, tanh_sinh_with_distance};
use crate::specfun::{bessel_jy_modulus_sq, lgamma_pos, log_bessel_k};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThorinConvention {
    /// Constant `1 / (4 pi^2)`.
    FourPiSquared,
    /// Constant `1 / pi^2`.
    PiSquared,
}

impl ThorinConvention {
    pub fn constant(self) -> f64 {
        match self {
            ThorinConvention::FourPiSquared => 0.25 / (PI * PI),
            ThorinConvention::PiSquared => 1.0 / (PI * PI),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ThorinConvention::FourPiSquared => "4pi2",
            ThorinConvention::PiSquared => "pi2",
        }
    }
}

impl std::str::FromStr for ThorinConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "4pi2" => Ok(ThorinConvention::FourPiSquared),
            "pi2" => Ok(ThorinConvention::PiSquared),
            _ => Err(Error::Invalid(format!("unknown Thorin convention '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThorinPoint {
    pub u: f64,
    pub value: f64,
    pub constant_convention: ThorinConvention,
}

fn phi(alpha: f64, u: f64, c: f64) -> f64 {
    let v = c / (u * bessel_jy_modulus_sq(alpha, 2.0 * u.sqrt()));
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 50.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "Thorin density needs 0 < alpha <= 50, got {alpha}"
        )))
    }
}

/// `phi_{2 alpha, alpha}(u)` under `convention`.
pub fn thorin_density_frechet(
    alpha: f64,
    u: f64,
    convention: ThorinConvention,
) -> Result<ThorinPoint> {
    check_alpha(alpha)?;
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::Domain(format!(
            "Thorin density needs u > 0, got {u}"
        )));
    }
    Ok(ThorinPoint {
        u,
        value: phi(alpha, u, convention.constant()),
        constant_convention: convention,
    })
}

/// `int_0^inf phi(u) g(u) du`, split at `u = 1`, with `u = t^2` on the right.
fn integrate_against<G>(alpha: f64, c: f64, g: G, tol: f64) -> (f64, bool)
where
    G: Fn(f64) -> f64,
{
    let left = tanh_sinh(|u| phi(alpha, u, c) * g(u), 0.0, 1.0, tol);
    let right = half_line(
        |t| {
            let u = t * t;
            let gu = g(u);
            if gu == 0.0 {
                0.0
            } else {
                2.0 * t * phi(alpha, u, c) * gu
            }
        },
        1.0,
        tol,
    );
    (left.value + right.value, left.converged && right.converged)
}

/// `(K_{alpha-1}(2 sqrt lam) / (sqrt lam K_alpha(2 sqrt lam)), int phi(u) / (u + lam) du)`.
pub fn stieltjes_check(alpha: f64, lam: f64, convention: ThorinConvention) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    if !(lam > 0.0 && lam.is_finite()) {
        return Err(Error::Domain(format!(
            "Stieltjes check needs lam > 0, got {lam}"
        )));
    }
    let z = 2.0 * lam.sqrt();
    let ratio = (log_bessel_k((alpha - 1.0).abs(), z) - log_bessel_k(alpha, z)).exp() / lam.sqrt();
    let (integral, ok) =
        integrate_against(alpha, convention.constant(), |u| 1.0 / (u + lam), 1e-11);
    if !ok {
        return Err(Error::Accuracy {
            context: "Stieltjes integral",
            coarse: f64::NAN,
            fine: integral,
        });
    }
    Ok((ratio, integral))
}

/// `k(s) = int_0^inf e^{-s u} phi(u) du`, the kernel of Steutel's equation.
pub fn steutel_kernel(alpha: f64, s: f64, convention: ThorinConvention) -> f64 {
    integrate_against(alpha, convention.constant(), |u| (-s * u).exp(), 1e-9).0
}

/// Relative residual of `x f(x) = int_0^x k(x - y) f(y) dy` for `f = f_{2 alpha, alpha}`.
pub fn steutel_residual(
    alpha: f64,
    grid: &[f64],
    convention: ThorinConvention,
) -> Result<ResidualReport> {
    check_alpha(alpha)?;
    if grid.is_empty() {
        return Err(Error::Invalid("residual grid must be nonempty".into()));
    }
    if let Some(&x) = grid.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::Domain(format!(
            "Steutel residual needs x > 0, got {x}"
        )));
    }
    let lg = lgamma_pos(alpha);
    let f = move |y: f64| {
        if y > 0.0 {
            (-(alpha + 1.0) * y.ln() - 1.0 / y - lg).exp()
        } else {
            0.0
        }
    };
    let points = grid
        .par_iter()
        .map(|&x| {
            let lhs = x * f(x);
            let r = tanh_sinh_with_distance(
                |y, _, dr| {
                    let fy = f(y);
                    if fy == 0.0 {
                        0.0
                    } else {
                        steutel_kernel(alpha, dr, convention) * fy
                    }
                },
                0.0,
                x,
                1e-7,
            );
            ResidualPoint {
                x,
                lhs,
                rhs: r.value,
                relative: (lhs - r.value).abs() / lhs,
            }
        })
        .collect();
    Ok(ResidualReport::from_points(points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_k;

    #[test]
    fn half_order_values() {
        let p = thorin_density_frechet(0.5, 1.0, ThorinConvention::FourPiSquared).unwrap();
        assert!((p.value - 1.0 / (4.0 * PI)).abs() < 1e-13);
        let p = thorin_density_frechet(0.5, 4.0, ThorinConvention::FourPiSquared).unwrap();
        assert!((p.value - 1.0 / (8.0 * PI)).abs() < 1e-13);
        for &u in &[0.01, 1.0, 30.0] {
            let d = thorin_density_frechet(0.5, u, ThorinConvention::PiSquared).unwrap();
            assert!((d.value - 1.0 / (PI * u.sqrt())).abs() < 1e-12 * d.value);
        }
        assert!(thorin_density_frechet(0.5, 0.0, ThorinConvention::PiSquared).is_err());
    }

    #[test]
    fn stieltjes_ratio_examples() {
        let (r, _) = stieltjes_check(0.5, 1.0, ThorinConvention::PiSquared).unwrap();
        assert!((r - 1.0).abs() < 1e-13);
        let (r, _) = stieltjes_check(0.5, 4.0, ThorinConvention::PiSquared).unwrap();
        assert!((r - 0.5).abs() < 1e-13);
        let (r, _) = stieltjes_check(1.0, 1.0, ThorinConvention::PiSquared).unwrap();
        assert!((r - bessel_k(0.0, 2.0) / bessel_k(1.0, 2.0)).abs() < 1e-13);
        assert!((r - 0.814_307_1).abs() < 1e-6, "{r}");
    }

    #[test]
    fn identity_selects_one_convention() {
        for &alpha in &[0.5, 1.0, 2.0] {
            for &lam in &[0.1, 1.0, 10.0, 100.0] {
                let (r, d) = stieltjes_check(alpha, lam, ThorinConvention::PiSquared).unwrap();
                let (_, p) = stieltjes_check(alpha, lam, ThorinConvention::FourPiSquared).unwrap();
                assert!(
                    (d / r - 1.0).abs() < 1e-6,
                    "alpha={alpha} lam={lam}: {d} vs {r}"
                );
                assert!((p / r - 0.25).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn kernel_completely_monotone_and_positive() {
        for &alpha in &[0.5, 1.0, 2.0] {
            for &u in &[0.05, 0.7, 5.0, 80.0] {
                assert!(
                    thorin_density_frechet(alpha, u, ThorinConvention::PiSquared)
                        .unwrap()
                        .value
                        > 0.0
                );
            }
            let h = 0.05;
            for &s in &[0.2, 1.0, 3.0] {
                let k: Vec<f64> = (0..5)
                    .map(|i| steutel_kernel(alpha, s + i as f64 * h, ThorinConvention::PiSquared))
                    .collect();
                // (-1)^n Delta^n k >= 0
                let mut diffs = k.clone();
                for n in 1..=3 {
                    diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
                    let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
                    assert!(
                        diffs.iter().all(|d| sign * d > 0.0),
                        "alpha={alpha} s={s} n={n}"
                    );
                }
            }
        }
        // half order: k(s) = 1 / sqrt(pi s)
        let k = steutel_kernel(0.5, 2.0, ThorinConvention::PiSquared);
        assert!((k - 1.0 / (PI * 2.0).sqrt()).abs() < 1e-8);
    }

    #[test]
    fn steutel_residuals() {
        let r = steutel_residual(1.0, &[1.0, 2.0], ThorinConvention::PiSquared).unwrap();
        assert!(r.max_relative < 1e-3, "{r:?}");
        let r = steutel_residual(0.5, &[1.0], ThorinConvention::PiSquared).unwrap();
        assert!(r.max_relative < 1e-3, "{r:?}");
        let wrong = steutel_residual(1.0, &[1.0], ThorinConvention::FourPiSquared).unwrap();
        assert!(wrong.max_relative > 0.5);
    }
}
