//! Riemann-Liouville fractional integrals, residuals of `I^alpha f = x^m f`,
//! and the Thorin density of the case `m = 2 alpha`.

mod thorin;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

pub use thorin::{
    steutel_kernel, steutel_residual, stieltjes_check, thorin_density_frechet, ThorinConvention,
    ThorinPoint,
};

use crate::density::{negligible_below, DensityEvaluator};
use crate::error::{Error, Result};
use crate::params::GenStableParams;
use crate::quad::{gauss_jacobi, tanh_sinh, tanh_sinh_with_distance};
use crate::specfun::lgamma_pos;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    GaussJacobi,
    TanhSinh,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::GaussJacobi => "gauss-jacobi",
            Scheme::TanhSinh => "tanh-sinh",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gauss-jacobi" => Ok(Scheme::GaussJacobi),
            "tanh-sinh" => Ok(Scheme::TanhSinh),
            _ => Err(Error::Invalid(format!("unknown quadrature scheme '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    /// Gauss-Jacobi nodes; the check rule uses twice as many.
    pub nodes: usize,
    /// Exponent of `(x - v)` absorbed by the Gauss-Jacobi weight.
    pub jacobi_exponent: f64,
}

const DEFAULT_NODES: usize = 64;
const DOUBLING_TOL: f64 = 1e-9;

impl QuadratureSpec {
    /// Gauss-Jacobi with weight `(x - v)^{alpha - 1}` when `alpha < 1`, else tanh-sinh.
    pub fn for_alpha(alpha: f64) -> Self {
        QuadratureSpec {
            scheme: if alpha < 1.0 {
                Scheme::GaussJacobi
            } else {
                Scheme::TanhSinh
            },
            nodes: DEFAULT_NODES,
            jacobi_exponent: alpha - 1.0,
        }
    }

    fn validate(&self, alpha: f64) -> Result<()> {
        if self.nodes < 4 {
            return Err(Error::Invalid(format!(
                "quadrature needs at least 4 nodes, got {}",
                self.nodes
            )));
        }
        if self.scheme == Scheme::GaussJacobi
            && (self.jacobi_exponent - (alpha - 1.0)).abs() > 1e-14
        {
            return Err(Error::Invalid(format!(
                "jacobi_exponent must be alpha - 1 = {}, got {}",
                alpha - 1.0,
                self.jacobi_exponent
            )));
        }
        Ok(())
    }
}

/// `(1 / Gamma(alpha)) int_0^x (x - v)^{alpha - 1} f(v) dv`.
///
/// Gauss-Jacobi: tanh-sinh on `[0, x/2]` (which tolerates singular behaviour of
/// `f` at zero) plus a Jacobi rule on `[x/2, x]` whose weight carries the kernel;
/// the rule with `2 nodes` must agree to `1e-9`.
pub fn rl_integral<F>(f: F, alpha: f64, x: f64, q: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!(
            "fractional order must be positive, got {alpha}"
        )));
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("rl_integral needs x > 0, got {x}")));
    }
    q.validate(alpha)?;
    let norm = (-lgamma_pos(alpha)).exp();
    let total = match q.scheme {
        Scheme::TanhSinh => {
            let r = tanh_sinh_with_distance(|v, _, dr| dr.powf(alpha - 1.0) * f(v), 0.0, x, 1e-12);
            if !r.converged && r.error > 1e-10 * r.value.abs() {
                return Err(Error::Accuracy {
                    context: "rl_integral tanh-sinh",
                    coarse: r.value - r.error,
                    fine: r.value,
                });
            }
            r.value
        }
        Scheme::GaussJacobi => {
            // shrink the Jacobi panel [x - d, x] until node doubling agrees
            let mut d = 0.5 * x;
            loop {
                let c = x - d;
                let left = tanh_sinh(|v| (x - v).powf(alpha - 1.0) * f(v), 0.0, c, 1e-13);
                let jacobi = |n: usize| -> f64 {
                    let rule = gauss_jacobi(n, alpha - 1.0, 0.0);
                    let half = 0.5 * d;
                    let s: f64 = rule
                        .nodes
                        .iter()
                        .zip(&rule.weights)
                        .map(|(t, w)| w * f(c + half * (1.0 + t)))
                        .sum();
                    half.powf(alpha) * s
                };
                let coarse = left.value + jacobi(q.nodes);
                let fine = left.value + jacobi(2 * q.nodes);
                let scale = fine.abs().max(left.value.abs());
                if (fine - coarse).abs() <= DOUBLING_TOL * scale
                    && left.error <= DOUBLING_TOL * scale
                {
                    // the tanh-sinh estimate is blind to interior kinks; recompute the left part in two pieces
                    let g = |v: f64| (x - v).powf(alpha - 1.0) * f(v);
                    let split = tanh_sinh(&g, 0.0, 0.5 * c, 1e-13).value
                        + tanh_sinh(&g, 0.5 * c, c, 1e-13).value;
                    if (split - left.value).abs() > DOUBLING_TOL * scale {
                        return Err(Error::Accuracy {
                            context: "rl_integral left panel",
                            coarse: fine * norm,
                            fine: (split + fine - left.value) * norm,
                        });
                    }
                    break fine;
                }
                d *= 0.25;
                if d < 1e-4 * x {
                    return Err(Error::Accuracy {
                        context: "rl_integral node doubling",
                        coarse: coarse * norm,
                        fine: fine * norm,
                    });
                }
            }
        }
    };
    Ok(total * norm)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualPoint {
    pub x: f64,
    /// `x^m f(x)`, or `x f(x)` for Steutel's equation.
    pub lhs: f64,
    /// The integral side.
    pub rhs: f64,
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub points: Vec<ResidualPoint>,
    pub max_relative: f64,
}

impl ResidualReport {
    fn from_points(points: Vec<ResidualPoint>) -> Self {
        let max_relative = points.iter().map(|p| p.relative).fold(0.0, f64::max);
        ResidualReport {
            points,
            max_relative,
        }
    }
}

/// Relative residual `|x^m f(x) - I^alpha f(x)| / (x^m f(x))` on `grid`.
pub fn ide_residual(
    p: &GenStableParams,
    grid: &[f64],
    q: &QuadratureSpec,
) -> Result<ResidualReport> {
    if grid.is_empty() {
        return Err(Error::Invalid("residual grid must be nonempty".into()));
    }
    let hi = grid.iter().copied().fold(f64::MIN, f64::max);
    let lo = grid.iter().copied().fold(f64::MAX, f64::min);
    let eval = DensityEvaluator::new(*p)
        .with_range(negligible_below(p), hi)
        .with_tail_reach(lo);
    let points = grid
        .par_iter()
        .map(|&x| -> Result<ResidualPoint> {
            let lhs = x.powf(p.m()) * eval.density(x, None)?.value;
            // node accuracy that keeps the integral within 1e-10 of lhs
            let tol = 1e-10 * lhs * (lgamma_pos(1.0 + p.alpha()) - p.alpha() * x.ln()).exp();
            let rhs = rl_integral(|v| eval.eval_within(v, tol), p.alpha(), x, q)?;
            Ok(ResidualPoint {
                x,
                lhs,
                rhs,
                relative: (lhs - rhs).abs() / lhs,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport::from_points(points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn power_rule(p: f64, alpha: f64, x: f64) -> f64 {
        (lgamma_pos(p + 1.0) - lgamma_pos(p + 1.0 + alpha)).exp() * x.powf(p + alpha)
    }

    #[test]
    fn examples() {
        let one = rl_integral(|_| 1.0, 1.0, 2.0, &QuadratureSpec::for_alpha(1.0)).unwrap();
        assert!((one - 2.0).abs() < 1e-12);
        let v = rl_integral(|v| v, 0.5, 1.0, &QuadratureSpec::for_alpha(0.5)).unwrap();
        assert!((v - 0.752_252_778_063_675).abs() < 1e-12, "{v}");
        assert!((v - 4.0 / (3.0 * PI.sqrt())).abs() < 1e-12);
        let f21 = |v: f64| v.powi(-2) * (-1.0 / v).exp();
        let v = rl_integral(f21, 1.0, 1.0, &QuadratureSpec::for_alpha(1.0)).unwrap();
        assert!((v - (-1f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn euler_power_rule() {
        for &p in &[0.0, 0.5, 1.0, 2.5] {
            for &alpha in &[0.3, 0.5, 1.5] {
                for &x in &[0.5, 1.0, 4.0] {
                    let got = rl_integral(
                        |v: f64| v.powf(p),
                        alpha,
                        x,
                        &QuadratureSpec::for_alpha(alpha),
                    )
                    .unwrap();
                    let want = power_rule(p, alpha, x);
                    assert!(
                        (got / want - 1.0).abs() < 1e-9,
                        "p={p} alpha={alpha} x={x}: {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn semigroup_on_powers() {
        for &(p, a1, a2) in &[(0.5, 0.3, 0.5), (1.0, 0.5, 1.5), (2.5, 1.5, 0.3)] {
            let inner = |v: f64| {
                if v <= 0.0 {
                    0.0
                } else {
                    rl_integral(|w: f64| w.powf(p), a2, v, &QuadratureSpec::for_alpha(a2)).unwrap()
                }
            };
            let x = 1.7;
            let nested = rl_integral(inner, a1, x, &QuadratureSpec::for_alpha(a1)).unwrap();
            let direct = rl_integral(
                |w: f64| w.powf(p),
                a1 + a2,
                x,
                &QuadratureSpec::for_alpha(a1 + a2),
            )
            .unwrap();
            assert!(
                (nested / direct - 1.0).abs() < 1e-8,
                "{p} {a1} {a2}: {nested} vs {direct}"
            );
        }
    }

    #[test]
    fn input_validation_and_kink() {
        let mut q = QuadratureSpec::for_alpha(0.5);
        q.jacobi_exponent = 0.1;
        assert!(matches!(
            rl_integral(|v| v, 0.5, 1.0, &q),
            Err(Error::Invalid(_))
        ));
        let mut q = QuadratureSpec::for_alpha(0.5);
        q.nodes = 2;
        assert!(rl_integral(|v| v, 0.5, 1.0, &q).is_err());
        // a kink is either resolved or reported
        let q = QuadratureSpec {
            nodes: 16,
            ..QuadratureSpec::for_alpha(0.5)
        };
        // int_0^1 w^{-1/2} |0.2 - w| dw = 4/15 + (8/3) 0.2^{3/2}
        let want = (4.0 / 15.0 + 8.0 / 3.0 * 0.2f64.powf(1.5)) / PI.sqrt();
        match rl_integral(|v: f64| (v - 0.8).abs(), 0.5, 1.0, &q) {
            Ok(kink) => assert!((kink - want).abs() < 1e-9 * want, "{kink} vs {want}"),
            Err(e) => assert!(matches!(e, Error::Accuracy { .. })),
        }
        // unbounded oscillation at the endpoint defeats node doubling at every panel width
        assert!(matches!(
            rl_integral(|v: f64| (1.0 / (1.0 - v + 1e-12)).sin(), 0.5, 1.0, &q),
            Err(Error::Accuracy { .. })
        ));
    }

    #[test]
    fn ide_residual_examples() {
        let grid = [0.5, 1.0, 2.0, 5.0];
        let cases = [(2.0, 1.0, 1e-8), (4.0, 2.0, 1e-6), (1.0, 0.5, 1e-5)];
        for &(m, alpha, tol) in &cases {
            let p = GenStableParams::new(m, alpha).unwrap();
            let r = ide_residual(&p, &grid, &QuadratureSpec::for_alpha(alpha)).unwrap();
            assert_eq!(r.points.len(), grid.len());
            assert!(r.max_relative < tol, "{m} {alpha}: {}", r.max_relative);
        }
    }
}
