//! Mellin transform `M(s) = E[X^{-s}]` of `G(m, alpha)` and derived quantities.
//!
//! `M` is the solution of `M(s + a) / M(s) = Gamma(m + s) / Gamma(a + s)` with
//! `M(0) = 1` given by
//!
//! `M(s) = a^{alpha s / a} G(m + s; a) G(a; a) / (G(a + s; a) G(m; a))`
//!
//! in terms of the double Gamma function, and equivalently by an infinite
//! product of Gamma ratios. Values are carried as logarithms.

mod diagnostics;
mod levy;
mod product;

use std::cell::RefCell;
use std::fmt;

pub use diagnostics::{labr_selfdecomp_criterion, moment_growth_sequence};
pub use levy::levy_exponent;
pub use product::log_mellin_complex;

use crate::error::{Error, Result};
use crate::params::GenStableParams;
use crate::specfun::{lgamma_pos, DoubleGamma};

/// How a Mellin value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    Lattice,
    Product,
    DoubleGamma,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Lattice => "lattice",
            Route::Product => "product",
            Route::DoubleGamma => "double-gamma",
        })
    }
}

/// `M(s)` stored as its logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinValue {
    pub s: f64,
    pub log_value: f64,
    pub route: Route,
    /// Bound on the relative error of `exp(log_value)`.
    pub err: f64,
}

impl MellinValue {
    /// Largest `ln` that still exponentiates to a finite `f64`.
    pub const LOG_MAX: f64 = 709.782_712_893_384;

    /// `M(s)`, saturated at `f64::MAX` when [`overflows`](Self::overflows) is set.
    pub fn value(&self) -> f64 {
        if self.overflows() {
            f64::MAX
        } else {
            self.log_value.exp()
        }
    }

    pub fn overflows(&self) -> bool {
        self.log_value > Self::LOG_MAX
    }
}

/// Window in which the double Gamma evaluation is used.
const DG_MIN: f64 = 0.05;
const DG_MAX: f64 = 50.0;

thread_local! {
    static DOUBLE_GAMMA: RefCell<Option<DoubleGamma>> = const { RefCell::new(None) };
}

fn with_double_gamma<R>(tau: f64, f: impl FnOnce(&DoubleGamma) -> R) -> R {
    DOUBLE_GAMMA.with(|cell| {
        let mut slot = cell.borrow_mut();
        if slot.as_ref().map(|d| d.tau()) != Some(tau) {
            *slot = Some(DoubleGamma::new(tau).expect("tau validated by caller"));
        }
        f(slot.as_ref().expect("just filled"))
    })
}

fn double_gamma_admits(p: &GenStableParams, s: f64) -> bool {
    let a = p.a();
    let window = DG_MIN..=DG_MAX;
    window.contains(&a)
        && window.contains(&(a + s))
        && window.contains(&(p.m() + s))
        && p.m() <= DG_MAX
}

/// `ln M(s)` through the double Gamma function, with a relative error estimate.
pub(crate) fn log_mellin_double_gamma(p: &GenStableParams, s: f64) -> (f64, f64) {
    let (a, m, alpha) = (p.a(), p.m(), p.alpha());
    with_double_gamma(a, |dg| {
        let parts = [
            alpha * s / a * a.ln(),
            dg.log_g(m + s),
            dg.log_g(a),
            -dg.log_g(a + s),
            -dg.log_g(m),
        ];
        let value: f64 = parts.iter().sum();
        let scale: f64 = parts.iter().map(|x| x.abs()).sum();
        (value, 1e-10 + 1e-13 * scale)
    })
}

fn check_s(p: &GenStableParams, s: f64) -> Result<()> {
    if !s.is_finite() {
        return Err(Error::Domain(format!(
            "Mellin argument must be finite, got {s}"
        )));
    }
    if s <= -p.a() {
        return Err(Error::Domain(format!(
            "beyond first pole: M(s) requires s > -a = {}, got s = {s}",
            -p.a()
        )));
    }
    Ok(())
}

/// `M(s)` for `s > -a`.
pub fn mellin(p: &GenStableParams, s: f64) -> Result<MellinValue> {
    check_s(p, s)?;
    if s == 0.0 {
        return Ok(MellinValue {
            s,
            log_value: 0.0,
            route: Route::Lattice,
            err: 0.0,
        });
    }
    if double_gamma_admits(p, s) {
        let (log_value, err) = log_mellin_double_gamma(p, s);
        return Ok(MellinValue {
            s,
            log_value,
            route: Route::DoubleGamma,
            err,
        });
    }
    Ok(mellin_product(p, s))
}

/// `M(s)` forced through the infinite product.
pub fn mellin_product(p: &GenStableParams, s: f64) -> MellinValue {
    let (log_value, abs_err) = product::log_mellin_product(p, s);
    MellinValue {
        s,
        log_value,
        route: Route::Product,
        err: abs_err,
    }
}

/// `M(k a)` by `k` steps of the functional equation from `M(0) = 1`.
pub fn moment_lattice(p: &GenStableParams, k: u32) -> MellinValue {
    let (m, a) = (p.m(), p.a());
    let mut log_value = 0.0;
    for j in 0..k {
        let s = j as f64 * a;
        log_value += lgamma_pos(m + s) - lgamma_pos(a + s);
    }
    let err = 1e-15 * (k as f64 + 1.0) * (1.0 + log_value.abs());
    MellinValue {
        s: k as f64 * a,
        log_value,
        route: Route::Lattice,
        err,
    }
}

/// `ln c_{m, alpha}`, the constant in the density asymptotics at zero.
pub fn log_asymptotic_constant(p: &GenStableParams) -> Result<f64> {
    let (m, alpha, a) = (p.m(), p.alpha(), p.a());
    let log_g = crate::specfun::log_double_gamma(crate::specfun::DoubleGammaArgs { z: m, tau: a })?;
    Ok(
        0.5 * (m - 2.0) * (2.0 * std::f64::consts::PI).ln()
            + alpha * (1.0 - m) / (2.0 * a) * a.ln()
            - 0.5 * alpha.ln()
            - log_g,
    )
}

/// `c_{m, alpha} = (2 pi)^{(m-2)/2} a^{alpha (1-m) / (2a)} / (sqrt(alpha) G(m; a))`.
pub fn asymptotic_constant(p: &GenStableParams) -> Result<f64> {
    log_asymptotic_constant(p).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: f64, alpha: f64) -> GenStableParams {
        GenStableParams::new(m, alpha).unwrap()
    }

    #[test]
    fn examples() {
        let q = p(2.0, 1.0);
        assert_eq!(mellin(&q, 0.0).unwrap().value(), 1.0);
        assert!((mellin(&q, 1.0).unwrap().value() - 1.0).abs() < 1e-9);
        assert!((mellin(&q, 2.0).unwrap().value() - 2.0).abs() < 1e-9);
        assert!(matches!(mellin(&q, -1.0), Err(Error::Domain(_))));
        assert_eq!(moment_lattice(&q, 0).value(), 1.0);
        assert!((moment_lattice(&q, 1).value() - 1.0).abs() < 1e-15);
        assert!((moment_lattice(&p(3.0, 1.0), 2).value() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn route_selection() {
        assert_eq!(mellin(&p(2.0, 1.0), 0.5).unwrap().route, Route::DoubleGamma);
        assert_eq!(mellin(&p(2.0, 1.0), 60.0).unwrap().route, Route::Product);
        assert_eq!(mellin(&p(1.0, 0.99), 0.5).unwrap().route, Route::Product);
    }

    #[test]
    fn inverse_gamma_case() {
        // m = 2 alpha: X is an inverse Gamma(alpha) variable, M(s) = Gamma(alpha + s) / Gamma(alpha)
        for &alpha in &[0.3, 1.0, 2.5] {
            let q = p(2.0 * alpha, alpha);
            for &s in &[-0.2 * alpha, 0.7, 3.0, 80.0] {
                let expect = lgamma_pos(alpha + s) - lgamma_pos(alpha);
                let got = mellin(&q, s).unwrap();
                assert!(
                    (got.log_value - expect).abs() < 1e-9 * (1.0 + expect.abs()),
                    "{alpha} {s}"
                );
                let prod = mellin_product(&q, s);
                assert!(
                    (prod.log_value - expect).abs() < 1e-9 * (1.0 + expect.abs()),
                    "{alpha} {s}"
                );
            }
        }
    }

    #[test]
    fn asymptotic_constant_examples() {
        assert!((asymptotic_constant(&p(2.0, 1.0)).unwrap() - 1.0).abs() < 1e-9);
        assert!((asymptotic_constant(&p(4.0, 2.0)).unwrap() - 1.0).abs() < 1e-9);
        assert!((asymptotic_constant(&p(3.0, 1.5)).unwrap() - 1.128_379_2).abs() < 1e-7);
        // m = 1: c = 1 / sqrt(2 pi alpha)
        for &alpha in &[0.2, 0.5, 0.9] {
            let c = asymptotic_constant(&p(1.0, alpha)).unwrap();
            assert!((c * (2.0 * std::f64::consts::PI * alpha).sqrt() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn complex_product_matches_real() {
        let q = p(2.7, 0.9);
        for &s in &[-1.5, 0.3, 4.0, 25.0] {
            let c = log_mellin_complex(&q, num_complex::Complex64::new(s, 0.0));
            let r = mellin(&q, s).unwrap().log_value;
            assert!((c.re - r).abs() < 1e-9 * (1.0 + r.abs()), "s = {s}");
            assert!(c.im.abs() < 1e-9);
        }
    }
}
