//! The density `f_{m, alpha}` of `X_{m, alpha}` and related quantities.

mod asymptotic;
mod closed;
mod fox;
mod inversion;
pub(crate) mod kanter;
mod laplace;
mod series;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

pub use asymptotic::{
    asymptotic_infinity, asymptotic_zero, deep_left_point, log_asymptotic_zero, mode_estimate,
    negligible_below,
};
pub use fox::{fox_parameters, FoxParams};
pub use inversion::{default_contour, density_mellin_inversion, MellinInverter};
pub use laplace::laplace_transform;
pub use series::{applicable_families, density_series, SeriesFamily};

use crate::error::{Error, Result};
use crate::params::GenStableParams;

/// Provenance of a density value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Closed,
    SeriesIntegerAlpha,
    SeriesLatticeM,
    SeriesIntegerM,
    MellinInversion,
    Quadrature,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Closed,
        Method::SeriesIntegerAlpha,
        Method::SeriesLatticeM,
        Method::SeriesIntegerM,
        Method::MellinInversion,
        Method::Quadrature,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::SeriesIntegerAlpha => "series-integer-alpha",
            Method::SeriesLatticeM => "series-lattice-m",
            Method::SeriesIntegerM => "series-integer-m",
            Method::MellinInversion => "mellin-inversion",
            Method::Quadrature => "quadrature",
        }
    }

    fn series_family(self) -> Option<SeriesFamily> {
        match self {
            Method::SeriesIntegerAlpha => Some(SeriesFamily::IntegerAlpha),
            Method::SeriesLatticeM => Some(SeriesFamily::LatticeM),
            Method::SeriesIntegerM => Some(SeriesFamily::IntegerM),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown density method '{s}'")))
    }
}

/// A density value with its method and a bound on the absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityEvaluation {
    pub x: f64,
    pub value: f64,
    pub method: Method,
    pub err: f64,
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "density argument must be positive and finite, got {x}"
        )))
    }
}

/// `f_{m, alpha}(x)`, by the requested method or automatically.
pub fn density(p: &GenStableParams, x: f64, method: Option<Method>) -> Result<DensityEvaluation> {
    DensityEvaluator::new(*p)
        .with_range(x, x)
        .density(x, method)
}

/// `g_{m, alpha}(x) = x^{-2} f_{m, alpha}(1 / x)`, the density of `Y = 1 / X`.
pub fn density_reflected(p: &GenStableParams, x: f64) -> Result<DensityEvaluation> {
    check_x(x)?;
    let inner = density(p, 1.0 / x, None)?;
    let scale = 1.0 / (x * x);
    Ok(DensityEvaluation {
        x,
        value: inner.value * scale,
        method: inner.method,
        err: inner.err * scale,
    })
}

/// Reusable evaluator that shares one Mellin-inversion table across points.
#[derive(Debug)]
pub struct DensityEvaluator {
    p: GenStableParams,
    lo: f64,
    hi: f64,
    floor: f64,
    inverter: OnceLock<MellinInverter>,
}

impl DensityEvaluator {
    pub fn new(p: GenStableParams) -> Self {
        DensityEvaluator {
            p,
            lo: 1e-3,
            hi: 1e4,
            floor: negligible_below(&p),
            inverter: OnceLock::new(),
        }
    }

    /// Lets [`eval_abs`](Self::eval_abs) resolve values relative to `f(x)`: only
    /// points where the density is `e^{-40}` below its level at `x` fall back to
    /// the leading asymptotics.
    pub fn with_tail_reach(mut self, x: f64) -> Self {
        self.floor = asymptotic::point_below(&self.p, x, 40.0);
        self
    }

    /// Range of `x` the shared inversion table is built for.
    pub fn with_range(mut self, lo: f64, hi: f64) -> Self {
        self.lo = lo.min(hi);
        self.hi = hi.max(lo);
        self.inverter = OnceLock::new();
        self
    }

    pub fn params(&self) -> &GenStableParams {
        &self.p
    }

    pub fn inverter(&self) -> &MellinInverter {
        self.inverter.get_or_init(|| {
            MellinInverter::for_range(&self.p, default_contour(&self.p), self.lo, self.hi)
        })
    }

    fn covers(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn density(&self, x: f64, method: Option<Method>) -> Result<DensityEvaluation> {
        check_x(x)?;
        match method {
            Some(m) => self.by_method(x, m),
            None => self.auto(x),
        }
    }

    fn by_method(&self, x: f64, method: Method) -> Result<DensityEvaluation> {
        let p = &self.p;
        match method {
            Method::Closed => closed::closed_form(p, x).ok_or_else(|| {
                Error::Precondition(format!(
                    "no closed form for m = {}, alpha = {} (needs m = 2 alpha, alpha in {{1, 2}} or m = 3a)",
                    p.m(),
                    p.alpha()
                ))
            }),
            Method::MellinInversion => {
                if self.covers(x) {
                    Ok(self.inverter().eval(x))
                } else {
                    Ok(MellinInverter::for_range(p, default_contour(p), x, x).eval(x))
                }
            }
            Method::Quadrature => kanter::density_kanter(p, x),
            m => density_series(p, x, m.series_family().expect("series method")),
        }
    }

    fn auto(&self, x: f64) -> Result<DensityEvaluation> {
        if let Some(v) = closed::closed_form(&self.p, x) {
            return Ok(v);
        }
        for family in applicable_families(&self.p) {
            if let Ok(v) = density_series(&self.p, x, family) {
                if v.err <= 1e-9 * v.value.max(1e-300) || v.err <= 1e-12 {
                    return Ok(v);
                }
            }
        }
        if let Ok(v) = kanter::density_kanter(&self.p, x) {
            return Ok(v);
        }
        self.by_method(x, Method::MellinInversion)
    }

    /// Fast evaluation for use inside quadratures: absolute accuracy only.
    pub fn eval_abs(&self, x: f64) -> f64 {
        self.eval_within(x, 1e-13)
    }

    /// Value with absolute error about `tol`, as cheaply as possible.
    ///
    /// Uses a closed form or convergent series when one is available, else the
    /// shared inversion table, moving to the saddle-point contour of `x` only
    /// where the table bound exceeds `tol`. Below the floor set by
    /// [`with_tail_reach`](Self::with_tail_reach) the leading asymptotics are used.
    pub fn eval_within(&self, x: f64, tol: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        if let Some(v) = closed::closed_form(&self.p, x) {
            return v.value;
        }
        if x < self.floor {
            return asymptotic_zero(&self.p, x);
        }
        for family in applicable_families(&self.p) {
            if let Ok(v) = density_series(&self.p, x, family) {
                if v.err <= tol.max(1e-13 * v.value) {
                    return v.value;
                }
            }
        }
        if x < negligible_below(&self.p) {
            let z = asymptotic_zero(&self.p, x);
            if z <= 1e-3 * tol {
                return z;
            }
            return self.inverter().eval_within(x, tol);
        }
        if self.covers(x) {
            self.inverter().eval_within(x, tol)
        } else {
            MellinInverter::for_range(&self.p, default_contour(&self.p), x, x).eval_within(x, tol)
        }
    }
}
