use crate::error::{Error, Result};

/// The pair `(m, alpha)` indexing a generalized stable law, with `m > alpha > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenStableParams {
    m: f64,
    alpha: f64,
}

impl GenStableParams {
    pub fn new(m: f64, alpha: f64) -> Result<Self> {
        if !m.is_finite() || !alpha.is_finite() {
            return Err(Error::Invalid(format!(
                "non-finite parameters m = {m}, alpha = {alpha}"
            )));
        }
        if alpha <= 0.0 {
            return Err(Error::Invalid(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if m <= alpha {
            return Err(Error::NoDensity { m, alpha });
        }
        Ok(Self { m, alpha })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `a = m - alpha`, the location of the first Mellin pole at `s = -a`.
    pub fn a(&self) -> f64 {
        self.m - self.alpha
    }

    /// `b = a / alpha`.
    pub fn b(&self) -> f64 {
        self.a() / self.alpha
    }

    /// `beta = alpha / a`.
    pub fn beta(&self) -> f64 {
        self.alpha / self.a()
    }
}

/// Relative tolerance used when deciding whether a parameter sits on a lattice.
pub(crate) const LATTICE_TOL: f64 = 1e-12;

pub(crate) fn near(x: f64, y: f64) -> bool {
    (x - y).abs() <= LATTICE_TOL * x.abs().max(y.abs()).max(1.0)
}

/// Returns `Some(n)` when `x` is (numerically) the positive integer `n`.
pub(crate) fn as_positive_integer(x: f64) -> Option<u32> {
    let r = x.round();
    if r >= 1.0 && r < 1e6 && near(x, r) {
        Some(r as u32)
    } else {
        None
    }
}
