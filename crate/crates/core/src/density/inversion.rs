//! Numerical inversion of the Mellin transform along a vertical line.
//!
//! With `z = c + it`,
//!
//! `f(x) = (1/pi) int_0^inf Re[M(1 - z) x^{-z}] dt`.
//!
//! The trapezoidal rule with step `h` equals the aliased sum
//! `sum_j f(x e^{jP}) e^{jPc}` with period `P = 2 pi / h`; the period is chosen
//! from the decay of `f` at both ends so the aliases fall below `e^{-30}`, and
//! then doubled so that the comparison with step `2h` is itself accurate.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use super::asymptotic::{asymptotic_zero, negligible_below};
use super::{DensityEvaluation, Method};
use crate::error::{Error, Result};
use crate::mellin::{log_mellin_complex, mellin};
use crate::params::GenStableParams;

/// Drop table entries once `|M|` has fallen by this many e-folds.
const DECAY_CUTOFF: f64 = 40.0;
/// Alias suppression, in e-folds.
const ALIAS_EXPONENT: f64 = 30.0;
const CHUNK: usize = 64;
const MAX_NODES: usize = 1 << 20;
/// Switch to a per-point contour when the trapezoid sum cancels by more than this.
const MAX_CANCELLATION: f64 = 1e4;
/// ... or when its error bound exceeds this fraction of the value.
const RELATIVE_TARGET: f64 = 1e-9;

/// Default contour `c = min(1/2, (1 + a)/2)`.
pub fn default_contour(p: &GenStableParams) -> f64 {
    0.5f64.min(0.5 * (1.0 + p.a()))
}

/// Samples `ln M(1 - c - i t_k)` at `t_k = k h`.
#[derive(Debug, Clone)]
struct Table {
    c: f64,
    h: f64,
    log_m: Vec<Complex64>,
    /// Bound on the truncated part of the integral divided by `x^{-c}`.
    tail: f64,
}

impl Table {
    fn build(p: &GenStableParams, c: f64, h: f64, t_stop: Option<f64>) -> Table {
        Table::build_with(p, c, h, t_stop, true)
    }

    fn build_with(
        p: &GenStableParams,
        c: f64,
        h: f64,
        t_stop: Option<f64>,
        parallel: bool,
    ) -> Table {
        let s0 = 1.0 - c;
        let node = |k: usize| log_mellin_complex(p, Complex64::new(s0, -(k as f64) * h));
        let mut log_m: Vec<Complex64> = Vec::new();
        let mut done = false;
        while !done && log_m.len() < MAX_NODES {
            let start = log_m.len();
            let chunk: Vec<Complex64> = if parallel {
                (start..start + CHUNK).into_par_iter().map(node).collect()
            } else {
                (start..start + CHUNK).map(node).collect()
            };
            let floor = log_m.first().unwrap_or(&chunk[0]).re - DECAY_CUTOFF;
            for (i, v) in chunk.into_iter().enumerate() {
                log_m.push(v);
                let t = (start + i) as f64 * h;
                if v.re < floor || t_stop.is_some_and(|ts| t >= ts) {
                    done = true;
                    break;
                }
            }
        }
        let n = log_m.len();
        let last = log_m[n - 1].re;
        let rate = if n >= 2 {
            (log_m[n - 2].re - last) / h
        } else {
            0.0
        };
        // geometric tail when |M| still decays, else the last value over one more span
        let tail = if rate > 1e-3 {
            last.exp() / (PI * rate)
        } else {
            last.exp() * (n as f64 * h) / PI
        };
        Table { c, h, log_m, tail }
    }

    fn sum(&self, x: f64) -> Sum {
        let lx = x.ln();
        let mut fine = 0.0;
        let mut coarse = 0.0;
        let mut abs = 0.0;
        for (k, v) in self.log_m.iter().enumerate() {
            let t = k as f64 * self.h;
            let mag = (v.re - self.c * lx).exp();
            let mut term = mag * (v.im - t * lx).cos();
            let mut term_abs = mag;
            if k == 0 {
                term *= 0.5;
                term_abs *= 0.5;
            }
            fine += term;
            abs += term_abs;
            if k % 2 == 0 {
                coarse += term;
            }
        }
        let fine = fine * self.h / PI;
        let coarse = coarse * 2.0 * self.h / PI;
        let abs = abs * self.h / PI;
        let max_log = self.log_m.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
        let t_max = (self.log_m.len() - 1) as f64 * self.h;
        let rounding = abs * 1e-15 * (4.0 + max_log + t_max * lx.abs());
        let tail = self.tail * (-self.c * lx).exp();
        Sum {
            value: fine,
            err: (fine - coarse).abs() + tail + rounding,
            abs,
        }
    }
}

struct Sum {
    value: f64,
    err: f64,
    abs: f64,
}

/// Aliasing period so that both neighbours of every `x` in `[lo, hi]` are negligible.
fn alias_period(a: f64, c: f64, lo: f64, hi: f64) -> f64 {
    let d = 1.0 + a - c;
    let right = (ALIAS_EXPONENT + (1.0 + a) * (-lo.ln()).max(0.0)) / d;
    // the left alias samples f near zero, where it vanishes faster than any power
    let left = if c > 0.1 {
        (ALIAS_EXPONENT + (1.0 + a) * hi.ln().max(0.0)) / c
    } else {
        ALIAS_EXPONENT
    };
    right.max(left).max(10.0)
}

fn step_for_period(period: f64) -> f64 {
    PI / period
}

fn check_contour(p: &GenStableParams, c: f64) -> Result<()> {
    if !c.is_finite() || c >= 1.0 + p.a() {
        return Err(Error::Domain(format!(
            "contour must lie in the strip c < 1 + a = {}, got {c}",
            1.0 + p.a()
        )));
    }
    Ok(())
}

/// `f(x)` on the line `Re z = contour`, truncated at `|t| = halfheight`.
pub fn density_mellin_inversion(
    p: &GenStableParams,
    x: f64,
    contour: f64,
    halfheight: f64,
) -> Result<DensityEvaluation> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!(
            "density argument must be positive and finite, got {x}"
        )));
    }
    check_contour(p, contour)?;
    if !(halfheight > 0.0 && halfheight.is_finite()) {
        return Err(Error::Domain(format!(
            "halfheight must be positive, got {halfheight}"
        )));
    }
    let h = step_for_period(2.0 * alias_period(p.a(), contour, x, x));
    let table = Table::build(p, contour, h, Some(halfheight));
    let s = table.sum(x);
    Ok(DensityEvaluation {
        x,
        value: s.value.max(0.0),
        method: Method::MellinInversion,
        err: s.err,
    })
}

/// Mellin inversion with one shared table of `M` values for a range of `x`.
#[derive(Debug, Clone)]
pub struct MellinInverter {
    p: GenStableParams,
    table: Table,
    ladder: Arc<Mutex<Vec<Arc<Rung>>>>,
}

/// A contour left of the default one, serving the `x` whose saddle point is
/// nearby. The contour's saddle `x` is `exp(-d/ds ln M(s))` at `s = 1 - c`.
#[derive(Debug)]
struct Rung {
    c: f64,
    sigma: f64,
    log_x: f64,
    table: OnceLock<Table>,
}

/// Rungs are spaced `RUNG_SPACING / sigma` apart, so every `x` is within a
/// factor `exp(RUNG_SPACING^2 / 8)` of its optimal cancellation.
const RUNG_SPACING: f64 = 1.5;
const MAX_RUNGS: usize = 2000;

impl Rung {
    fn at(p: &GenStableParams, c: f64) -> Option<Rung> {
        let d = 1e-3 * (1.0 + c.abs());
        let lm = |s: f64| mellin(p, s).ok().map(|v| v.log_value);
        let s = 1.0 - c;
        let (lo, mid, hi) = (lm(s - d)?, lm(s)?, lm(s + d)?);
        let curvature = (hi - 2.0 * mid + lo) / (d * d);
        (curvature > 0.0).then(|| Rung {
            c,
            sigma: curvature.sqrt(),
            log_x: -(hi - lo) / (2.0 * d),
            table: OnceLock::new(),
        })
    }

    /// Built serially: callers may sit inside rayon jobs that would otherwise
    /// wait on this initialisation from a stolen task.
    fn table(&self, p: &GenStableParams) -> &Table {
        self.table.get_or_init(|| {
            let period = 10.0 * self.sigma + 35.0 / (1.0 + p.a() - self.c);
            Table::build_with(p, self.c, step_for_period(period), None, false)
        })
    }
}

impl MellinInverter {
    /// Table on the line `Re z = c` accurate for `x` in `[lo, hi]`.
    ///
    /// Panics if `c` is outside the strip `c < 1 + a`.
    pub fn for_range(p: &GenStableParams, c: f64, lo: f64, hi: f64) -> MellinInverter {
        check_contour(p, c).expect("contour inside the strip");
        let lo = lo.max(negligible_below(p));
        let hi = hi.max(lo);
        let h = step_for_period(2.0 * alias_period(p.a(), c, lo, hi));
        MellinInverter {
            p: *p,
            table: Table::build(p, c, h, None),
            ladder: Arc::new(Mutex::new(Vec::new())),
        }
    }

    /// The rung whose saddle point is nearest to `x`, extending the ladder as needed.
    fn rung_for(&self, x: f64) -> Option<Arc<Rung>> {
        let lx = x.ln();
        let mut ladder = self.ladder.lock().unwrap_or_else(|e| e.into_inner());
        if ladder.is_empty() {
            ladder.push(Arc::new(Rung::at(&self.p, self.table.c)?));
        }
        while ladder.last().is_some_and(|r| r.log_x > lx) && ladder.len() < MAX_RUNGS {
            let last = ladder.last().expect("nonempty");
            let next = Rung::at(&self.p, last.c - RUNG_SPACING / last.sigma)?;
            ladder.push(Arc::new(next));
        }
        // first rung at or below x, compared with its right neighbour
        let i = ladder.iter().position(|r| r.log_x <= lx)?;
        if i > 0 && ladder[i - 1].log_x - lx < lx - ladder[i].log_x {
            return Some(ladder[i - 1].clone());
        }
        Some(ladder[i].clone())
    }

    fn ladder_sum(&self, x: f64) -> Option<Sum> {
        let rung = self.rung_for(x)?;
        Some(rung.table(&self.p).sum(x))
    }

    pub fn contour(&self) -> f64 {
        self.table.c
    }

    pub fn nodes(&self) -> usize {
        self.table.log_m.len()
    }

    /// Value from the shared table alone; absolute accuracy.
    pub fn eval_abs(&self, x: f64) -> f64 {
        if x < negligible_below(&self.p) {
            return asymptotic_zero(&self.p, x);
        }
        self.table.sum(x).value.max(0.0)
    }

    /// Value with absolute error at most `tol` where achievable: the shared table
    /// when its bound allows, else the saddle-point contour of `x`.
    pub fn eval_within(&self, x: f64, tol: f64) -> f64 {
        let shared = (x >= negligible_below(&self.p)).then(|| self.table.sum(x));
        if let Some(s) = &shared {
            if s.err <= tol {
                return s.value.max(0.0);
            }
        }
        match (self.ladder_sum(x), shared) {
            (Some(t), Some(s)) if s.err <= t.err => s.value.max(0.0),
            (Some(t), _) => t.value.max(0.0),
            (None, Some(s)) => s.value.max(0.0),
            (None, None) => asymptotic_zero(&self.p, x),
        }
    }

    /// Value with an error bound; small `x` is moved to its saddle-point contour.
    pub fn eval(&self, x: f64) -> DensityEvaluation {
        let p = &self.p;
        let done = |value: f64, err: f64| DensityEvaluation {
            x,
            value: value.max(0.0),
            method: Method::MellinInversion,
            err,
        };
        if x < negligible_below(p) {
            let v = asymptotic_zero(p, x);
            return done(v, v);
        }
        let s = self.table.sum(x);
        if s.abs <= MAX_CANCELLATION * s.value.abs() && s.err <= RELATIVE_TARGET * s.value.abs() {
            return done(s.value, s.err);
        }
        match saddle_sum(p, x) {
            Some(t) if t.err < s.err => done(t.value, t.err),
            _ => done(s.value, s.err),
        }
    }
}

/// Sum on the saddle-point contour of `x`.
fn saddle_sum(p: &GenStableParams, x: f64) -> Option<Sum> {
    let (c, sigma) = saddle(p, x)?;
    let period = 10.0 * sigma + 35.0 / (1.0 + p.a() - c);
    Some(Table::build(p, c, step_for_period(period), None).sum(x))
}

/// Minimiser `c*` of `ln M(1 - c) - c ln x` and the square root of the second
/// derivative there.
fn saddle(p: &GenStableParams, x: f64) -> Option<(f64, f64)> {
    let lx = x.ln();
    let strip = 1.0 + p.a();
    let phi = |c: f64| -> f64 {
        match mellin(p, 1.0 - c) {
            Ok(v) => v.log_value - c * lx,
            Err(_) => f64::INFINITY,
        }
    };
    let slope = |c: f64| phi(c + 1e-4) - phi(c - 1e-4);
    let mut hi = default_contour(p).min(strip - 1e-3);
    let mut lo = hi - 1.0;
    if slope(hi) < 0.0 {
        // minimum between the default contour and the pole at the strip edge
        lo = hi;
        hi = strip - 1e-9 * strip;
    } else {
        let mut width = 1.0;
        while slope(lo) > 0.0 {
            hi = lo;
            width *= 2.0;
            lo -= width;
            if width > 1e4 {
                return None;
            }
        }
    }
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut l, mut r) = (lo, hi);
    let mut c1 = r - g * (r - l);
    let mut c2 = l + g * (r - l);
    let (mut f1, mut f2) = (phi(c1), phi(c2));
    while r - l > 1e-7 * (1.0 + l.abs()) {
        if f1 < f2 {
            r = c2;
            c2 = c1;
            f2 = f1;
            c1 = r - g * (r - l);
            f1 = phi(c1);
        } else {
            l = c1;
            c1 = c2;
            f1 = f2;
            c2 = l + g * (r - l);
            f2 = phi(c2);
        }
    }
    let c = 0.5 * (l + r);
    let d = 1e-3 * (1.0 + c.abs());
    let curvature = (phi(c + d) - 2.0 * phi(c) + phi(c - d)) / (d * d);
    (curvature > 0.0).then(|| (c, curvature.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: f64, alpha: f64) -> GenStableParams {
        GenStableParams::new(m, alpha).unwrap()
    }

    #[test]
    fn examples() {
        let v = density_mellin_inversion(&p(2.0, 1.0), 1.0, 0.5, 200.0).unwrap();
        assert!((v.value - (-1f64).exp()).abs() < 1e-6);
        let v = density_mellin_inversion(&p(4.0, 2.0), 1.0, 0.5, 200.0).unwrap();
        assert!((v.value - (-1f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn contour_outside_strip() {
        let q = p(2.0, 1.0);
        assert!(matches!(
            density_mellin_inversion(&q, 1.0, 2.0, 50.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            density_mellin_inversion(&q, 1.0, 0.5, 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn shared_table_matches_closed_forms() {
        for &(m, alpha) in &[(2.0, 1.0), (4.0, 2.0), (3.0, 1.0), (1.0, 0.5)] {
            let q = p(m, alpha);
            let inv = MellinInverter::for_range(&q, default_contour(&q), 1e-2, 1e3);
            for &x in &[0.05, 0.2, 1.0, 3.0, 20.0, 900.0] {
                let got = inv.eval(x);
                let want = crate::density::closed::closed_form(&q, x)
                    .map(|v| v.value)
                    .unwrap_or_else(|| x.powf(-1.5) * (-1.0 / x).exp() / PI.sqrt());
                assert!(
                    (got.value - want).abs() < 1e-9 * (1.0 + want),
                    "{m} {alpha} {x}: {} vs {want}",
                    got.value
                );
                assert!(
                    (got.value - want).abs() <= got.err.max(1e-14),
                    "{m} {alpha} {x}: err {}",
                    got.err
                );
            }
        }
    }

    #[test]
    fn saddle_contour_gives_relative_accuracy() {
        let q = p(2.0, 1.0);
        let inv = MellinInverter::for_range(&q, 0.5, 1e-3, 10.0);
        let x: f64 = 0.04;
        let want = x.powi(-2) * (-1.0 / x).exp();
        let got = inv.eval(x);
        assert!(
            (got.value / want - 1.0).abs() < 1e-7,
            "{} vs {want}",
            got.value
        );
    }

    #[test]
    fn explicit_halfheight_reports_truncation() {
        let q = p(1.0, 0.3);
        let short = density_mellin_inversion(&q, 1.0, 0.5, 2.0).unwrap();
        let long = density_mellin_inversion(&q, 1.0, 0.5, 400.0).unwrap();
        assert!(long.err < 1e-9);
        assert!((short.value - long.value).abs() <= short.err);
    }
}
