use crate::error::Result;
use crate::mellin::mellin;
use crate::params::GenStableParams;

/// `a_n = M(b n)^{1/n} / n`, which tends to `b / e`.
pub fn moment_growth_sequence(p: &GenStableParams, n: u32) -> Result<f64> {
    assert!(n >= 1, "moment growth index starts at 1");
    let nf = n as f64;
    let log_m = mellin(p, p.b() * nf)?.log_value;
    Ok((log_m / nf - nf.ln()).exp())
}

const LABR_GRID: usize = 4096;
const LABR_SPAN: f64 = 30.0;

/// Whether `x^a (1 - x^b) / ((1 - x)(1 - x^r))` is non-decreasing on `(0, 1)`.
///
/// The sign of `x d/dx ln f = a - b/(x^{-b} - 1) + x/(1 - x) + r/(x^{-r} - 1)` is
/// scanned on a logistic grid `x = 1 / (1 + e^{-t})`, `|t| <= 30`, which resolves
/// both ends. The expression tends to `a > 0` at zero and to `+inf` at one.
pub fn labr_selfdecomp_criterion(a: f64, b: f64, r: f64) -> bool {
    assert!(
        a > 0.0 && b > 0.0 && r > 0.0,
        "labr criterion needs positive parameters"
    );
    (0..LABR_GRID).all(|i| {
        let t = -LABR_SPAN + 2.0 * LABR_SPAN * i as f64 / (LABR_GRID - 1) as f64;
        labr_log_derivative(a, b, r, t) >= 0.0
    })
}

/// `x d/dx ln f` at `x = 1 / (1 + e^{-t})`.
pub(crate) fn labr_log_derivative(a: f64, b: f64, r: f64, t: f64) -> f64 {
    let neg_ln_x = (-t).exp().ln_1p();
    let x_over_eps = t.exp(); // x / (1 - x)
    let scale = a + b + r + x_over_eps;
    let v = a - b / (b * neg_ln_x).exp_m1() + x_over_eps + r / (r * neg_ln_x).exp_m1();
    // rounding of the cancelling pole terms
    if v.abs() < 1e-13 * scale {
        0.0
    } else {
        v
    }
}
