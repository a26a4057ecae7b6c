use std::f64::consts::FRAC_PI_2;

use super::QuadResult;

const T_MAX: f64 = 6.0;
const MAX_LEVEL: u32 = 10;

/// Integrates `f(x, x - a, b - x)` over `[a, b]`.
///
/// The endpoint distances are computed without cancellation so integrands with
/// endpoint singularities can use them directly.
pub fn tanh_sinh_with_distance<F>(f: F, a: f64, b: f64, rel_tol: f64) -> QuadResult
where
    F: Fn(f64, f64, f64) -> f64,
{
    let half = 0.5 * (b - a);
    let eval = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        // distance from the near endpoint, scaled to [0, 2]
        let near = 2.0 * e / (1.0 + e);
        let cosh_u = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u);
        if near == 0.0 || w == 0.0 {
            return 0.0;
        }
        let (dl, dr) = if t >= 0.0 {
            (half * (2.0 - near), half * near)
        } else {
            (half * near, half * (2.0 - near))
        };
        let x = if t >= 0.0 { b - dr } else { a + dl };
        let v = f(x, dl, dr);
        if v.is_finite() {
            w * v
        } else {
            0.0
        }
    };

    let mut h = 1.0;
    let mut evaluations = 1;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= T_MAX {
        let t = k as f64 * h;
        sum += eval(t) + eval(-t);
        evaluations += 2;
        k += 1;
    }
    let mut estimate = half * h * sum;
    let mut error = f64::INFINITY;
    for _ in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= T_MAX {
            let t = k as f64 * h;
            sum += eval(t) + eval(-t);
            evaluations += 2;
            k += 2;
        }
        let next = half * h * sum;
        error = (next - estimate).abs();
        estimate = next;
        if error <= rel_tol * estimate.abs() {
            return QuadResult {
                value: estimate,
                error,
                evaluations,
                converged: true,
            };
        }
    }
    QuadResult {
        value: estimate,
        error,
        evaluations,
        converged: false,
    }
}

/// Integrates `f` over `[a, b]`.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, rel_tol: f64) -> QuadResult
where
    F: Fn(f64) -> f64,
{
    tanh_sinh_with_distance(|x, _, _| f(x), a, b, rel_tol)
}

/// Integrates `f` over `[a, inf)` through the map `x = a + u / (1 - u)`.
pub fn half_line<F>(f: F, a: f64, rel_tol: f64) -> QuadResult
where
    F: Fn(f64) -> f64,
{
    tanh_sinh_with_distance(
        |_, u, one_minus_u| {
            let x = a + u / one_minus_u;
            let jac = 1.0 / (one_minus_u * one_minus_u);
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v * jac
            }
        },
        0.0,
        1.0,
        rel_tol,
    )
}
