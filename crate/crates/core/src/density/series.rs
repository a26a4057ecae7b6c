//! Convergent power series for the density in three lattice families:
//!
//! * `alpha = n` (finite product of generalized Fréchet variables),
//! * `m = a n`, `n >= 2` (finite product of inverse Gamma variables),
//! * `m = n` (finite product of power transforms of stable variables).
//!
//! Each is a finite sum over `r` of series in `k` whose terms involve products
//! of Gamma functions at shifted arguments, evaluated in log space with signs.

use super::{DensityEvaluation, Method};
use crate::error::{Error, Result};
use crate::params::{as_positive_integer, GenStableParams};
use crate::specfun::{lgamma_pos, lgamma_signed, ln_factorial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesFamily {
    /// `alpha = n`.
    IntegerAlpha,
    /// `m / a = n >= 2`.
    LatticeM,
    /// `m = n`.
    IntegerM,
}

impl SeriesFamily {
    pub fn method(self) -> Method {
        match self {
            SeriesFamily::IntegerAlpha => Method::SeriesIntegerAlpha,
            SeriesFamily::LatticeM => Method::SeriesLatticeM,
            SeriesFamily::IntegerM => Method::SeriesIntegerM,
        }
    }

    /// The integer `n` of the family, when it applies.
    fn order(self, p: &GenStableParams) -> Option<u32> {
        match self {
            SeriesFamily::IntegerAlpha => as_positive_integer(p.alpha()),
            SeriesFamily::LatticeM => as_positive_integer(p.m() / p.a()).filter(|&n| n >= 2),
            SeriesFamily::IntegerM => as_positive_integer(p.m()),
        }
    }
}

/// Families whose lattice condition holds, in priority order.
pub fn applicable_families(p: &GenStableParams) -> Vec<SeriesFamily> {
    [
        SeriesFamily::IntegerAlpha,
        SeriesFamily::LatticeM,
        SeriesFamily::IntegerM,
    ]
    .into_iter()
    .filter(|f| f.order(p).is_some())
    .collect()
}

/// Distance below which a Gamma argument counts as sitting on a pole.
const POLE_GUARD: f64 = 1e-4;
/// Largest tolerated ratio of the absolute term sum to the series value.
const MAX_CANCELLATION: f64 = 1e6;
const MAX_TERMS: usize = 4000;

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() < POLE_GUARD
}

/// A Gamma factor `Gamma(c - k)` (numerator) or `1 / Gamma(c - d k)` (denominator).
struct Shape {
    /// `ln` of the factor independent of `k`, including powers of `a` and `x`.
    log_base: f64,
    /// `ln` growth per unit `k` from powers of `a` and `x`.
    log_step: f64,
    /// Offsets `c` of numerator factors `Gamma(c - k)`.
    numer: Vec<f64>,
    /// Optional denominator `1 / Gamma(c - d k)` as `(c, d)`.
    denom: Option<(f64, f64)>,
}

struct SubSum {
    terms: usize,
    value: f64,
    abs_sum: f64,
    trunc: f64,
    rounding: f64,
}

fn sum_shape(shape: &Shape, min_terms: usize) -> Result<SubSum> {
    let mut value = 0.0;
    let mut abs_sum = 0.0;
    let mut rounding = 0.0;
    let mut last_nonzero: Option<f64> = None;
    let mut small_streak = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let mut log_t = shape.log_base + shape.log_step * kf - ln_factorial(k as u32);
        let mut scale = log_t.abs() + ln_factorial(k as u32);
        let mut sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for &c in &shape.numer {
            let (l, s) = lgamma_signed(c - kf);
            log_t += l;
            scale += l.abs();
            sign *= s;
        }
        let mut zero = false;
        if let Some((c, d)) = shape.denom {
            let (l, s) = lgamma_signed(c - d * kf);
            if l.is_infinite() {
                zero = true;
            } else {
                log_t -= l;
                scale += l.abs();
                sign *= s;
            }
        }
        if zero {
            continue;
        }
        if log_t > 700.0 {
            return Err(Error::Accuracy {
                context: "series term overflow",
                coarse: f64::NAN,
                fine: f64::NAN,
            });
        }
        let t = sign * log_t.exp();
        value += t;
        abs_sum += t.abs();
        rounding += t.abs() * 2.2e-16 * (8.0 + scale);
        let mag = t.abs();
        let decaying = last_nonzero.map_or(false, |prev| mag < 0.5 * prev);
        if decaying && (mag <= 1e-17 * value.abs() || mag < 1e-300) {
            small_streak += 1;
        } else {
            small_streak = 0;
        }
        if small_streak >= 2 && k + 1 >= min_terms {
            let rho = mag / last_nonzero.expect("decaying implies a previous term");
            return Ok(SubSum {
                terms: k + 1,
                value,
                abs_sum,
                trunc: mag * rho / (1.0 - rho),
                rounding,
            });
        }
        last_nonzero = Some(mag);
    }
    Err(Error::Accuracy {
        context: "series did not converge",
        coarse: f64::NAN,
        fine: value,
    })
}

/// `f_{m, alpha}(x)` from the convergent series of `family`.
pub fn density_series(
    p: &GenStableParams,
    x: f64,
    family: SeriesFamily,
) -> Result<DensityEvaluation> {
    density_series_with(p, x, family, 0).map(|(v, _)| v)
}

/// As [`density_series`], summing at least `min_terms` terms of every inner
/// series; also returns the largest number of terms used.
pub(crate) fn density_series_with(
    p: &GenStableParams,
    x: f64,
    family: SeriesFamily,
    min_terms: usize,
) -> Result<(DensityEvaluation, usize)> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!(
            "density argument must be positive and finite, got {x}"
        )));
    }
    let (m, alpha, a) = (p.m(), p.alpha(), p.a());
    let n = family.order(p).ok_or_else(|| {
        Error::Precondition(match family {
            SeriesFamily::IntegerAlpha => {
                format!("series-integer-alpha needs alpha in N, got alpha = {alpha}")
            }
            SeriesFamily::LatticeM => format!(
                "series-lattice-m needs m / a in {{2, 3, ...}}, got m / a = {}",
                m / a
            ),
            SeriesFamily::IntegerM => format!("series-integer-m needs m in N, got m = {m}"),
        })
    })?;
    let nf = n as f64;
    let lx = x.ln();
    let la = a.ln();

    // Gamma offsets (j - r) / a or (j - r) a for j != r; the series only converges
    // when none of them is an integer
    let offset = |j: u32, r: u32| -> f64 {
        let d = j as f64 - r as f64;
        match family {
            SeriesFamily::LatticeM => d * a,
            _ => d / a,
        }
    };
    let top = match family {
        SeriesFamily::LatticeM => n - 1,
        _ => n,
    };
    for r in 1..=top {
        for j in 1..=top {
            if j != r && near_integer(offset(j, r)) {
                return Err(Error::Precondition(match family {
                    SeriesFamily::LatticeM => format!(
                        "series-lattice-m diverges: needs n = 2 or a, ..., (n-2)a not integers (a = {a}, n = {n})"
                    ),
                    _ => format!(
                        "{} has no convergent power series: needs a irrational or a = p/q with p >= n (a = {a}, n = {n})",
                        family.method()
                    ),
                }));
            }
        }
    }

    let log_prefactor = match family {
        SeriesFamily::IntegerAlpha => {
            (nf / a + 1.0) * la
                - (1..=n)
                    .map(|i| lgamma_pos(1.0 + (i - 1) as f64 / a))
                    .sum::<f64>()
        }
        SeriesFamily::LatticeM => -(1..n).map(|i| lgamma_pos(i as f64 * a)).sum::<f64>(),
        SeriesFamily::IntegerM => {
            nf / a * la - (1..n).map(|i| lgamma_pos(i as f64 / a)).sum::<f64>()
        }
    };

    let mut total = 0.0;
    let mut abs_total = 0.0;
    let mut err = 0.0;
    let mut used = 0;
    for r in 1..=top {
        let rf = r as f64;
        let numer: Vec<f64> = (1..=top)
            .filter(|&j| j != r)
            .map(|j| offset(j, r))
            .collect();
        let shape = match family {
            SeriesFamily::IntegerAlpha => Shape {
                log_base: -(rf * nf / a + nf) * la - (rf + a) * lx,
                log_step: -nf * la - a * lx,
                numer,
                denom: None,
            },
            SeriesFamily::LatticeM => Shape {
                log_base: -(rf * a + 1.0) * lx,
                log_step: -lx,
                numer,
                denom: None,
            },
            SeriesFamily::IntegerM => Shape {
                log_base: -rf * nf / a * la - rf * lx,
                log_step: -nf * la - a * lx,
                numer,
                denom: Some((1.0 - rf, a)),
            },
        };
        let sub = sum_shape(&shape, min_terms)?;
        used = used.max(sub.terms);
        total += sub.value;
        abs_total += sub.abs_sum;
        err += sub.trunc + sub.rounding;
    }
    if !(total > 0.0) || abs_total > MAX_CANCELLATION * total {
        return Err(Error::Accuracy {
            context: "series cancellation",
            coarse: abs_total,
            fine: total,
        });
    }
    let scale = log_prefactor.exp();
    Ok((
        DensityEvaluation {
            x,
            value: scale * total,
            method: family.method(),
            err: scale * err,
        },
        used,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::closed::closed_form;
    use crate::specfun::log_bessel_k;

    fn p(m: f64, alpha: f64) -> GenStableParams {
        GenStableParams::new(m, alpha).unwrap()
    }

    #[test]
    fn inverse_gamma_via_lattice_series() {
        for &a in &[0.4, 1.0, 2.3] {
            let q = p(2.0 * a, a);
            let v = density_series(&q, 1.0, SeriesFamily::LatticeM).unwrap();
            let expect = (-1.0 - lgamma_pos(a)).exp();
            assert!((v.value - expect).abs() < 1e-12, "a = {a}");
        }
    }

    #[test]
    fn integer_alpha_two_on_log_case_is_rejected() {
        // alpha = 2, a = 1/2: nu = 1/a = 2 is an integer, where the expansion has a
        // logarithmic term; the Macdonald closed form still applies
        let q = p(2.5, 2.0);
        assert!(matches!(
            density_series(&q, 1.0, SeriesFamily::IntegerAlpha),
            Err(Error::Precondition(_))
        ));
        let (a, nu): (f64, f64) = (0.5, 2.0);
        let oracle = (2f64.ln() + log_bessel_k(nu, 2.0 / a) - nu * a.ln() - lgamma_pos(nu)).exp();
        assert!((closed_form(&q, 1.0).unwrap().value - oracle).abs() < 1e-14);
    }

    #[test]
    fn integer_alpha_two_irrational_a() {
        let q = p(2.0 + std::f64::consts::FRAC_1_SQRT_2, 2.0);
        for &x in &[0.5, 1.0, 4.0] {
            let v = density_series(&q, x, SeriesFamily::IntegerAlpha).unwrap();
            let c = closed_form(&q, x).unwrap();
            assert!(
                (v.value - c.value).abs() < 1e-10 * c.value.max(1e-3),
                "x = {x}: {} vs {}",
                v.value,
                c.value
            );
        }
    }

    #[test]
    fn stable_half_via_integer_m() {
        let q = p(1.0, 0.5);
        for &x in &[0.3, 1.0, 7.0] {
            let v = density_series(&q, x, SeriesFamily::IntegerM).unwrap();
            let c = closed_form(&q, x).unwrap();
            assert!((v.value - c.value).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn lattice_three_matches_macdonald_form() {
        let q = p(1.8, 1.2); // a = 0.6, m = 3a
        for &x in &[0.4, 1.0, 5.0, 20.0] {
            let v = density_series(&q, x, SeriesFamily::LatticeM).unwrap();
            let c = closed_form(&q, x).unwrap();
            assert!(
                (v.value - c.value).abs() < 1e-10 * c.value.max(1e-2),
                "x = {x}: {} vs {}",
                v.value,
                c.value
            );
        }
    }

    #[test]
    fn preconditions() {
        // m = 2, alpha = 3/2: a = 1/2, nu = 2
        let e = density_series(&p(2.0, 1.5), 1.0, SeriesFamily::IntegerM).unwrap_err();
        assert!(matches!(e, Error::Precondition(_)));
        assert!(e.to_string().contains("p >= n"));
        assert!(matches!(
            density_series(&p(2.5, 1.2), 1.0, SeriesFamily::IntegerAlpha),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            density_series(&p(2.5, 1.2), 1.0, SeriesFamily::LatticeM),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn truncation_bound_is_honest() {
        for &(m, alpha, x) in &[
            (2.0, 0.5, 1.3),
            (1.0, 0.3, 0.6),
            (1.8, 1.2, 0.5),
            (3.0, 1.0, 2.0),
        ] {
            let q = p(m, alpha);
            for family in applicable_families(&q) {
                let Ok((v, used)) = density_series_with(&q, x, family, 0) else {
                    continue;
                };
                let (w, _) = density_series_with(&q, x, family, 2 * used).unwrap();
                assert!(
                    (v.value - w.value).abs() <= v.err,
                    "{m} {alpha} {x} {family:?}"
                );
                assert!(v.err < 1e-10);
            }
        }
    }
}
