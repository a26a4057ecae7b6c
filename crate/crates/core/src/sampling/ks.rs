use std::f64::consts::PI;

/// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    assert!(
        !a.is_empty() && !b.is_empty(),
        "KS test needs nonempty samples"
    );
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let ne = n * m / (n + m);
    let sq = ne.sqrt();
    (d, kolmogorov_q((sq + 0.12 + 0.11 / sq) * d))
}

/// `P[K > lam]` for the Kolmogorov distribution.
pub(crate) fn kolmogorov_q(lam: f64) -> f64 {
    if lam <= 0.0 {
        return 1.0;
    }
    if lam < 1.18 {
        // theta-function form, accurate for small lam
        let t = -PI * PI / (8.0 * lam * lam);
        let s: f64 = (1..=6)
            .map(|k| ((2 * k - 1) as f64).powi(2) * t)
            .map(f64::exp)
            .sum();
        return (1.0 - (2.0 * PI).sqrt() / lam * s).clamp(0.0, 1.0);
    }
    let mut q = 0.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * lam * lam).exp();
        q += if j % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * q).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_quantiles() {
        // classical critical values
        assert!((kolmogorov_q(1.3581) - 0.05).abs() < 1e-4);
        assert!((kolmogorov_q(1.6276) - 0.01).abs() < 1e-4);
        assert!((kolmogorov_q(0.8276) - 0.5).abs() < 1e-3);
        // both branches agree at the switch
        let lo = kolmogorov_q(1.18 - 1e-12);
        let hi = kolmogorov_q(1.18);
        assert!((lo - hi).abs() < 1e-12);
    }

    #[test]
    fn statistic() {
        let (d, p) = ks_two_sample(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]);
        assert_eq!(d, 0.0);
        assert_eq!(p, 1.0);
        let (d, _) = ks_two_sample(&[1.0, 2.0], &[3.0, 4.0]);
        assert_eq!(d, 1.0);
    }
}
