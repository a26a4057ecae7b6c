//! Bernoulli numbers, Bernoulli polynomials and the Hurwitz zeta function.

use std::sync::OnceLock;

use num_complex::Complex64;

/// Number of even Bernoulli numbers kept in the table (`B_0 .. B_{2 * (LEN - 1)}`).
const EVEN_BERNOULLI_LEN: usize = 40;

fn even_bernoulli_table() -> &'static [f64; EVEN_BERNOULLI_LEN] {
    static TABLE: OnceLock<[f64; EVEN_BERNOULLI_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; EVEN_BERNOULLI_LEN];
        t[0] = 1.0;
        t[1] = 1.0 / 6.0;
        t[2] = -1.0 / 30.0;
        t[3] = 1.0 / 42.0;
        t[4] = -1.0 / 30.0;
        t[5] = 5.0 / 66.0;
        t[6] = -691.0 / 2730.0;
        t[7] = 7.0 / 6.0;
        // B_{2k} = (-1)^{k+1} 2 (2k)! zeta(2k) / (2 pi)^{2k}
        for (k, slot) in t.iter_mut().enumerate().skip(8) {
            let n = 2 * k;
            let zeta: f64 = (1..200).map(|i| (i as f64).powi(-(n as i32))).sum();
            let mut log_mag = (2.0f64).ln() + crate::specfun::ln_factorial(n as u32)
                - n as f64 * (2.0 * std::f64::consts::PI).ln();
            log_mag += zeta.ln();
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            *slot = sign * log_mag.exp();
        }
        t
    })
}

/// Bernoulli number `B_n` with the convention `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => -0.5,
        _ if n % 2 == 1 => 0.0,
        _ => {
            let k = n / 2;
            assert!(k < EVEN_BERNOULLI_LEN, "bernoulli index {n} beyond table");
            even_bernoulli_table()[k]
        }
    }
}

/// Binomial coefficient as a float.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}

/// Bernoulli polynomial `B_n(s)` at a complex point.
pub fn bernoulli_poly(n: usize, s: Complex64) -> Complex64 {
    // Horner over descending powers of s: sum_j C(n, j) B_j s^{n-j}
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..=n {
        acc = acc * s + binomial(n, j) * bernoulli(j);
    }
    acc
}

/// Hurwitz zeta `zeta(s, q) = sum_{n >= 0} (n + q)^{-s}` for real `s > 1`, `q > 0`.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    assert!(s > 1.0 && q > 0.0, "hurwitz_zeta needs s > 1, q > 0");
    let shift_to = 15.0f64.max(s);
    let mut sum = 0.0;
    let mut x = q;
    while x < shift_to {
        sum += x.powf(-s);
        x += 1.0;
    }
    // Euler-Maclaurin at the shifted point
    let mut tail = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    let mut rising = s; // (s)_{2j-1}
    let mut xpow = x.powf(-s - 1.0);
    let mut fact = 2.0; // (2j)!
    for j in 1..=14 {
        let term = bernoulli(2 * j) / fact * rising * xpow;
        tail += term;
        if term.abs() < 1e-18 * tail.abs() {
            break;
        }
        let jj = j as f64;
        rising *= (s + 2.0 * jj - 1.0) * (s + 2.0 * jj);
        xpow /= x * x;
        fact *= (2.0 * jj + 1.0) * (2.0 * jj + 2.0);
    }
    sum + tail
}

/// Riemann zeta at an integer argument `n >= 2`.
pub fn zeta_int(n: u32) -> f64 {
    use std::f64::consts::PI;
    match n {
        2 => PI * PI / 6.0,
        3 => 1.202_056_903_159_594_2,
        4 => PI.powi(4) / 90.0,
        5 => 1.036_927_755_143_369_9,
        6 => PI.powi(6) / 945.0,
        7 => 1.008_349_277_381_922_8,
        8 => PI.powi(8) / 9450.0,
        9 => 1.002_008_392_826_082_2,
        _ => hurwitz_zeta(n as f64, 1.0),
    }
}
