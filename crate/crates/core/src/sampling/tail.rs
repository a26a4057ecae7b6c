//! Mean and variance of the logarithm of an omitted Beta-product tail.
//!
//! Both products have the form `prod_{n >= 0} (r_n / p_n) B_{p_n, r_n - p_n}` with
//! `p_n = kappa (n + c_p)` and `r_n = kappa (n + c_r)`. For the factors `n >= N`,
//!
//! `E[ln] = sum_n F(r_n) - F(p_n)`, `F(x) = ln x - psi(x)`,
//! `Var[ln] = sum_n psi'(p_n) - psi'(r_n)`.
//!
//! Terms are summed directly until `kappa (n + c) >= 10`, then the Stirling
//! expansions of `F` and `psi'` are summed exactly in terms of digamma and
//! Hurwitz zeta values.

use crate::specfun::{bernoulli, digamma_pos, hurwitz_zeta, trigamma_pos};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Lattice {
    pub kappa: f64,
    pub c_p: f64,
    pub c_r: f64,
}

const ASYMPTOTIC_FROM: f64 = 10.0;
const ORDER: usize = 8;

impl Lattice {
    fn p(&self, n: usize) -> f64 {
        self.kappa * (n as f64 + self.c_p)
    }

    fn r(&self, n: usize) -> f64 {
        self.kappa * (n as f64 + self.c_r)
    }

    /// First index from which the asymptotic sums are used.
    fn switch(&self, depth: usize) -> usize {
        let c = self.c_p.min(self.c_r);
        let need = (ASYMPTOTIC_FROM / self.kappa - c).ceil().max(0.0) as usize;
        depth.max(need)
    }

    /// `sum_{n >= start} [S_j(n + c_plus) - S_j(n + c_minus)]` weighted by
    /// `coef[j] kappa^{-j}`, with `S_j(q) = sum (n + q)^{-j}`.
    fn power_sums(&self, start: usize, coef: &[(usize, f64)], c_plus: f64, c_minus: f64) -> f64 {
        let n0 = start as f64;
        coef.iter()
            .map(|&(j, g)| {
                let diff = if j == 1 {
                    digamma_pos(n0 + c_minus) - digamma_pos(n0 + c_plus)
                } else {
                    hurwitz_zeta(j as f64, n0 + c_plus) - hurwitz_zeta(j as f64, n0 + c_minus)
                };
                g * self.kappa.powi(-(j as i32)) * diff
            })
            .sum()
    }

    /// `E[ln prod_{n >= depth} (r_n/p_n) B_{p_n, r_n - p_n}]`.
    pub fn tail_log_mean(&self, depth: usize) -> f64 {
        let start = self.switch(depth);
        let f = |x: f64| x.ln() - digamma_pos(x);
        let direct: f64 = (depth..start).map(|n| f(self.r(n)) - f(self.p(n))).sum();
        // F(x) = 1/(2x) + sum_k B_{2k} / (2k x^{2k})
        let mut coef = vec![(1, 0.5)];
        coef.extend((1..=ORDER).map(|k| (2 * k, bernoulli(2 * k) / (2 * k) as f64)));
        direct + self.power_sums(start, &coef, self.c_r, self.c_p)
    }

    /// `Var[ln prod_{n >= depth} B_{p_n, r_n - p_n}]`.
    pub fn tail_log_variance(&self, depth: usize) -> f64 {
        let start = self.switch(depth);
        let direct: f64 = (depth..start)
            .map(|n| trigamma_pos(self.p(n)) - trigamma_pos(self.r(n)))
            .sum();
        // psi'(x) = 1/x + 1/(2x^2) + sum_k B_{2k} / x^{2k+1}
        let mut coef = vec![(1, 1.0), (2, 0.5)];
        coef.extend((1..=ORDER).map(|k| (2 * k + 1, bernoulli(2 * k))));
        direct + self.power_sums(start, &coef, self.c_p, self.c_r)
    }
}
