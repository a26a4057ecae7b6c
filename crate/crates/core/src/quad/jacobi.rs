use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::specfun::lgamma_pos;

/// Nodes and weights on `[-1, 1]` for the weight `(1 - x)^alpha (1 + x)^beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

type RuleKey = (usize, u64, u64);

fn cache() -> &'static Mutex<HashMap<RuleKey, Arc<GaussRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<GaussRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `n`-point Gauss-Jacobi rule by the Golub-Welsch algorithm, memoised.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Arc<GaussRule> {
    assert!(
        n >= 1 && alpha > -1.0 && beta > -1.0,
        "invalid Gauss-Jacobi request"
    );
    let key = (n, alpha.to_bits(), beta.to_bits());
    if let Some(rule) = cache().lock().expect("rule cache poisoned").get(&key) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(golub_welsch(n, alpha, beta));
    cache()
        .lock()
        .expect("rule cache poisoned")
        .insert(key, Arc::clone(&rule));
    rule
}

fn golub_welsch(n: usize, alpha: f64, beta: f64) -> GaussRule {
    let ab = alpha + beta;
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let diag = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        jm[(k, k)] = diag;
        if k + 1 < n {
            let j = kf + 1.0;
            let b2 = if k == 0 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                let s = 2.0 * j + ab;
                4.0 * j * (j + alpha) * (j + beta) * (j + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            let off = b2.sqrt();
            jm[(k, k + 1)] = off;
            jm[(k + 1, k)] = off;
        }
    }
    let mu0 =
        ((ab + 1.0) * std::f64::consts::LN_2 + lgamma_pos(alpha + 1.0) + lgamma_pos(beta + 1.0)
            - lgamma_pos(ab + 2.0))
        .exp();
    let eig = SymmetricEigen::new(jm);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    GaussRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}
