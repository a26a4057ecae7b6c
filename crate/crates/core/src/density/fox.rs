use super::series::{applicable_families, SeriesFamily};
use crate::error::{Error, Result};
use crate::params::{as_positive_integer, GenStableParams};
use crate::specfun::lgamma_pos;

/// Parameters of the Fox function representation
/// `f(x) = prefactor * H^{m, n}_{p, q}(scale * x | upper; lower)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FoxParams {
    pub family: SeriesFamily,
    /// Upper index `m` of `H^{m, n}_{p, q}`.
    pub m_index: usize,
    /// Upper index `n`.
    pub n_index: usize,
    pub p: usize,
    pub q: usize,
    /// `(a_i, A_i)`, `i = 1..p`.
    pub upper: Vec<(f64, f64)>,
    /// `(b_j, B_j)`, `j = 1..q`.
    pub lower: Vec<(f64, f64)>,
    pub prefactor: f64,
    pub scale: f64,
}

/// Fox function parameters for the first applicable lattice family.
pub fn fox_parameters(p: &GenStableParams) -> Result<FoxParams> {
    let family = applicable_families(p).into_iter().next().ok_or_else(|| {
        Error::Precondition(format!(
            "no Fox representation: needs alpha in N, m / a in {{2, 3, ...}} or m in N (m = {}, alpha = {})",
            p.m(),
            p.alpha()
        ))
    })?;
    let a = p.a();
    let fox = match family {
        SeriesFamily::IntegerAlpha => {
            let n = as_positive_integer(p.alpha()).expect("family applies") as usize;
            let nf = n as f64;
            let log_den: f64 = (1..=n).map(|i| lgamma_pos(1.0 + (i - 1) as f64 / a)).sum();
            FoxParams {
                family,
                m_index: 0,
                n_index: n,
                p: n,
                q: 0,
                upper: (1..=n).map(|i| (-(i as f64) / a, 1.0 / a)).collect(),
                lower: Vec::new(),
                prefactor: (nf / a * a.ln() - log_den).exp(),
                scale: (nf / a * a.ln()).exp(),
            }
        }
        SeriesFamily::LatticeM => {
            let n = as_positive_integer(p.m() / a).expect("family applies") as usize;
            let log_den: f64 = (1..n).map(|i| lgamma_pos(i as f64 * a)).sum();
            FoxParams {
                family,
                m_index: 0,
                n_index: n - 1,
                p: n - 1,
                q: 0,
                upper: (1..n).map(|i| (-(i as f64) * a, 1.0)).collect(),
                lower: Vec::new(),
                prefactor: (-log_den).exp(),
                scale: 1.0,
            }
        }
        SeriesFamily::IntegerM => {
            let n = as_positive_integer(p.m()).expect("family applies") as usize;
            let nf = n as f64;
            let log_den: f64 = (1..n).map(|i| lgamma_pos(i as f64 / a)).sum();
            FoxParams {
                family,
                m_index: 0,
                n_index: n,
                p: n,
                q: 1,
                upper: (1..=n).map(|i| (1.0 - i as f64 / a, 1.0 / a)).collect(),
                lower: vec![(0.0, 1.0)],
                prefactor: ((nf / a - 1.0) * a.ln() - log_den).exp(),
                scale: (nf / a * a.ln()).exp(),
            }
        }
    };
    Ok(fox)
}
