//! Random variates of `X_{m, alpha}` and `Y_{m, alpha} = 1 / X_{m, alpha}`.
//!
//! Two infinite Beta products represent `Y`:
//!
//! * first: `Y = a^{(m-a)/a} Gamma(m/a) prod_n ((m+an)/(a+an)) B_{a+an, alpha}`,
//! * second: `Y^a = Gamma(m)/Gamma(a) prod_n ((m+n)/(a+n)) B_{1+n/a, m/a-1}`.
//!
//! They are truncated after `truncation_depth` factors; the omitted tail is
//! dropped, replaced by its log-mean, or by a Gaussian with its log-mean and
//! log-variance. Exact samplers cover `alpha = n`, `m = a n` and `m = 1`.
//!
//! Draw `i` uses ChaCha8 seeded with the root seed on stream `i`, so a batch
//! depends only on the seed and configuration, not on the thread schedule.

mod ks;
mod tail;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;

pub use ks::ks_two_sample;

use crate::density::kanter::log_kanter_a;
use crate::error::{Error, Result};
use crate::params::{as_positive_integer, near, GenStableParams};
use crate::specfun::lgamma_pos;
use tail::Lattice;

pub const DEFAULT_DEPTH: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TailCorrection {
    None,
    /// Multiply by `exp(E[ln tail])`.
    MeanLog,
    /// Multiply by a log-normal with the mean and variance of `ln tail`.
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Representation {
    FirstProduct,
    SecondProduct,
    Special,
}

macro_rules! named_enum {
    ($t:ty, $what:literal, $($v:path => $s:literal),+) => {
        impl $t {
            pub fn as_str(self) -> &'static str {
                match self { $($v => $s),+ }
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
        impl FromStr for $t {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($s => Ok($v),)+
                    _ => Err(Error::Invalid(format!(concat!("unknown ", $what, " '{}'"), s))),
                }
            }
        }
    };
}

named_enum!(TailCorrection, "tail correction",
    TailCorrection::None => "none", TailCorrection::MeanLog => "mean-log", TailCorrection::Gaussian => "gaussian");
named_enum!(Representation, "representation",
    Representation::FirstProduct => "first-product", Representation::SecondProduct => "second-product",
    Representation::Special => "special");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SampleConfig {
    pub count: usize,
    pub truncation_depth: usize,
    pub tail_correction: TailCorrection,
    pub seed: u64,
    pub representation: Representation,
}

impl SampleConfig {
    /// First product, depth 200, mean-log tail.
    pub fn new(count: usize, seed: u64) -> Self {
        SampleConfig {
            count,
            truncation_depth: DEFAULT_DEPTH,
            tail_correction: TailCorrection::MeanLog,
            seed,
            representation: Representation::FirstProduct,
        }
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.truncation_depth = depth;
        self
    }

    pub fn with_tail(mut self, tail: TailCorrection) -> Self {
        self.tail_correction = tail;
        self
    }

    pub fn with_representation(mut self, representation: Representation) -> Self {
        self.representation = representation;
        self
    }
}

/// Draws of `X_{m, alpha}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub provenance: SampleConfig,
    /// `E[ln tail]` multiplied into every draw of `Y`, in units of `ln Y`.
    pub tail_log_mean_applied: f64,
}

impl SampleBatch {
    /// The draws of `Y = 1 / X`.
    pub fn reciprocals(&self) -> Vec<f64> {
        self.values.iter().map(|x| 1.0 / x).collect()
    }
}

/// `ln` of a Gamma variate; shapes below one are boosted by one and scaled
/// by `U^{1/shape}` so the result never underflows.
#[derive(Debug, Clone, Copy)]
struct LogGamma {
    dist: Gamma<f64>,
    inv_shape: Option<f64>,
}

impl LogGamma {
    fn new(shape: f64) -> Self {
        let boosted = shape < 1.0;
        let dist =
            Gamma::new(if boosted { shape + 1.0 } else { shape }, 1.0).expect("positive shape");
        LogGamma {
            dist,
            inv_shape: boosted.then(|| 1.0 / shape),
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        let g = self.dist.sample(rng).ln();
        match self.inv_shape {
            Some(k) => g + k * (1.0 - rng.random::<f64>()).ln(),
            None => g,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct LogBeta(LogGamma, LogGamma);

impl LogBeta {
    fn new(p: f64, q: f64) -> Self {
        LogBeta(LogGamma::new(p), LogGamma::new(q))
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        let x = self.0.sample(rng);
        let y = self.1.sample(rng);
        let hi = x.max(y);
        x - (hi + ((x - hi).exp() + (y - hi).exp()).ln())
    }
}

/// How one draw of `ln Y` is produced.
#[derive(Debug, Clone)]
enum Plan {
    /// `power (log_const + sum ln B + tail_sd N)`.
    Product {
        log_const: f64,
        factors: Vec<LogBeta>,
        tail_sd: f64,
        power: f64,
    },
    /// `power (log_const + sum ln Gamma)`.
    GammaProduct {
        log_const: f64,
        factors: Vec<LogGamma>,
        power: f64,
    },
    /// `ln Y = (1/a) ln a - ln Z_a` with `Z_a` positive stable.
    Stable { a: f64 },
}

impl Plan {
    fn log_y<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            Plan::Product {
                log_const,
                factors,
                tail_sd,
                power,
            } => {
                let mut v = *log_const;
                for f in factors {
                    v += f.sample(rng);
                }
                if *tail_sd > 0.0 {
                    let z: f64 = StandardNormal.sample(rng);
                    v += tail_sd * z;
                }
                power * v
            }
            Plan::GammaProduct {
                log_const,
                factors,
                power,
            } => power * (log_const + factors.iter().map(|f| f.sample(rng)).sum::<f64>()),
            Plan::Stable { a } => {
                // Kanter: Z = (A(U) / E)^{(1-a)/a}
                let u: f64 = loop {
                    let u = rng.random::<f64>();
                    if u > 0.0 {
                        break u;
                    }
                };
                let e = -(1.0 - rng.random::<f64>()).ln();
                let log_z = (1.0 - a) / a * (log_kanter_a(*a, u, u, 1.0 - u) - e.ln());
                a.ln() / a - log_z
            }
        }
    }
}

fn run(plan: &Plan, count: usize, seed: u64) -> Vec<f64> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            (-plan.log_y(&mut rng)).exp()
        })
        .collect()
}

fn product_plan(p: &GenStableParams, cfg: &SampleConfig) -> (Plan, f64) {
    let (m, alpha, a) = (p.m(), p.alpha(), p.a());
    let depth = cfg.truncation_depth;
    let (mut log_const, factors, lattice, power) = match cfg.representation {
        Representation::FirstProduct => {
            let c = (m - a) / a * a.ln() + lgamma_pos(m / a);
            let ratios: f64 = (0..depth)
                .map(|n| ((m + a * n as f64) / (a + a * n as f64)).ln())
                .sum();
            let factors = (0..depth)
                .map(|n| LogBeta::new(a * (n as f64 + 1.0), alpha))
                .collect();
            (
                c + ratios,
                factors,
                Lattice {
                    kappa: a,
                    c_p: 1.0,
                    c_r: m / a,
                },
                1.0,
            )
        }
        Representation::SecondProduct => {
            let c = lgamma_pos(m) - lgamma_pos(a);
            let ratios: f64 = (0..depth)
                .map(|n| ((m + n as f64) / (a + n as f64)).ln())
                .sum();
            let factors = (0..depth)
                .map(|n| LogBeta::new(1.0 + n as f64 / a, m / a - 1.0))
                .collect();
            (
                c + ratios,
                factors,
                Lattice {
                    kappa: 1.0 / a,
                    c_p: a,
                    c_r: m,
                },
                1.0 / a,
            )
        }
        Representation::Special => unreachable!("special plans are built separately"),
    };
    let (tail_mean, tail_sd) = match cfg.tail_correction {
        TailCorrection::None => (0.0, 0.0),
        TailCorrection::MeanLog => (lattice.tail_log_mean(depth), 0.0),
        TailCorrection::Gaussian => (
            lattice.tail_log_mean(depth),
            lattice.tail_log_variance(depth).max(0.0).sqrt(),
        ),
    };
    log_const += tail_mean;
    (
        Plan::Product {
            log_const,
            factors,
            tail_sd,
            power,
        },
        power * tail_mean,
    )
}

fn special_plan(p: &GenStableParams) -> Result<Plan> {
    let (m, alpha, a) = (p.m(), p.alpha(), p.a());
    if let Some(n) = as_positive_integer(alpha) {
        // Y = (a^n Gamma_1 x Gamma_{1+1/a} x ... x Gamma_{1+(n-1)/a})^{1/a}
        let factors = (0..n).map(|i| LogGamma::new(1.0 + i as f64 / a)).collect();
        return Ok(Plan::GammaProduct {
            log_const: n as f64 * a.ln(),
            factors,
            power: 1.0 / a,
        });
    }
    if let Some(n) = as_positive_integer(m / a).filter(|&n| n >= 2) {
        // Y = Gamma_a x ... x Gamma_{a(n-1)}
        let factors = (1..n).map(|i| LogGamma::new(i as f64 * a)).collect();
        return Ok(Plan::GammaProduct {
            log_const: 0.0,
            factors,
            power: 1.0,
        });
    }
    if near(m, 1.0) {
        return Ok(Plan::Stable { a });
    }
    Err(Error::Precondition(format!(
        "no exact sampler: needs alpha in N, m / a in {{2, 3, ...}} or m = 1 (m = {m}, alpha = {alpha})"
    )))
}

/// Approximate draws of `X_{m, alpha}` from a truncated Beta product, or exact
/// draws when `representation` is `Special`.
pub fn sample(p: &GenStableParams, cfg: SampleConfig) -> Result<SampleBatch> {
    if cfg.truncation_depth == 0 {
        return Err(Error::Invalid("truncation_depth must be at least 1".into()));
    }
    let (plan, applied) = match cfg.representation {
        Representation::Special => (special_plan(p)?, 0.0),
        _ => product_plan(p, &cfg),
    };
    Ok(SampleBatch {
        values: run(&plan, cfg.count, cfg.seed),
        provenance: cfg,
        tail_log_mean_applied: applied,
    })
}

/// Exact draws of `X_{m, alpha}` for `alpha = n`, `m = a n` or `m = 1`.
pub fn sample_special(p: &GenStableParams, count: usize, seed: u64) -> Result<SampleBatch> {
    let cfg = SampleConfig {
        count,
        truncation_depth: 1,
        tail_correction: TailCorrection::None,
        seed,
        representation: Representation::Special,
    };
    sample(p, cfg)
}

/// Below this many draws the KS comparison is flagged as underpowered.
pub const MIN_POWERED_COUNT: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationReport {
    pub statistic: f64,
    pub p_value: f64,
    pub count: usize,
    pub underpowered: bool,
}

/// Two-sample KS comparison of `Y_{m, alpha}` with `Y_{alpha, 2 alpha - m} x Gamma_alpha`.
pub fn factorization_check(
    p: &GenStableParams,
    count: usize,
    seed: u64,
) -> Result<FactorizationReport> {
    let (m, alpha) = (p.m(), p.alpha());
    if m >= 2.0 * alpha || near(m, 2.0 * alpha) {
        return Err(Error::Precondition(format!(
            "factorization needs m < 2 alpha (m = {m}, alpha = {alpha})"
        )));
    }
    if count == 0 {
        return Err(Error::Invalid(
            "factorization check needs count >= 1".into(),
        ));
    }
    let q = GenStableParams::new(alpha, 2.0 * alpha - m)?;
    let cfg = |s: u64| SampleConfig::new(count, s).with_tail(TailCorrection::Gaussian);
    let left = sample(p, cfg(seed))?.reciprocals();
    let inner = sample(&q, cfg(seed ^ 0x5DEE_CE66_D1CE_5EED))?.reciprocals();
    let gamma = Plan::GammaProduct {
        log_const: 0.0,
        factors: vec![LogGamma::new(alpha)],
        power: 1.0,
    };
    let g = run(&gamma, count, seed ^ 0x2545_F491_4F6C_DD1D);
    let right: Vec<f64> = inner.iter().zip(&g).map(|(y, gi)| y / gi).collect();
    let (statistic, p_value) = ks_two_sample(&left, &right);
    Ok(FactorizationReport {
        statistic,
        p_value,
        count,
        underpowered: count < MIN_POWERED_COUNT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mellin::moment_lattice;

    fn p(m: f64, alpha: f64) -> GenStableParams {
        GenStableParams::new(m, alpha).unwrap()
    }

    fn mean_and_se(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    #[test]
    fn empty_batch() {
        let b = sample(&p(2.0, 1.0), SampleConfig::new(0, 1)).unwrap();
        assert!(b.values.is_empty());
        assert!(sample(&p(2.0, 1.0), SampleConfig::new(5, 1).with_depth(0)).is_err());
    }

    #[test]
    fn inverse_exponential_first_product() {
        let b = sample(&p(2.0, 1.0), SampleConfig::new(100_000, 7)).unwrap();
        let y = b.reciprocals();
        let (mean, se) = mean_and_se(&y);
        assert!((mean - 1.0).abs() < 4.0 * se, "{mean} {se}");
        let sq: Vec<f64> = y.iter().map(|v| (v - mean).powi(2)).collect();
        let (var, se_var) = mean_and_se(&sq);
        assert!((var - 1.0).abs() < 4.0 * se_var, "{var} {se_var}");
    }

    #[test]
    fn special_samplers() {
        // Y_{2,1} = Gamma_1
        let y = sample_special(&p(2.0, 1.0), 50_000, 3)
            .unwrap()
            .reciprocals();
        let (mean, se) = mean_and_se(&y);
        assert!((mean - 1.0).abs() < 4.0 * se);
        // E[Y^a] = Gamma(m)/Gamma(a) = 6 for (4, 2)
        let y = sample_special(&p(4.0, 2.0), 50_000, 3)
            .unwrap()
            .reciprocals();
        let ya: Vec<f64> = y.iter().map(|v| v * v).collect();
        let (mean, se) = mean_and_se(&ya);
        assert!((mean - 6.0).abs() < 4.0 * se, "{mean} {se}");
        // m = 1, alpha = 1/2: E[exp(-X)] = e^{-2}
        let x = sample_special(&p(1.0, 0.5), 50_000, 3).unwrap().values;
        let lt: Vec<f64> = x.iter().map(|v| (-v).exp()).collect();
        let (mean, se) = mean_and_se(&lt);
        assert!((mean - (-2f64).exp()).abs() < 4.0 * se, "{mean} {se}");
        assert!(matches!(
            sample_special(&p(2.5, 1.2), 10, 3),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn moments_on_every_route() {
        for &(m, alpha) in &[(3.0, 1.0), (2.4, 2.0), (1.0, 0.3), (1.8, 1.2)] {
            let q = p(m, alpha);
            let mut routes = vec![
                SampleConfig::new(40_000, 11).with_tail(TailCorrection::Gaussian),
                SampleConfig::new(40_000, 11)
                    .with_tail(TailCorrection::Gaussian)
                    .with_representation(Representation::SecondProduct),
            ];
            if special_plan(&q).is_ok() {
                routes.push(
                    SampleConfig::new(40_000, 11).with_representation(Representation::Special),
                );
            }
            for cfg in routes {
                let y = sample(&q, cfg).unwrap().reciprocals();
                for k in 1..=3u32 {
                    let e = k as f64 * q.a();
                    let powered: Vec<f64> = y.iter().map(|v| v.powf(e)).collect();
                    let (mean, se) = mean_and_se(&powered);
                    let want = moment_lattice(&q, k).value();
                    assert!(
                        (mean - want).abs() < 4.0 * se,
                        "{m} {alpha} {:?} k={k}: {mean} vs {want} (se {se})",
                        cfg.representation
                    );
                }
            }
        }
    }

    #[test]
    fn deterministic_replay() {
        let q = p(2.5, 1.2);
        let cfg = SampleConfig::new(1000, 42);
        let a = sample(&q, cfg).unwrap();
        let b = sample(&q, cfg).unwrap();
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a.values), bits(&b.values));
        let c = sample(&q, SampleConfig::new(1000, 43)).unwrap();
        assert_ne!(bits(&a.values), bits(&c.values));
        // the first draws do not depend on the batch size
        let d = sample(&q, SampleConfig::new(10, 42)).unwrap();
        assert_eq!(bits(&a.values[..10]), bits(&d.values));
    }

    #[test]
    fn tail_correction_is_a_deterministic_factor() {
        let q = p(2.5, 1.2);
        let none = sample(
            &q,
            SampleConfig::new(200, 5).with_tail(TailCorrection::None),
        )
        .unwrap();
        let mean_log = sample(&q, SampleConfig::new(200, 5)).unwrap();
        assert_eq!(none.tail_log_mean_applied, 0.0);
        let factor = mean_log.tail_log_mean_applied.exp();
        for (a, b) in none.values.iter().zip(&mean_log.values) {
            assert!((a / b / factor - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn depth_change_within_noise() {
        let q = p(2.5, 1.2);
        let logs = |d: usize| -> Vec<f64> {
            let y = sample(&q, SampleConfig::new(50_000, 9).with_depth(d))
                .unwrap()
                .reciprocals();
            y.iter().map(|v| v.ln()).collect()
        };
        let (m200, se200) = mean_and_se(&logs(200));
        let (m400, se400) = mean_and_se(&logs(400));
        assert!((m200 - m400).abs() < 3.0 * (se200 * se200 + se400 * se400).sqrt());
    }

    #[test]
    fn factorization() {
        let r = factorization_check(&p(1.5, 1.0), 50_000, 1).unwrap();
        assert!(r.p_value > 1e-3, "{r:?}");
        assert!(!r.underpowered);
        assert!(
            factorization_check(&p(1.5, 1.0), 10, 1)
                .unwrap()
                .underpowered
        );
        assert!(matches!(
            factorization_check(&p(2.0, 1.0), 100, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn names_round_trip() {
        for t in [
            TailCorrection::None,
            TailCorrection::MeanLog,
            TailCorrection::Gaussian,
        ] {
            assert_eq!(t.as_str().parse::<TailCorrection>().unwrap(), t);
        }
        for r in [
            Representation::FirstProduct,
            Representation::SecondProduct,
            Representation::Special,
        ] {
            assert_eq!(r.as_str().parse::<Representation>().unwrap(), r);
        }
    }
}
