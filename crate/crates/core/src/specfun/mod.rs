//! Scalar special functions.

pub mod barnes;
pub mod bessel;
pub mod gamma;
pub mod kratzel;
pub mod zeta;

pub use barnes::{log_double_gamma, DoubleGamma, DoubleGammaArgs};
pub use bessel::{
    bessel, bessel_j, bessel_jy, bessel_jy_modulus_sq, bessel_k, bessel_y, log_bessel_k,
    BesselKind, BesselQuery, JyValues,
};
pub(crate) use gamma::{digamma_pos, lgamma_pos, trigamma_pos};
pub use gamma::{
    digamma_trigamma, gamma, lgamma_complex, lgamma_signed, ln_factorial, log_gamma, rgamma,
    sin_pi, EULER_GAMMA,
};
pub use kratzel::kratzel;
pub use zeta::{bernoulli, bernoulli_poly, hurwitz_zeta};
