//! Numerical integration: tanh-sinh, adaptive Gauss-Kronrod and Gauss-Jacobi rules.

mod jacobi;
mod kronrod;
mod tanh_sinh;

pub use jacobi::{gauss_jacobi, GaussRule};
pub use kronrod::gauss_kronrod;
pub use tanh_sinh::{half_line, tanh_sinh, tanh_sinh_with_distance};

/// Value of a quadrature with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}
