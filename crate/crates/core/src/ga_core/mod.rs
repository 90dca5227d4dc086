//! Dense multivector arithmetic over `R_{p,q,r}` with complex scalars.
//!
//! Blades are indexed by bitmask: bit `i` set means generator `e_{i+1}` is
//! present, so index 0 is the scalar and index `2^n - 1` the pseudoscalar.
//! Coefficients are complex throughout because the spectral machinery works
//! over ℂ; "real" inputs and outputs are enforced by tolerance checks, never
//! by a separate storage type.

mod multivector;
mod parse;
mod signature;
mod tolerance;

pub use multivector::Multivector;
pub use parse::{blade_name, parse_multivector};
pub use signature::{Signature, DEFAULT_DIM_CAP};
pub use tolerance::Tolerance;

use thiserror::Error;

/// Errors raised by core multivector arithmetic.
#[derive(Debug, Clone, Error)]
pub enum GaError {
    #[error("signature mismatch: {0} vs {1}")]
    SignatureMismatch(Signature, Signature),
    #[error("dimension p+q+r = {n} exceeds the cap {cap} (dense storage is 2^n)")]
    DimensionTooLarge { n: usize, cap: usize },
    #[error("p + q + r must be at least 1")]
    EmptyAlgebra,
    #[error("coefficient vector has length {got}, expected {expected}")]
    CoefficientLength { got: usize, expected: usize },
    #[error("generator index {index} out of range 1..={dim}")]
    GeneratorOutOfRange { index: usize, dim: usize },
    #[error("multivector is not invertible (zero divisor; solve residual {residual:.3e})")]
    NonInvertible { residual: f64 },
    #[error("parse error at byte {position}: {message}")]
    Parse { message: String, position: usize },
}
