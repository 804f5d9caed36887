//! Numeric substrate shared by the solver, asymptotics and verification
//! layers: multiprecision values, Chebyshev polynomials, golden-section
//! extremum search, adaptive quadrature and Γ evaluation.

pub mod cheb;
pub mod complex;
pub mod extremum;
pub mod gamma;
pub mod mp;
pub mod quad;

pub use cheb::ChebPoly;
pub use complex::MpComplex;
pub use extremum::{find_extremum, golden_max};
pub use gamma::{gamma_half_integer, gamma_real};
pub use mp::{mp, MpValue};
pub use quad::{integrate, QuadEstimate, Quadrature};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("malformed decimal number: {0:?}")]
    MalformedNumber(String),
    #[error("mantissa width {bits} below minimum {min}")]
    PrecisionTooSmall { bits: u32, min: u32 },
    #[error("bracket is not a valid extremum bracket: f(mid) must strictly exceed (maximum) or undercut (minimum) both ends")]
    InvalidBracket,
    #[error("extremum bracket did not shrink to tolerance; candidates t={0} and t={1}")]
    NotUnimodal(String, String),
    #[error("quadrature subdivision budget exhausted; partial estimate {partial} with error bound {bound}")]
    QuadratureBudget { partial: f64, bound: f64 },
    #[error("gamma pole at {0}")]
    GammaPole(f64),
    #[error("evaluation at a branch point: {0}")]
    BranchPoint(String),
}
