//! Minimax approximation of sgn(x) on `[-1,-a] ∪ [a,1]` by odd rational
//! functions with prescribed poles (order 2k-1 at the origin, 2m-1 at
//! infinity), and of |x|^p by even polynomials on the same set.
//!
//! The crate has four layers:
//!
//! - [`kernel`]: multiprecision values, Chebyshev polynomials, golden-section
//!   extremum search, adaptive quadrature, Γ evaluation.
//! - [`solver`]: reduction of both problems to a single-interval weighted
//!   Chebyshev approximation on `[a², 1]` and its solution by Remez exchange,
//!   with an independent discrete-grid oracle.
//! - [`asympt`]: closed-form limit constants, the error↔parameter bridge
//!   B = arccosh(1/L), and the solvable two-slit model.
//! - [`verify`]: executable structural checks (equioscillation, symmetry,
//!   diagonal reduction, area identity, half-strip curve equation) and
//!   convergence tables against the predicted limits.

pub mod asympt;
pub mod kernel;
pub mod solver;
pub mod verify;

pub use kernel::{ChebPoly, MpComplex, MpValue};
pub use solver::{EquiSolution, ProblemKind, ProblemSpec, RationalExpansion};
pub use verify::{CheckReport, ConvergenceTable};
