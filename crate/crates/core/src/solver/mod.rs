//! Minimax solver: reduction to a single-interval weighted Chebyshev
//! problem on `[a², 1]` and its solution by multi-point Remez exchange.
//!
//! Two problem kinds share the machinery:
//!
//! - `WeightedSgn`: sgn(x) on `[-1,-a] ∪ [a,1]` approximated by odd rationals
//!   Q(x²)/x^(2k-1) with deg Q ≤ m+k-1. After t = x² the residual is
//!   1 - Q(t)·t^(1/2-k).
//! - `UnweightedAbsP`: |x|^p on the same set by even polynomials Q(x²) of
//!   degree n in x. The residual is t^(p/2) - Q(t).

mod laurent;
mod linsys;
mod oracle;
mod remez;

pub use laurent::{expand_rational, RationalExpansion};
pub use oracle::grid_oracle;
pub(crate) use remez::chebyshev_nodes as probe_nodes;
pub use remez::remez_solve;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{ChebPoly, KernelError, MpValue};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProblemKind {
    /// k ≥ 0 pole order parameter at the origin, m ≥ 1 at infinity.
    WeightedSgn { k: u32, m: u32 },
    /// p > 0 and not an even integer; n is the even polynomial degree.
    UnweightedAbsP { p: f64, n: u32 },
}

/// One extremal problem instance plus numerical options.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub a: MpValue,
    pub mantissa_bits: u32,
    pub level_tol: f64,
    pub max_iterations: usize,
    pub allow_extreme_a: bool,
}

pub const DEFAULT_LEVEL_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITERATIONS: usize = 60;
const GUARD_BITS: u32 = 96;

/// Working-precision rule: enough bits that the expected error level
/// ((1-a)/(1+a))^m stays far above the rounding floor.
pub fn default_mantissa_bits(growth_exponent: u32, a: f64) -> u32 {
    let per_step = ((1.0 + a) / (1.0 - a)).log2().max(0.0);
    (growth_exponent as f64 * per_step).ceil() as u32 + GUARD_BITS
}

impl ProblemSpec {
    pub fn weighted_sgn(k: u32, m: u32, a: f64) -> Result<Self, SolverError> {
        let bits = default_mantissa_bits(m, a);
        Self::build(ProblemKind::WeightedSgn { k, m }, a, bits)
    }

    pub fn unweighted_abs_p(p: f64, n: u32, a: f64) -> Result<Self, SolverError> {
        let bits = default_mantissa_bits(n / 2 + 1, a);
        Self::build(ProblemKind::UnweightedAbsP { p, n }, a, bits)
    }

    fn build(kind: ProblemKind, a: f64, bits: u32) -> Result<Self, SolverError> {
        let spec = ProblemSpec {
            kind,
            a: MpValue::from_f64(a, bits),
            mantissa_bits: bits,
            level_tol: DEFAULT_LEVEL_TOL,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            allow_extreme_a: false,
        };
        spec.validate_domain()?;
        Ok(spec)
    }

    pub fn with_mantissa_bits(mut self, bits: u32) -> Self {
        self.mantissa_bits = bits;
        self.a = self.a.with_prec(bits);
        self
    }

    /// Replaces `a` by an exact multiprecision value (used where a derived
    /// parameter like 2√a/(1+a) must not round through a double).
    pub fn with_a_value(mut self, a: MpValue) -> Self {
        self.a = a.with_prec(self.mantissa_bits);
        self
    }

    pub fn with_level_tol(mut self, tol: f64) -> Self {
        self.level_tol = tol;
        self
    }

    pub fn with_max_iterations(mut self, iters: usize) -> Self {
        self.max_iterations = iters;
        self
    }

    pub fn with_allow_extreme_a(mut self, allow: bool) -> Self {
        self.allow_extreme_a = allow;
        self
    }

    /// Degree budget N of Q; the alternation set has N+2 points.
    pub fn q_degree(&self) -> usize {
        match self.kind {
            ProblemKind::WeightedSgn { k, m } => (m + k - 1) as usize,
            ProblemKind::UnweightedAbsP { n, .. } => (n / 2) as usize,
        }
    }

    /// Hard domain constraints, enforced at construction.
    fn validate_domain(&self) -> Result<(), SolverError> {
        let a = self.a.to_f64();
        if !(a > 0.0 && a < 1.0) {
            return Err(SolverError::InvalidSpec(format!(
                "a must lie strictly inside (0,1), got {a}"
            )));
        }
        match self.kind {
            ProblemKind::WeightedSgn { m, .. } => {
                if m < 1 {
                    return Err(SolverError::InvalidSpec("m must be at least 1".into()));
                }
            }
            ProblemKind::UnweightedAbsP { p, n } => {
                #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail too
                if !(p > 0.0) {
                    return Err(SolverError::InvalidSpec(format!(
                        "p must be positive, got {p}"
                    )));
                }
                if p.fract() == 0.0 && (p as u64).is_multiple_of(2) {
                    return Err(SolverError::InvalidSpec(format!(
                        "p must not be an even integer, got {p}"
                    )));
                }
                if n < 2 || n % 2 != 0 {
                    return Err(SolverError::InvalidSpec(format!(
                        "polynomial degree n must be even and at least 2, got {n}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Full solve-time validation; the near-degenerate a guard can be
    /// overridden with [`Self::with_allow_extreme_a`].
    pub fn validate(&self) -> Result<(), SolverError> {
        self.validate_domain()?;
        let a = self.a.to_f64();
        if !self.allow_extreme_a && (a <= 0.01 || a >= 0.99) {
            return Err(SolverError::DegenerateA { a });
        }
        Ok(())
    }
}

/// Weight factor applied to Q(t) in the reduced residual.
#[derive(Debug, Clone)]
enum WeightFn {
    /// t^(1/2 - k); k = 0 gives √t, k ≥ 1 divides by t^(k-1/2).
    HalfPower {
        k: u32,
    },
    One,
}

/// Function being approximated on `[a², 1]`.
#[derive(Debug, Clone)]
enum TargetFn {
    One,
    SqrtT,
    /// t^(p/2) for general positive non-even p.
    PowHalf {
        half_p: MpValue,
    },
}

/// The reduced single-interval weighted Chebyshev problem.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub lo: MpValue,
    pub hi: MpValue,
    pub degree: usize,
    weight: WeightFn,
    target: TargetFn,
}

impl Reduction {
    pub fn weight(&self, t: &MpValue) -> MpValue {
        match &self.weight {
            WeightFn::One => MpValue::from_u32(1, t.mantissa_bits()),
            WeightFn::HalfPower { k } => {
                let sqrt = t.sqrt();
                if *k == 0 {
                    sqrt
                } else {
                    &sqrt / &t.powi(*k as i32)
                }
            }
        }
    }

    pub fn target(&self, t: &MpValue) -> MpValue {
        match &self.target {
            TargetFn::One => MpValue::from_u32(1, t.mantissa_bits()),
            TargetFn::SqrtT => t.sqrt(),
            TargetFn::PowHalf { half_p } => t.pow(half_p),
        }
    }

    /// Residual g(t) - w(t)·Q(t).
    pub fn residual(&self, q: &ChebPoly, t: &MpValue) -> MpValue {
        &self.target(t) - &(&self.weight(t) * &q.eval(t))
    }
}

/// Rewrites the two-interval problem over x as the equivalent weighted
/// problem for Q on `[a², 1]`; the suprema agree point by point under t = x².
pub fn reduce_to_interval(spec: &ProblemSpec) -> Result<Reduction, SolverError> {
    spec.validate()?;
    let bits = spec.mantissa_bits;
    let a = spec.a.with_prec(bits);
    let lo = &a * &a;
    let hi = MpValue::from_u32(1, bits);
    let (weight, target) = match spec.kind {
        ProblemKind::WeightedSgn { k, .. } => (WeightFn::HalfPower { k }, TargetFn::One),
        ProblemKind::UnweightedAbsP { p, .. } => {
            if p == 1.0 {
                (WeightFn::One, TargetFn::SqrtT)
            } else {
                (
                    WeightFn::One,
                    TargetFn::PowHalf {
                        half_p: MpValue::from_f64(p / 2.0, bits),
                    },
                )
            }
        }
    };
    Ok(Reduction {
        lo,
        hi,
        degree: spec.q_degree(),
        weight,
        target,
    })
}

/// One levelled alternation record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlternationPoint {
    pub t: MpValue,
    pub x: MpValue,
    pub residual: MpValue,
    pub sign: i8,
}

/// Converged solver output: the equioscillation certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquiSolution {
    /// Minimax error (midpoint of the levelled deviations).
    pub l: MpValue,
    /// N+2 alternation records, ascending in t.
    pub alternation: Vec<AlternationPoint>,
    /// Chebyshev representation of Q on `[a², 1]`.
    pub q: ChebPoly,
    pub iterations: usize,
    /// Relative spread (max-min)/max of |residual| over the alternation.
    pub levelness: MpValue,
    /// Levelled deviation |h| per exchange iteration (nondecreasing).
    pub deviation_history: Vec<f64>,
}

/// Alternation abscissas mapped back to x = √t, checked against the
/// endpoint-membership property (x first = a, x last = 1).
pub fn alternation_in_x(sol: &EquiSolution) -> Result<Vec<MpValue>, SolverError> {
    let xs: Vec<MpValue> = sol.alternation.iter().map(|p| p.x.clone()).collect();
    let a = sol.q.lo.sqrt();
    let prec = a.mantissa_bits();
    // Extremum location is accurate to ~2^(-p/2) in t; allow a wide margin.
    let tol = MpValue::from_f64(2f64.powi(-(prec as i32) / 2 + 16), prec);
    let first = xs.first().expect("nonempty alternation");
    let last = xs.last().expect("nonempty alternation");
    let one = MpValue::from_u32(1, prec);
    if (first - &a).abs() > (&tol * &a) || (last - &one).abs() > tol {
        return Err(SolverError::EndpointAnomaly {
            x_first: first.to_f64(),
            x_last: last.to_f64(),
        });
    }
    Ok(xs)
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid problem: {0}")]
    InvalidSpec(String),
    #[error("a = {a} is outside [0.01, 0.99]; the problem degenerates there (override with allow_extreme_a)")]
    DegenerateA { a: f64 },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("levelled exchange system is singular")]
    SingularSystem,
    #[error(
        "no convergence after {iterations} exchanges; levelness {levelness:e} vs tolerance {tol:e}"
    )]
    NonConvergence {
        iterations: usize,
        levelness: f64,
        tol: f64,
    },
    #[error("working precision {have} bits cannot resolve the error level; retry with at least {suggest} bits")]
    PrecisionInsufficient { have: u32, suggest: u32 },
    #[error("operation requires a {0} problem")]
    WrongKind(&'static str),
    #[error(
        "alternation endpoints x_first={x_first}, x_last={x_last} do not include the interval ends"
    )]
    EndpointAnomaly { x_first: f64, x_last: f64 },
    #[error("discrete exchange failed to settle on grid of {grid} nodes")]
    OracleStalled { grid: usize },
    #[error("grid must hold at least N+2 = {need} nodes, got {got}")]
    GridTooSmall { need: usize, got: usize },
}
