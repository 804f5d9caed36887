//! Laurent coefficients of the odd rational approximant.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::kernel::MpValue;

use super::{EquiSolution, ProblemKind, ProblemSpec, SolverError};

/// f(x) = Σ c_j x^j over odd exponents j ∈ {-(2k-1), …, 2m-1}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RationalExpansion {
    pub laurent_coeffs: BTreeMap<i64, MpValue>,
}

impl RationalExpansion {
    /// Evaluates f at a nonzero x.
    pub fn eval(&self, x: &MpValue) -> MpValue {
        let bits = x.mantissa_bits();
        let mut acc = MpValue::zero(bits);
        for (&j, c) in &self.laurent_coeffs {
            acc = &acc + &(c * &x.powi(j as i32));
        }
        acc
    }

    /// All exponents are odd, so f(-x) = -f(x) holds identically.
    pub fn is_odd(&self) -> bool {
        self.laurent_coeffs.keys().all(|j| j.rem_euclid(2) == 1)
    }
}

/// Expands the solved Q(x²)/x^(2k-1) into Laurent form: the monomial
/// coefficient of t^j maps to exponent 2j - (2k-1) in x.
pub fn expand_rational(
    sol: &EquiSolution,
    spec: &ProblemSpec,
) -> Result<RationalExpansion, SolverError> {
    let ProblemKind::WeightedSgn { k, .. } = spec.kind else {
        return Err(SolverError::WrongKind("weighted sgn"));
    };
    let mono = sol.q.to_monomial();
    let shift = 2 * k as i64 - 1;
    let laurent_coeffs = mono
        .into_iter()
        .enumerate()
        .map(|(j, c)| (2 * j as i64 - shift, c))
        .collect();
    Ok(RationalExpansion { laurent_coeffs })
}
