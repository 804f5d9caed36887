//! Chebyshev-basis polynomials on an explicit interval.

use serde::{Deserialize, Serialize};

use super::mp::MpValue;

/// Polynomial `sum_j c_j T_j(u(t))` where `u` maps `[lo, hi]` affinely onto
/// `[-1, 1]`. Degree is `coeffs.len() - 1` when the leading coefficient is
/// nonzero.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChebPoly {
    pub lo: MpValue,
    pub hi: MpValue,
    pub coeffs: Vec<MpValue>,
}

impl ChebPoly {
    pub fn new(lo: MpValue, hi: MpValue, coeffs: Vec<MpValue>) -> Self {
        assert!(lo < hi, "interval must satisfy lo < hi");
        assert!(!coeffs.is_empty(), "at least one coefficient required");
        ChebPoly { lo, hi, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn working_prec(&self) -> u32 {
        self.coeffs
            .iter()
            .map(|c| c.mantissa_bits())
            .chain([self.lo.mantissa_bits(), self.hi.mantissa_bits()])
            .max()
            .unwrap()
    }

    /// Maps `t` to the reference variable `u = (2t - lo - hi) / (hi - lo)`.
    pub fn to_reference(&self, t: &MpValue) -> MpValue {
        let two = MpValue::from_u32(2, t.mantissa_bits().max(self.working_prec()));
        (&(&(&two * t) - &self.lo) - &self.hi) / (&self.hi - &self.lo)
    }

    /// Whether `t` lies inside the polynomial's own interval. Evaluation
    /// outside is permitted (it computes the analytic continuation), but
    /// callers crossing the boundary should check this flag deliberately.
    pub fn contains(&self, t: &MpValue) -> bool {
        *t >= self.lo && *t <= self.hi
    }

    /// Clenshaw backward recurrence. Arguments outside `[lo, hi]` evaluate
    /// the analytic continuation; see [`Self::contains`].
    pub fn eval(&self, t: &MpValue) -> MpValue {
        let u = self.to_reference(t);
        self.eval_reference(&u)
    }

    /// Clenshaw recurrence in the reference variable `u`.
    pub fn eval_reference(&self, u: &MpValue) -> MpValue {
        let prec = self.working_prec().max(u.mantissa_bits());
        let n = self.coeffs.len();
        if n == 1 {
            return self.coeffs[0].with_prec(prec);
        }
        let two_u = &MpValue::from_u32(2, prec) * u;
        let mut b2 = MpValue::zero(prec);
        let mut b1 = self.coeffs[n - 1].clone();
        for c in self.coeffs[1..n - 1].iter().rev() {
            let next = &(&(&two_u * &b1) - &b2) + c;
            b2 = b1;
            b1 = next;
        }
        &(&(u * &b1) - &b2) + &self.coeffs[0]
    }

    /// Derivative with respect to `t`, as a Chebyshev series on the same
    /// interval (standard descending recurrence, scaled by `2/(hi-lo)`).
    pub fn derivative(&self) -> ChebPoly {
        let prec = self.working_prec();
        let n = self.coeffs.len();
        if n == 1 {
            return ChebPoly::new(self.lo.clone(), self.hi.clone(), vec![MpValue::zero(prec)]);
        }
        // d_{k-1} = d_{k+1} + 2k c_k, with the k=0 entry halved at the end.
        let mut d = vec![MpValue::zero(prec); n + 1];
        for k in (1..n).rev() {
            let two_k = MpValue::from_u32(2 * k as u32, prec);
            d[k - 1] = &d[k + 1] + &(&two_k * &self.coeffs[k]);
        }
        d.truncate(n - 1);
        let half = MpValue::from_f64(0.5, prec);
        d[0] = &d[0] * &half;
        let scale = &MpValue::from_u32(2, prec) / &(&self.hi - &self.lo);
        let coeffs = d.iter().map(|c| c * &scale).collect();
        ChebPoly::new(self.lo.clone(), self.hi.clone(), coeffs)
    }

    /// Monomial coefficients in `t` (ascending powers), exact at working
    /// precision up to rounding. Conversion conditions like 4^degree, which
    /// the multiprecision substrate absorbs at the degrees used here.
    pub fn to_monomial(&self) -> Vec<MpValue> {
        let prec = self.working_prec();
        let n = self.coeffs.len();
        // First accumulate monomial coefficients in u.
        // T_0 = 1, T_1 = u, T_{j+1} = 2u T_j - T_{j-1}.
        let zero = MpValue::zero(prec);
        let mut acc = vec![zero.clone(); n];
        let mut t_prev = vec![zero.clone(); n];
        let mut t_cur = vec![zero.clone(); n];
        t_prev[0] = MpValue::from_u32(1, prec);
        if n > 1 {
            t_cur[1] = MpValue::from_u32(1, prec);
        }
        let two = MpValue::from_u32(2, prec);
        for (j, c) in self.coeffs.iter().enumerate() {
            let row = if j == 0 { &t_prev } else { &t_cur };
            for (a, r) in acc.iter_mut().zip(row.iter()) {
                *a = &*a + &(c * r);
            }
            if j >= 1 && j + 1 < n {
                let mut t_next = vec![zero.clone(); n];
                for i in 0..n {
                    let shifted = if i == 0 {
                        zero.clone()
                    } else {
                        &two * &t_cur[i - 1]
                    };
                    t_next[i] = &shifted - &t_prev[i];
                }
                t_prev = std::mem::replace(&mut t_cur, t_next);
            }
        }
        // Substitute u = alpha*t + beta, alpha = 2/(hi-lo), beta = -(lo+hi)/(hi-lo),
        // by Horner composition: p(u) = sum acc_j u^j.
        let alpha = &MpValue::from_u32(2, prec) / &(&self.hi - &self.lo);
        let beta = &(&self.lo + &self.hi).neg() / &(&self.hi - &self.lo);
        let mut result = vec![zero.clone(); n];
        for c in acc.iter().rev() {
            // result = result * (alpha t + beta) + c
            let mut next = vec![zero.clone(); n];
            for i in 0..n {
                let from_beta = &result[i] * &beta;
                let from_alpha = if i == 0 {
                    zero.clone()
                } else {
                    &result[i - 1] * &alpha
                };
                next[i] = &from_beta + &from_alpha;
            }
            next[0] = &next[0] + c;
            result = next;
        }
        result
    }
}
