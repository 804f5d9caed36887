//! Closed-form evaluators: the limit constant of the normalized error, the
//! error↔parameter bridge B = arccosh(1/L) and its large-m surrogate, the
//! diagonal reduction, the unweighted-problem asymptote, the weighted limit
//! constant in |x|^p normalization, and the solvable two-slit model.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{gamma_half_integer, gamma_real, KernelError, MpComplex, MpValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaId {
    Eq01,
    Eq41B,
    Eq32BFromL,
    Yk,
    Eq62Diag,
    Eq6215Map,
    App1En,
    EstarConst,
    ModelC,
    ModelB,
    ModelBQ,
    ModelPhi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReportValue {
    Real(f64),
    Complex { re: f64, im: f64 },
}

/// Evaluation record: which formula, with which inputs, giving what value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub formula_id: FormulaId,
    pub inputs: BTreeMap<String, f64>,
    pub value: ReportValue,
}

impl AsymptoticReport {
    pub fn new<I>(formula_id: FormulaId, inputs: I, value: ReportValue) -> Self
    where
        I: IntoIterator<Item = (&'static str, f64)>,
    {
        AsymptoticReport {
            formula_id,
            inputs: inputs.into_iter().map(|(k, v)| (k.to_owned(), v)).collect(),
            value,
        }
    }
}

#[derive(Debug, Error)]
pub enum AsymptError {
    #[error("domain violation: {0}")]
    Domain(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

fn require(cond: bool, msg: &str) -> Result<(), AsymptError> {
    if cond {
        Ok(())
    } else {
        Err(AsymptError::Domain(msg.to_owned()))
    }
}

fn check_a(a: f64) -> Result<(), AsymptError> {
    require(a > 0.0 && a < 1.0, "a must lie in (0,1)")
}

/// Γ at a positive argument, routed through the exact half-integer /
/// integer values when the argument is one, else the Lanczos path.
fn gamma_positive(x: f64) -> Result<f64, AsymptError> {
    require(x > 0.0, "gamma argument must be positive here")?;
    let twice = 2.0 * x;
    if twice.fract() == 0.0 && twice <= 2.0 * 170.0 {
        let n = twice as u64;
        if n % 2 == 1 {
            // x = k + 1/2
            return Ok(gamma_half_integer(((n - 1) / 2) as u32, 96).to_f64());
        }
        // x integer: Γ(x) = (x-1)!
        let mut acc = 1.0f64;
        for i in 2..(n / 2) {
            acc *= i as f64;
        }
        return Ok(acc);
    }
    Ok(gamma_real(x)?)
}

/// Limit constant of the normalized weighted error for fixed k:
/// (2/π) ((1-a²)/(2a))^(k+1/2) Γ(k+1/2).
pub fn limit_rhs_eq01(k: u32, a: f64) -> Result<f64, AsymptError> {
    check_a(a)?;
    let base = (1.0 - a * a) / (2.0 * a);
    let gamma = gamma_half_integer(k, 96).to_f64();
    Ok(2.0 / std::f64::consts::PI * base.powf(k as f64 + 0.5) * gamma)
}

/// L ((1+a)/(1-a))^(m-1/2) (2m-1)^(k+1/2), in log space at working
/// precision so that huge prefactors never overflow against a tiny L.
pub fn normalized_error(k: u32, m: u32, a: &MpValue, l: &MpValue) -> MpValue {
    let bits = l.mantissa_bits().max(a.mantissa_bits());
    let a = a.with_prec(bits);
    let one = MpValue::from_u32(1, bits);
    let half = MpValue::from_f64(0.5, bits);
    let growth = (&(&one + &a) / &(&one - &a)).ln();
    let m_half = &MpValue::from_u32(m, bits) - &half;
    let k_half = &MpValue::from_u32(k, bits) + &half;
    let poly = MpValue::from_u32(2 * m - 1, bits).ln();
    let log_total = &(&l.ln() + &(&m_half * &growth)) + &(&k_half * &poly);
    log_total.exp()
}

/// B = arccosh(1/L), the strip parameter corresponding to error L.
pub fn b_from_error(l: &MpValue) -> Result<MpValue, AsymptError> {
    let bits = l.mantissa_bits();
    let one = MpValue::from_u32(1, bits);
    require(
        l > &MpValue::zero(bits) && l < &one,
        "error level must lie in (0,1)",
    )?;
    Ok((&one / l).acosh())
}

/// Y_k = ln Γ(k+1/2) - (k+1/2) ln 2 - ln π (integer k only).
pub fn y_k_closed(k: u32) -> f64 {
    let ln_gamma = gamma_half_integer(k, 128).ln().to_f64();
    ln_gamma - (k as f64 + 0.5) * std::f64::consts::LN_2 - std::f64::consts::PI.ln()
}

/// Large-m surrogate for B:
/// (m-1/2) ln((1+a)/(1-a)) + (k+1/2) ln(2m-1) + (k+1/2) ln(a/(1-a²)) - Y_k.
pub fn b_asymptote(k: u32, m: u32, a: f64) -> Result<f64, AsymptError> {
    check_a(a)?;
    require(m >= 1, "m must be at least 1")?;
    let k_half = k as f64 + 0.5;
    Ok((m as f64 - 0.5) * ((1.0 + a) / (1.0 - a)).ln()
        + k_half * ((2 * m - 1) as f64).ln()
        + k_half * (a / (1.0 - a * a)).ln()
        - y_k_closed(k))
}

/// Diagonal parameter map a ↦ 2√a/(1+a).
pub fn diag_map(a: f64) -> f64 {
    2.0 * a.sqrt() / (1.0 + a)
}

/// Multiprecision diagonal map, for feeding derived instances exactly.
pub fn diag_map_mp(a: &MpValue) -> MpValue {
    let bits = a.mantissa_bits();
    let two = MpValue::from_u32(2, bits);
    let one = MpValue::from_u32(1, bits);
    &(&two * &a.sqrt()) / &(&one + a)
}

/// Limit constant of the diagonal normalization
/// L^m_m(a)((1+√a)/(1-√a))^(2m-1)(2m-1)^(1/2): (1-a)/√(π √a (1+a)).
pub fn diag_limit_rhs(a: f64) -> Result<f64, AsymptError> {
    check_a(a)?;
    Ok((1.0 - a) / (std::f64::consts::PI * a.sqrt() * (1.0 + a)).sqrt())
}

/// Unweighted asymptote for E_n(p,a) with s = -p/2, l = n/2:
/// a^(-s-1) l^(s-1)/|Γ(s)| ((1-a)/(1+a))^(l+1) (1+a)²/2.
pub fn app1_en_asymptote(p: f64, a: f64, n: u32) -> Result<f64, AsymptError> {
    check_a(a)?;
    require(p > 0.0, "p must be positive")?;
    require(
        !(p.fract() == 0.0 && (p as u64).is_multiple_of(2)),
        "p must not be an even integer",
    )?;
    require(
        n >= 2 && n.is_multiple_of(2),
        "n must be even and at least 2",
    )?;
    let s = -p / 2.0;
    let l = (n / 2) as f64;
    // Reflection: |Γ(-p/2)| = π / (|sin(πp/2)| Γ(p/2+1)); the sine factor
    // is 1 at odd p.
    let sin_factor = (std::f64::consts::PI * p / 2.0).sin().abs();
    let abs_gamma_s = std::f64::consts::PI / (sin_factor * gamma_positive(p / 2.0 + 1.0)?);
    Ok(a.powf(-s - 1.0) * l.powf(s - 1.0) / abs_gamma_s
        * ((1.0 - a) / (1.0 + a)).powf(l + 1.0)
        * (1.0 + a).powi(2)
        / 2.0)
}

/// Limit constant of ((1+a)/(1-a))^(n/2+1) n^(p/2+1) E*_n(p,a):
/// ((1+a)²/a)^(p/2+1) c(p) with c(p) = (2/π) 2^(-p/2-1) Γ(p/2+1).
pub fn estar_limit_const(p: f64, a: f64) -> Result<f64, AsymptError> {
    check_a(a)?;
    require(p > 0.0, "p must be positive")?;
    require(
        !(p.fract() == 0.0 && (p as u64).is_multiple_of(2)),
        "p must not be an even integer",
    )?;
    let half_p = p / 2.0;
    let c_p = 2.0 / std::f64::consts::PI * 2f64.powf(-half_p - 1.0) * gamma_positive(half_p + 1.0)?;
    Ok(((1.0 + a) * (1.0 + a) / a).powf(half_p + 1.0) * c_p)
}

/// Pole-order or fixed-ratio parametrization of the two-slit model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelMode {
    /// Fixed pole parameter k ≥ 1.
    PoleOrder { k: u32 },
    /// Fixed ratio k = q·m.
    Ratio { q: u32 },
}

/// Validated slit-model instance together with its derived critical point
/// and critical value (a < c < 1, B > 0).
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub mode: ModelMode,
    pub m: u32,
    pub a: f64,
    pub c: f64,
    pub b: f64,
}

impl ModelParams {
    pub fn pole_order(k: u32, m: u32, a: f64) -> Result<Self, AsymptError> {
        let c = model_critical_point(k, m, a)?;
        let b = model_b(k, m, a)?;
        Self::finish(ModelMode::PoleOrder { k }, m, a, c, b)
    }

    pub fn ratio(q: u32, m: u32, a: f64) -> Result<Self, AsymptError> {
        require(q >= 1, "q must be at least 1")?;
        let c = model_critical_point(q * m, m, a)?;
        let b = model_b_q(q, m, a)?;
        Self::finish(ModelMode::Ratio { q }, m, a, c, b)
    }

    fn finish(mode: ModelMode, m: u32, a: f64, c: f64, b: f64) -> Result<Self, AsymptError> {
        require(a < c && c < 1.0, "critical point must satisfy a < c < 1")?;
        require(b > 0.0, "critical value must be positive")?;
        Ok(ModelParams { mode, m, a, c, b })
    }
}

/// Critical point of the slit-model potential: c = √((m a² + k a)/(m + k a)).
/// For k = 0 this degenerates to c = a (the model itself needs k ≥ 1).
pub fn model_critical_point(k: u32, m: u32, a: f64) -> Result<f64, AsymptError> {
    check_a(a)?;
    require(m >= 1, "m must be at least 1")?;
    let (kf, mf) = (k as f64, m as f64);
    Ok(((mf * a * a + kf * a) / (mf + kf * a)).sqrt())
}

/// Critical value B = k ln((c+a)/(c-a)) + m ln((1+c)/(1-c)), k ≥ 1.
pub fn model_b(k: u32, m: u32, a: f64) -> Result<f64, AsymptError> {
    require(k >= 1, "slit model needs k >= 1 so that c > a strictly")?;
    let c = model_critical_point(k, m, a)?;
    Ok(k as f64 * ((c + a) / (c - a)).ln() + m as f64 * ((1.0 + c) / (1.0 - c)).ln())
}

/// Fixed-ratio mode k = qm: B = m (q ln((c+a)/(c-a)) + ln((1+c)/(1-c)))
/// with the m-independent c = √((a² + qa)/(1 + qa)).
pub fn model_b_q(q: u32, m: u32, a: f64) -> Result<f64, AsymptError> {
    check_a(a)?;
    require(q >= 1, "q must be at least 1")?;
    require(m >= 1, "m must be at least 1")?;
    let qf = q as f64;
    let c = ((a * a + qf * a) / (1.0 + qf * a)).sqrt();
    Ok(m as f64 * (qf * ((c + a) / (c - a)).ln() + ((1.0 + c) / (1.0 - c)).ln()))
}

/// Displayed truncation of the model's large-m expansion:
/// m ln((1+a)/(1-a)) + k ln(2m) + k ln(2a/(1-a²)) + k - k ln k.
pub fn model_b_asymptote(k: u32, m: u32, a: f64) -> Result<f64, AsymptError> {
    check_a(a)?;
    require(k >= 1, "expansion is stated for k >= 1")?;
    require(m >= 1, "m must be at least 1")?;
    let (kf, mf) = (k as f64, m as f64);
    Ok(mf * ((1.0 + a) / (1.0 - a)).ln()
        + kf * (2.0 * mf).ln()
        + kf * (2.0 * a / (1.0 - a * a)).ln()
        + kf
        - kf * kf.ln())
}

/// Slit-model map φ(z) = k Log((a+z)/(a-z)) + m Log((1+z)/(1-z)),
/// principal branches, for z in the closed upper half-plane away from the
/// branch points ±a and ±1. Satisfies φ(0) = 0 and Im φ ∈ [0, (k+m)π].
pub fn model_phi(z: &MpComplex, k: u32, m: u32, a: &MpValue) -> Result<MpComplex, AsymptError> {
    let bits = z.re.mantissa_bits().max(a.mantissa_bits());
    require(
        !z.im.is_sign_negative() || z.im.is_zero(),
        "z must lie in the closed upper half-plane",
    )?;
    let one = MpValue::from_u32(1, bits);
    if z.im.is_zero() {
        let re = z.re.abs();
        if re == *a || re == one {
            return Err(AsymptError::Kernel(KernelError::BranchPoint(format!(
                "z = {}",
                z.re.to_f64()
            ))));
        }
    }
    let a_c = MpComplex::from_real(a.with_prec(bits));
    let one_c = MpComplex::from_real(one);
    let first = boundary_normalized(a_c.add(z).div(&a_c.sub(z)));
    let second = boundary_normalized(one_c.add(z).div(&one_c.sub(z)));
    let k_mp = MpValue::from_u32(k, bits);
    let m_mp = MpValue::from_u32(m, bits);
    Ok(first.ln().scale(&k_mp).add(&second.ln().scale(&m_mp)))
}

/// Quotients of boundary values can land on the negative real axis with a
/// negatively-signed zero imaginary part; the upper-half-plane limit wants
/// arg = +π there.
fn boundary_normalized(z: MpComplex) -> MpComplex {
    if z.im.is_zero() && z.im.is_sign_negative() {
        let bits = z.im.mantissa_bits();
        MpComplex::new(z.re, MpValue::zero(bits))
    } else {
        z
    }
}
