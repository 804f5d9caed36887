//! Arbitrary-precision binary floating point values.
//!
//! [`MpValue`] wraps an MPFR float and carries its mantissa width. Every
//! binary operation rounds to the larger precision of the two operands, so
//! mixed-precision expressions never silently truncate the wider side.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Constant;
use rug::ops::{CompleteRound, Pow};
use rug::Float;
use serde::{Deserialize, Serialize};

use super::KernelError;

/// Smallest mantissa width accepted when constructing values from strings.
pub const MIN_MANTISSA_BITS: u32 = 24;

/// An arbitrary-precision binary float tagged with its mantissa width.
#[derive(Debug, Clone, PartialEq)]
pub struct MpValue(Float);

/// Parses a decimal string at the given precision.
///
/// Accepts plain decimal and exponent notation (`"0.125"`, `"1.5e-9"`).
/// Fractions, hex floats and non-finite spellings are rejected.
pub fn mp(value: &str, mantissa_bits: u32) -> Result<MpValue, KernelError> {
    if mantissa_bits < MIN_MANTISSA_BITS {
        return Err(KernelError::PrecisionTooSmall {
            bits: mantissa_bits,
            min: MIN_MANTISSA_BITS,
        });
    }
    let trimmed = value.trim();
    let ok_chars = trimmed
        .bytes()
        .all(|b| b.is_ascii_digit() || matches!(b, b'+' | b'-' | b'.' | b'e' | b'E'));
    if trimmed.is_empty() || !ok_chars {
        return Err(KernelError::MalformedNumber(value.to_owned()));
    }
    let parsed =
        Float::parse(trimmed).map_err(|_| KernelError::MalformedNumber(value.to_owned()))?;
    let f = Float::with_val(mantissa_bits, parsed);
    if !f.is_finite() {
        return Err(KernelError::MalformedNumber(value.to_owned()));
    }
    Ok(MpValue(f))
}

impl MpValue {
    pub fn zero(bits: u32) -> Self {
        MpValue(Float::new(bits))
    }

    pub fn with_val<T>(bits: u32, t: T) -> Self
    where
        Float: rug::Assign<T>,
    {
        MpValue(Float::with_val(bits, t))
    }

    pub fn from_f64(v: f64, bits: u32) -> Self {
        MpValue(Float::with_val(bits, v))
    }

    pub fn from_u32(v: u32, bits: u32) -> Self {
        MpValue(Float::with_val(bits, v))
    }

    pub fn from_i64(v: i64, bits: u32) -> Self {
        MpValue(Float::with_val(bits, v))
    }

    pub fn pi(bits: u32) -> Self {
        MpValue(Float::with_val(bits, Constant::Pi))
    }

    /// Exact power of two, valid far beyond the f64 exponent range.
    pub fn pow2(exp: i32, bits: u32) -> Self {
        MpValue(Float::with_val(bits, 1u32) << exp)
    }

    /// Base-2 exponent of the value (None for zero), i.e. floor(log2 |x|)+1.
    pub fn exponent(&self) -> Option<i32> {
        self.0.get_exp()
    }

    pub fn mantissa_bits(&self) -> u32 {
        self.0.prec()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative()
    }

    /// Re-rounds to a new mantissa width.
    pub fn with_prec(&self, bits: u32) -> Self {
        MpValue(Float::with_val(bits, &self.0))
    }

    pub fn abs(&self) -> Self {
        MpValue(self.0.clone().abs())
    }

    pub fn neg(&self) -> Self {
        MpValue((-&self.0).complete(self.0.prec()))
    }

    pub fn sqrt(&self) -> Self {
        MpValue(self.0.sqrt_ref().complete(self.0.prec()))
    }

    pub fn ln(&self) -> Self {
        MpValue(self.0.ln_ref().complete(self.0.prec()))
    }

    pub fn exp(&self) -> Self {
        MpValue(self.0.exp_ref().complete(self.0.prec()))
    }

    pub fn cos(&self) -> Self {
        MpValue(self.0.cos_ref().complete(self.0.prec()))
    }

    pub fn sin(&self) -> Self {
        MpValue(self.0.sin_ref().complete(self.0.prec()))
    }

    pub fn acos(&self) -> Self {
        MpValue(self.0.acos_ref().complete(self.0.prec()))
    }

    pub fn cosh(&self) -> Self {
        MpValue(self.0.cosh_ref().complete(self.0.prec()))
    }

    pub fn sinh(&self) -> Self {
        MpValue(self.0.sinh_ref().complete(self.0.prec()))
    }

    pub fn acosh(&self) -> Self {
        MpValue(self.0.acosh_ref().complete(self.0.prec()))
    }

    /// Four-quadrant arctangent of `self / x`.
    pub fn atan2(&self, x: &Self) -> Self {
        let prec = self.0.prec().max(x.0.prec());
        MpValue(self.0.atan2_ref(&x.0).complete(prec))
    }

    pub fn hypot(&self, other: &Self) -> Self {
        let prec = self.0.prec().max(other.0.prec());
        MpValue(self.0.hypot_ref(&other.0).complete(prec))
    }

    /// Integer power; negative exponents allowed for nonzero values.
    pub fn powi(&self, n: i32) -> Self {
        MpValue((&self.0).pow(n).complete(self.0.prec()))
    }

    /// Real power via MPFR's correctly-rounded `pow`.
    pub fn pow(&self, exponent: &Self) -> Self {
        let prec = self.0.prec().max(exponent.0.prec());
        MpValue((&self.0).pow(&exponent.0).complete(prec))
    }

    pub fn min(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn max(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn signum_i8(&self) -> i8 {
        if self.0.is_zero() {
            0
        } else if self.0.is_sign_negative() {
            -1
        } else {
            1
        }
    }

    /// Decimal string carrying enough digits to reconstruct the value exactly
    /// at its own precision.
    pub fn to_decimal_string(&self) -> String {
        // ceil(bits * log10(2)) + 2 digits round-trips the mantissa.
        let digits = (self.0.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
        self.0.to_string_radix(10, Some(digits))
    }

    pub(crate) fn from_float(f: Float) -> Self {
        MpValue(f)
    }
}

impl fmt::Display for MpValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string())
    }
}

impl PartialOrd for MpValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl PartialEq<f64> for MpValue {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for MpValue {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

macro_rules! mp_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for &MpValue {
            type Output = MpValue;
            fn $method(self, rhs: &MpValue) -> MpValue {
                let prec = self.0.prec().max(rhs.0.prec());
                MpValue(Float::with_val(
                    prec,
                    std::ops::$trait::$method(&self.0, &rhs.0),
                ))
            }
        }

        impl std::ops::$trait for MpValue {
            type Output = MpValue;
            fn $method(self, rhs: MpValue) -> MpValue {
                std::ops::$trait::$method(&self, &rhs)
            }
        }

        impl std::ops::$trait<&MpValue> for MpValue {
            type Output = MpValue;
            fn $method(self, rhs: &MpValue) -> MpValue {
                std::ops::$trait::$method(&self, rhs)
            }
        }
    };
}

mp_binop!(Add, add);
mp_binop!(Sub, sub);
mp_binop!(Mul, mul);
mp_binop!(Div, div);

impl std::ops::Neg for &MpValue {
    type Output = MpValue;
    fn neg(self) -> MpValue {
        MpValue::neg(self)
    }
}

/// Serialized form: decimal string plus mantissa width, so payloads stay
/// exact past double precision.
#[derive(Serialize, Deserialize)]
struct MpRepr {
    dec: String,
    prec_bits: u32,
}

impl Serialize for MpValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MpRepr {
            dec: self.to_decimal_string(),
            prec_bits: self.mantissa_bits(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MpValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = MpRepr::deserialize(d)?;
        mp(&repr.dec, repr.prec_bits).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_dyadic_is_exact() {
        let v = mp("0.5", 128).unwrap();
        assert_eq!(v.to_f64(), 0.5);
        assert_eq!(v.mantissa_bits(), 128);
    }

    #[test]
    fn parse_rejects_fraction_syntax() {
        assert!(mp("1/3", 128).is_err());
        assert!(mp("", 128).is_err());
        assert!(mp("0x1p-3", 128).is_err());
        assert!(mp("inf", 128).is_err());
        assert!(mp("nan", 128).is_err());
    }

    #[test]
    fn parse_at_53_bits_matches_ieee_double() {
        let v = mp("0.1", 53).unwrap();
        assert_eq!(v.to_f64(), 0.1f64);
    }

    #[test]
    fn rejects_tiny_precision() {
        assert!(matches!(
            mp("1.0", 8),
            Err(KernelError::PrecisionTooSmall { .. })
        ));
    }

    #[test]
    fn mixing_takes_larger_precision() {
        let a = mp("0.1", 64).unwrap();
        let b = mp("0.2", 192).unwrap();
        assert_eq!((&a + &b).mantissa_bits(), 192);
        assert_eq!((&b * &a).mantissa_bits(), 192);
    }

    #[test]
    fn decimal_string_round_trips() {
        let v = mp("0.1", 160).unwrap();
        let s = v.to_decimal_string();
        let back = mp(&s, 160).unwrap();
        assert_eq!(v, back);
        assert_eq!(back.to_decimal_string(), s);
    }

    proptest::proptest! {
        // Parsing the printed decimal string reproduces the value exactly,
        // and printing the reparse is stable.
        #[test]
        fn decimal_round_trip_random(v in -1e12f64..1e12, bits in 53u32..512) {
            let x = MpValue::from_f64(v, bits);
            let s = x.to_decimal_string();
            let back = mp(&s, bits).unwrap();
            proptest::prop_assert_eq!(&back, &x);
            proptest::prop_assert_eq!(back.to_decimal_string(), s);
        }

        // Mixed-precision arithmetic always rounds at the wider operand.
        #[test]
        fn mixing_rule_random(a in -1e6f64..1e6, b in -1e6f64..1e6,
                              pa in 24u32..400, pb in 24u32..400) {
            let x = MpValue::from_f64(a, pa);
            let y = MpValue::from_f64(b, pb);
            let wide = pa.max(pb);
            proptest::prop_assert_eq!((&x + &y).mantissa_bits(), wide);
            proptest::prop_assert_eq!((&x * &y).mantissa_bits(), wide);
            proptest::prop_assert_eq!((&x - &y).mantissa_bits(), wide);
        }
    }

    #[test]
    fn elementary_functions_agree_with_f64() {
        let x = MpValue::from_f64(0.7, 128);
        assert!((x.ln().to_f64() - 0.7f64.ln()).abs() < 1e-15);
        assert!((x.exp().to_f64() - 0.7f64.exp()).abs() < 1e-15);
        assert!((x.acos().to_f64() - 0.7f64.acos()).abs() < 1e-15);
        assert!((x.acosh().to_f64()).is_nan() == 0.7f64.acosh().is_nan());
        let y = MpValue::from_f64(2.0, 128);
        assert!((y.acosh().to_f64() - 2.0f64.acosh()).abs() < 1e-15);
    }
}
