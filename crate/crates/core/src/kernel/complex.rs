//! Minimal complex arithmetic over [`MpValue`] pairs.
//!
//! Only what the slit-model map and the half-strip curve check need:
//! field operations, modulus, principal logarithm and a branch-resolved
//! arccosine. Not a general complex library.

use super::mp::MpValue;

#[derive(Debug, Clone)]
pub struct MpComplex {
    pub re: MpValue,
    pub im: MpValue,
}

impl MpComplex {
    pub fn new(re: MpValue, im: MpValue) -> Self {
        MpComplex { re, im }
    }

    pub fn from_real(re: MpValue) -> Self {
        let bits = re.mantissa_bits();
        MpComplex {
            re,
            im: MpValue::zero(bits),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        MpComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        MpComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        MpComplex::new(
            &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        )
    }

    pub fn div(&self, rhs: &Self) -> Self {
        let den = &(&rhs.re * &rhs.re) + &(&rhs.im * &rhs.im);
        MpComplex::new(
            &(&(&self.re * &rhs.re) + &(&self.im * &rhs.im)) / &den,
            &(&(&self.im * &rhs.re) - &(&self.re * &rhs.im)) / &den,
        )
    }

    pub fn scale(&self, s: &MpValue) -> Self {
        MpComplex::new(&self.re * s, &self.im * s)
    }

    pub fn abs(&self) -> MpValue {
        self.re.hypot(&self.im)
    }

    /// Principal logarithm: `ln|z| + i atan2(im, re)`.
    pub fn ln(&self) -> Self {
        MpComplex::new(self.abs().ln(), self.im.atan2(&self.re))
    }

    /// Arccosine resolved onto `u in [0, pi]`, `v >= 0`, returned as
    /// `u + i v` for arguments with `im <= 0` and `u - i v` otherwise, so
    /// that `cos` of the result reproduces the argument.
    ///
    /// Uses the stable modulus decomposition: with `r1 = |z+1|`,
    /// `r2 = |z-1|`, `alpha = (r1+r2)/2`, `beta = re/alpha`, the exact
    /// identities `cos u cosh v = re` and `sin u sinh v = |im|` hold for
    /// `u = arccos(beta)`, `v = arccosh(alpha)`.
    pub fn acos(&self) -> Self {
        let bits = self.re.mantissa_bits().max(self.im.mantissa_bits());
        let one = MpValue::from_u32(1, bits);
        let r1 = (&self.re + &one).hypot(&self.im);
        let r2 = (&self.re - &one).hypot(&self.im);
        let half = MpValue::from_f64(0.5, bits);
        let alpha_raw = &(&r1 + &r2) * &half;
        let alpha = alpha_raw.max(&one); // guard rounding below 1
        let beta = (&self.re / &alpha).min(&one).max(&one.neg());
        let u = beta.acos();
        let v = alpha.acosh();
        if self.im > 0.0 {
            MpComplex::new(u, v.neg())
        } else {
            MpComplex::new(u, v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> MpComplex {
        MpComplex::new(MpValue::from_f64(re, 128), MpValue::from_f64(im, 128))
    }

    #[test]
    fn field_ops() {
        let a = c(1.0, 2.0);
        let b = c(3.0, -1.0);
        let p = a.mul(&b);
        assert_eq!(p.re.to_f64(), 5.0);
        assert_eq!(p.im.to_f64(), 5.0);
        let q = p.div(&b);
        assert!((q.re.to_f64() - 1.0).abs() < 1e-30);
        assert!((q.im.to_f64() - 2.0).abs() < 1e-30);
    }

    #[test]
    fn principal_log_of_negative_real_from_above() {
        // Boundary convention: imaginary part +0 selects arg = +pi.
        let z = c(-2.0, 0.0);
        let l = z.ln();
        assert!((l.re.to_f64() - 2.0f64.ln()).abs() < 1e-15);
        assert!((l.im.to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn acos_inverts_cos_in_lower_half_plane() {
        // cos(u + iv) = cos u cosh v - i sin u sinh v.
        let (u0, v0) = (2.1f64, 1.3f64);
        let z = c(u0.cos() * v0.cosh(), -(u0.sin() * v0.sinh()));
        let w = z.acos();
        assert!((w.re.to_f64() - u0).abs() < 1e-14);
        assert!((w.im.to_f64() - v0).abs() < 1e-14);
    }

    #[test]
    fn acos_of_real_above_one_is_pure_imaginary() {
        let z = c(17.0, 0.0);
        let w = z.acos();
        assert!(w.re.to_f64().abs() < 1e-30);
        assert!((w.im.to_f64() - 17.0f64.acosh()).abs() < 1e-14);
    }
}
