//! Golden-section extremum location.
//!
//! Residual extrema between exchange reference points are locally
//! quadratic, so t-accuracy of half the working bits already saturates the
//! attainable accuracy in f; callers pick `tol` accordingly.

use super::mp::MpValue;
use super::KernelError;

const MAX_ITERATIONS: usize = 4096;

/// Maximum of `f` over the closed interval `[lo, hi]` by golden-section,
/// shrinking the bracket until its width falls below `tol`. Converges to a
/// boundary point when the maximum sits there.
pub fn golden_max<F>(f: F, lo: &MpValue, hi: &MpValue, tol: &MpValue) -> (MpValue, MpValue)
where
    F: Fn(&MpValue) -> MpValue,
{
    let prec = lo
        .mantissa_bits()
        .max(hi.mantissa_bits())
        .max(tol.mantissa_bits());
    // inverse golden ratio complement: (3 - sqrt 5) / 2
    let five = MpValue::from_u32(5, prec);
    let ratio = &(&MpValue::from_u32(3, prec) - &five.sqrt()) * &MpValue::from_f64(0.5, prec);

    let mut a = lo.clone();
    let mut b = hi.clone();
    let mut x1 = &a + &(&ratio * &(&b - &a));
    let mut x2 = &b - &(&ratio * &(&b - &a));
    let mut f1 = f(&x1);
    let mut f2 = f(&x2);
    for _ in 0..MAX_ITERATIONS {
        if (&b - &a).abs() <= *tol {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = &a + &(&ratio * &(&b - &a));
            f1 = f(&x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = &b - &(&ratio * &(&b - &a));
            f2 = f(&x2);
        }
    }
    // Also consider the interval ends; the maximum may sit on the boundary.
    let fa = f(&a);
    let fb = f(&b);
    let (mut best_t, mut best_f) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    if fa > best_f {
        best_t = a;
        best_f = fa;
    }
    if fb > best_f {
        best_t = b;
        best_f = fb;
    }
    (best_t, best_f)
}

/// Locates the extremum bracketed by `(left, mid, right)`.
///
/// `f(mid)` must strictly exceed the values at both ends (maximum) or be
/// strictly below both (minimum). Returns `(t, f(t))` with `t` within `tol`
/// of the true extremum assuming unimodality on the bracket.
pub fn find_extremum<F>(
    f: F,
    bracket: (&MpValue, &MpValue, &MpValue),
    tol: &MpValue,
) -> Result<(MpValue, MpValue), KernelError>
where
    F: Fn(&MpValue) -> MpValue,
{
    let (left, mid, right) = bracket;
    if !(left < mid && mid < right) {
        return Err(KernelError::InvalidBracket);
    }
    let f_left = f(left);
    let f_mid = f(mid);
    let f_right = f(right);
    let maximizing = if f_mid > f_left && f_mid > f_right {
        true
    } else if f_mid < f_left && f_mid < f_right {
        false
    } else {
        return Err(KernelError::InvalidBracket);
    };

    let (t, ft) = if maximizing {
        golden_max(&f, left, right, tol)
    } else {
        let (t, neg) = golden_max(|x| f(x).neg(), left, right, tol);
        (t, neg.neg())
    };
    // With a valid bracket the search cannot stall; if it still returned a
    // boundary point the function was not unimodal on the bracket.
    if &t <= left || &t >= right {
        return Err(KernelError::NotUnimodal(
            t.to_decimal_string(),
            mid.to_decimal_string(),
        ));
    }
    Ok((t, ft))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64) -> MpValue {
        MpValue::from_f64(x, 128)
    }

    #[test]
    fn quadratic_maximum() {
        let f = |t: &MpValue| {
            let d = t - &v(0.3);
            (&d * &d).neg()
        };
        let tol = MpValue::from_f64(2f64.powi(-60), 128);
        let (t, _) = find_extremum(f, (&v(0.0), &v(0.25), &v(1.0)), &tol).unwrap();
        assert!((t.to_f64() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn cosine_maximum_at_zero() {
        let f = |t: &MpValue| t.cos();
        let tol = MpValue::from_f64(2f64.powi(-60), 128);
        let (t, ft) = find_extremum(f, (&v(-1.0), &v(0.1), &v(1.0)), &tol).unwrap();
        assert!(t.to_f64().abs() < 1e-15);
        assert!((ft.to_f64() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn minimum_bracket_is_detected() {
        let f = |t: &MpValue| t * t;
        let tol = MpValue::from_f64(2f64.powi(-60), 128);
        let (t, _) = find_extremum(f, (&v(-1.0), &v(0.2), &v(1.0)), &tol).unwrap();
        assert!(t.to_f64().abs() < 1e-15);
    }

    #[test]
    fn monotone_bracket_is_rejected() {
        let f = |t: &MpValue| t.clone();
        let tol = MpValue::from_f64(1e-20, 128);
        assert!(matches!(
            find_extremum(f, (&v(0.0), &v(0.5), &v(1.0)), &tol),
            Err(KernelError::InvalidBracket)
        ));
    }

    #[test]
    fn golden_max_converges_to_boundary() {
        let f = |t: &MpValue| t.clone();
        let tol = MpValue::from_f64(2f64.powi(-60), 128);
        let (t, _) = golden_max(f, &v(0.0), &v(1.0), &tol);
        assert!((t.to_f64() - 1.0).abs() < 1e-15);
    }
}
