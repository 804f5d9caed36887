//! Adaptive Simpson quadrature over multiprecision values.

use super::mp::MpValue;
use super::KernelError;

/// Integration options: absolute tolerance and a subdivision budget.
#[derive(Debug, Clone)]
pub struct Quadrature {
    pub abs_tol: MpValue,
    pub max_subdivisions: usize,
}

impl Quadrature {
    pub fn new(abs_tol: MpValue, max_subdivisions: usize) -> Self {
        Quadrature {
            abs_tol,
            max_subdivisions,
        }
    }
}

/// Estimate together with the error bound the subdivision achieved.
#[derive(Debug, Clone)]
pub struct QuadEstimate {
    pub value: MpValue,
    pub error_bound: MpValue,
}

struct Panel {
    a: MpValue,
    b: MpValue,
    fa: MpValue,
    fm: MpValue,
    fb: MpValue,
    whole: MpValue,
    tol: MpValue,
}

fn simpson(a: &MpValue, b: &MpValue, fa: &MpValue, fm: &MpValue, fb: &MpValue) -> MpValue {
    let prec = a.mantissa_bits().max(b.mantissa_bits());
    let six = MpValue::from_u32(6, prec);
    let four = MpValue::from_u32(4, prec);
    &(&(b - a) / &six) * &(&(fa + &(&four * fm)) + fb)
}

/// Adaptive Simpson with interval bisection. The estimate satisfies
/// `|estimate - integral| <= abs_tol` for integrands smooth on each final
/// panel; exhausting the budget returns the partial result inside the error.
pub fn integrate<F>(
    f: F,
    lo: &MpValue,
    hi: &MpValue,
    quad: &Quadrature,
) -> Result<QuadEstimate, KernelError>
where
    F: Fn(&MpValue) -> MpValue,
{
    let prec = lo
        .mantissa_bits()
        .max(hi.mantissa_bits())
        .max(quad.abs_tol.mantissa_bits());
    let half = MpValue::from_f64(0.5, prec);
    let fifteen = MpValue::from_u32(15, prec);

    let mid = |a: &MpValue, b: &MpValue| &(a + b) * &half;

    let m0 = mid(lo, hi);
    let (fa, fm, fb) = (f(lo), f(&m0), f(hi));
    let whole = simpson(lo, hi, &fa, &fm, &fb);
    let mut stack = vec![Panel {
        a: lo.clone(),
        b: hi.clone(),
        fa,
        fm,
        fb,
        whole,
        tol: quad.abs_tol.clone(),
    }];

    let mut total = MpValue::zero(prec);
    let mut bound = MpValue::zero(prec);
    let mut splits = 0usize;

    while let Some(p) = stack.pop() {
        let m = mid(&p.a, &p.b);
        let lm = mid(&p.a, &m);
        let rm = mid(&m, &p.b);
        let flm = f(&lm);
        let frm = f(&rm);
        let left = simpson(&p.a, &m, &p.fa, &flm, &p.fm);
        let right = simpson(&m, &p.b, &p.fm, &frm, &p.fb);
        let refined = &left + &right;
        let delta = &refined - &p.whole;
        let err = &delta.abs() / &fifteen;
        if err <= p.tol || splits >= quad.max_subdivisions {
            // Richardson correction term for the accepted panel.
            total = &total + &(&refined + &(&delta / &fifteen));
            bound = &bound + &err;
            if splits >= quad.max_subdivisions && err > p.tol {
                // Flush what remains at its current refinement.
                while let Some(q) = stack.pop() {
                    total = &total + &q.whole;
                    bound = &bound + &q.tol;
                }
                return Err(KernelError::QuadratureBudget {
                    partial: total.to_f64(),
                    bound: bound.to_f64(),
                });
            }
        } else {
            splits += 1;
            let half_tol = &p.tol * &half;
            stack.push(Panel {
                a: p.a,
                b: m.clone(),
                fa: p.fa,
                fm: flm,
                fb: p.fm.clone(),
                whole: left,
                tol: half_tol.clone(),
            });
            stack.push(Panel {
                a: m,
                b: p.b,
                fa: p.fm,
                fm: frm,
                fb: p.fb,
                whole: right,
                tol: half_tol,
            });
        }
    }

    Ok(QuadEstimate {
        value: total,
        error_bound: bound,
    })
}
