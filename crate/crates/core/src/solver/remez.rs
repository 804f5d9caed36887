//! Multi-point Remez exchange on the reduced interval.

use crate::kernel::extremum::golden_max;
use crate::kernel::{ChebPoly, MpValue};

use super::linsys::solve_dense;
use super::{
    reduce_to_interval, AlternationPoint, EquiSolution, ProblemSpec, Reduction, SolverError,
};

/// Chebyshev extrema nodes mapped onto [lo, hi], ascending, endpoints
/// included.
pub(crate) fn chebyshev_nodes(lo: &MpValue, hi: &MpValue, count: usize, bits: u32) -> Vec<MpValue> {
    debug_assert!(count >= 2);
    let pi = MpValue::pi(bits);
    let half = MpValue::from_f64(0.5, bits);
    let mid = &(lo + hi) * &half;
    let hw = &(hi - lo) * &half;
    let denom = MpValue::from_u32((count - 1) as u32, bits);
    (0..count)
        .map(|i| {
            let angle = &(&pi * &MpValue::from_u32(i as u32, bits)) / &denom;
            let c = angle.cos().neg(); // ascending in i
            &mid + &(&hw * &c)
        })
        .collect()
}

/// Chebyshev basis values T_0..T_deg at the reference coordinate `u`.
fn basis_row(u: &MpValue, deg: usize, bits: u32) -> Vec<MpValue> {
    let mut row = Vec::with_capacity(deg + 1);
    row.push(MpValue::from_u32(1, bits));
    if deg >= 1 {
        row.push(u.clone());
        let two_u = &MpValue::from_u32(2, bits) * u;
        for j in 2..=deg {
            let next = &(&two_u * &row[j - 1]) - &row[j - 2];
            row.push(next);
        }
    }
    row
}

/// Solves the levelled system Q(t_i) w(t_i) + (-1)^i h = g(t_i); returns
/// (Q, h) with h signed.
fn solve_levelled(
    red: &Reduction,
    reference: &[MpValue],
    bits: u32,
) -> Result<(ChebPoly, MpValue), SolverError> {
    let n_pts = reference.len();
    let deg = red.degree;
    debug_assert_eq!(n_pts, deg + 2);
    let shell = ChebPoly::new(
        red.lo.clone(),
        red.hi.clone(),
        vec![MpValue::zero(bits); deg + 1],
    );
    let mut matrix = Vec::with_capacity(n_pts);
    let mut rhs = Vec::with_capacity(n_pts);
    for (i, t) in reference.iter().enumerate() {
        let u = shell.to_reference(t);
        let w = red.weight(t);
        let mut row: Vec<MpValue> = basis_row(&u, deg, bits)
            .into_iter()
            .map(|b| &b * &w)
            .collect();
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        row.push(MpValue::from_f64(sign, bits));
        matrix.push(row);
        rhs.push(red.target(t));
    }
    let mut solution = solve_dense(matrix, rhs)?;
    let h = solution.pop().expect("levelled system has h column");
    let q = ChebPoly::new(red.lo.clone(), red.hi.clone(), solution);
    Ok((q, h))
}

/// Bisection for the single sign change of `r` inside (lo, hi).
fn bisect_zero<F>(r: &F, lo: &MpValue, hi: &MpValue, tol: &MpValue) -> MpValue
where
    F: Fn(&MpValue) -> MpValue,
{
    let bits = lo.mantissa_bits();
    let half = MpValue::from_f64(0.5, bits);
    let mut a = lo.clone();
    let mut b = hi.clone();
    let mut fa_neg = r(&a).is_sign_negative();
    loop {
        if (&b - &a).abs() <= *tol {
            return &(&a + &b) * &half;
        }
        let m = &(&a + &b) * &half;
        let fm_neg = r(&m).is_sign_negative();
        if fm_neg == fa_neg {
            a = m;
            fa_neg = fm_neg;
        } else {
            b = m;
        }
    }
}

struct Located {
    points: Vec<(MpValue, MpValue)>, // (t, signed residual)
    max_dev: MpValue,
    min_dev: MpValue,
}

/// Locates the N+2 residual extrema separated by the zeros between
/// consecutive reference points. The expected sign pattern is read from the
/// levelled deviation h.
fn locate_extrema(
    red: &Reduction,
    q: &ChebPoly,
    reference: &[MpValue],
    h: &MpValue,
    tol_t: &MpValue,
) -> Located {
    let r = |t: &MpValue| red.residual(q, t);
    let n_pts = reference.len();
    let mut zeros = Vec::with_capacity(n_pts - 1);
    for i in 0..n_pts - 1 {
        zeros.push(bisect_zero(&r, &reference[i], &reference[i + 1], tol_t));
    }
    let sign_first = h.signum_i8();
    let mut points = Vec::with_capacity(n_pts);
    for i in 0..n_pts {
        let lo = if i == 0 { &red.lo } else { &zeros[i - 1] };
        let hi = if i == n_pts - 1 { &red.hi } else { &zeros[i] };
        let sigma = if i % 2 == 0 { sign_first } else { -sign_first };
        let (t, v) = if sigma >= 0 {
            golden_max(r, lo, hi, tol_t)
        } else {
            let (t, neg) = golden_max(|t: &MpValue| r(t).neg(), lo, hi, tol_t);
            (t, neg.neg())
        };
        points.push((t, v));
    }
    let mut max_dev = points[0].1.abs();
    let mut min_dev = max_dev.clone();
    for (_, v) in points.iter().skip(1) {
        let d = v.abs();
        if d > max_dev {
            max_dev = d.clone();
        }
        if d < min_dev {
            min_dev = d;
        }
    }
    Located {
        points,
        max_dev,
        min_dev,
    }
}

/// Dense verification scan: 8·(N+2) Chebyshev-distributed probes plus
/// golden refinement around any probe that tops its neighbours. Returns the
/// largest |residual| seen.
fn probe_scan(red: &Reduction, q: &ChebPoly, bits: u32, tol_t: &MpValue) -> MpValue {
    let count = 8 * (red.degree + 2);
    let probes = chebyshev_nodes(&red.lo, &red.hi, count, bits);
    let dev = |t: &MpValue| red.residual(q, t).abs();
    let values: Vec<MpValue> = probes.iter().map(&dev).collect();
    let mut max_dev = MpValue::zero(bits);
    for (i, v) in values.iter().enumerate() {
        if *v > max_dev {
            max_dev = v.clone();
        }
        let is_peak = i > 0 && i + 1 < values.len() && values[i - 1] < *v && values[i + 1] < *v;
        if is_peak {
            let (_, refined) = golden_max(dev, &probes[i - 1], &probes[i + 1], tol_t);
            if refined > max_dev {
                max_dev = refined;
            }
        }
    }
    max_dev
}

/// Remez exchange: iterates levelled solve + full reference replacement
/// until the alternation is level to `level_tol` and a dense probe finds no
/// larger residual.
pub fn remez_solve(spec: &ProblemSpec) -> Result<EquiSolution, SolverError> {
    let red = reduce_to_interval(spec)?;
    let bits = spec.mantissa_bits;
    let n_pts = red.degree + 2;
    let tol_t = &(&red.hi - &red.lo) * &MpValue::pow2(-(bits as i32) / 2, bits);
    let noise_floor = MpValue::pow2(16 - bits as i32, bits);
    let level_tol_mp = MpValue::from_f64(spec.level_tol, bits);

    let mut reference = chebyshev_nodes(&red.lo, &red.hi, n_pts, bits);
    let mut history: Vec<f64> = Vec::new();
    let mut last_levelness = f64::NAN;

    for iteration in 1..=spec.max_iterations {
        let (q, h) = solve_levelled(&red, &reference, bits)?;
        let habs = h.abs();
        if habs < noise_floor {
            let deficit = habs.exponent().map_or(bits, |e| e.unsigned_abs());
            return Err(SolverError::PrecisionInsufficient {
                have: bits,
                suggest: deficit + 16 + 96,
            });
        }
        history.push(habs.to_f64());

        let located = locate_extrema(&red, &q, &reference, &h, &tol_t);
        let levelness = &(&located.max_dev - &located.min_dev) / &located.max_dev;
        last_levelness = levelness.to_f64();

        if levelness <= level_tol_mp {
            let probe_max = probe_scan(&red, &q, bits, &tol_t);
            let allowed = &located.max_dev * &(&MpValue::from_u32(1, bits) + &level_tol_mp);
            if probe_max <= allowed {
                let half = MpValue::from_f64(0.5, bits);
                let l = &(&located.max_dev + &located.min_dev) * &half;
                let alternation = located
                    .points
                    .iter()
                    .map(|(t, v)| AlternationPoint {
                        t: t.clone(),
                        x: t.sqrt(),
                        residual: v.clone(),
                        sign: v.signum_i8(),
                    })
                    .collect();
                return Ok(EquiSolution {
                    l,
                    alternation,
                    q,
                    iterations: iteration,
                    levelness,
                    deviation_history: history,
                });
            }
        }

        reference = located.points.into_iter().map(|(t, _)| t).collect();
    }

    Err(SolverError::NonConvergence {
        iterations: spec.max_iterations,
        levelness: last_levelness,
        tol: spec.level_tol,
    })
}
