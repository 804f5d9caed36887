//! Structural checks against solved instances.

use crate::asympt::diag_map_mp;
use crate::kernel::extremum::golden_max;
use crate::kernel::{integrate, MpComplex, MpValue, Quadrature};
use crate::solver::{
    alternation_in_x, grid_oracle, reduce_to_interval, remez_solve, EquiSolution, ProblemKind,
    ProblemSpec,
};

use super::{CheckReport, VerifyError};

/// Verifies the equioscillation certificate of a solved instance: point
/// count, strict sign alternation, levelness, endpoint membership, and no
/// residual excess anywhere on the interval. All residuals are recomputed
/// from Q, so tampering with the solution is caught.
pub fn check_equioscillation(
    sol: &EquiSolution,
    spec: &ProblemSpec,
) -> Result<CheckReport, VerifyError> {
    let red = reduce_to_interval(spec)?;
    let bits = spec.mantissa_bits;
    let tol = 32.0 * spec.level_tol;
    let mut report = CheckReport::new(&format!("equioscillation-{}", instance_tag(spec)), tol);

    let expected = red.degree + 2;
    report.gate_flag(
        "count_matches",
        sol.alternation.len() == expected,
        &format!(
            "expected {expected} alternation points, got {}",
            sol.alternation.len()
        ),
    );
    if sol.alternation.len() != expected {
        return Ok(report);
    }

    let l = sol.l.to_f64();
    let residuals: Vec<MpValue> = sol
        .alternation
        .iter()
        .map(|p| red.residual(&sol.q, &p.t))
        .collect();

    let alternates = residuals
        .windows(2)
        .all(|w| w[0].signum_i8() * w[1].signum_i8() == -1);
    report.gate_flag("signs_alternate", alternates, "sign pattern broken");

    let mut worst_level = 0.0f64;
    for r in &residuals {
        let dev = r.abs().to_f64();
        worst_level = worst_level.max((dev - l).abs() / l);
    }
    report.gate("levelness_rel", worst_level);

    // Endpoint membership (x_first = a, x_last = 1).
    let a = red.lo.sqrt();
    let first_gap = (&sol.alternation.first().unwrap().x - &a).abs().to_f64() / a.to_f64();
    let last_gap = (&sol.alternation.last().unwrap().x - &MpValue::from_u32(1, bits))
        .abs()
        .to_f64();
    let endpoint_tol = 2f64.powi(-(bits as i32) / 2 + 16).max(tol);
    report.measure("endpoint_gap_first", first_gap);
    report.measure("endpoint_gap_last", last_gap);
    report.gate_flag(
        "endpoints_present",
        first_gap <= endpoint_tol && last_gap <= endpoint_tol,
        "interval endpoints missing from the alternation set",
    );

    // Dense scan for residual excess beyond the levelled deviation.
    let probes = 16 * expected;
    let tol_t = &(&red.hi - &red.lo) * &MpValue::pow2(-(bits as i32) / 2, bits);
    let dev = |t: &MpValue| red.residual(&sol.q, t).abs();
    let nodes = crate::solver::probe_nodes(&red.lo, &red.hi, probes, bits);
    let mut max_dev = MpValue::zero(bits);
    let values: Vec<MpValue> = nodes.iter().map(&dev).collect();
    for (i, v) in values.iter().enumerate() {
        if *v > max_dev {
            max_dev = v.clone();
        }
        if i > 0 && i + 1 < values.len() && values[i - 1] < *v && values[i + 1] < *v {
            let (_, refined) = golden_max(dev, &nodes[i - 1], &nodes[i + 1], &tol_t);
            if refined > max_dev {
                max_dev = refined;
            }
        }
    }
    report.gate("residual_excess_rel", (max_dev.to_f64() - l).max(0.0) / l);

    Ok(report)
}

/// |L(k,m,a) - L(m,k,a)| / L must vanish: the two pole orders enter the
/// problem symmetrically.
pub fn check_symmetry(k: u32, m: u32, a: f64, tol: f64) -> Result<CheckReport, VerifyError> {
    let mut report = CheckReport::new(&format!("symmetry-k{k}-m{m}-a{a}"), tol);
    let sol_km = remez_solve(&ProblemSpec::weighted_sgn(k, m, a)?)?;
    let sol_mk = remez_solve(&ProblemSpec::weighted_sgn(m, k, a)?)?;
    let rel = rel_diff(&sol_km.l, &sol_mk.l);
    report.measure("l_km", sol_km.l.to_f64());
    report.measure("l_mk", sol_mk.l.to_f64());
    report.gate("rel_diff", rel);
    Ok(report)
}

/// Diagonal reduction: L(m,m,a) = L(0,m, 2√a/(1+a)).
pub fn check_diagonal(m: u32, a: f64, tol: f64) -> Result<CheckReport, VerifyError> {
    let mut report = CheckReport::new(&format!("diagonal-m{m}-a{a}"), tol);
    let sol_diag = remez_solve(&ProblemSpec::weighted_sgn(m, m, a)?)?;
    let a_prime = diag_map_mp(&MpValue::from_f64(a, 192));
    let spec0 = ProblemSpec::weighted_sgn(0, m, a_prime.to_f64())?.with_a_value(a_prime);
    let sol0 = remez_solve(&spec0)?;
    let rel = rel_diff(&sol_diag.l, &sol0.l);
    report.measure("l_mm", sol_diag.l.to_f64());
    report.measure("l_0m_mapped", sol0.l.to_f64());
    report.gate("rel_diff", rel);
    Ok(report)
}

/// Every alternation gap of the unweighted p=1 solution carries the same
/// amount of |P' - 1| mass: ∫ |P'(x) - 1| dx = 2L per gap.
pub fn check_area_identity(
    sol: &EquiSolution,
    spec: &ProblemSpec,
    quad: &Quadrature,
) -> Result<CheckReport, VerifyError> {
    require_unweighted_p1(spec)?;
    let bits = spec.mantissa_bits;
    let mut report = CheckReport::new(
        &format!("area-{}", instance_tag(spec)),
        quad.abs_tol.to_f64().max(1e-30),
    );
    let xs = alternation_in_x(sol)?;
    let q_deriv = sol.q.derivative();
    // P'(x) = 2x Q'(x²)
    let p_prime = |x: &MpValue| {
        let t = x * x;
        &(&MpValue::from_u32(2, bits) * x) * &q_deriv.eval(&t)
    };
    let one = MpValue::from_u32(1, bits);
    let integrand = |x: &MpValue| (&p_prime(x) - &one).abs();
    let two_l = (&MpValue::from_u32(2, bits) * &sol.l).to_f64();
    let levelness = sol.levelness.to_f64().abs();

    let mut worst = 0.0f64;
    let mut total = 0.0f64;
    for gap in xs.windows(2) {
        let est = integrate(integrand, &gap[0], &gap[1], quad)?;
        let gap_width = (&gap[1] - &gap[0]).to_f64();
        let allowed = quad.abs_tol.to_f64() + 10.0 * levelness * gap_width;
        let miss = (est.value.to_f64() - two_l).abs();
        total += est.value.to_f64();
        // Normalize against this gap's allowance so one tolerance gates all.
        worst = worst.max(miss / allowed * report.tolerance);
        report.measure(
            &format!("gap_{:.6}_{:.6}", gap[0].to_f64(), gap[1].to_f64()),
            miss,
        );
    }
    report.gate("worst_gap_scaled", worst);
    let gaps = (xs.len() - 1) as f64;
    report.measure("total_integral", total);
    report.gate(
        "total_vs_2l_gaps",
        (total - two_l * gaps).abs() / gaps.max(1.0),
    );
    Ok(report)
}

/// Options for the half-strip curve check.
#[derive(Debug, Clone)]
pub struct CurveOptions {
    pub y_grid: Vec<f64>,
    pub branch_tol: f64,
    pub asym_tol: f64,
    pub v_threshold: f64,
}

impl Default for CurveOptions {
    fn default() -> Self {
        CurveOptions {
            y_grid: log_grid(1e-3, 1e6, 64),
            branch_tol: 1e-10,
            asym_tol: 0.05,
            v_threshold: 20.0,
        }
    }
}

/// 64-point style logarithmically spaced grid.
pub fn log_grid(from: f64, to: f64, count: usize) -> Vec<f64> {
    let (lf, lt) = (from.ln(), to.ln());
    (0..count)
        .map(|i| (lf + (lt - lf) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Traces w(y) = arccos((P(iy) - iy)/L) up the half-strip and verifies the
/// boundary-curve identities: branch self-consistency of
/// cos u cosh v = P(iy)/L and L sin u sinh v = y, positivity and monotone
/// growth of v, monotone decay of P(iy), P(0) > L, and the u → π asymptote
/// once v clears the threshold.
pub fn check_curve_equation(
    sol: &EquiSolution,
    spec: &ProblemSpec,
    opts: &CurveOptions,
) -> Result<CheckReport, VerifyError> {
    require_unweighted_p1(spec)?;
    let bits = spec.mantissa_bits;
    let mut report = CheckReport::new(&format!("curve-{}", instance_tag(spec)), opts.branch_tol);
    let pi = MpValue::pi(bits).to_f64();

    // (iv) P(0) > L

    let p0 = sol.q.eval(&MpValue::zero(bits));
    report.measure("p0", p0.to_f64());
    report.measure("l", sol.l.to_f64());
    report.gate_flag("p0_above_l", p0 > sol.l, "P(0) does not exceed L");

    let mut max_branch_err = 0.0f64;
    let mut prev_v: Option<f64> = None;
    let mut prev_p: Option<f64> = None;
    let mut prev_u: Option<f64> = None;
    let mut v_increasing = true;
    let mut p_decreasing = true;
    let mut v_positive = true;
    let mut max_u_jump = 0.0f64;
    let mut max_asym_gap = 0.0f64;
    let mut asym_points = 0usize;

    for &y in &opts.y_grid {
        let y_mp = MpValue::from_f64(y, bits);
        let t = (&y_mp * &y_mp).neg();
        let p_iy = sol.q.eval(&t);
        let x_part = &p_iy / &sol.l;
        let y_part = (&y_mp / &sol.l).neg();
        let zeta = MpComplex::new(x_part.clone(), y_part);
        let w = zeta.acos();
        let (u, v) = (&w.re, &w.im);

        // (i) branch self-consistency, measured against the point's scale.
        let scale = zeta.abs();
        let err_re = (&(&u.cos() * &v.cosh()) - &x_part).abs();
        let err_im = (&(&u.sin() * &v.sinh()) - &(&y_mp / &sol.l)).abs();
        let rel = (&(&err_re + &err_im) / &scale).to_f64();
        max_branch_err = max_branch_err.max(rel);

        let (uf, vf, pf) = (u.to_f64(), v.to_f64(), p_iy.to_f64());
        if vf <= 0.0 {
            v_positive = false;
        }
        if let Some(pv) = prev_v {
            if vf <= pv {
                v_increasing = false;
            }
        }
        if let Some(pp) = prev_p {
            if pf >= pp {
                p_decreasing = false;
            }
        }
        if let Some(pu) = prev_u {
            max_u_jump = max_u_jump.max((uf - pu).abs());
        }
        if vf >= opts.v_threshold {
            asym_points += 1;
            max_asym_gap = max_asym_gap.max((uf - pi).abs());
        }
        prev_v = Some(vf);
        prev_p = Some(pf);
        prev_u = Some(uf);
    }

    report.gate("branch_consistency_rel", max_branch_err);
    report.gate_flag("v_positive", v_positive, "v(y) not strictly positive");
    report.gate_flag("v_increasing", v_increasing, "v(y) not strictly increasing");
    report.gate_flag(
        "p_iy_decreasing",
        p_decreasing,
        "P(iy) not strictly decreasing",
    );
    // Branch continuity along the grid: principal-branch tracking must not
    // jump; a jump near π would indicate the wrong sheet.
    report.measure("max_u_step", max_u_jump);
    report.gate_flag(
        "branch_continuous",
        max_u_jump < std::f64::consts::FRAC_PI_2,
        "u(y) jumped by more than π/2 between grid points; branch ambiguity",
    );
    report.measure("max_asym_gap", max_asym_gap);
    report.measure("asym_points", asym_points as f64);
    report.gate_flag(
        "asymptote_sampled",
        asym_points > 0,
        "no grid point reached the v threshold; extend the y grid",
    );
    report.gate_flag(
        "u_approaches_pi",
        max_asym_gap <= opts.asym_tol,
        &format!("|u - π| = {max_asym_gap:e} beyond v ≥ {}", opts.v_threshold),
    );
    Ok(report)
}

/// Remez error against the independent discrete-grid oracle.
pub fn check_oracle(
    spec: &ProblemSpec,
    grid_size: usize,
    tol: f64,
) -> Result<CheckReport, VerifyError> {
    let mut report = CheckReport::new(&format!("oracle-{}", instance_tag(spec)), tol);
    let sol = remez_solve(spec)?;
    let oracle = grid_oracle(spec, grid_size)?;
    let abs = (&sol.l - &oracle).abs().to_f64();
    let rel = rel_diff(&sol.l, &oracle);
    report.measure("remez_l", sol.l.to_f64());
    report.measure("oracle_l", oracle.to_f64());
    report.gate("difference", abs.min(rel));
    // The discretized problem can only be easier.
    report.gate_flag(
        "oracle_below_l",
        oracle <= &sol.l * &MpValue::from_f64(1.0 + tol, spec.mantissa_bits),
        "grid oracle exceeded the continuum error",
    );
    Ok(report)
}

fn instance_tag(spec: &ProblemSpec) -> String {
    let a = spec.a.to_f64();
    match spec.kind {
        ProblemKind::WeightedSgn { k, m } => format!("k{k}-m{m}-a{a}"),
        ProblemKind::UnweightedAbsP { p, n } => format!("p{p}-n{n}-a{a}"),
    }
}

fn require_unweighted_p1(spec: &ProblemSpec) -> Result<(), VerifyError> {
    if let ProblemKind::UnweightedAbsP { p, .. } = spec.kind {
        if p == 1.0 {
            return Ok(());
        }
    }
    Err(VerifyError::NeedsUnweightedP1)
}

fn rel_diff(a: &MpValue, b: &MpValue) -> f64 {
    let scale = a.abs().max(&b.abs());
    if scale.is_zero() {
        return 0.0;
    }
    (&(a - b).abs() / &scale).to_f64()
}
