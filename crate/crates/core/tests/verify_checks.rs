//! Verification-layer behaviour on known instances, including sabotage
//! cases that must fail.

use sgnpoles::kernel::{MpValue, Quadrature};
use sgnpoles::solver::{remez_solve, ProblemSpec};
use sgnpoles::verify::{
    check_area_identity, check_curve_equation, check_diagonal, check_equioscillation, check_oracle,
    check_symmetry, CurveOptions,
};

#[test]
fn equioscillation_passes_on_closed_forms() {
    let spec = ProblemSpec::weighted_sgn(0, 1, 1.0 / 3.0).unwrap();
    let sol = remez_solve(&spec).unwrap();
    let report = check_equioscillation(&sol, &spec).unwrap();
    assert!(report.passed, "details: {}", report.details);
    assert_eq!(sol.alternation.len(), 2);

    let spec = ProblemSpec::unweighted_abs_p(1.0, 2, 0.5).unwrap();
    let sol = remez_solve(&spec).unwrap();
    let report = check_equioscillation(&sol, &spec).unwrap();
    assert!(report.passed, "details: {}", report.details);
    assert_eq!(sol.alternation.len(), 3);
}

#[test]
fn equioscillation_catches_sabotage() {
    let spec = ProblemSpec::weighted_sgn(1, 2, 0.4).unwrap();
    let mut sol = remez_solve(&spec).unwrap();
    // Perturb one coefficient of Q by 10 L: the residual must overshoot.
    let bump = &MpValue::from_u32(10, spec.mantissa_bits) * &sol.l;
    sol.q.coeffs[1] = &sol.q.coeffs[1] + &bump;
    let report = check_equioscillation(&sol, &spec).unwrap();
    assert!(!report.passed, "sabotaged solution must fail");
}

#[test]
fn symmetry_check_passes() {
    let report = check_symmetry(1, 2, 0.5, 1e-9).unwrap();
    assert!(report.passed, "details: {}", report.details);
}

#[test]
fn diagonal_check_closed_form_case() {
    // m=1, a=1/4: both sides equal 1/9.
    let report = check_diagonal(1, 0.25, 1e-9).unwrap();
    assert!(report.passed, "details: {}", report.details);
    let l = report.measured.get("l_mm").unwrap();
    assert!((l - 1.0 / 9.0).abs() < 1e-10);
}

#[test]
fn area_identity_on_closed_form_and_sabotage() {
    let spec = ProblemSpec::unweighted_abs_p(1.0, 2, 0.5).unwrap();
    let sol = remez_solve(&spec).unwrap();
    let quad = Quadrature::new(MpValue::from_f64(1e-12, spec.mantissa_bits), 50_000);
    let report = check_area_identity(&sol, &spec, &quad).unwrap();
    assert!(report.passed, "details: {}", report.details);

    // Claiming a 1% larger L must break every gap.
    let mut bad = sol.clone();
    bad.l = &bad.l * &MpValue::from_f64(1.01, spec.mantissa_bits);
    let report = check_area_identity(&bad, &spec, &quad).unwrap();
    assert!(!report.passed);
}

#[test]
fn curve_equation_on_closed_form_instance() {
    // Degree-2 instance: P(x) = α + x²/(1+a) with α = a/(1+a) + L.
    let a = 0.5;
    let spec = ProblemSpec::unweighted_abs_p(1.0, 2, a).unwrap();
    let sol = remez_solve(&spec).unwrap();
    let report = check_curve_equation(&sol, &spec, &CurveOptions::default()).unwrap();
    assert!(report.passed, "details: {}", report.details);
    let p0 = report.measured.get("p0").unwrap();
    let l = sol.l.to_f64();
    assert!((p0 - (a / (1.0 + a) + l)).abs() < 1e-12);
    assert!(*p0 > l);
}

#[test]
fn oracle_check_small_instances() {
    let spec = ProblemSpec::weighted_sgn(1, 1, 0.25).unwrap();
    let report = check_oracle(&spec, 4000, 1e-5).unwrap();
    assert!(report.passed, "details: {}", report.details);
    let remez_l = report.measured.get("remez_l").unwrap();
    assert!((remez_l - 1.0 / 9.0).abs() < 1e-10);
}

#[test]
fn check_reports_are_bit_reproducible() {
    let spec = ProblemSpec::weighted_sgn(1, 2, 0.4).unwrap();
    let sol = remez_solve(&spec).unwrap();
    let a = serde_json::to_string(&check_equioscillation(&sol, &spec).unwrap()).unwrap();
    let b = serde_json::to_string(&check_equioscillation(&sol, &spec).unwrap()).unwrap();
    assert_eq!(a, b);

    let a = serde_json::to_string(&check_diagonal(2, 0.25, 1e-9).unwrap()).unwrap();
    let b = serde_json::to_string(&check_diagonal(2, 0.25, 1e-9).unwrap()).unwrap();
    assert_eq!(a, b);
}
