//! Cross-instance solver properties: exchange monotonicity, the oracle
//! sandwich, parameter symmetry, diagonal reduction, and basic bounds.

use sgnpoles::asympt::diag_map_mp;
use sgnpoles::kernel::MpValue;
use sgnpoles::solver::{grid_oracle, remez_solve, ProblemKind, ProblemSpec};

fn solve(k: u32, m: u32, a: f64) -> sgnpoles::EquiSolution {
    remez_solve(&ProblemSpec::weighted_sgn(k, m, a).unwrap()).unwrap()
}

#[test]
fn levelled_deviation_is_nondecreasing_across_exchanges() {
    for (k, m, a) in [(1u32, 4u32, 0.5f64), (2, 3, 0.3), (0, 6, 0.6)] {
        let sol = solve(k, m, a);
        for w in sol.deviation_history.windows(2) {
            assert!(
                w[1] >= w[0] * (1.0 - 1e-12),
                "deviation dropped: {} -> {} (k={k}, m={m}, a={a})",
                w[0],
                w[1]
            );
        }
    }
}

#[test]
fn oracle_sandwich_tightens_as_grid_doubles() {
    // Discrete minimax from below; the gap to L shrinks at least
    // quadratically with grid refinement on Chebyshev-distributed nodes.
    let spec = ProblemSpec::weighted_sgn(1, 1, 0.25).unwrap();
    let l = remez_solve(&spec).unwrap().l;
    let mut gaps = Vec::new();
    for grid in [250usize, 500, 1000, 2000] {
        let oracle = grid_oracle(&spec, grid).unwrap();
        let gap = (&l - &oracle).to_f64();
        assert!(gap >= -1e-13, "oracle exceeded L at grid {grid}");
        gaps.push(gap.max(0.0));
    }
    let ratios: Vec<f64> = gaps.windows(2).map(|w| w[1] / w[0]).collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!(
        mean <= 0.5,
        "successive gap ratios {ratios:?} average {mean}, want ≤ 0.5"
    );
}

#[test]
fn pole_orders_enter_symmetrically() {
    for (k, m) in [(1u32, 2u32), (2, 3)] {
        let l_km = solve(k, m, 0.5).l;
        let l_mk = solve(m, k, 0.5).l;
        let rel = (&(&l_km - &l_mk).abs() / &l_km).to_f64();
        assert!(rel < 1e-9, "(k,m)=({k},{m}): rel {rel:e}");
    }
}

#[test]
fn diagonal_reduces_to_k0_at_mapped_parameter() {
    let m = 2u32;
    let a = 0.5f64;
    let l_mm = solve(m, m, a).l;
    let a_prime = diag_map_mp(&MpValue::from_f64(a, 192));
    let spec0 = ProblemSpec::weighted_sgn(0, m, a_prime.to_f64())
        .unwrap()
        .with_a_value(a_prime);
    let l_0m = remez_solve(&spec0).unwrap().l;
    let rel = (&(&l_mm - &l_0m).abs() / &l_mm).to_f64();
    assert!(rel < 1e-9, "rel {rel:e}");
}

#[test]
fn error_decreases_with_larger_approximant_class() {
    let mut prev = f64::INFINITY;
    for m in 1..=6 {
        let l = solve(1, m, 0.5).l.to_f64();
        assert!(l < prev, "L did not decrease at m={m}: {l} vs {prev}");
        prev = l;
    }
}

#[test]
fn weighted_error_is_strictly_inside_unit_interval() {
    for (k, m, a) in [(0u32, 1u32, 0.2f64), (1, 1, 0.25), (2, 4, 0.7), (3, 2, 0.5)] {
        let l = solve(k, m, a).l.to_f64();
        assert!(
            l > 0.0 && l < 1.0,
            "L={l} out of (0,1) at k={k} m={m} a={a}"
        );
    }
}

#[test]
fn alternation_count_and_signs() {
    for (k, m, a) in [(0u32, 3u32, 0.4f64), (2, 2, 0.5)] {
        let sol = solve(k, m, a);
        assert_eq!(sol.alternation.len(), (k + m + 1) as usize);
        for w in sol.alternation.windows(2) {
            assert_eq!(w[0].sign * w[1].sign, -1, "signs must strictly alternate");
        }
        let l = sol.l.to_f64();
        for pt in &sol.alternation {
            let dev = pt.residual.abs().to_f64();
            assert!((dev - l).abs() / l <= 1e-11);
        }
    }
}

#[test]
fn unweighted_solver_handles_general_p() {
    // p = 1/2: alternation structure holds even without closed forms.
    let spec = ProblemSpec::unweighted_abs_p(0.5, 6, 0.5).unwrap();
    let sol = remez_solve(&spec).unwrap();
    assert_eq!(sol.alternation.len(), 5);
    assert!(sol.l.to_f64() > 0.0);
    assert!(matches!(spec.kind, ProblemKind::UnweightedAbsP { .. }));
}

#[test]
fn insufficient_precision_is_diagnosed() {
    // 64 bits cannot resolve L ~ 3e-21 against unit-scale targets... it
    // actually can in magnitude, but the exchange needs the residual digits;
    // the guard asks for more bits instead of looping.
    let spec = ProblemSpec::weighted_sgn(0, 40, 0.5)
        .unwrap()
        .with_mantissa_bits(64);
    match remez_solve(&spec) {
        Err(sgnpoles::solver::SolverError::PrecisionInsufficient { suggest, .. }) => {
            assert!(suggest > 64);
        }
        Err(other) => panic!("expected precision diagnosis, got {other}"),
        Ok(sol) => panic!("expected failure, got L={}", sol.l.to_f64()),
    }
}
