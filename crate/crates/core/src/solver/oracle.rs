//! Independent discrete-grid minimax oracle.
//!
//! Solves the same reduced problem restricted to a fixed Chebyshev grid by
//! discrete multi-point exchange. The discrete optimum never exceeds the
//! continuum error, and approaches it quadratically as the grid refines, so
//! it cross-checks the Remez solver without sharing its search machinery.

use crate::kernel::MpValue;

use super::linsys::solve_dense;
use super::remez::chebyshev_nodes;
use super::{reduce_to_interval, ProblemSpec, Reduction, SolverError};

const MAX_EXCHANGES: usize = 200;

struct Grid {
    weights: Vec<MpValue>,
    targets: Vec<MpValue>,
    /// Chebyshev basis rows per node, degree+1 wide.
    basis: Vec<Vec<MpValue>>,
}

fn build_grid(red: &Reduction, size: usize, bits: u32) -> Grid {
    let nodes = chebyshev_nodes(&red.lo, &red.hi, size, bits);
    let shell = crate::kernel::ChebPoly::new(
        red.lo.clone(),
        red.hi.clone(),
        vec![MpValue::zero(bits); red.degree + 1],
    );
    let two = MpValue::from_u32(2, bits);
    let mut weights = Vec::with_capacity(size);
    let mut targets = Vec::with_capacity(size);
    let mut basis = Vec::with_capacity(size);
    for t in &nodes {
        weights.push(red.weight(t));
        targets.push(red.target(t));
        let u = shell.to_reference(t);
        let mut row = Vec::with_capacity(red.degree + 1);
        row.push(MpValue::from_u32(1, bits));
        if red.degree >= 1 {
            row.push(u.clone());
            let two_u = &two * &u;
            for j in 2..=red.degree {
                let next = &(&two_u * &row[j - 1]) - &row[j - 2];
                row.push(next);
            }
        }
        basis.push(row);
    }
    Grid {
        weights,
        targets,
        basis,
    }
}

/// Signed residuals at every grid node for coefficient vector `coeffs`.
fn grid_residuals(grid: &Grid, coeffs: &[MpValue], bits: u32) -> Vec<MpValue> {
    grid.basis
        .iter()
        .zip(&grid.weights)
        .zip(&grid.targets)
        .map(|((row, w), g)| {
            let mut q = MpValue::zero(bits);
            for (b, c) in row.iter().zip(coeffs) {
                q = &q + &(b * c);
            }
            g - &(w * &q)
        })
        .collect()
}

/// Extracts one candidate per sign run of the residual (the run's largest
/// deviation), then trims to `want` entries while preserving alternation
/// and the global maximum.
fn alternating_candidates(residuals: &[MpValue], want: usize) -> Vec<usize> {
    let mut candidates: Vec<usize> = Vec::new();
    let mut run_sign = 0i8;
    for (i, r) in residuals.iter().enumerate() {
        let s = if r.is_sign_negative() { -1 } else { 1 };
        if s != run_sign {
            run_sign = s;
            candidates.push(i);
        } else if r.abs() > residuals[*candidates.last().unwrap()].abs() {
            *candidates.last_mut().unwrap() = i;
        }
    }
    while candidates.len() > want {
        if candidates.len() == want + 1 {
            // Drop the weaker end.
            let first = residuals[candidates[0]].abs();
            let last = residuals[*candidates.last().unwrap()].abs();
            if first <= last {
                candidates.remove(0);
            } else {
                candidates.pop();
            }
        } else {
            // Drop the adjacent pair with the smallest larger deviation.
            let mut best_i = 0;
            let mut best_val: Option<MpValue> = None;
            for i in 0..candidates.len() - 1 {
                let pair_max = residuals[candidates[i]]
                    .abs()
                    .max(&residuals[candidates[i + 1]].abs());
                if best_val.as_ref().is_none_or(|b| pair_max < *b) {
                    best_val = Some(pair_max);
                    best_i = i;
                }
            }
            candidates.drain(best_i..best_i + 2);
        }
    }
    candidates
}

/// Minimax error of the problem discretized to `grid_size` Chebyshev nodes.
///
/// Converges from below: the returned levelled deviation equals the exact
/// discrete minimax value once no grid node exceeds it. A grid of exactly
/// N+2 nodes degenerates to levelled interpolation.
pub fn grid_oracle(spec: &ProblemSpec, grid_size: usize) -> Result<MpValue, SolverError> {
    let red = reduce_to_interval(spec)?;
    let bits = spec.mantissa_bits;
    let n_pts = red.degree + 2;
    if grid_size < n_pts {
        return Err(SolverError::GridTooSmall {
            need: n_pts,
            got: grid_size,
        });
    }
    let grid = build_grid(&red, grid_size, bits);
    let stop_tol = MpValue::from_f64(spec.level_tol, bits);
    let one = MpValue::from_u32(1, bits);

    // Initial reference: n_pts indices spread uniformly through the grid.
    let mut reference: Vec<usize> = (0..n_pts)
        .map(|j| (j * (grid_size - 1)) / (n_pts - 1))
        .collect();

    let mut best_h: Option<MpValue> = None;
    for _ in 0..MAX_EXCHANGES {
        let mut matrix = Vec::with_capacity(n_pts);
        let mut rhs = Vec::with_capacity(n_pts);
        for (i, &gidx) in reference.iter().enumerate() {
            let mut row: Vec<MpValue> = grid.basis[gidx]
                .iter()
                .map(|b| b * &grid.weights[gidx])
                .collect();
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            row.push(MpValue::from_f64(sign, bits));
            matrix.push(row);
            rhs.push(grid.targets[gidx].clone());
        }
        let mut coeffs = solve_dense(matrix, rhs)?;
        let h = coeffs.pop().expect("levelled column").abs();

        let residuals = grid_residuals(&grid, &coeffs, bits);
        let max_dev = residuals
            .iter()
            .map(MpValue::abs)
            .fold(MpValue::zero(bits), |acc, d| acc.max(&d));

        if max_dev <= &h * &(&one + &stop_tol) {
            return Ok(h);
        }
        // Exchange guarantees a nondecreasing levelled deviation; a drop
        // means the reference degenerated, so re-seed densely.
        let degraded = best_h.as_ref().is_some_and(|b| h < *b);
        best_h = Some(match best_h {
            Some(b) => b.max(&h),
            None => h.clone(),
        });
        let next = alternating_candidates(&residuals, n_pts);
        if next.len() < n_pts || degraded {
            let mut reseed: Vec<usize> = (0..n_pts)
                .map(|j| (j * (grid_size - 1)) / (n_pts - 1))
                .collect();
            // Keep the worst offender in the reseeded reference.
            if let Some((worst, _)) = residuals
                .iter()
                .enumerate()
                .max_by(|(_, a), (_, b)| a.abs().partial_cmp(&b.abs()).unwrap())
            {
                if let Err(pos) = reseed.binary_search(&worst) {
                    if pos < reseed.len() {
                        reseed[pos] = worst;
                    }
                }
            }
            reference = reseed;
        } else {
            reference = next;
        }
    }
    Err(SolverError::OracleStalled { grid: grid_size })
}
