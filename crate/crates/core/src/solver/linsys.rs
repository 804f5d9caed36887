//! Dense multiprecision linear solve for the levelled exchange system.

use crate::kernel::MpValue;

use super::SolverError;

/// Gaussian elimination with column pivoting (largest magnitude in the
/// pivot column). Overwrites its inputs; returns the solution vector.
pub(crate) fn solve_dense(
    mut a: Vec<Vec<MpValue>>,
    mut b: Vec<MpValue>,
) -> Result<Vec<MpValue>, SolverError> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .abs()
                    .partial_cmp(&a[j][col].abs())
                    .expect("finite pivot comparison")
            })
            .unwrap();
        if a[pivot_row][col].is_zero() {
            return Err(SolverError::SingularSystem);
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let (pivot_rows, rest) = a.split_at_mut(row);
            let pivot = &pivot_rows[col];
            let current = &mut rest[0];
            let factor = &current[col] / &pivot[col];
            for (ck, pk) in current[col + 1..].iter_mut().zip(&pivot[col + 1..]) {
                *ck = &*ck - &(&factor * pk);
            }
            b[row] = &b[row] - &(&factor * &b[col]);
            current[col] = MpValue::zero(factor.mantissa_bits());
        }
    }
    let mut x = b;
    for col in (0..n).rev() {
        for k in col + 1..n {
            let t = &a[col][k] * &x[k];
            x[col] = &x[col] - &t;
        }
        x[col] = &x[col] / &a[col][col];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64) -> MpValue {
        MpValue::from_f64(x, 160)
    }

    #[test]
    fn solves_small_system() {
        // [2 1; 1 3] x = [5; 10] -> x = [1, 3]
        let a = vec![vec![v(2.0), v(1.0)], vec![v(1.0), v(3.0)]];
        let b = vec![v(5.0), v(10.0)];
        let x = solve_dense(a, b).unwrap();
        assert!((x[0].to_f64() - 1.0).abs() < 1e-30);
        assert!((x[1].to_f64() - 3.0).abs() < 1e-30);
    }

    #[test]
    fn reports_singularity() {
        let a = vec![vec![v(1.0), v(2.0)], vec![v(2.0), v(4.0)]];
        let b = vec![v(1.0), v(2.0)];
        assert!(matches!(
            solve_dense(a, b),
            Err(SolverError::SingularSystem)
        ));
    }

    #[test]
    fn random_system_residual_is_tiny() {
        use rug::rand::RandState;
        let prec = 192u32;
        let mut rng = RandState::new();
        rng.seed(&rug::Integer::from(42u64));
        let n = 25;
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for _ in 0..n {
            let row: Vec<MpValue> = (0..n)
                .map(|_| {
                    MpValue::from_float(rug::Float::with_val(
                        prec,
                        rug::Float::random_cont(&mut rng),
                    ))
                })
                .collect();
            a.push(row);
            b.push(MpValue::from_float(rug::Float::with_val(
                prec,
                rug::Float::random_cont(&mut rng),
            )));
        }
        let x = solve_dense(a.clone(), b.clone()).unwrap();
        for i in 0..n {
            let mut acc = MpValue::zero(prec);
            for j in 0..n {
                acc = &acc + &(&a[i][j] * &x[j]);
            }
            let res = (&acc - &b[i]).abs().to_f64();
            assert!(res < 1e-45, "row {i} residual {res:e}");
        }
    }
}
