//! Convergence tables for the limit formulas.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asympt::{app1_en_asymptote, b_asymptote, limit_rhs_eq01, normalized_error};
use crate::kernel::MpValue;
use crate::solver::{remez_solve, ProblemSpec, SolverError};

use super::VerifyError;

/// One sweep row. For the weighted sweep `m` is the pole order at infinity;
/// for the unweighted sweep it holds l = n/2.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub m: u32,
    pub l: f64,
    pub normalized: f64,
    pub predicted: f64,
    pub ratio: f64,
    pub b: f64,
    pub b_predicted: f64,
    pub b_diff: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

pub const CSV_HEADER: &str = "m,L,normalized,predicted,ratio,B,B_predicted,B_diff";

impl ConvergenceTable {
    /// CSV with the fixed column set, 17 significant digits per value.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                r.m, r.l, r.normalized, r.predicted, r.ratio, r.b, r.b_predicted, r.b_diff
            ));
        }
        out
    }

    pub fn ratio_deviations(&self) -> Vec<f64> {
        self.rows.iter().map(|r| (r.ratio - 1.0).abs()).collect()
    }

    pub fn b_deviations(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.b_diff.abs()).collect()
    }
}

/// Strict decrease over the final `window` entries.
pub fn strictly_decreasing_tail(values: &[f64], window: usize) -> bool {
    if values.len() < window {
        return false;
    }
    values[values.len() - window..]
        .windows(2)
        .all(|w| w[1] < w[0])
}

/// Sweeps the weighted problem over m at fixed k and a, reporting the
/// normalized error against its limit constant and B against its surrogate.
/// Precision follows the kernel rule per row, floored at `min_bits`.
pub fn convergence_table(
    k: u32,
    a: f64,
    m_from: u32,
    m_to: u32,
    step: u32,
    min_bits: Option<u32>,
) -> Result<ConvergenceTable, VerifyError> {
    let predicted = limit_rhs_eq01(k, a)?;
    let ms: Vec<u32> = (m_from..=m_to).step_by(step.max(1) as usize).collect();
    let rows: Vec<Result<ConvergenceRow, SolverError>> = ms
        .par_iter()
        .map(|&m| {
            let spec = ProblemSpec::weighted_sgn(k, m, a)?;
            let bits = spec.mantissa_bits.max(min_bits.unwrap_or(0));
            let spec = spec.with_mantissa_bits(bits);
            let sol = remez_solve(&spec)?;
            let normalized = normalized_error(k, m, &spec.a, &sol.l).to_f64();
            let b = (&MpValue::from_u32(1, sol.l.mantissa_bits()) / &sol.l)
                .acosh()
                .to_f64();
            let b_predicted = b_asymptote(k, m, a).expect("domain already validated");
            Ok(ConvergenceRow {
                m,
                l: sol.l.to_f64(),
                normalized,
                predicted,
                ratio: normalized / predicted,
                b,
                b_predicted,
                b_diff: b - b_predicted,
            })
        })
        .collect();
    assemble(ms, rows)
}

/// Folds per-row outcomes in sweep order; a failure yields the completed
/// prefix as a partial table inside the error.
fn assemble(
    ms: Vec<u32>,
    rows: Vec<Result<ConvergenceRow, SolverError>>,
) -> Result<ConvergenceTable, VerifyError> {
    let mut done = Vec::with_capacity(rows.len());
    for (m, row) in ms.into_iter().zip(rows) {
        match row {
            Ok(r) => done.push(r),
            Err(source) => {
                return Err(VerifyError::SweepAborted {
                    at: m,
                    source,
                    partial: ConvergenceTable { rows: done },
                })
            }
        }
    }
    Ok(ConvergenceTable { rows: done })
}

/// Sweeps the unweighted problem over l = n/2 at fixed p and a against the
/// closed-form asymptote; the `m` column holds l.
pub fn app1_convergence_table(
    p: f64,
    a: f64,
    l_from: u32,
    l_to: u32,
    min_bits: Option<u32>,
) -> Result<ConvergenceTable, VerifyError> {
    let ls: Vec<u32> = (l_from..=l_to).collect();
    let rows: Vec<Result<ConvergenceRow, SolverError>> = ls
        .par_iter()
        .map(|&l| {
            let spec = ProblemSpec::unweighted_abs_p(p, 2 * l, a)?;
            let bits = spec.mantissa_bits.max(min_bits.unwrap_or(0));
            let spec = spec.with_mantissa_bits(bits);
            let sol = remez_solve(&spec)?;
            let value = sol.l.to_f64();
            let predicted = app1_en_asymptote(p, a, 2 * l).expect("domain already validated");
            let b = (&MpValue::from_u32(1, sol.l.mantissa_bits()) / &sol.l)
                .acosh()
                .to_f64();
            // L ≈ 2 e^{-B}, so ln(2/predicted) is the matching surrogate.
            let b_predicted = (2.0 / predicted).ln();
            Ok(ConvergenceRow {
                m: l,
                l: value,
                normalized: value,
                predicted,
                ratio: value / predicted,
                b,
                b_predicted,
                b_diff: b - b_predicted,
            })
        })
        .collect();
    assemble(ls, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_is_exact() {
        let table = ConvergenceTable { rows: vec![] };
        assert!(table
            .to_csv()
            .starts_with("m,L,normalized,predicted,ratio,B,B_predicted,B_diff\n"));
    }

    #[test]
    fn tail_monotonicity_helper() {
        assert!(strictly_decreasing_tail(&[5.0, 1.0, 4.0, 3.0, 2.0], 3));
        assert!(!strictly_decreasing_tail(&[5.0, 1.0, 4.0, 3.0, 3.0], 3));
        assert!(!strictly_decreasing_tail(&[1.0], 3));
    }

    #[test]
    fn step_strides_the_sweep() {
        let table = convergence_table(0, 0.5, 1, 5, 2, None).unwrap();
        let ms: Vec<u32> = table.rows.iter().map(|r| r.m).collect();
        assert_eq!(ms, vec![1, 3, 5]);
        for r in &table.rows {
            assert!(r.l.is_finite() && r.ratio.is_finite() && r.b_diff.is_finite());
        }
    }

    #[test]
    fn aborted_sweep_reports_position_and_prefix() {
        // a beyond the degeneracy guard fails at the first row.
        let err = convergence_table(1, 0.995, 2, 5, 1, None).unwrap_err();
        match err {
            crate::verify::VerifyError::SweepAborted { at, partial, .. } => {
                assert_eq!(at, 2);
                assert!(partial.rows.is_empty());
            }
            other => panic!("expected sweep abort, got {other}"),
        }
    }
}
