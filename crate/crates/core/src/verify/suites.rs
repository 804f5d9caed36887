//! Named check suites with built-in default instances, run in parallel and
//! merged in declaration order.

use rayon::prelude::*;

use crate::kernel::{MpValue, Quadrature};
use crate::solver::{remez_solve, ProblemSpec};

use super::checks::{
    check_area_identity, check_curve_equation, check_diagonal, check_equioscillation, check_oracle,
    check_symmetry, CurveOptions,
};
use super::tables::{app1_convergence_table, convergence_table, strictly_decreasing_tail};
use super::{CheckReport, VerifyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteId {
    Equioscillation,
    Symmetry,
    Diagonal,
    Area,
    Curve,
    Oracle,
    Convergence,
    App1,
    All,
}

impl SuiteId {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "equioscillation" => SuiteId::Equioscillation,
            "symmetry" => SuiteId::Symmetry,
            "diagonal" => SuiteId::Diagonal,
            "area" => SuiteId::Area,
            "curve" => SuiteId::Curve,
            "oracle" => SuiteId::Oracle,
            "convergence" => SuiteId::Convergence,
            "app1" => SuiteId::App1,
            "all" => SuiteId::All,
            _ => return None,
        })
    }
}

/// Overridable suite parameters; `None` keeps the built-in defaults.
#[derive(Debug, Clone, Default)]
pub struct SuiteParams {
    pub k: Option<u32>,
    pub m: Option<u32>,
    pub a: Option<f64>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub m_from: Option<u32>,
    pub m_to: Option<u32>,
    pub prec_bits: Option<u32>,
}

type Job = Box<dyn Fn() -> Result<CheckReport, VerifyError> + Send + Sync>;

fn run_jobs(jobs: Vec<Job>) -> Result<Vec<CheckReport>, VerifyError> {
    jobs.par_iter().map(|job| job()).collect()
}

pub fn run_suite(suite: SuiteId, params: &SuiteParams) -> Result<Vec<CheckReport>, VerifyError> {
    let mut jobs: Vec<Job> = Vec::new();
    collect_jobs(suite, params, &mut jobs);
    run_jobs(jobs)
}

fn collect_jobs(suite: SuiteId, params: &SuiteParams, jobs: &mut Vec<Job>) {
    let p = params.clone();
    match suite {
        SuiteId::Equioscillation => {
            jobs.push(Box::new(move || {
                let spec = ProblemSpec::weighted_sgn(
                    p.k.unwrap_or(0),
                    p.m.unwrap_or(1),
                    p.a.unwrap_or(1.0 / 3.0),
                )?;
                let sol = remez_solve(&spec)?;
                check_equioscillation(&sol, &spec)
            }));
            let p = params.clone();
            jobs.push(Box::new(move || {
                let spec = ProblemSpec::unweighted_abs_p(1.0, 2, p.a.unwrap_or(0.5))?;
                let sol = remez_solve(&spec)?;
                check_equioscillation(&sol, &spec)
            }));
        }
        SuiteId::Symmetry => {
            let tol = params.tol.unwrap_or(1e-9);
            for (k, m) in [(1u32, 2u32), (2, 3)] {
                for a in [0.3, 0.6] {
                    jobs.push(Box::new(move || check_symmetry(k, m, a, tol)));
                }
            }
        }
        SuiteId::Diagonal => {
            let tol = params.tol.unwrap_or(1e-9);
            let ms = params.m.map(|m| vec![m]).unwrap_or_else(|| vec![1, 2, 3]);
            let avals = params.a.map(|a| vec![a]).unwrap_or_else(|| vec![0.25, 0.5]);
            for m in ms {
                for &a in &avals {
                    jobs.push(Box::new(move || check_diagonal(m, a, tol)));
                }
            }
        }
        SuiteId::Area => {
            jobs.push(Box::new(move || {
                let m = p.m.unwrap_or(6);
                let a = p.a.unwrap_or(0.4);
                let spec = ProblemSpec::unweighted_abs_p(1.0, 2 * m, a)?;
                let sol = remez_solve(&spec)?;
                let quad = Quadrature::new(
                    MpValue::from_f64(p.tol.unwrap_or(1e-10), spec.mantissa_bits),
                    20_000,
                );
                check_area_identity(&sol, &spec, &quad)
            }));
        }
        SuiteId::Curve => {
            jobs.push(Box::new(move || {
                let m = p.m.unwrap_or(6);
                let a = p.a.unwrap_or(0.4);
                let spec = ProblemSpec::unweighted_abs_p(1.0, 2 * m, a)?;
                let sol = remez_solve(&spec)?;
                check_curve_equation(&sol, &spec, &CurveOptions::default())
            }));
        }
        SuiteId::Oracle => {
            let grid = params.grid.unwrap_or(4000);
            let tol = params.tol.unwrap_or(1e-5);
            let a = params.a.unwrap_or(0.5);
            for k in 0..=params.k.unwrap_or(2) {
                for m in 1..=params.m.unwrap_or(6) {
                    jobs.push(Box::new(move || {
                        let spec = ProblemSpec::weighted_sgn(k, m, a)?;
                        check_oracle(&spec, grid, tol)
                    }));
                }
            }
        }
        SuiteId::Convergence => {
            jobs.push(Box::new(move || {
                convergence_check(
                    p.k.unwrap_or(1),
                    p.a.unwrap_or(0.5),
                    p.m_from.unwrap_or(5),
                    p.m_to.unwrap_or(40),
                    p.prec_bits.or(Some(256)),
                )
            }));
        }
        SuiteId::App1 => {
            jobs.push(Box::new(move || {
                app1_check(
                    p.a.unwrap_or(0.5),
                    p.m_from.unwrap_or(5),
                    p.m_to.unwrap_or(40),
                    p.prec_bits,
                )
            }));
        }
        SuiteId::All => {
            for s in [
                SuiteId::Equioscillation,
                SuiteId::Symmetry,
                SuiteId::Diagonal,
                SuiteId::Area,
                SuiteId::Curve,
                SuiteId::Oracle,
                SuiteId::Convergence,
                SuiteId::App1,
            ] {
                collect_jobs(s, params, jobs);
            }
        }
    }
}

/// Tail behaviour of the weighted sweep: |ratio-1| strictly decreasing over
/// the last ten rows and small at the end; B - B_surrogate likewise.
fn convergence_check(
    k: u32,
    a: f64,
    m_from: u32,
    m_to: u32,
    prec_bits: Option<u32>,
) -> Result<CheckReport, VerifyError> {
    let mut report = CheckReport::new(&format!("convergence-k{k}-a{a}"), 0.05);
    let table = convergence_table(k, a, m_from, m_to, 1, prec_bits)?;
    let ratio_dev = table.ratio_deviations();
    let b_dev = table.b_deviations();
    let window = 10.min(ratio_dev.len());
    report.gate_flag(
        "ratio_tail_decreasing",
        strictly_decreasing_tail(&ratio_dev, window),
        "|ratio - 1| not strictly decreasing over the tail",
    );
    report.gate("ratio_dev_final", *ratio_dev.last().unwrap_or(&f64::NAN));
    report.gate_flag(
        "b_tail_decreasing",
        strictly_decreasing_tail(&b_dev, window),
        "|B - B_surrogate| not strictly decreasing over the tail",
    );
    report.gate("b_diff_final", *b_dev.last().unwrap_or(&f64::NAN));
    Ok(report)
}

/// Tail behaviour of the unweighted sweep against the closed asymptote.
fn app1_check(
    a: f64,
    l_from: u32,
    l_to: u32,
    prec_bits: Option<u32>,
) -> Result<CheckReport, VerifyError> {
    let mut report = CheckReport::new(&format!("app1-p1-a{a}"), 0.1);
    let table = app1_convergence_table(1.0, a, l_from, l_to, prec_bits)?;
    let ratio_dev = table.ratio_deviations();
    let window = 10.min(ratio_dev.len());
    report.gate_flag(
        "ratio_tail_decreasing",
        strictly_decreasing_tail(&ratio_dev, window),
        "|ratio - 1| not strictly decreasing over the tail",
    );
    report.gate("ratio_dev_final", *ratio_dev.last().unwrap_or(&f64::NAN));
    // Errors shrink strictly as the polynomial class grows.
    let l_values: Vec<f64> = table.rows.iter().map(|r| r.l).collect();
    report.gate_flag(
        "error_strictly_decreasing",
        l_values.windows(2).all(|w| w[1] < w[0]),
        "E_n not strictly decreasing in n",
    );
    Ok(report)
}
