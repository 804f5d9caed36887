//! Command line for the two-interval minimax toolkit: solve single
//! instances, sweep convergence tables, evaluate closed-form constants, and
//! run the verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 numerical failure.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use sgnpoles::asympt::{self, AsymptoticReport, FormulaId, ReportValue};
use sgnpoles::kernel::{MpComplex, MpValue};
use sgnpoles::solver::{
    alternation_in_x, expand_rational, remez_solve, ProblemKind, ProblemSpec, SolverError,
};
use sgnpoles::verify::{
    app1_convergence_table, convergence_table, run_suite, ConvergenceTable, SuiteId, SuiteParams,
    VerifyError,
};

use sgnpoles_cli::envelope::{param, OutputEnvelope, Payload, SolutionPayload};

const PREC_ENV: &str = "APPROX_PREC_BITS";

#[derive(Parser)]
#[command(
    name = "sgnpoles",
    version,
    about = "Minimax approximation of sgn(x) by odd rationals with prescribed poles, with closed-form asymptotics and verification suites"
)]
struct Cli {
    /// Worker threads for sweeps and suites (default: available cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one extremal instance and print its certificate
    Solve(SolveArgs),
    /// Sweep m and emit the convergence table as CSV
    Sweep(SweepArgs),
    /// Evaluate a closed-form constant or model quantity
    Asympt(AsymptArgs),
    /// Run a verification suite; exit 0 iff all checks pass
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Pole order parameter at the origin (weighted problem)
    #[arg(long)]
    k: Option<u32>,
    /// Pole order parameter at infinity (weighted problem)
    #[arg(long)]
    m: Option<u32>,
    /// Inner endpoint a of `[a, 1]`, strictly inside (0, 1)
    #[arg(long)]
    a: f64,
    /// Solve the unweighted |x|^p problem instead
    #[arg(long, default_value_t = false)]
    unweighted: bool,
    /// Exponent p (unweighted problem; positive, not an even integer)
    #[arg(long)]
    p: Option<f64>,
    /// Even polynomial degree n (unweighted problem)
    #[arg(long)]
    n: Option<u32>,
    /// Mantissa bits (default: rule based on m and a, or APPROX_PREC_BITS)
    #[arg(long)]
    prec_bits: Option<u32>,
    /// Relative levelness stop tolerance
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Allow a outside [0.01, 0.99]
    #[arg(long, default_value_t = false)]
    allow_extreme_a: bool,
    #[arg(long, default_value = "text")]
    format: String,
    /// Write the payload to a file instead of stdout
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    a: f64,
    #[arg(long)]
    m_from: u32,
    #[arg(long)]
    m_to: u32,
    #[arg(long, default_value_t = 1)]
    step: u32,
    /// Sweep the unweighted p=1 problem over l = n/2 instead
    #[arg(long, default_value_t = false)]
    unweighted: bool,
    /// Minimum mantissa bits per row (rows escalate by the kernel rule)
    #[arg(long)]
    prec_bits: Option<u32>,
    /// csv (default) or json
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct AsymptArgs {
    /// One of: eq01, eq41, yk, eq62, app1, estar, model-c, model-b,
    /// model-b-q, model-phi
    #[arg(long)]
    formula: String,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    n: Option<u32>,
    /// Real part of z (model-phi)
    #[arg(long)]
    re: Option<f64>,
    /// Imaginary part of z (model-phi)
    #[arg(long)]
    im: Option<f64>,
    #[arg(long, default_value = "text")]
    format: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: equioscillation, symmetry, diagonal, area, curve, oracle,
    /// convergence, app1, all
    #[arg(long)]
    suite: String,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    m_from: Option<u32>,
    #[arg(long)]
    m_to: Option<u32>,
    #[arg(long)]
    prec_bits: Option<u32>,
    #[arg(long, default_value = "text")]
    format: String,
    #[arg(long)]
    out: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .is_err()
        {
            eprintln!("warning: thread pool already initialized; --jobs ignored");
        }
    }
    let code = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Asympt(args) => cmd_asympt(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match code {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn numerical(message: impl Into<String>) -> Failure {
    Failure {
        code: 3,
        message: message.into(),
    }
}

fn solver_failure(e: SolverError) -> Failure {
    match e {
        SolverError::InvalidSpec(_)
        | SolverError::DegenerateA { .. }
        | SolverError::GridTooSmall { .. } => usage(e.to_string()),
        other => numerical(other.to_string()),
    }
}

fn verify_failure(e: VerifyError) -> Failure {
    match e {
        VerifyError::Solver(s) => solver_failure(s),
        other => numerical(other.to_string()),
    }
}

fn effective_bits(flag: Option<u32>, rule: u32) -> u32 {
    flag.or_else(|| {
        std::env::var(PREC_ENV)
            .ok()
            .and_then(|v| v.parse::<u32>().ok())
    })
    .unwrap_or(rule)
}

fn emit(text: &str, out: Option<&str>) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .map_err(|e| usage(format!("cannot write {path}: {e}")))?;
            file.write_all(text.as_bytes())
                .and_then(|_| {
                    if text.ends_with('\n') {
                        Ok(())
                    } else {
                        file.write_all(b"\n")
                    }
                })
                .map_err(|e| usage(format!("cannot write {path}: {e}")))?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    let spec = build_spec(&args)?;
    eprintln!(
        "solving at {} mantissa bits, level tolerance {:e}",
        spec.mantissa_bits, spec.level_tol
    );
    let solution = remez_solve(&spec).map_err(solver_failure)?;
    let b = asympt::b_from_error(&solution.l).map_err(|e| numerical(e.to_string()))?;
    let alternation_x = alternation_in_x(&solution).map_err(solver_failure)?;
    let laurent = match spec.kind {
        ProblemKind::WeightedSgn { .. } => {
            Some(expand_rational(&solution, &spec).map_err(solver_failure)?)
        }
        ProblemKind::UnweightedAbsP { .. } => None,
    };

    let mut params = BTreeMap::new();
    match spec.kind {
        ProblemKind::WeightedSgn { k, m } => {
            param(&mut params, "k", k);
            param(&mut params, "m", m);
        }
        ProblemKind::UnweightedAbsP { p, n } => {
            param(&mut params, "unweighted", true);
            param(&mut params, "p", p);
            param(&mut params, "n", n);
        }
    }
    param(&mut params, "a", args.a);
    param(&mut params, "prec_bits", spec.mantissa_bits);
    param(&mut params, "level_tol", spec.level_tol);
    param(&mut params, "allow_extreme_a", spec.allow_extreme_a);
    param(&mut params, "format", &args.format);

    let payload = SolutionPayload {
        solution,
        b,
        alternation_x,
        laurent,
    };

    match args.format.as_str() {
        "json" => {
            let env = OutputEnvelope::new("solve", params, Payload::Solution(payload), started);
            emit(&env.to_json(), args.out.as_deref())?;
        }
        "text" => {
            let mut text = String::new();
            let sol = &payload.solution;
            text.push_str(&format!("L          = {}\n", sol.l));
            text.push_str(&format!("           ≈ {:.17e}\n", sol.l.to_f64()));
            text.push_str(&format!("B          = {:.17e}\n", payload.b.to_f64()));
            text.push_str(&format!("levelness  = {:.3e}\n", sol.levelness.to_f64()));
            text.push_str(&format!("iterations = {}\n", sol.iterations));
            text.push_str("alternation (t, x, sign):\n");
            for pt in &sol.alternation {
                text.push_str(&format!(
                    "  {:.17e}  {:.17e}  {:+}\n",
                    pt.t.to_f64(),
                    pt.x.to_f64(),
                    pt.sign
                ));
            }
            text.push_str("chebyshev coefficients of Q on [a², 1]:\n");
            for (j, c) in sol.q.coeffs.iter().enumerate() {
                text.push_str(&format!("  c[{j}] = {:.17e}\n", c.to_f64()));
            }
            if let Some(ref laurent) = payload.laurent {
                text.push_str("laurent coefficients of f(x):\n");
                for (exp, c) in &laurent.laurent_coeffs {
                    text.push_str(&format!("  x^{exp:<4} {:.17e}\n", c.to_f64()));
                }
            }
            emit(text.trim_end(), args.out.as_deref())?;
        }
        other => return Err(usage(format!("unknown format {other:?}"))),
    }
    Ok(ExitCode::SUCCESS)
}

fn build_spec(args: &SolveArgs) -> Result<ProblemSpec, Failure> {
    let spec = if args.unweighted {
        let p = args.p.ok_or_else(|| usage("--unweighted requires --p"))?;
        let n = args.n.ok_or_else(|| usage("--unweighted requires --n"))?;
        ProblemSpec::unweighted_abs_p(p, n, args.a).map_err(solver_failure)?
    } else {
        let k = args
            .k
            .ok_or_else(|| usage("--k is required (or use --unweighted)"))?;
        let m = args
            .m
            .ok_or_else(|| usage("--m is required (or use --unweighted)"))?;
        ProblemSpec::weighted_sgn(k, m, args.a).map_err(solver_failure)?
    };
    let bits = effective_bits(args.prec_bits, spec.mantissa_bits);
    let spec = spec
        .with_mantissa_bits(bits)
        .with_level_tol(args.tol)
        .with_allow_extreme_a(args.allow_extreme_a);
    spec.validate().map_err(solver_failure)?;
    Ok(spec)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    if args.m_from > args.m_to {
        return Err(usage(format!(
            "empty sweep range: m_from {} exceeds m_to {}",
            args.m_from, args.m_to
        )));
    }
    if args.step == 0 {
        return Err(usage("--step must be positive"));
    }
    let min_bits = args.prec_bits.or_else(|| {
        std::env::var(PREC_ENV)
            .ok()
            .and_then(|v| v.parse::<u32>().ok())
    });
    eprintln!(
        "sweeping {} m = {}..{} step {}",
        if args.unweighted {
            "unweighted l"
        } else {
            "weighted"
        },
        args.m_from,
        args.m_to,
        args.step
    );
    let table_result = if args.unweighted {
        app1_convergence_table(1.0, args.a, args.m_from, args.m_to, min_bits)
    } else {
        convergence_table(args.k, args.a, args.m_from, args.m_to, args.step, min_bits)
    };
    let table: ConvergenceTable = match table_result {
        Ok(t) => t,
        Err(VerifyError::SweepAborted {
            at,
            source,
            partial,
        }) => {
            // Emit the completed prefix before failing.
            if args.format == "csv" && !partial.rows.is_empty() {
                emit(partial.to_csv().trim_end(), args.out.as_deref())?;
            }
            return Err(numerical(format!("sweep aborted at m={at}: {source}")));
        }
        Err(e) => return Err(verify_failure(e)),
    };

    let mut params = BTreeMap::new();
    param(&mut params, "k", args.k);
    param(&mut params, "a", args.a);
    param(&mut params, "m_from", args.m_from);
    param(&mut params, "m_to", args.m_to);
    param(&mut params, "step", args.step);
    param(&mut params, "unweighted", args.unweighted);
    param(&mut params, "prec_bits_floor", min_bits);
    param(&mut params, "format", &args.format);

    match args.format.as_str() {
        "csv" => emit(table.to_csv().trim_end(), args.out.as_deref())?,
        "json" => {
            let env = OutputEnvelope::new("sweep", params, Payload::Table(table), started);
            emit(&env.to_json(), args.out.as_deref())?;
        }
        other => return Err(usage(format!("unknown format {other:?}"))),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_asympt(args: AsymptArgs) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    let report = evaluate_formula(&args)?;

    let mut params = BTreeMap::new();
    param(&mut params, "formula", &args.formula);
    for (name, value) in &report.inputs {
        param(&mut params, name, value);
    }
    param(&mut params, "format", &args.format);

    match args.format.as_str() {
        "json" => {
            let env = OutputEnvelope::new("asympt", params, Payload::Asympt(report), started);
            emit(&env.to_json(), args.out.as_deref())?;
        }
        "text" => {
            let text = match report.value {
                ReportValue::Real(v) => format!("{} = {:.17e}", args.formula, v),
                ReportValue::Complex { re, im } => {
                    format!("{} = {:.17e} {:+.17e}i", args.formula, re, im)
                }
            };
            emit(&text, args.out.as_deref())?;
        }
        other => return Err(usage(format!("unknown format {other:?}"))),
    }
    Ok(ExitCode::SUCCESS)
}

fn evaluate_formula(args: &AsymptArgs) -> Result<AsymptoticReport, Failure> {
    let need = |opt: Option<f64>, name: &str| {
        opt.ok_or_else(|| usage(format!("--formula {} requires --{name}", args.formula)))
    };
    let need_u = |opt: Option<u32>, name: &str| {
        opt.ok_or_else(|| usage(format!("--formula {} requires --{name}", args.formula)))
    };
    let num = |e: asympt::AsymptError| numerical(e.to_string());

    Ok(match args.formula.as_str() {
        "eq01" => {
            let (k, a) = (need_u(args.k, "k")?, need(args.a, "a")?);
            let v = asympt::limit_rhs_eq01(k, a).map_err(num)?;
            AsymptoticReport::new(
                FormulaId::Eq01,
                [("k", k as f64), ("a", a)],
                ReportValue::Real(v),
            )
        }
        "eq41" => {
            let (k, m, a) = (
                need_u(args.k, "k")?,
                need_u(args.m, "m")?,
                need(args.a, "a")?,
            );
            let v = asympt::b_asymptote(k, m, a).map_err(num)?;
            AsymptoticReport::new(
                FormulaId::Eq41B,
                [("k", k as f64), ("m", m as f64), ("a", a)],
                ReportValue::Real(v),
            )
        }
        "yk" => {
            let k = need_u(args.k, "k")?;
            AsymptoticReport::new(
                FormulaId::Yk,
                [("k", k as f64)],
                ReportValue::Real(asympt::y_k_closed(k)),
            )
        }
        "eq62" => {
            let a = need(args.a, "a")?;
            let v = asympt::diag_limit_rhs(a).map_err(num)?;
            AsymptoticReport::new(
                FormulaId::Eq62Diag,
                [("a", a), ("a_prime", asympt::diag_map(a))],
                ReportValue::Real(v),
            )
        }
        "app1" => {
            let (p, a, n) = (need(args.p, "p")?, need(args.a, "a")?, need_u(args.n, "n")?);
            let v = asympt::app1_en_asymptote(p, a, n).map_err(num)?;
            AsymptoticReport::new(
                FormulaId::App1En,
                [("p", p), ("a", a), ("n", n as f64)],
                ReportValue::Real(v),
            )
        }
        "estar" => {
            let (p, a) = (need(args.p, "p")?, need(args.a, "a")?);
            let v = asympt::estar_limit_const(p, a).map_err(num)?;
            AsymptoticReport::new(
                FormulaId::EstarConst,
                [("p", p), ("a", a)],
                ReportValue::Real(v),
            )
        }
        "model-c" => {
            let (k, m, a) = (
                need_u(args.k, "k")?,
                need_u(args.m, "m")?,
                need(args.a, "a")?,
            );
            let v = asympt::model_critical_point(k, m, a).map_err(num)?;
            AsymptoticReport::new(
                FormulaId::ModelC,
                [("k", k as f64), ("m", m as f64), ("a", a)],
                ReportValue::Real(v),
            )
        }
        "model-b" => {
            let (k, m, a) = (
                need_u(args.k, "k")?,
                need_u(args.m, "m")?,
                need(args.a, "a")?,
            );
            let v = asympt::model_b(k, m, a).map_err(num)?;
            AsymptoticReport::new(
                FormulaId::ModelB,
                [("k", k as f64), ("m", m as f64), ("a", a)],
                ReportValue::Real(v),
            )
        }
        "model-b-q" => {
            let (q, m, a) = (
                need_u(args.q, "q")?,
                need_u(args.m, "m")?,
                need(args.a, "a")?,
            );
            let v = asympt::model_b_q(q, m, a).map_err(num)?;
            AsymptoticReport::new(
                FormulaId::ModelBQ,
                [("q", q as f64), ("m", m as f64), ("a", a)],
                ReportValue::Real(v),
            )
        }
        "model-phi" => {
            let (k, m, a) = (
                need_u(args.k, "k")?,
                need_u(args.m, "m")?,
                need(args.a, "a")?,
            );
            let re = need(args.re, "re")?;
            let im = args.im.unwrap_or(0.0);
            let bits = 192;
            let z = MpComplex::new(MpValue::from_f64(re, bits), MpValue::from_f64(im, bits));
            let phi = asympt::model_phi(&z, k, m, &MpValue::from_f64(a, bits)).map_err(num)?;
            AsymptoticReport::new(
                FormulaId::ModelPhi,
                [
                    ("k", k as f64),
                    ("m", m as f64),
                    ("a", a),
                    ("re", re),
                    ("im", im),
                ],
                ReportValue::Complex {
                    re: phi.re.to_f64(),
                    im: phi.im.to_f64(),
                },
            )
        }
        other => return Err(usage(format!("unknown formula {other:?}"))),
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    let suite = SuiteId::parse(&args.suite)
        .ok_or_else(|| usage(format!("unknown suite {:?}", args.suite)))?;
    let suite_params = SuiteParams {
        k: args.k,
        m: args.m,
        a: args.a,
        grid: args.grid,
        tol: args.tol,
        m_from: args.m_from,
        m_to: args.m_to,
        prec_bits: args.prec_bits.or_else(|| {
            std::env::var(PREC_ENV)
                .ok()
                .and_then(|v| v.parse::<u32>().ok())
        }),
    };
    eprintln!("running suite {:?}", args.suite);
    let reports = run_suite(suite, &suite_params).map_err(verify_failure)?;
    let all_passed = reports.iter().all(|r| r.passed);

    let mut params = BTreeMap::new();
    param(&mut params, "suite", &args.suite);
    param(&mut params, "k", suite_params.k);
    param(&mut params, "m", suite_params.m);
    param(&mut params, "a", suite_params.a);
    param(&mut params, "grid", suite_params.grid);
    param(&mut params, "tol", suite_params.tol);
    param(&mut params, "m_from", suite_params.m_from);
    param(&mut params, "m_to", suite_params.m_to);
    param(&mut params, "prec_bits", suite_params.prec_bits);
    param(&mut params, "format", &args.format);

    match args.format.as_str() {
        "json" => {
            let env = OutputEnvelope::new("verify", params, Payload::Checks(reports), started);
            emit(&env.to_json(), args.out.as_deref())?;
        }
        "text" => {
            let mut text = String::new();
            for r in &reports {
                let status = if r.passed { "PASS" } else { "FAIL" };
                text.push_str(&format!("{status} {}", r.check_id));
                if !r.details.is_empty() {
                    text.push_str(&format!(" ({})", r.details));
                }
                text.push('\n');
            }
            emit(text.trim_end(), args.out.as_deref())?;
        }
        other => return Err(usage(format!("unknown format {other:?}"))),
    }
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
