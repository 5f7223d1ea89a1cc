//! Implementations of the subcommands.

use crate::output::{emit, run, CliError, CliResult, EXIT_OK, EXIT_VERIFY_FAILED};
use crate::{
    BoundsArgs, CompareArgs, CommonArgs, EquationArgs, EquationKind, FreqMode, OutputFormat,
    PeriodArgs, PeriodMethodArg, SeriesKind, SolveArgs, SweepArgs, VerifyArgs,
};
use anharmonic::diagnostics::{self, ScanOutcome};
use anharmonic::jsonio::{fmt_g17, scans_to_json};
use anharmonic::{
    calibrate_frequency, compute_sin_coefficients, compute_taylor_coefficients,
    evaluate_sin_series, evaluate_taylor, make_cubic, make_cubic_normalized,
    make_quadratic_shifted, period_by_calibration, period_by_quadrature,
    period_duffing_closed_form, GeneralProblem, ShiftRecord,
};

const DEFAULT_MAX_TERMS: usize = 4096;
/// Calibration gets at least this many terms so the tail objective's
/// minimum sits within 1e-6 of pi/T even for slowly decaying series.
const CALIBRATION_MIN_TERMS: usize = 256;

fn max_terms() -> usize {
    std::env::var("OSC_MAX_TERMS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_TERMS)
}

fn effective_terms(common: &CommonArgs, default: usize) -> CliResult<usize> {
    let terms = common.terms.unwrap_or(default);
    let cap = max_terms();
    if terms > cap {
        return Err(CliError::usage(format!(
            "--terms {terms} exceeds OSC_MAX_TERMS = {cap}"
        )));
    }
    Ok(terms)
}

/// Build the problem from either the named-equation flags or the raw
/// coefficients. Exactly one style must be present.
pub fn resolve_problem(args: &EquationArgs) -> CliResult<(GeneralProblem, Option<ShiftRecord>)> {
    if args.raw {
        let v0 = args
            .v0
            .ok_or_else(|| CliError::usage("--raw requires --v0"))?;
        let problem = GeneralProblem::from_coefficients(
            args.coef_a,
            args.coef_b,
            args.coef_c,
            args.coef_d,
            v0,
        )?;
        return Ok((problem, None));
    }
    let Some(kind) = args.equation else {
        return Err(CliError::usage(
            "specify exactly one of --equation <name> or --raw",
        ));
    };
    let omega = args
        .omega
        .ok_or_else(|| CliError::usage("--equation requires --omega"))?;
    let beta = args
        .beta
        .ok_or_else(|| CliError::usage("--equation requires --beta"))?;
    let a0 = args
        .a0
        .ok_or_else(|| CliError::usage("--equation requires --a0"))?;
    Ok(match kind {
        EquationKind::Quadratic => {
            let (p, s) = make_quadratic_shifted(omega, beta, a0)?;
            (p, Some(s))
        }
        EquationKind::Cubic => (make_cubic(omega, beta, a0)?, None),
        EquationKind::CubicNormalized => {
            let (p, s) = make_cubic_normalized(omega, beta, a0)?;
            (p, Some(s))
        }
    })
}

/// Resolve the series frequency according to `--freq`.
pub fn resolve_frequency(
    problem: &GeneralProblem,
    args: &EquationArgs,
    common: &CommonArgs,
    terms: usize,
) -> CliResult<f64> {
    match common.freq {
        FreqMode::Paper => match args.equation {
            Some(EquationKind::Quadratic) | Some(EquationKind::Cubic) => Ok(args.omega.unwrap()),
            Some(EquationKind::CubicNormalized) => Ok(1.0),
            None => {
                if problem.b < 0.0 {
                    Ok((-problem.b).sqrt())
                } else {
                    Err(CliError::usage(
                        "--freq paper on a raw problem needs B < 0",
                    ))
                }
            }
        },
        FreqMode::Period => Ok(period_by_quadrature(problem, 16)?.omega),
        FreqMode::Calibrated => {
            Ok(calibrate_frequency(problem, terms.max(CALIBRATION_MIN_TERMS), None)?)
        }
        FreqMode::Fixed => common
            .omega_series
            .ok_or_else(|| CliError::usage("--freq fixed requires --omega-series")),
    }
}

pub fn cmd_solve(args: &SolveArgs) -> u8 {
    run(|| {
        let (problem, shift) = resolve_problem(&args.equation)?;
        let terms = effective_terms(&args.common, 64)?;

        let (series_json, series_csv, eval): (String, String, Box<dyn Fn(f64) -> f64>) =
            match args.series {
                SeriesKind::Sin => {
                    let omega =
                        resolve_frequency(&problem, &args.equation, &args.common, terms)?;
                    let s = compute_sin_coefficients(&problem, omega, terms)?;
                    let json = s.to_json();
                    let csv = s.to_csv();
                    (json, csv, Box::new(move |t| evaluate_sin_series(&s, t)))
                }
                SeriesKind::Taylor => {
                    let s = compute_taylor_coefficients(&problem, terms)?;
                    let json = s.to_json();
                    let csv = s.to_csv();
                    (json, csv, Box::new(move |t| evaluate_taylor(&s, t)))
                }
            };

        let payload = match args.common.format {
            OutputFormat::Json => format!(
                "{{\"problem\":{},\"series\":{}}}",
                problem.to_json(shift.as_ref()),
                series_json
            ),
            OutputFormat::Csv => series_csv,
        };
        emit(&payload, args.common.out.as_ref())?;

        if let Some(n) = args.samples {
            if n < 2 {
                return Err(CliError::usage("--samples must be >= 2"));
            }
            let t_end = period_by_quadrature(&problem, 16)?.t_period;
            let mut csv = String::from("t,v\n");
            for i in 0..n {
                let t = t_end * i as f64 / (n - 1) as f64;
                csv.push_str(&format!("{},{}\n", fmt_g17(t), fmt_g17(eval(t))));
            }
            let path = args
                .samples_out
                .as_ref()
                .ok_or_else(|| CliError::usage("--samples requires --samples-out"))?;
            emit(&csv, Some(path))?;
        }
        Ok(EXIT_OK)
    })
}

pub fn cmd_period(args: &PeriodArgs) -> u8 {
    run(|| {
        let (problem, _) = resolve_problem(&args.equation)?;
        let terms = effective_terms(&args.common, 64)?;
        let estimate = match args.method {
            PeriodMethodArg::Quadrature => period_by_quadrature(&problem, args.nodes)?,
            PeriodMethodArg::ClosedForm => {
                if args.equation.equation != Some(EquationKind::Cubic) {
                    return Err(CliError::usage(
                        "--method closed-form applies to --equation cubic only",
                    ));
                }
                period_duffing_closed_form(
                    args.equation.omega.unwrap(),
                    args.equation.beta.unwrap(),
                    args.equation.a0.unwrap(),
                )?
            }
            PeriodMethodArg::Calibrated => {
                period_by_calibration(&problem, terms.max(CALIBRATION_MIN_TERMS))?
            }
        };
        let payload = match args.common.format {
            OutputFormat::Json => estimate.to_json(),
            OutputFormat::Csv => estimate.to_csv(),
        };
        emit(&payload, args.common.out.as_ref())?;
        Ok(EXIT_OK)
    })
}

pub fn cmd_verify(args: &VerifyArgs) -> u8 {
    run(|| {
        if args.suite {
            return verify_suite(args);
        }
        let (problem, _) = resolve_problem(&args.equation)?;
        let terms = effective_terms(&args.common, 128)?;
        let omega = resolve_frequency(&problem, &args.equation, &args.common, terms)?;
        let report = diagnostics::verify_problem(&problem, omega, terms, args.common.tol)?;
        if !args.common.quiet {
            for c in &report.checks {
                eprintln!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
            }
        }
        emit(&report.to_json(), args.common.out.as_ref())?;
        Ok(if report.all_passed() {
            EXIT_OK
        } else {
            EXIT_VERIFY_FAILED
        })
    })
}

/// Deterministic generator for the randomized verification grids.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    fn sign(&mut self) -> f64 {
        if self.next_u64() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

fn verify_suite(args: &VerifyArgs) -> CliResult<u8> {
    let mut rng = SplitMix64(args.common.seed.wrapping_add(0x5eed));
    let mut lines: Vec<(String, bool, String)> = Vec::new();

    // Closed-form coefficient regression on 100 random instances.
    {
        let mut worst = 0.0_f64;
        let mut ok = true;
        for _ in 0..100 {
            let omega = rng.range(0.5, 2.0);
            let beta = rng.sign() * rng.range(0.25, 4.0);
            let r = rng.sign() * rng.range(0.05, 0.95);
            let a0 = r * omega * omega / beta;
            let (p, _) = make_quadratic_shifted(omega, beta, a0).map_err(CliError::Core)?;
            let s = compute_sin_coefficients(&p, omega, 8).map_err(CliError::Core)?;
            let c = s.coeffs();
            let c0_expected = a0 + omega * omega / (2.0 * beta);
            let c2_expected = -(a0 / (2.0 * omega * omega)) * (omega * omega + a0 * beta);
            let c4_expected = c[2] * (3.0 - 2.0 * a0 * beta / (omega * omega)) / 12.0;
            let e0 = ((c[0] - c0_expected) / c0_expected).abs();
            let e2 = ((c[2] - c2_expected) / c2_expected).abs();
            let e4 = ((c[4] - c4_expected) / c4_expected).abs();
            worst = worst.max(e0).max(e2).max(e4.min(1.0));
            ok &= e0 <= 1e-14 && e2 <= 1e-14 && e4 <= 1e-13;
        }
        lines.push((
            "closed-form-coefficients".into(),
            ok,
            format!("worst relative error {worst:.3e} over 100 instances"),
        ));
    }

    // Exact annihilation at the trivial-solution amplitude.
    {
        let mut ok = true;
        for _ in 0..20 {
            let omega = rng.range(0.5, 2.0);
            let beta = rng.sign() * rng.range(0.25, 4.0);
            let a0 = -(omega * omega) / beta;
            let (p, _) = make_quadratic_shifted(omega, beta, a0).map_err(CliError::Core)?;
            let s = compute_sin_coefficients(&p, omega, 64).map_err(CliError::Core)?;
            ok &= s.coeffs().iter().skip(1).all(|&x| x == 0.0);
            let t = compute_taylor_coefficients(&p, 64).map_err(CliError::Core)?;
            ok &= t.coeffs().iter().skip(1).all(|&x| x == 0.0);
        }
        lines.push((
            "trivial-annihilation".into(),
            ok,
            "sin and Taylor coefficients vanish exactly for a0 = -omega^2/beta".into(),
        ));
    }

    // Positivity on the c0 > 0, c2 > 0, beta < 0 grid.
    {
        let mut ok = true;
        for _ in 0..30 {
            let omega = rng.range(0.5, 2.0);
            let beta = -rng.range(0.3, 3.0);
            let a0 = rng.range(1.1, 2.2) * omega * omega / (-beta);
            let (p, _) = make_quadratic_shifted(omega, beta, a0).map_err(CliError::Core)?;
            let s = compute_sin_coefficients(&p, omega, 256).map_err(CliError::Core)?;
            ok &= diagnostics::check_positivity(&s);
        }
        lines.push((
            "positivity-premise-grid".into(),
            ok,
            "all coefficients non-negative at N = 256 on 30 instances".into(),
        ));
    }

    // Quarter-period identity on the reference instance.
    {
        let (p, _) = make_quadratic_shifted(1.0, 1.0, 0.1).map_err(CliError::Core)?;
        let omega = calibrate_frequency(&p, CALIBRATION_MIN_TERMS, None).map_err(CliError::Core)?;
        let s = compute_sin_coefficients(&p, omega, 128).map_err(CliError::Core)?;
        let rep = diagnostics::check_sum_identity(&s).map_err(CliError::Core)?;
        lines.push((
            "identity-quarter-period".into(),
            rep.residual <= diagnostics::IDENTITY_RESIDUAL_TOL,
            format!("residual {:.3e} at N = 128", rep.residual),
        ));
    }

    // Harmonic calibration returns omega / 2.
    {
        let p = GeneralProblem::from_coefficients(0.0, -1.0, 0.0, 0.0, 1.0)
            .map_err(CliError::Core)?;
        let omega = calibrate_frequency(&p, 64, None).map_err(CliError::Core)?;
        lines.push((
            "harmonic-calibration".into(),
            (omega - 0.5).abs() <= 1e-8,
            format!("Omega* = {omega:.12}"),
        ));
    }

    let all_ok = lines.iter().all(|(_, ok, _)| *ok);
    if !args.common.quiet {
        for (name, ok, detail) in &lines {
            eprintln!("{} {name}: {detail}", if *ok { "ok  " } else { "FAIL" });
        }
    }
    let checks: Vec<String> = lines
        .iter()
        .map(|(name, ok, detail)| {
            format!(
                "{{\"name\":\"{name}\",\"passed\":{ok},\"detail\":\"{}\"}}",
                detail.replace('"', "\\\"")
            )
        })
        .collect();
    emit(
        &format!("{{\"suite\":true,\"seed\":{},\"checks\":[{}]}}", args.common.seed, checks.join(",")),
        args.common.out.as_ref(),
    )?;
    Ok(if all_ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

pub fn cmd_bounds(args: &BoundsArgs) -> u8 {
    run(|| {
        let constants = diagnostics::decay_bound_constants(
            args.epsilon,
            args.alpha,
            args.beta_over_omega2,
            args.c0,
        );
        let cubic_k = diagnostics::cubic_admissible_k(args.alpha, args.c0, args.c1);
        let mut scans: Vec<ScanOutcome> = vec![
            diagnostics::scan_f_increasing(args.alpha, args.p_max),
            diagnostics::scan_pg_lower_bound(args.alpha, args.beta_over_omega2, args.c0, args.p_max),
            diagnostics::scan_pfg_decreasing(args.beta_over_omega2, args.c0, 1_000_000),
        ];
        for alpha in [1.1, 1.25, 1.4, 1.5] {
            scans.push(diagnostics::scan_convolution_inequality(alpha, args.p_max));
        }
        let payload = format!(
            "{{\"constants\":{{\"statement_k\":{},\"proof_k\":{},\"ratio\":{},\"coefficient_scale\":{}}},\
             \"cubic_admissible_k\":{},\"scans\":{}}}",
            fmt_g17(constants.statement_k),
            fmt_g17(constants.proof_k),
            fmt_g17(constants.ratio),
            fmt_g17(constants.coefficient_scale),
            cubic_k.map_or("null".into(), fmt_g17),
            scans_to_json(&scans)
        );
        emit(&payload, args.common.out.as_ref())?;
        Ok(EXIT_OK)
    })
}

pub fn cmd_compare(args: &CompareArgs) -> u8 {
    run(|| {
        let (problem, _) = resolve_problem(&args.equation)?;
        let terms = effective_terms(&args.common, 64)?;
        let omega = resolve_frequency(&problem, &args.equation, &args.common, terms)?;
        let sin = compute_sin_coefficients(&problem, omega, terms)?;
        let taylor = compute_taylor_coefficients(&problem, terms)?;
        let t_end = match args.t_end {
            Some(t) if t > 0.0 => t,
            Some(t) => return Err(CliError::usage(format!("--t-end must be positive, got {t}"))),
            None => period_by_quadrature(&problem, 16)?.t_period,
        };
        let n = args.samples.max(2);
        let oracle = anharmonic::integrate(&problem, t_end, args.common.tol, n)?;

        let mut csv = String::from("t,series_value,taylor_value,oracle_value,sin_err,taylor_err\n");
        let mut max_sin = 0.0_f64;
        let mut max_taylor = 0.0_f64;
        for (i, &t) in oracle.times.iter().enumerate() {
            let sv = evaluate_sin_series(&sin, t);
            let tv = evaluate_taylor(&taylor, t);
            let ov = oracle.values[i];
            let se = (sv - ov).abs();
            let te = (tv - ov).abs();
            max_sin = max_sin.max(se);
            max_taylor = max_taylor.max(te);
            csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt_g17(t),
                fmt_g17(sv),
                fmt_g17(tv),
                fmt_g17(ov),
                fmt_g17(se),
                fmt_g17(te)
            ));
        }
        csv.push_str(&format!(
            "max,,,,{},{}\n",
            fmt_g17(max_sin),
            fmt_g17(max_taylor)
        ));
        emit(&csv, args.common.out.as_ref())?;
        Ok(EXIT_OK)
    })
}

pub fn cmd_sweep(args: &SweepArgs) -> u8 {
    run(|| {
        if args.equation.raw {
            return Err(CliError::usage("sweep requires a named equation"));
        }
        if args.steps < 1 {
            return Err(CliError::usage("--steps must be >= 1"));
        }
        let terms = effective_terms(&args.common, 64)?;
        let mut csv = String::from("parameter,T,omega_star,alpha_fit,max_residual,error\n");
        let mut successes = 0usize;
        for i in 0..args.steps {
            let value = if args.steps == 1 {
                args.from
            } else {
                args.from + (args.to - args.from) * i as f64 / (args.steps - 1) as f64
            };
            match sweep_row(args, value, terms) {
                Ok((t, omega_star, alpha_fit, max_residual)) => {
                    successes += 1;
                    csv.push_str(&format!(
                        "{},{},{},{},{},\n",
                        fmt_g17(value),
                        fmt_g17(t),
                        fmt_g17(omega_star),
                        alpha_fit.map_or(String::new(), fmt_g17),
                        fmt_g17(max_residual)
                    ));
                }
                Err(CliError::Core(e)) => {
                    csv.push_str(&format!("{},,,,,{}\n", fmt_g17(value), e.kind()));
                }
                Err(e) => return Err(e),
            }
        }
        emit(&csv, args.common.out.as_ref())?;
        if successes == 0 {
            return Err(CliError::usage("every sweep row failed"));
        }
        Ok(EXIT_OK)
    })
}

fn sweep_row(
    args: &SweepArgs,
    value: f64,
    terms: usize,
) -> CliResult<(f64, f64, Option<f64>, f64)> {
    let mut eq = args.equation.clone();
    match args.param.as_str() {
        "a0" => eq.a0 = Some(value),
        "beta" => eq.beta = Some(value),
        "omega" => eq.omega = Some(value),
        other => {
            return Err(CliError::usage(format!(
                "unknown sweep parameter '{other}' (use a0, beta or omega)"
            )))
        }
    }
    let (problem, _) = resolve_problem(&eq)?;
    let quad = period_by_quadrature(&problem, 16)?;
    let omega_star =
        calibrate_frequency(&problem, terms.max(CALIBRATION_MIN_TERMS), None)?;
    let series = compute_sin_coefficients(&problem, omega_star, terms.max(128))?;
    let alpha_fit = match diagnostics::fit_decay(&series) {
        Ok(rep) => Some(rep.alpha_fit),
        Err(anharmonic::Error::AllZero { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let mut max_residual = 0.0_f64;
    for i in 0..=64 {
        let t = quad.t_period * i as f64 / 64.0;
        max_residual = max_residual.max(anharmonic::ode_residual(&series, t).abs());
    }
    Ok((quad.t_period, omega_star, alpha_fit, max_residual))
}
