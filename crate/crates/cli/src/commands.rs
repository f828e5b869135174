use betamix::lemma::{self, LemmaInequality};
use betamix::{
    certify, find_kernel_failure, kernel_log_curvature, sharpness_check, CertifyOptions,
    ConcavityCertificate, Density, QuadratureConfig, QuadratureRule, Sampler, Verdict,
};
use serde_json::{json, Value};

use crate::args::{Command, Flags, Format};
use crate::input::{self, Loaded};
use crate::report::{emit, jnum, num, Context, Table};
use crate::{CliError, Exit};

const DEFAULT_GRID: usize = 1024;

fn quadrature(flags: &Flags) -> Result<QuadratureConfig, CliError> {
    if flags.quad_panels == 0 || flags.quad_nodes < 2 {
        return Err(CliError::Usage(
            "--quad-panels must be >= 1 and --quad-nodes >= 2".into(),
        ));
    }
    Ok(QuadratureConfig {
        rule: QuadratureRule::GaussLegendre,
        panels_per_unit: flags.quad_panels,
        nodes_per_panel: flags.quad_nodes,
        ..QuadratureConfig::default()
    })
}

fn grid(points: usize, eps: f64) -> Vec<f64> {
    let n = points.max(2);
    (0..n)
        .map(|j| eps + (1.0 - 2.0 * eps) * j as f64 / (n - 1) as f64)
        .collect()
}

fn check_eps(eps: f64) -> Result<(), CliError> {
    if eps > 0.0 && eps < 0.5 {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--eps must lie in (0, 0.5), got {eps}"
        )))
    }
}

fn context<'a>(command: &'a Command, default: Format, loaded: Option<&Loaded>) -> Context<'a> {
    Context {
        command,
        format: command.flags().format.unwrap_or(default),
        input_sha256: loaded.map(|l| l.sha256.clone()),
        input_echo: loaded.map(|l| l.echo.clone()),
    }
}

pub fn run(command: &Command) -> Result<Exit, CliError> {
    match command {
        Command::Eval(f) => eval(command, f),
        Command::Certify(f) => certify_cmd(command, f),
        Command::Lemmas(f) => lemmas(command, f),
        Command::Demo(f) => demo(command, f),
        Command::Sample(f) => sample(command, f),
    }
}

fn eval(command: &Command, flags: &Flags) -> Result<Exit, CliError> {
    check_eps(flags.eps)?;
    let loaded = input::load(flags.input.as_deref(), quadrature(flags)?)?;
    let ctx = context(command, Format::Csv, Some(&loaded));
    let mix = &loaded.mixture;
    let mut rows = Vec::new();
    for x in grid(flags.grid_points.unwrap_or(DEFAULT_GRID), flags.eps) {
        let e = mix
            .derivatives(x)
            .map_err(|e| CliError::Eval(format!("at x = {x}: {e}")))?;
        rows.push((x, e));
    }
    let text = match ctx.format {
        Format::Csv => {
            let mut t = Table::new(&ctx, &["x", "f", "d1", "d2", "log_f", "log_d2"]);
            for (x, e) in &rows {
                t.row(&[
                    num(*x),
                    num(e.value),
                    num(e.d1),
                    num(e.d2),
                    num(e.log_value),
                    num(e.log_d2),
                ]);
            }
            t.finish()
        }
        Format::Json => {
            let values: Vec<Value> = rows
                .iter()
                .map(|(x, e)| {
                    json!({
                        "x": jnum(*x), "f": jnum(e.value), "d1": jnum(e.d1), "d2": jnum(e.d2),
                        "log_f": jnum(e.log_value), "log_d2": jnum(e.log_d2),
                    })
                })
                .collect();
            ctx.json_document(json!({ "kind": mix.kind(), "rows": values }))
        }
    };
    emit(flags.out.as_deref(), &text)?;
    Ok(Exit::Ok)
}

fn certificate_json(c: &ConcavityCertificate) -> Value {
    json!({
        "verdict": c.verdict.as_str(),
        "criterion": c.criterion.as_str(),
        "grid_points": c.grid_points,
        "eps": c.eps,
        "tol": c.tol,
        "min_margin_eq10": jnum(c.min_margin_eq10),
        "min_logcurv": jnum(c.min_logcurv),
        "worst_x": jnum(c.worst_x),
        "max_log_second_difference": jnum(c.max_log_second_difference),
        "second_difference_ok": c.second_difference_ok,
        "midpoint_checks_run": c.midpoint_checks_run,
        "midpoint_ok": c.midpoint_ok,
        "witness": c.witness.map(|w| json!({
            "x": w.x, "y": w.y, "lambda": w.lambda, "lhs": jnum(w.lhs), "rhs": jnum(w.rhs),
        })),
        "diagnostics": c.diagnostics,
    })
}

fn certify_cmd(command: &Command, flags: &Flags) -> Result<Exit, CliError> {
    check_eps(flags.eps)?;
    let loaded = input::load(flags.input.as_deref(), quadrature(flags)?)?;
    let ctx = context(command, Format::Json, Some(&loaded));
    let opts = CertifyOptions {
        grid_points: flags.grid_points.unwrap_or(DEFAULT_GRID),
        eps: flags.eps,
        tol: flags.tol,
        seed: flags.seed,
        ..CertifyOptions::default()
    };
    let cert = certify(&loaded.mixture, &opts);
    if cert.verdict != Verdict::DegenerateZero
        && !cert.min_margin_eq10.is_finite()
        && !cert.min_logcurv.is_finite()
    {
        return Err(CliError::Eval(format!(
            "no grid point could be evaluated: {:?}",
            cert.diagnostics
        )));
    }
    for d in &cert.diagnostics {
        eprintln!("betamix: {d}");
    }
    let mut result = certificate_json(&cert);
    result["kind"] = json!(loaded.mixture.kind());
    let text = match ctx.format {
        Format::Json => ctx.json_document(result),
        Format::Csv => {
            let mut t = Table::new(&ctx, &["field", "value"]);
            if let Value::Object(map) = result {
                for (k, v) in map {
                    let cell = match v {
                        Value::Number(n) if n.is_f64() => num(n.as_f64().unwrap_or(f64::NAN)),
                        Value::Number(n) => n.to_string(),
                        Value::String(s) => s,
                        other => other.to_string(),
                    };
                    t.row(&[k, format!("\"{}\"", cell.replace('"', "\"\""))]);
                }
            }
            t.finish()
        }
    };
    emit(flags.out.as_deref(), &text)?;
    Ok(match cert.verdict {
        Verdict::Certified => Exit::Ok,
        Verdict::Violated => Exit::Violated,
        Verdict::DegenerateZero => Exit::Degenerate,
    })
}

struct LemmaRow {
    kind: &'static str,
    order: String,
    n: String,
    window: String,
    effective_window: String,
    which: LemmaInequality,
    lhs: String,
    rhs: String,
    margin: f64,
    pass: bool,
}

fn lemmas(command: &Command, flags: &Flags) -> Result<Exit, CliError> {
    let max_order = match flags.m {
        None => 12,
        Some(m) if m >= 1.0 && m.fract() == 0.0 && m <= 200.0 => m as u64,
        Some(m) => {
            return Err(CliError::Usage(format!(
                "--M for lemmas must be an integer in [1, 200], got {m}"
            )))
        }
    };
    let quad = quadrature(flags)?;
    let ctx = context(command, Format::Csv, None);
    let negate = flags.debug_negate;
    let mut rows = Vec::new();
    for c in lemma::discrete_sweep(max_order) {
        rows.push(LemmaRow {
            kind: "discrete",
            order: c.order.to_string(),
            n: c.n.to_string(),
            window: c.k.to_string(),
            effective_window: c.k.to_string(),
            which: c.which,
            lhs: c.lhs.to_string(),
            rhs: c.rhs.to_string(),
            margin: c.margin(),
            pass: c.holds() != negate,
        });
    }
    let cases = lemma::continuous_sweep(flags.seed, flags.cases, &quad)
        .map_err(|e| CliError::Eval(e.to_string()))?;
    for c in cases {
        rows.push(LemmaRow {
            kind: "continuous",
            order: num(c.order),
            n: num(c.n),
            window: num(c.window),
            effective_window: num(c.effective_window),
            which: c.which,
            lhs: num(c.lhs),
            rhs: num(c.rhs),
            margin: c.margin(),
            pass: c.holds(1e-7) != negate,
        });
    }
    let failures = rows.iter().filter(|r| !r.pass).count();
    let text = match ctx.format {
        Format::Csv => {
            let mut t = Table::new(
                &ctx,
                &[
                    "kind",
                    "M",
                    "n",
                    "window",
                    "effective_window",
                    "which",
                    "lhs",
                    "rhs",
                    "margin",
                    "pass",
                ],
            );
            for r in &rows {
                t.row(&[
                    r.kind.into(),
                    r.order.clone(),
                    r.n.clone(),
                    r.window.clone(),
                    r.effective_window.clone(),
                    r.which.as_str().into(),
                    r.lhs.clone(),
                    r.rhs.clone(),
                    num(r.margin),
                    r.pass.to_string(),
                ]);
            }
            t.finish()
        }
        Format::Json => {
            let values: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "kind": r.kind, "M": r.order, "n": r.n, "window": r.window,
                        "effective_window": r.effective_window, "which": r.which.as_str(),
                        "lhs": r.lhs, "rhs": r.rhs, "margin": jnum(r.margin), "pass": r.pass,
                    })
                })
                .collect();
            ctx.json_document(
                json!({ "cases": values.len(), "failures": failures, "rows": values }),
            )
        }
    };
    emit(flags.out.as_deref(), &text)?;
    if failures > 0 {
        eprintln!("betamix: {failures} of {} cases failed", rows.len());
        Ok(Exit::Violated)
    } else {
        Ok(Exit::Ok)
    }
}

fn demo(command: &Command, flags: &Flags) -> Result<Exit, CliError> {
    let m = flags
        .m
        .ok_or_else(|| CliError::Usage("demo needs --M".into()))?;
    let ctx = context(command, Format::Csv, None);
    let mut rows: Vec<(&str, f64, f64)> = Vec::new();
    if flags.r.is_none() && flags.s.is_none() {
        return Err(CliError::Usage(
            "demo needs --r (sharpness) and/or --s (kernel failure)".into(),
        ));
    }
    if let Some(r) = flags.r {
        if !(m >= 1.0 && m.fract() == 0.0) {
            return Err(CliError::Usage(format!(
                "sharpness needs an integer --M >= 1, got {m}"
            )));
        }
        let worst = sharpness_check(m as usize, r, flags.grid_points.unwrap_or(DEFAULT_GRID))
            .map_err(|e| CliError::Usage(e.to_string()))?;
        rows.push(("sharpness_max_abs_margin", r, worst));
    }
    if let Some(s) = flags.s {
        if !(m > 0.0 && m.is_finite()) {
            return Err(CliError::Usage(format!(
                "kernel failure needs --M > 0, got {m}"
            )));
        }
        if !(s > -1.0 && s < m + 1.0) {
            return Err(CliError::Usage(format!(
                "--s must lie in (-1, M + 1), got {s}"
            )));
        }
        let x = find_kernel_failure(m, s).ok_or_else(|| {
            CliError::Usage(format!(
                "s = {s} lies in [0, M]; the kernel is log-concave and has no failure point"
            ))
        })?;
        rows.push(("kernel_failure_x", s, x));
        rows.push(("kernel_log_curvature", s, kernel_log_curvature(m, s, x)));
    }
    let text = match ctx.format {
        Format::Csv => {
            let mut t = Table::new(&ctx, &["quantity", "M", "parameter", "value"]);
            for (q, p, v) in &rows {
                t.row(&[(*q).into(), num(m), num(*p), num(*v)]);
            }
            t.finish()
        }
        Format::Json => {
            let values: Vec<Value> = rows
                .iter()
                .map(
                    |(q, p, v)| json!({ "quantity": q, "M": m, "parameter": p, "value": jnum(*v) }),
                )
                .collect();
            ctx.json_document(json!(values))
        }
    };
    emit(flags.out.as_deref(), &text)?;
    Ok(Exit::Ok)
}

fn sample(command: &Command, flags: &Flags) -> Result<Exit, CliError> {
    let loaded = input::load(flags.input.as_deref(), quadrature(flags)?)?;
    let ctx = context(command, Format::Csv, Some(&loaded));
    if loaded.mixture.is_identically_zero() {
        eprintln!("betamix: mixture is identically zero; nothing to sample");
        return Ok(Exit::Degenerate);
    }
    let cells = flags
        .grid_points
        .unwrap_or(betamix::mixture::Sampler::DEFAULT_GRID_POINTS);
    let sampler = Sampler::new(&loaded.mixture, cells).map_err(|e| match e {
        betamix::Error::Degenerate => CliError::Degenerate,
        other => CliError::Eval(other.to_string()),
    })?;
    let draws = sampler.sample(flags.count, flags.seed);
    let text = match ctx.format {
        Format::Csv => {
            let mut t = Table::new(&ctx, &["x"]);
            for x in &draws {
                t.row(&[num(*x)]);
            }
            t.finish()
        }
        Format::Json => ctx.json_document(json!(draws)),
    };
    emit(flags.out.as_deref(), &text)?;
    Ok(Exit::Ok)
}
