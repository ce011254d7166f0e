use std::io::{self, Write};

use exactform::exact::{
    check_exact, cost_model_standard, solve_basic_with, solve_standard_with, ExactnessReport, Solution, SolveError,
    SolveOptions, VerificationReport,
};
use exactform::fuzz::{run_trials, FuzzConfig, FuzzSummary};
use exactform::{equivalence, DifferentialForm, Equivalence, ParseError, SampleConfig};
use serde_json::{json, Map, Value};

use crate::{
    BenchArgs, CheckArgs, FuzzArgs, InputArgs, MethodArg, SamplingArgs, SolveArgs, EXIT_FUZZ_FAILURE, EXIT_NOT_EXACT,
    EXIT_OK, EXIT_UNSOLVED, EXIT_USAGE, SCHEMA_VERSION,
};

fn report(subcommand: &str, inputs: Value, results: Value, tallies: Value, verdicts: Value) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "subcommand": subcommand,
        "inputs": inputs,
        "results": results,
        "tallies": tallies,
        "verdicts": verdicts,
    })
}

fn emit_json(out: &mut dyn Write, value: &Value) -> io::Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    writeln!(out, "{text}")
}

/// The source line holding the error with a caret under the offending span.
fn caret(text: &str, e: &ParseError) -> String {
    let offset = e.span.offset.min(text.len());
    let start = text[..offset].rfind('\n').map_or(0, |i| i + 1);
    let end = text[offset..].find('\n').map_or(text.len(), |i| offset + i);
    let column = text[start..offset].chars().count();
    let width = text[offset..offset + e.span.len.min(end - offset)].chars().count().max(1);
    format!("  {}\n  {}{}", &text[start..end], " ".repeat(column), "^".repeat(width))
}

/// Reads and parses the form, reporting failures on `err`. `Err(code)` means
/// the command is over.
fn load_form(input: &InputArgs, err: &mut dyn Write) -> io::Result<Result<(String, DifferentialForm), i32>> {
    let text = match (&input.form, &input.file) {
        (Some(text), _) => text.clone(),
        (None, Some(path)) => match std::fs::read_to_string(path) {
            Ok(text) => text,
            Err(e) => {
                writeln!(err, "error: cannot read {}: {e}", path.display())?;
                return Ok(Err(EXIT_USAGE));
            }
        },
        (None, None) => unreachable!("clap requires one input"),
    };
    match exactform::parse_form(&text) {
        Ok(form) => Ok(Ok((text, form))),
        Err(e) => {
            writeln!(err, "error: {e}\n{}", caret(&text, &e))?;
            Ok(Err(EXIT_USAGE))
        }
    }
}

fn exactness_sampling(args: &SamplingArgs) -> SampleConfig {
    SampleConfig::default().with_samples(args.samples as usize).with_tolerance(args.tolerance)
}

fn exactness_json(r: &ExactnessReport) -> Value {
    json!({
        "exact": r.exact,
        "method": r.method.label(),
        "numeric_pairs": r.numeric_pairs.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
        "failures": r.failures.iter().map(|f| json!({
            "vars": [f.vars.0, f.vars.1],
            "residual": f.residual.to_string(),
            "max_deviation": f.max_deviation,
        })).collect::<Vec<_>>(),
    })
}

fn write_failures(out: &mut dyn Write, r: &ExactnessReport) -> io::Result<()> {
    for f in &r.failures {
        write!(out, "  pair ({}, {}): residual {}", f.vars.0, f.vars.1, f.residual)?;
        match f.max_deviation {
            Some(d) => writeln!(out, " (max sampled deviation {d:.3e})")?,
            None => writeln!(out, " (could not be sampled)")?,
        }
    }
    Ok(())
}

pub(crate) fn check(args: &CheckArgs, as_json: bool, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let (text, form) = match load_form(&args.input, err)? {
        Ok(v) => v,
        Err(code) => return Ok(code),
    };
    let r = check_exact(&form, &exactness_sampling(&args.sampling));
    let code = if r.exact { EXIT_OK } else { EXIT_NOT_EXACT };
    let verdict = if r.exact { "exact" } else { "not exact" };
    if as_json {
        let inputs = json!({ "form": text, "parsed": form.to_string(), "samples": args.sampling.samples, "tolerance": args.sampling.tolerance });
        emit_json(out, &report("check", inputs, exactness_json(&r), json!({}), json!({ "exactness": verdict })))?;
        return Ok(code);
    }
    writeln!(out, "form: {form}")?;
    writeln!(out, "{verdict} ({})", r.method.label())?;
    if !r.numeric_pairs.is_empty() {
        let pairs: Vec<String> = r.numeric_pairs.iter().map(|(a, b)| format!("({a}, {b})")).collect();
        writeln!(out, "  accepted numerically: {}", pairs.join(", "))?;
    }
    write_failures(out, &r)?;
    Ok(code)
}

fn verification_json(v: &VerificationReport) -> Value {
    let per_var: Map<String, Value> = v
        .per_var
        .iter()
        .map(|p| {
            let verdict = match (p.symbolic, p.passed) {
                (true, _) => json!({ "passed": true, "check": "symbolic" }),
                (false, passed) => json!({ "passed": passed, "check": "numeric", "max_deviation": p.numeric.flatten() }),
            };
            (p.var.clone(), verdict)
        })
        .collect();
    json!({ "passed": v.passed, "per_var": per_var })
}

fn verification_text(v: &VerificationReport) -> String {
    let parts: Vec<String> = v
        .per_var
        .iter()
        .map(|p| match (p.symbolic, p.numeric.flatten()) {
            (true, _) => format!("{}: symbolic", p.var),
            (false, Some(d)) if p.passed => format!("{}: numeric, max deviation {d:.1e}", p.var),
            (false, Some(d)) => format!("{}: FAILED, max deviation {d:.1e}", p.var),
            (false, None) => format!("{}: FAILED, unsampleable", p.var),
        })
        .collect();
    format!("{} ({})", if v.passed { "passed" } else { "failed" }, parts.join(", "))
}

fn error_kind(e: &SolveError) -> (&'static str, i32) {
    match e {
        SolveError::NotExact(_) => ("not_exact", EXIT_NOT_EXACT),
        SolveError::NotIntegrable(_) => ("not_integrable", EXIT_UNSOLVED),
        SolveError::VerificationFailed(_) => ("verification_failed", EXIT_UNSOLVED),
        SolveError::ResidualContamination { .. } => ("residual_contamination", EXIT_UNSOLVED),
    }
}

fn solution_json(s: &Result<Solution, SolveError>) -> (Value, Value, Value) {
    match s {
        Ok(sol) => (
            json!({ "potential": sol.potential.to_string(), "exactness": sol.exactness.label(), "warnings": sol.warnings }),
            json!({ "integrations": sol.tally.integrations, "differentiations": sol.tally.differentiations }),
            verification_json(&sol.verification),
        ),
        Err(e) => {
            let mut error = json!({ "kind": error_kind(e).0, "message": e.to_string() });
            match e {
                SolveError::NotExact(r) => error["exactness"] = exactness_json(r),
                SolveError::VerificationFailed(v) => error["verification"] = verification_json(v),
                _ => {}
            }
            (json!({ "error": error }), Value::Null, Value::Null)
        }
    }
}

fn write_solution(out: &mut dyn Write, name: &str, s: &Result<Solution, SolveError>) -> io::Result<()> {
    writeln!(out, "[{name}]")?;
    match s {
        Ok(sol) => {
            writeln!(out, "potential (solution is potential = C): {}", sol.potential)?;
            writeln!(out, "tally: integrations={}, differentiations={}", sol.tally.integrations, sol.tally.differentiations)?;
            writeln!(out, "exactness: {}", sol.exactness.label())?;
            writeln!(out, "verification: {}", verification_text(&sol.verification))?;
            for w in &sol.warnings {
                writeln!(out, "warning: {w}")?;
            }
        }
        Err(e) => {
            writeln!(out, "error: {e}")?;
            match e {
                SolveError::NotExact(r) => write_failures(out, r)?,
                SolveError::VerificationFailed(v) => writeln!(out, "verification: {}", verification_text(v))?,
                _ => {}
            }
        }
    }
    Ok(())
}

fn equivalence_label(e: &Equivalence) -> String {
    match e {
        Equivalence::DifferByConstant { offset } => format!("DifferByConstant (offset {offset:.6})"),
        other => other.label().to_string(),
    }
}

pub(crate) fn solve(args: &SolveArgs, as_json: bool, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let (text, form) = match load_form(&args.input, err)? {
        Ok(v) => v,
        Err(code) => return Ok(code),
    };
    let opts = SolveOptions { exactness: exactness_sampling(&args.sampling), ..SolveOptions::default() };
    let mut runs: Vec<(&str, Result<Solution, SolveError>)> = Vec::new();
    if matches!(args.method, MethodArg::Basic | MethodArg::Both) {
        runs.push(("basic", solve_basic_with(&form, &opts)));
    }
    if matches!(args.method, MethodArg::Standard | MethodArg::Both) {
        runs.push(("standard", solve_standard_with(&form, &opts)));
    }
    let code = runs
        .iter()
        .filter_map(|(_, r)| r.as_ref().err().map(|e| error_kind(e).1))
        .min()
        .unwrap_or(EXIT_OK);
    let cross = match runs.as_slice() {
        [(_, Ok(a)), (_, Ok(b))] => Some(equivalence(&a.potential, &b.potential, &SampleConfig::default())),
        _ => None,
    };
    let cross_label = cross.as_ref().map(|c| match c {
        Ok(e) => equivalence_label(e),
        Err(e) => format!("unsampleable: {e}"),
    });

    if as_json {
        let method = match args.method {
            MethodArg::Basic => "basic",
            MethodArg::Standard => "standard",
            MethodArg::Both => "both",
        };
        let inputs = json!({ "form": text, "parsed": form.to_string(), "method": method });
        let (mut results, mut tallies, mut verdicts) = (Map::new(), Map::new(), Map::new());
        for (name, r) in &runs {
            let (res, tally, verdict) = solution_json(r);
            results.insert(name.to_string(), res);
            tallies.insert(name.to_string(), tally);
            verdicts.insert(name.to_string(), verdict);
        }
        if let Some(c) = &cross {
            verdicts.insert("equivalence".into(), json!(c.as_ref().map(|e| e.label()).unwrap_or("unsampleable")));
            if let Ok(Equivalence::DifferByConstant { offset }) = c {
                verdicts.insert("equivalence_offset".into(), json!(offset));
            }
        }
        emit_json(out, &report("solve", inputs, results.into(), tallies.into(), verdicts.into()))?;
        return Ok(code);
    }
    writeln!(out, "form: {form}")?;
    for (name, r) in &runs {
        write_solution(out, name, r)?;
    }
    if let Some(label) = cross_label {
        writeln!(out, "equivalence: {label}")?;
    }
    Ok(code)
}

fn mean(values: impl Iterator<Item = usize>) -> Option<f64> {
    let (sum, n) = values.fold((0usize, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum as f64 / n as f64)
}

struct TallyStats {
    basic_integrations: Option<f64>,
    standard_integrations: Option<f64>,
    standard_differentiations: Option<f64>,
}

fn tally_stats(s: &FuzzSummary) -> TallyStats {
    TallyStats {
        basic_integrations: mean(s.reports.iter().filter_map(|r| r.basic_tally).map(|t| t.integrations)),
        standard_integrations: mean(s.reports.iter().filter_map(|r| r.standard_tally).map(|t| t.integrations)),
        standard_differentiations: mean(s.reports.iter().filter_map(|r| r.standard_tally).map(|t| t.differentiations)),
    }
}

fn fmt_mean(v: Option<f64>) -> String {
    match v {
        Some(x) if x.fract() == 0.0 => format!("{x:.0}"),
        Some(x) => format!("{x:.2}"),
        None => "-".to_string(),
    }
}

pub(crate) fn fuzz(args: &FuzzArgs, as_json: bool, out: &mut dyn Write) -> io::Result<i32> {
    let cfg = FuzzConfig::new(args.seed, args.trials, args.vars.min, args.vars.max, args.max_terms as usize)
        .map_err(io::Error::other)?;
    let summary = run_trials(&cfg);
    let stats = tally_stats(&summary);
    let code = if summary.all_passed() { EXIT_OK } else { EXIT_FUZZ_FAILURE };
    if as_json {
        let inputs = json!({ "seed": args.seed, "trials": args.trials, "vars": [args.vars.min, args.vars.max], "max_terms": args.max_terms });
        let failures: Vec<Value> = summary
            .failures()
            .map(|r| {
                json!({
                    "seed": r.seed,
                    "stream": r.stream,
                    "num_vars": r.num_vars,
                    "num_terms": r.num_terms,
                    "potential": r.potential,
                    "form": r.form,
                    "errors": r.errors,
                    "verdicts": { "basic": r.basic_verdict, "standard": r.standard_verdict, "cross": r.cross_verdict },
                })
            })
            .collect();
        let results = json!({ "trials": summary.trials, "passes": summary.passes, "failures": failures });
        let tallies = json!({
            "basic_integrations_mean": stats.basic_integrations,
            "standard_integrations_mean": stats.standard_integrations,
            "standard_differentiations_mean": stats.standard_differentiations,
        });
        emit_json(out, &report("fuzz", inputs, results, tallies, json!({ "all_passed": summary.all_passed() })))?;
        return Ok(code);
    }
    writeln!(out, "seed: {}", args.seed)?;
    writeln!(out, "trials: {}", summary.trials)?;
    writeln!(out, "passes: {}", summary.passes)?;
    writeln!(out, "failures: {}", summary.trials - summary.passes)?;
    writeln!(out, "mean basic integrations: {}", fmt_mean(stats.basic_integrations))?;
    writeln!(
        out,
        "mean standard tally: integrations {}, differentiations {}",
        fmt_mean(stats.standard_integrations),
        fmt_mean(stats.standard_differentiations)
    )?;
    for r in summary.failures() {
        writeln!(out, "FAILED trial {} (seed {}, stream {}): {}", r.index, r.seed, r.stream, r.potential)?;
        let show = |v: &Option<String>| v.clone().unwrap_or_else(|| "-".into());
        writeln!(
            out,
            "  verdicts: basic={}, standard={}, cross={}",
            show(&r.basic_verdict),
            show(&r.standard_verdict),
            show(&r.cross_verdict)
        )?;
        for e in &r.errors {
            writeln!(out, "  {e}")?;
        }
    }
    Ok(code)
}

pub(crate) fn bench(args: &BenchArgs, as_json: bool, out: &mut dyn Write) -> io::Result<i32> {
    let mut rows = Vec::new();
    for n in args.vars.min..=args.vars.max {
        let model = cost_model_standard(n as u32).map_err(io::Error::other)?;
        let cfg = FuzzConfig::new(args.seed, args.instances, n, n, args.max_terms as usize).map_err(io::Error::other)?;
        let summary = run_trials(&cfg);
        let standard = mean(summary.reports.iter().filter_map(|r| r.standard_tally).map(|t| t.total()));
        let basic = mean(summary.reports.iter().filter_map(|r| r.basic_tally).map(|t| t.total()));
        rows.push((n, model, standard, basic, summary.trials - summary.passes));
    }
    if as_json {
        let inputs = json!({ "vars": [args.vars.min, args.vars.max], "seed": args.seed, "instances": args.instances, "max_terms": args.max_terms });
        let table: Vec<Value> = rows
            .iter()
            .map(|(n, model, standard, basic, failed)| {
                json!({ "vars": n, "model": model, "standard_mean": standard, "basic_mean": basic, "failed": failed })
            })
            .collect();
        let basic_is_n = rows.iter().all(|(n, _, _, basic, _)| *basic == Some(*n as f64));
        emit_json(
            out,
            &report("bench", inputs, json!({ "rows": table }), json!({ "rows": table }), json!({ "basic_equals_n": basic_is_n })),
        )?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "{:<6}{:>8}{:>18}{:>8}{:>8}", "vars", "model", "standard (mean)", "basic", "failed")?;
    for (n, model, standard, basic, failed) in rows {
        writeln!(out, "{:<6}{:>8}{:>18}{:>8}{:>8}", n, model, fmt_mean(standard), fmt_mean(basic), failed)?;
    }
    writeln!(out, "model: (n-1)*2^n + 1 integrations and differentiations for the standard method")?;
    Ok(EXIT_OK)
}
