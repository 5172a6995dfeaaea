use std::path::{Path, PathBuf};

use lyness::dynamics::{orbit_signature, orbit_stats};
use lyness::flow::{integrate_flow, integrate_flow_with_tolerance, tracked_invariants, FlowTrace, Method};
use lyness::invariants::LevelSignature;
use lyness::reduction::{project_k3, project_k5, reduced_step_k3, reduced_step_k5, semiconjugacy_residual, ReducedParams};
use lyness::scalar::format_rat;
use lyness::verify::{run_suite, Outcome, VerifyConfig, VerifyReport};
use lyness::{Params, Rat, Scalar};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::args::{check_dimension, FigureArgs, FlowArgs, Format, OrbitArgs, ReduceArgs, VerifyArgs};
use crate::table::{open_output, Cell, TableWriter};
use crate::{CliError, CliResult};

/// Prints a summary line where it cannot mix with table data on stdout.
fn note(to_stdout: bool, line: &str) {
    if to_stdout {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

pub fn verify(args: VerifyArgs) -> CliResult<()> {
    let ks = args.dimensions();
    if let Some(k) = ks.iter().find(|&&k| k < 3) {
        return Err(CliError::Usage(format!("verify needs k >= 3 (the Lie symmetry is defined for k >= 3), got k = {k}")));
    }
    let mut cfg = VerifyConfig::new(ks, args.a.clone(), args.trials, args.seed);
    cfg.reduction_steps = args.reduction_steps;
    let report = run_suite(&cfg)?;

    let text = report_text(&report, args.trials);
    if args.json {
        eprint!("{text}");
        println!("{}", report_json(&report, args.trials));
    } else {
        print!("{text}");
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{} identity checks failed", report.failures().count())))
    }
}

fn report_text(report: &VerifyReport, trials: usize) -> String {
    let mut out = format!("seed {} trials {trials}\n", report.seed);
    for t in &report.tallies {
        out.push_str(&format!("{t}\n"));
        if let Some(x) = &t.counterexample {
            let coords: Vec<String> = x.iter().map(format_rat).collect();
            out.push_str(&format!("  counterexample: ({})\n", coords.join(", ")));
        }
    }
    let checked = report.tallies.iter().filter(|t| matches!(t.outcome, Outcome::Checked { .. })).count();
    let failed = report.failures().count();
    out.push_str(&format!("{checked} identity suites run, {failed} failed\n"));
    out
}

fn report_json(report: &VerifyReport, trials: usize) -> Value {
    let results: Vec<Value> = report
        .tallies
        .iter()
        .map(|t| {
            let mut v = json!({
                "k": t.k,
                "a": format_rat(&t.a),
                "identity": t.identity.name(),
            });
            match &t.outcome {
                Outcome::Checked { passed, failed } => {
                    v["status"] = json!(if *failed == 0 { "pass" } else { "fail" });
                    v["passed"] = json!(passed);
                    v["failed"] = json!(failed);
                }
                Outcome::NotApplicable(why) => {
                    v["status"] = json!("n/a");
                    v["reason"] = json!(why);
                }
            }
            if let Some(x) = &t.counterexample {
                v["counterexample"] = json!(x.iter().map(format_rat).collect::<Vec<_>>());
            }
            v
        })
        .collect();
    json!({
        "seed": report.seed,
        "trials": trials,
        "all_passed": report.all_passed(),
        "results": results,
    })
}

fn orbit_header(k: usize) -> Vec<String> {
    let mut h = vec!["n".to_string()];
    h.extend((1..=k).map(|i| format!("x{i}")));
    h.extend(["V1".to_string(), "V2".to_string()]);
    if k % 2 == 1 {
        h.extend(["V3".to_string(), "signZ".to_string()]);
    }
    h
}

fn orbit_row<S>(n: usize, x: &[S], sig: &LevelSignature<S>, cell: impl Fn(&S) -> Cell) -> Vec<Cell> {
    let mut row = vec![Cell::Int(n as i64)];
    row.extend(x.iter().map(&cell));
    row.push(cell(&sig.v1));
    row.push(cell(&sig.v2));
    if let (Some(v3), Some(z)) = (&sig.v3, sig.z_sign) {
        row.push(cell(v3));
        row.push(Cell::Int(z as i64));
    }
    row
}

/// Float orbit written as a table; returns the orbit statistics line.
fn write_float_orbit(p: &Params<f64>, x0: &[f64], steps: usize, path: Option<&Path>, format: Format) -> CliResult<(usize, lyness::dynamics::OrbitStats, bool)> {
    let trace = orbit_signature(p, x0, steps)?;
    let mut table = TableWriter::new(open_output(path)?, format, orbit_header(p.k))?;
    for (n, (x, sig)) in trace.states.iter().zip(&trace.signatures).enumerate() {
        table.row(&orbit_row(n, x, sig, |v| Cell::Float(*v)))?;
    }
    table.finish()?;
    Ok((trace.len(), orbit_stats(&trace), trace.truncated))
}

fn stats_line(rows: usize, stats: &lyness::dynamics::OrbitStats, truncated: bool) -> String {
    let mut line = format!(
        "rows {rows}; drift V1 {:.3e}, V2 {:.3e}",
        stats.v1_drift, stats.v2_drift
    );
    if let Some(d) = stats.v3_drift {
        line.push_str(&format!(", V3 {d:.3e}"));
    }
    if let Some(alt) = stats.sign_alternates {
        line.push_str(&format!("; sign(Z) alternates: {alt}"));
    }
    line.push_str(&format!(
        "; max coordinate {} (bound V1 = {})",
        stats.max_coordinate, stats.coordinate_bound
    ));
    if truncated {
        line.push_str("; truncated (left the orthant or overflowed)");
    }
    line
}

fn to_f64_point(x: &[Rat]) -> Vec<f64> {
    x.iter().map(Scalar::to_f64).collect()
}

pub fn orbit(args: OrbitArgs) -> CliResult<()> {
    check_dimension(args.k, &args.x0)?;
    let out = args.output.out.as_deref();
    if args.exact {
        let p = Params::new(args.k, args.a.clone())?;
        let trace = orbit_signature(&p, &args.x0, args.steps)?;
        let mut table = TableWriter::new(open_output(out)?, args.output.format, orbit_header(p.k))?;
        for (n, (x, sig)) in trace.states.iter().zip(&trace.signatures).enumerate() {
            table.row(&orbit_row(n, x, sig, |v| Cell::Text(format_rat(v))))?;
        }
        table.finish()?;
        let constant = trace.signatures.windows(2).all(|w| w[0].v1 == w[1].v1 && w[0].v2 == w[1].v2 && w[0].v3 == w[1].v3);
        note(out.is_some(), &format!("rows {}; invariants exactly constant: {constant}", trace.len()));
        if !constant {
            return Err(CliError::Failed("invariants changed along an exact orbit".into()));
        }
        return Ok(());
    }
    let p = Params::new(args.k, args.a.to_f64())?;
    let (rows, stats, truncated) = write_float_orbit(&p, &to_f64_point(&args.x0), args.steps, out, args.output.format)?;
    note(out.is_some(), &stats_line(rows, &stats, truncated));
    Ok(())
}

fn flow_header(k: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    h.extend((1..=k).map(|i| format!("x{i}")));
    h.extend(tracked_invariants(k).iter().map(|w| w.to_string()));
    h
}

fn write_flow(trace: &FlowTrace, path: Option<&Path>, format: Format) -> CliResult<()> {
    let k = trace.params.k;
    let mut table = TableWriter::new(open_output(path)?, format, flow_header(k))?;
    for ((t, x), sig) in trace.times.iter().zip(&trace.states).zip(&trace.signatures) {
        let mut row = vec![Cell::Float(*t)];
        row.extend(x.iter().map(|v| Cell::Float(*v)));
        row.push(Cell::Float(sig.v1));
        row.push(Cell::Float(sig.v2));
        if let Some(v3) = sig.v3 {
            row.push(Cell::Float(v3));
        }
        table.row(&row)?;
    }
    table.finish()
}

fn drift_line(trace: &FlowTrace) -> String {
    let parts: Vec<String> = trace.drift.iter().map(|(w, d)| format!("{w} {d:.3e}")).collect();
    let mut line = format!(
        "flow {} dt {} samples {}; relative drift: {}",
        trace.method,
        trace.dt,
        trace.times.len(),
        parts.join(", ")
    );
    if trace.truncated {
        line.push_str("; truncated near the boundary");
    }
    line
}

pub fn flow(args: FlowArgs) -> CliResult<()> {
    check_dimension(args.k, &args.x0)?;
    let p = Params::new(args.k, args.a.to_f64())?;
    let trace = integrate_flow_with_tolerance(&p, &to_f64_point(&args.x0), args.dt, args.t_max, args.method, args.tolerance)?;
    let out = args.output.out.as_deref();
    write_flow(&trace, out, args.output.format)?;
    note(out.is_some(), &drift_line(&trace));
    Ok(())
}

pub fn reduce(args: ReduceArgs) -> CliResult<()> {
    check_dimension(args.k, &args.x0)?;
    if args.k != 3 && args.k != 5 {
        return Err(CliError::Usage(format!("reduce supports k = 3 or 5, got {}", args.k)));
    }
    let p = Params::new(args.k, args.a.clone())?;
    let rp = ReducedParams::for_point(&p, &args.x0)?;
    let out = args.output.out.as_deref();
    let names: &[&str] = if args.k == 3 { &["x", "z"] } else { &["x", "y", "z", "s"] };
    let mut header = vec!["n".to_string()];
    header.extend(names.iter().map(|s| s.to_string()));
    let mut table = TableWriter::new(open_output(out)?, args.output.format, header)?;
    let write = |table: &mut TableWriter, n: usize, state: &[Rat]| {
        let mut row = vec![Cell::Int(n as i64)];
        row.extend(state.iter().map(|v| Cell::Text(format_rat(v))));
        table.row(&row)
    };
    if args.k == 3 {
        let mut s = project_k3(&args.x0);
        write(&mut table, 0, &s)?;
        for n in 1..=args.steps {
            s = reduced_step_k3(&rp, &s)?;
            write(&mut table, n, &s)?;
        }
    } else {
        let mut s = project_k5(&args.x0);
        write(&mut table, 0, &s)?;
        for n in 1..=args.steps {
            s = reduced_step_k5(&rp, &s)?;
            write(&mut table, n, &s)?;
        }
    }
    table.finish()?;
    let residual = semiconjugacy_residual(&p, &args.x0, args.steps)?;
    note(
        out.is_some(),
        &format!(
            "kappa {}; deviation from F∘F over {} steps: {}",
            format_rat(&rp.kappa),
            args.steps,
            format_rat(&residual)
        ),
    );
    if residual.is_zero() {
        Ok(())
    } else {
        Err(CliError::Failed("reduced orbit departs from the projected orbit of F∘F".into()))
    }
}

struct Preset {
    k: usize,
    a: i64,
    x0: &'static [i64],
    steps: usize,
    flow: bool,
}

fn preset(which: u8) -> Preset {
    match which {
        1 => Preset { k: 4, a: 4, x0: &[1, 2, 3, 4], steps: 5000, flow: true },
        2 => Preset { k: 5, a: 1, x0: &[1, 2, 3, 4, 5], steps: 5000, flow: false },
        _ => Preset { k: 5, a: 4, x0: &[1, 2, 3, 4, 5], steps: 10_000, flow: false },
    }
}

/// `dir/stem.<suffix>` next to `path`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "figure".into());
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

pub fn figures(args: FigureArgs) -> CliResult<()> {
    let pr = preset(args.which);
    let proj = args.proj.unwrap_or([1, 2, 3]);
    if let Some(i) = proj.iter().find(|&&i| i > pr.k) {
        return Err(CliError::Usage(format!("projection index {i} exceeds k = {}", pr.k)));
    }
    let p = Params::new(pr.k, pr.a as f64)?;
    let x0: Vec<f64> = pr.x0.iter().map(|&v| v as f64).collect();
    let ext = match args.format {
        Format::Csv => "csv",
        Format::Jsonl => "jsonl",
    };

    let (rows, stats, truncated) = write_float_orbit(&p, &x0, pr.steps, Some(&args.out), args.format)?;
    println!("figure {}: orbit -> {}; {}", args.which, args.out.display(), stats_line(rows, &stats, truncated));

    let mut files = json!({ "orbit": file_name(&args.out) });
    let mut flow_drift = Value::Null;
    if pr.flow {
        let flow_path = sibling(&args.out, &format!("flow.{ext}"));
        let trace = integrate_flow(&p, &x0, 1e-3, 10.0, Method::Rk4)?;
        write_flow(&trace, Some(&flow_path), args.format)?;
        println!("figure {}: flow -> {}; {}", args.which, flow_path.display(), drift_line(&trace));
        files["flow"] = json!(file_name(&flow_path));
        flow_drift = json!(trace.drift.iter().map(|(w, d)| (w.to_string(), json!(d))).collect::<serde_json::Map<_, _>>());
    }

    let meta = json!({
        "figure": args.which,
        "k": pr.k,
        "a": pr.a,
        "x0": pr.x0,
        "steps": pr.steps,
        "rows": rows,
        "projection": proj,
        "files": files,
        "orbit": {
            "v1_drift": stats.v1_drift,
            "v2_drift": stats.v2_drift,
            "v3_drift": stats.v3_drift,
            "sign_z_alternates": stats.sign_alternates,
            "max_coordinate": stats.max_coordinate,
            "coordinate_bound": stats.coordinate_bound,
            "truncated": truncated,
        },
        "flow": if pr.flow { json!({ "method": "rk4-fixed", "dt": 1e-3, "t_max": 10.0, "drift": flow_drift }) } else { Value::Null },
    });
    let meta_path = sibling(&args.out, "meta.json");
    let text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    std::fs::write(&meta_path, text + "\n")
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", meta_path.display())))?;
    Ok(())
}
