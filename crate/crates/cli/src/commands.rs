use std::fs::{self, File};
use std::path::Path;

use purify::families::{cnot_oracle, Domain, PdfSpec, Point, StateFamily};
use purify::optimizer::{fixed_gate_chain, recurrence_optimize, sample, RecurrenceResult};
use purify::quad::expectation;
use purify::sun::{cnot, su4_from_angles};
use purify::{GateAngles, Mat4};
use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

const QUADRATURE_TOLERANCE: f64 = 1e-11;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> CliResult<()> {
    let file = File::create(path).map_err(io_err(path))?;
    serde_json::to_writer_pretty(file, value)?;
    Ok(())
}

fn csv_writer(path: &Path) -> CliResult<csv::Writer<File>> {
    Ok(csv::Writer::from_writer(File::create(path).map_err(io_err(path))?))
}

fn prepare(config: &RunConfig) -> CliResult<()> {
    fs::create_dir_all(&config.out).map_err(io_err(&config.out))?;
    write_json(&config.out.join("config.json"), config)
}

fn point_columns(family: StateFamily) -> Vec<String> {
    match family.arity() {
        1 => vec!["x".into()],
        _ => vec!["x".into(), "y".into()],
    }
}

fn point_fields(family: StateFamily, p: Point) -> Vec<String> {
    match family.arity() {
        1 => vec![p.x.to_string()],
        _ => vec![p.x.to_string(), p.y.to_string()],
    }
}

fn linspace(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

/// Evenly spaced points over the support of `pdf`; a square grid clipped to
/// the disk in two dimensions.
pub fn grid_points(pdf: &PdfSpec, n: usize) -> Vec<Point> {
    match pdf.support() {
        Domain::Interval { lower, upper } => linspace(n, lower, upper).map(Point::line).collect(),
        Domain::UnitDisk => linspace(n, -1.0, 1.0)
            .flat_map(|x| linspace(n, -1.0, 1.0).map(move |y| Point::plane(x, y)))
            .filter(|p| p.x * p.x + p.y * p.y <= 1.0)
            .collect(),
    }
}

/// `cnot`, `identity`, `angles:a1,…,a15` or `file:path` holding a JSON array
/// of 15 angles or an object with an `angles` field.
pub fn parse_gate(spec: &str) -> CliResult<(GateAngles, Mat4)> {
    let angles = |v: Vec<f64>| -> CliResult<GateAngles> {
        if v.len() != 15 {
            return Err(CliError::Config(format!("a gate needs 15 angles, got {}", v.len())));
        }
        Ok(GateAngles::try_from(v)?)
    };
    let a = match spec {
        "cnot" => return Ok((purify::cnot_angles(), cnot())),
        "identity" => GateAngles::identity(),
        s if s.starts_with("angles:") => {
            let values = s["angles:".len()..]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>().map_err(|_| CliError::Config(format!("bad angle {t:?}"))))
                .collect::<CliResult<Vec<_>>>()?;
            angles(values)?
        }
        s if s.starts_with("file:") => {
            let path = Path::new(&s["file:".len()..]);
            let text = fs::read_to_string(path).map_err(io_err(path))?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let array = match value {
                serde_json::Value::Object(mut o) => o.remove("angles").unwrap_or(serde_json::Value::Null),
                v => v,
            };
            let values: Vec<f64> = serde_json::from_value(array)
                .map_err(|e| CliError::Config(format!("{}: expected 15 angles: {e}", path.display())))?;
            angles(values)?
        }
        other => return Err(CliError::Config(format!("unknown gate {other:?}"))),
    };
    let u = su4_from_angles(&a);
    Ok((a, u))
}

pub fn families_list() -> CliResult<()> {
    println!("{:<16} {:<6} {:<16} cnot oracle", "family", "arity", "default pdf");
    for f in StateFamily::ALL {
        let oracle: Vec<String> = (1..=4)
            .filter(|&n| cnot_oracle(f, probe(f), n).is_ok())
            .map(|n| format!("N={n}"))
            .collect();
        let oracle = if oracle.is_empty() { "-".into() } else { oracle.join(",") };
        println!("{:<16} {:<6} {:<16} {oracle}", f.id(), f.arity(), f.default_pdf().id());
    }
    Ok(())
}

fn probe(f: StateFamily) -> Point {
    match f.arity() {
        1 => Point::line(0.5),
        _ => Point::plane(0.5, 0.0),
    }
}

pub fn evaluate(config: &RunConfig) -> CliResult<()> {
    let gate = config.gate.as_deref().unwrap_or("cnot");
    let (angles, u) = parse_gate(gate)?;
    prepare(config)?;
    let f = config.family;
    let n = config.iterations;

    let grid = fixed_gate_chain(f, &grid_points(&config.pdf, config.grid), &u, n)?;
    let mut w = csv_writer(&config.out.join("evaluate.csv"))?;
    let mut header = point_columns(f);
    header.push("c_in".into());
    for k in 1..=n {
        header.push(format!("c_{k}"));
        header.push(format!("p_{k}"));
    }
    header.push("overall_success".into());
    w.write_record(&header)?;
    for (j, &p) in grid.points.iter().enumerate() {
        let mut row = point_fields(f, p);
        row.push(grid.input_concurrence[j].to_string());
        for k in 0..n {
            row.push(grid.concurrence[k][j].to_string());
            row.push(grid.probability[k][j].to_string());
        }
        row.push(grid.overall_success[j].to_string());
        w.write_record(&row)?;
    }
    w.flush().map_err(io_err(&config.out))?;

    let opt = &config.optimizer;
    let samples = sample(&config.pdf, opt.samples, opt.sample_seed, opt.sequence);
    let run = fixed_gate_chain(f, &samples.points, &u, n)?;
    let m = samples.len() as f64;
    let summary = json!({
        "family": f,
        "pdf": config.pdf,
        "gate": gate,
        "angles": angles,
        "iterations": n,
        "samples": samples.len(),
        "input_cost": 1.0 - run.input_concurrence.iter().sum::<f64>() / m,
        "costs": run.costs(),
        "mean_overall_success": run.overall_success.iter().sum::<f64>() / m,
    });
    write_json(&config.out.join("evaluate.json"), &summary)?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

pub fn oracle(config: &RunConfig) -> CliResult<()> {
    let f = config.family;
    let n = config.iterations;
    cnot_oracle(f, probe(f), n)?;
    prepare(config)?;

    let points = grid_points(&config.pdf, config.grid);
    let sim = fixed_gate_chain(f, &points, &cnot(), n)?;
    let mut w = csv_writer(&config.out.join("oracle.csv"))?;
    let mut header = point_columns(f);
    header.extend(["c_sim".into(), "c_oracle".into()]);
    for k in 1..=n {
        header.push(format!("p_{k}_sim"));
        header.push(format!("p_{k}_oracle"));
    }
    w.write_record(&header)?;
    let (mut dc, mut dp) = (0.0_f64, 0.0_f64);
    for (j, &p) in points.iter().enumerate() {
        let o = cnot_oracle(f, p, n)?;
        let c = sim.concurrence[n - 1][j];
        dc = dc.max((c - o.concurrence).abs());
        let mut row = point_fields(f, p);
        row.extend([c.to_string(), o.concurrence.to_string()]);
        for k in 0..n {
            dp = dp.max((sim.probability[k][j] - o.probabilities[k]).abs());
            row.push(sim.probability[k][j].to_string());
            row.push(o.probabilities[k].to_string());
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(io_err(&config.out))?;

    let input = expectation(&config.pdf, &mut |p| f.known_concurrence(p).unwrap_or(f64::NAN), QUADRATURE_TOLERANCE);
    let output = expectation(
        &config.pdf,
        &mut |p| cnot_oracle(f, p, n).map(|o| o.concurrence).unwrap_or(f64::NAN),
        QUADRATURE_TOLERANCE,
    );
    let summary = json!({
        "family": f,
        "pdf": config.pdf,
        "iterations": n,
        "grid_points": points.len(),
        "max_concurrence_deviation": dc,
        "max_probability_deviation": dp,
        "input_cost": if input.is_finite() { Some(1.0 - input) } else { None },
        "cnot_cost": 1.0 - output,
    });
    write_json(&config.out.join("oracle.json"), &summary)?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

pub fn optimize(config: &RunConfig) -> CliResult<()> {
    prepare(config)?;
    let result = recurrence_optimize(config.family, config.pdf, config.iterations, &config.optimizer)?;
    write_json(&config.out.join("result.json"), &result)?;
    write_iterations(&config.out.join("iterations.csv"), &result)?;
    write_samples(&config.out.join("samples.csv"), &result)?;
    for r in &result.iterations {
        println!(
            "iteration {}: cost {:.6} (branch {}), per-state max {:.6}, CNOT {:.6}, CNOT chain {:.6}",
            r.iteration, r.cost, r.branch, r.per_state_max_cost, r.cnot_cost, r.cnot_chain_cost
        );
    }
    for d in &result.diagnostics {
        println!("note: {d}");
    }
    Ok(())
}

fn write_iterations(path: &Path, result: &RecurrenceResult) -> CliResult<()> {
    let mut w = csv_writer(path)?;
    let mut header: Vec<String> = [
        "iteration",
        "cost",
        "branch",
        "per_state_max_cost",
        "cnot_cost",
        "cnot_chain_cost",
        "dropped",
    ]
    .map(String::from)
    .into();
    header.extend((1..=15).map(|k| format!("a{k}")));
    w.write_record(&header)?;
    for r in &result.iterations {
        let mut row = vec![
            r.iteration.to_string(),
            r.cost.to_string(),
            r.branch.to_string(),
            r.per_state_max_cost.to_string(),
            r.cnot_cost.to_string(),
            r.cnot_chain_cost.to_string(),
            r.dropped.to_string(),
        ];
        row.extend(r.angles.as_array().iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

fn write_samples(path: &Path, result: &RecurrenceResult) -> CliResult<()> {
    let f = result.family;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut w = csv_writer(path)?;
    let mut header = point_columns(f);
    header.push("c_in".into());
    for k in 1..=result.iterations.len() {
        header.extend([format!("c_{k}"), format!("p_{k}"), format!("cnot_c_{k}"), format!("cnot_p_{k}")]);
    }
    header.extend(["overall_success".into(), "cnot_overall_success".into()]);
    w.write_record(&header)?;
    for (j, &p) in result.points.iter().enumerate() {
        let mut row = point_fields(f, p);
        row.push(result.input_concurrence[j].to_string());
        for r in &result.iterations {
            row.extend([
                opt(r.concurrence[j]),
                opt(r.probability[j]),
                r.cnot_chain_concurrence[j].to_string(),
                r.cnot_chain_probability[j].to_string(),
            ]);
        }
        row.extend([
            opt(result.overall_success[j]),
            result.cnot_chain_overall_success[j].to_string(),
        ]);
        w.write_record(&row)?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}
