use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use super::run::ResultRow;
use super::spec::OutputFormat;
use crate::error::Result;
use crate::learning::LearningTrace;

/// Fixed columns that follow the sweep axes.
pub const RESULT_COLUMNS: [&str; 10] = [
    "mode",
    "seed",
    "soldier_material",
    "attacker_material",
    "soldier_psych",
    "attacker_psych",
    "root_connect_prob",
    "root_jam_prob",
    "iterations_to_epsilon",
    "error",
];

/// Rounds to 12 significant digits.
pub fn round_sig(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        return String::new();
    }
    format!("{}", round_sig(v))
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

fn header(rows: &[ResultRow]) -> Vec<String> {
    let mut h: Vec<String> = rows
        .first()
        .map(|r| r.point.iter().map(|(k, _)| k.clone()).collect())
        .unwrap_or_default();
    h.extend(RESULT_COLUMNS.iter().map(|s| s.to_string()));
    h
}

fn record(r: &ResultRow) -> Vec<String> {
    let mut v: Vec<String> = r.point.iter().map(|&(_, x)| fmt_num(x)).collect();
    v.push(r.mode.to_string());
    v.push(r.seed.to_string());
    v.push(opt(r.soldier_material));
    v.push(opt(r.attacker_material));
    v.push(opt(r.soldier_psych));
    v.push(opt(r.attacker_psych));
    v.push(opt(r.root_connect_prob));
    v.push(opt(r.root_jam_prob));
    v.push(
        r.iterations_to_epsilon
            .map(|n| n.to_string())
            .unwrap_or_default(),
    );
    v.push(r.error.clone().unwrap_or_default());
    v
}

pub fn rows_to_csv(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header(rows))?;
    for r in rows {
        w.write_record(record(r))?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn num(v: Option<f64>) -> Value {
    v.filter(|x| x.is_finite())
        .and_then(|x| serde_json::Number::from_f64(round_sig(x)))
        .map_or(Value::Null, Value::Number)
}

pub fn rows_to_json(rows: &[ResultRow]) -> Result<String> {
    let list: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut m = Map::new();
            for (k, x) in &r.point {
                m.insert(k.clone(), num(Some(*x)));
            }
            m.insert("mode".into(), Value::String(r.mode.to_string()));
            m.insert("seed".into(), Value::from(r.seed));
            m.insert("soldier_material".into(), num(r.soldier_material));
            m.insert("attacker_material".into(), num(r.attacker_material));
            m.insert("soldier_psych".into(), num(r.soldier_psych));
            m.insert("attacker_psych".into(), num(r.attacker_psych));
            m.insert("root_connect_prob".into(), num(r.root_connect_prob));
            m.insert("root_jam_prob".into(), num(r.root_jam_prob));
            m.insert(
                "iterations_to_epsilon".into(),
                r.iterations_to_epsilon.map_or(Value::Null, Value::from),
            );
            m.insert(
                "error".into(),
                r.error.clone().map_or(Value::Null, Value::String),
            );
            Value::Object(m)
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&list)?;
    s.push('\n');
    Ok(s)
}

pub fn render_rows(rows: &[ResultRow], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => rows_to_csv(rows),
        OutputFormat::Json => rows_to_json(rows),
    }
}

/// Writes `results.csv` or `results.json` into `dir` and returns the file path.
pub fn emit_results(
    rows: &[ResultRow],
    dir: &Path,
    format: OutputFormat,
) -> Result<std::path::PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(match format {
        OutputFormat::Csv => "results.csv",
        OutputFormat::Json => "results.json",
    });
    std::fs::write(&path, render_rows(rows, format)?)?;
    Ok(path)
}

/// Per-iteration series of a trace as CSV.
pub fn trace_series_csv(trace: &LearningTrace) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "iteration",
        "history",
        "soldier_expected",
        "attacker_expected",
        "soldier_frustration",
        "attacker_frustration",
        "root_belief_jam",
        "root_belief_connect",
        "epsilon_like",
    ])?;
    let root = crate::game::StageState::ROOT;
    for r in &trace.iterations {
        w.write_record([
            r.iteration.to_string(),
            r.history.clone(),
            fmt_num(r.soldier_expected),
            fmt_num(r.attacker_expected),
            fmt_num(r.soldier_frustration),
            fmt_num(r.attacker_frustration),
            fmt_num(r.soldier_belief.get(&root).map_or(f64::NAN, |m| m.p_first)),
            fmt_num(r.attacker_belief.get(&root).map_or(f64::NAN, |m| m.p_first)),
            r.epsilon_like.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes a trace as JSON.
pub fn write_trace(trace: &LearningTrace, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut f = std::fs::File::create(path)?;
    serde_json::to_writer(&mut f, trace)?;
    f.write_all(b"\n")?;
    Ok(())
}

pub fn read_trace(path: &Path) -> Result<LearningTrace> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Reruns a stored trace and compares the serialized result with the stored text.
pub fn replay_file(path: &Path) -> Result<bool> {
    let stored = read_trace(path)?;
    let again = crate::learning::replay(&stored)?;
    Ok(serde_json::to_string(&again)? == serde_json::to_string(&stored)?)
}

/// Device distances at every sweep point, as JSON.
pub fn geometry_manifest(spec: &super::spec::ExperimentSpec) -> Result<String> {
    let mut list = Vec::new();
    for (coords, game_spec) in spec.points()? {
        let mut m = Map::new();
        let point: Map<String, Value> =
            coords.into_iter().map(|(k, v)| (k, num(Some(v)))).collect();
        m.insert("point".into(), Value::Object(point));
        match game_spec.geometry.resolve(game_spec.devices) {
            Ok(g) => {
                m.insert(
                    "soldier_distances_m".into(),
                    serde_json::to_value(&g.soldier_distances_m)?,
                );
                m.insert(
                    "jammer_distances_m".into(),
                    serde_json::to_value(&g.jammer_distances_m)?,
                );
            }
            Err(e) => {
                m.insert("error".into(), Value::String(e.to_string()));
            }
        }
        list.push(Value::Object(m));
    }
    Ok(serde_json::to_string_pretty(&list)? + "\n")
}
