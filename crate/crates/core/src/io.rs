//! CSV and JSON files for scenarios and results.
//!
//! Signal files hold a `t,<name>` header and one sample per row. Values are
//! written in scientific notation with nine significant digits so output
//! is identical on every platform.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::estimator::{Decomposition, EstimationResult};
use crate::params::Config;
use crate::road::{Cleat, RoadProfile};
use crate::scenario::Scenario;
use crate::signal::{resample, SignalTrace};

pub const DELTA_FILE: &str = "delta.csv";
pub const SPEED_FILE: &str = "speed.csv";
pub const SLOPE_FILE: &str = "slope.csv";
pub const GRADE_FILE: &str = "grade.csv";
pub const CLEATS_FILE: &str = "cleats.csv";
pub const CONFIG_FILE: &str = "config.json";
pub const SUMMARY_FILE: &str = "summary.json";

/// Nine significant digits, scientific notation.
pub fn format_value(x: f64) -> String {
    format!("{x:.8e}")
}

fn unit_for(name: &str) -> &'static str {
    match name {
        "delta" | "slope" | "grade" => "rad",
        "speed" => "m/s",
        _ => "-",
    }
}

fn write_table(path: &Path, header: &[&str], columns: &[&[f64]]) -> Result<()> {
    let rows = columns.first().map_or(0, |c| c.len());
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for i in 0..rows {
        w.write_record(columns.iter().map(|c| format_value(c[i])))
            .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::schema(path, format!("{other:?}")),
    }
}

fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let header: Vec<String> = r
        .headers()
        .map_err(|e| csv_err(path, e))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut cols = vec![Vec::new(); header.len()];
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        if rec.len() != header.len() {
            return Err(Error::schema(
                path,
                format!(
                    "row {} has {} fields, expected {}",
                    line + 2,
                    rec.len(),
                    header.len()
                ),
            ));
        }
        for (c, field) in rec.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                Error::schema(path, format!("row {}: `{field}` is not a number", line + 2))
            })?;
            cols[c].push(v);
        }
    }
    Ok((header, cols))
}

/// Writes one trace as `t,<name>`.
pub fn write_trace_csv(path: &Path, trace: &SignalTrace) -> Result<()> {
    let t: Vec<f64> = (0..trace.len()).map(|i| trace.time(i)).collect();
    write_table(path, &["t", trace.name()], &[&t, trace.samples()])
}

/// Reads a `t,<name>` file. The rate is inferred from the time column,
/// which must be uniformly spaced.
pub fn read_trace_csv(path: &Path) -> Result<SignalTrace> {
    let (header, cols) = read_table(path)?;
    if header.len() != 2 || header[0] != "t" {
        return Err(Error::schema(
            path,
            format!("expected header `t,<name>`, found `{}`", header.join(",")),
        ));
    }
    let (t, x) = (&cols[0], &cols[1]);
    if t.len() < 2 {
        return Err(Error::schema(path, "need at least two samples"));
    }
    let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    if !(dt > 0.0) {
        return Err(Error::schema(path, "time column must increase"));
    }
    if let Some(i) = t
        .windows(2)
        .position(|w| ((w[1] - w[0]) - dt).abs() > 1e-3 * dt)
    {
        return Err(Error::schema(
            path,
            format!("non-uniform sampling between rows {} and {}", i + 2, i + 3),
        ));
    }
    let name = header[1].clone();
    let unit = unit_for(&name);
    SignalTrace::new(name, unit, 1.0 / dt, t[0], x.clone())
        .map_err(|e| Error::schema(path, e.to_string()))
}

pub fn write_cleats_csv(path: &Path, cleats: &[Cleat]) -> Result<()> {
    let p: Vec<f64> = cleats.iter().map(|c| c.position).collect();
    let h: Vec<f64> = cleats.iter().map(|c| c.height).collect();
    let l: Vec<f64> = cleats.iter().map(|c| c.length).collect();
    write_table(path, &["position", "height", "length"], &[&p, &h, &l])
}

pub fn read_cleats_csv(path: &Path) -> Result<Vec<Cleat>> {
    let (header, cols) = read_table(path)?;
    if header != ["position", "height", "length"] {
        return Err(Error::schema(
            path,
            format!(
                "expected header `position,height,length`, found `{}`",
                header.join(",")
            ),
        ));
    }
    Ok((0..cols[0].len())
        .map(|i| Cleat {
            position: cols[0][i],
            height: cols[1][i],
            length: cols[2][i],
        })
        .collect())
}

/// Writes the scenario signals, cleats and `config.json` into `dir`.
pub fn write_scenario(dir: &Path, scenario: &Scenario, config: &Config) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_trace_csv(&dir.join(DELTA_FILE), &scenario.delta)?;
    write_trace_csv(&dir.join(SPEED_FILE), &scenario.speed)?;
    write_trace_csv(&dir.join(SLOPE_FILE), scenario.road.slope())?;
    if scenario.road.grade().samples().iter().any(|&g| g != 0.0) {
        write_trace_csv(&dir.join(GRADE_FILE), scenario.road.grade())?;
    }
    write_cleats_csv(&dir.join(CLEATS_FILE), scenario.road.cleats())?;
    let path = dir.join(CONFIG_FILE);
    fs::write(&path, config.to_json()).map_err(|e| Error::io(path, e))
}

/// Brings a loaded trace onto the simulation grid. Rates within 1 ppm of the
/// target are taken as equal to avoid resampling noise.
fn to_rate(trace: SignalTrace, rate_hz: f64) -> Result<SignalTrace> {
    if (trace.rate_hz() - rate_hz).abs() <= 1e-6 * rate_hz {
        SignalTrace::new(
            trace.name(),
            trace.unit(),
            rate_hz,
            trace.t0(),
            trace.samples().to_vec(),
        )
    } else {
        resample(&trace, rate_hz)
    }
}

/// Loads a scenario directory, resampling every signal to
/// `config.sim.rate_hz`. Traces that still disagree in length afterwards
/// are reported as misaligned.
pub fn read_scenario(dir: &Path, config: &Config) -> Result<Scenario> {
    let rate = config.sim.rate_hz;
    let load = |name: &str| -> Result<SignalTrace> {
        let path = dir.join(name);
        to_rate(read_trace_csv(&path)?, rate).map_err(|e| Error::schema(&path, e.to_string()))
    };
    let mut delta = load(DELTA_FILE)?;
    if let Some(ratio) = config.sim.steering_ratio {
        delta = delta.map(|d| d / ratio)?;
    }
    let speed = load(SPEED_FILE)?;
    let slope = load(SLOPE_FILE)?;
    let grade = if dir.join(GRADE_FILE).exists() {
        load(GRADE_FILE)?
    } else {
        slope.map(|_| 0.0)?.renamed("grade", "rad")
    };
    let cleats_path = dir.join(CLEATS_FILE);
    let cleats = if cleats_path.exists() {
        read_cleats_csv(&cleats_path)?
    } else {
        Vec::new()
    };

    for (name, t) in [
        (SPEED_FILE, &speed),
        (SLOPE_FILE, &slope),
        (GRADE_FILE, &grade),
    ] {
        if t.len() != delta.len() {
            return Err(Error::Misaligned(format!(
                "{DELTA_FILE} has {} samples but {name} has {} at {rate} Hz",
                delta.len(),
                t.len()
            )));
        }
    }
    let road = RoadProfile::new(slope, grade, cleats)?;
    let name = dir.file_name().map_or_else(
        || "scenario".to_owned(),
        |n| n.to_string_lossy().into_owned(),
    );
    Ok(Scenario {
        name,
        delta,
        speed,
        road,
    })
}

pub fn result_path(dir: &Path, model: &str) -> PathBuf {
    dir.join(format!("result_{model}.csv"))
}

pub fn write_result_csv(path: &Path, result: &EstimationResult) -> Result<()> {
    let t: Vec<f64> = (0..result.len()).map(|i| result.rf.time(i)).collect();
    let v: Vec<f64> = result.states.iter().map(|s| s.v).collect();
    let r: Vec<f64> = result.states.iter().map(|s| s.psi_dot).collect();
    write_table(
        path,
        &[
            "t", "rf", "m_zf", "slip_f", "slip_r", "f_yf", "f_yr", "v", "psi_dot",
        ],
        &[
            &t,
            result.rf.samples(),
            result.m_zf.samples(),
            result.slip_f.samples(),
            result.slip_r.samples(),
            result.f_yf.samples(),
            result.f_yr.samples(),
            &v,
            &r,
        ],
    )
}

pub fn write_decomposition_csv(path: &Path, dec: &Decomposition) -> Result<()> {
    let t: Vec<f64> = (0..dec.rf_total.len())
        .map(|i| dec.rf_total.time(i))
        .collect();
    write_table(
        path,
        &["t", "rf_steering", "rf_road", "rf_total", "residual"],
        &[
            &t,
            dec.rf_steering.samples(),
            dec.rf_road.samples(),
            dec.rf_total.samples(),
            dec.residual.samples(),
        ],
    )
}

/// Reads any numeric CSV with a header, returning the header and columns.
pub fn read_columns(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    read_table(path)
}
