//! Trajectory CSV, summary JSON and SVG plot writers.
//!
//! Numbers are written with nine significant digits and every summary metric
//! is computed from those written values, so a summary rebuilt from the CSV
//! matches the emitted one bit for bit.

use crate::geometry::Vec2;
use crate::guidance::target_reached;
use crate::safety_filter::QpStatus;
use crate::scenario::ScenarioConfig;
use crate::simulator::TrajectoryLog;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

const SIG_DIGITS: i32 = 9;

/// Plain-decimal text with nine significant digits; `-0` prints as `0`.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (SIG_DIGITS - 1 - exp).clamp(0, 20) as usize;
    let s = format!("{x:.decimals$}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        "0".to_string()
    } else {
        s
    }
}

/// The value a reader of the CSV sees for `x`.
pub fn quantize(x: f64) -> f64 {
    format_number(x).parse().unwrap_or(f64::NAN)
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

pub fn csv_header(n_obstacles: usize) -> String {
    let mut cols: Vec<String> = [
        "t", "x", "y", "psi", "v", "r_cmd", "a_cmd", "a_status", "r_status",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for i in 0..n_obstacles {
        for c in ["d", "h_v", "h_psi", "gate_v", "gate_psi"] {
            cols.push(format!("{c}_{i}"));
        }
    }
    cols.join(",")
}

pub fn write_csv(log: &TrajectoryLog, n_obstacles: usize) -> String {
    let mut out = csv_header(n_obstacles);
    out.push('\n');
    for rec in &log.records {
        let s = &rec.state;
        let mut fields = vec![
            format_number(rec.t),
            format_number(s.x),
            format_number(s.y),
            format_number(s.psi),
            format_number(s.v),
            format_number(rec.input.r),
            format_number(rec.input.a),
            rec.a_status.as_str().to_string(),
            rec.r_status.as_str().to_string(),
        ];
        for o in &rec.obstacles {
            fields.push(format_number(o.d));
            fields.push(format_number(o.h_v));
            fields.push(o.h_psi.map(format_number).unwrap_or_default());
            fields.push(flag(o.gate_v).into());
            fields.push(flag(o.gate_psi).into());
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// One parsed CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub psi: f64,
    pub v: f64,
    pub r_cmd: f64,
    pub a_cmd: f64,
    pub a_status: QpStatus,
    pub r_status: QpStatus,
    pub obstacles: Vec<CsvObstacle>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvObstacle {
    pub d: f64,
    pub h_v: f64,
    pub h_psi: Option<f64>,
    pub gate_v: bool,
    pub gate_psi: bool,
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty csv")?;
    let n_cols = header.split(',').count();
    if n_cols < 9 || (n_cols - 9) % 5 != 0 {
        return Err(format!("unexpected column count {n_cols}"));
    }
    let n_obs = (n_cols - 9) / 5;
    if header != csv_header(n_obs) {
        return Err("unexpected header".into());
    }
    let num = |s: &str, line: usize| -> Result<f64, String> {
        s.parse::<f64>()
            .map_err(|e| format!("line {line}: bad number {s:?}: {e}"))
    };
    let status = |s: &str, line: usize| -> Result<QpStatus, String> {
        QpStatus::parse(s).ok_or_else(|| format!("line {line}: bad status {s:?}"))
    };
    let boolean = |s: &str, line: usize| -> Result<bool, String> {
        match s {
            "1" => Ok(true),
            "0" => Ok(false),
            _ => Err(format!("line {line}: bad flag {s:?}")),
        }
    };
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let ln = idx + 2;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != n_cols {
            return Err(format!(
                "line {ln}: expected {n_cols} fields, got {}",
                f.len()
            ));
        }
        let mut obstacles = Vec::with_capacity(n_obs);
        for i in 0..n_obs {
            let b = 9 + 5 * i;
            obstacles.push(CsvObstacle {
                d: num(f[b], ln)?,
                h_v: num(f[b + 1], ln)?,
                h_psi: if f[b + 2].is_empty() {
                    None
                } else {
                    Some(num(f[b + 2], ln)?)
                },
                gate_v: boolean(f[b + 3], ln)?,
                gate_psi: boolean(f[b + 4], ln)?,
            });
        }
        rows.push(CsvRow {
            t: num(f[0], ln)?,
            x: num(f[1], ln)?,
            y: num(f[2], ln)?,
            psi: num(f[3], ln)?,
            v: num(f[4], ln)?,
            r_cmd: num(f[5], ln)?,
            a_cmd: num(f[6], ln)?,
            a_status: status(f[7], ln)?,
            r_status: status(f[8], ln)?,
            obstacles,
        });
    }
    Ok(rows)
}

/// Run-level metrics, all derived from the values written to the CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryMetrics {
    pub reached: bool,
    pub t_final: f64,
    pub rows: usize,
    pub dt: f64,
    pub t_max: f64,
    pub gamma: f64,
    pub min_distance: Vec<f64>,
    pub d_min: Vec<f64>,
    /// Rows times obstacles with d < d_min.
    pub violations: usize,
    pub infeasible_accel: usize,
    pub infeasible_turn: usize,
    /// Rows times obstacles gated for steering with no defined barrier.
    pub steering_undefined: usize,
    pub max_abs_r: f64,
    pub max_abs_a: f64,
    pub min_v: f64,
    pub max_v: f64,
}

impl SummaryMetrics {
    /// 0 clean, 2 violation or infeasible step, 3 target not reached.
    pub fn exit_code(&self) -> i32 {
        if self.violations > 0 || self.infeasible_accel > 0 || self.infeasible_turn > 0 {
            2
        } else if !self.reached {
            3
        } else {
            0
        }
    }
}

fn log_to_rows(log: &TrajectoryLog) -> Vec<CsvRow> {
    log.records
        .iter()
        .map(|rec| CsvRow {
            t: quantize(rec.t),
            x: quantize(rec.state.x),
            y: quantize(rec.state.y),
            psi: quantize(rec.state.psi),
            v: quantize(rec.state.v),
            r_cmd: quantize(rec.input.r),
            a_cmd: quantize(rec.input.a),
            a_status: rec.a_status,
            r_status: rec.r_status,
            obstacles: rec
                .obstacles
                .iter()
                .map(|o| CsvObstacle {
                    d: quantize(o.d),
                    h_v: quantize(o.h_v),
                    h_psi: o.h_psi.map(quantize),
                    gate_v: o.gate_v,
                    gate_psi: o.gate_psi,
                })
                .collect(),
        })
        .collect()
}

pub fn summarize(log: &TrajectoryLog, config: &ScenarioConfig) -> SummaryMetrics {
    summarize_rows(&log_to_rows(log), config)
}

/// Metrics from parsed CSV rows; used both at emission and for checking.
pub fn summarize_rows(rows: &[CsvRow], config: &ScenarioConfig) -> SummaryMetrics {
    let n = config.obstacles.len();
    let d_min: Vec<f64> = (0..n).map(|i| config.d_min(i)).collect();
    let mut min_distance = vec![f64::INFINITY; n];
    let mut violations = 0;
    let mut steering_undefined = 0;
    let (mut max_abs_r, mut max_abs_a) = (0.0f64, 0.0f64);
    let (mut min_v, mut max_v) = (f64::INFINITY, f64::NEG_INFINITY);
    for row in rows {
        for (i, o) in row.obstacles.iter().enumerate() {
            min_distance[i] = min_distance[i].min(o.d);
            if o.d < d_min[i] {
                violations += 1;
            }
            if o.gate_psi && o.h_psi.is_none() {
                steering_undefined += 1;
            }
        }
        max_abs_r = max_abs_r.max(row.r_cmd.abs());
        max_abs_a = max_abs_a.max(row.a_cmd.abs());
        min_v = min_v.min(row.v);
        max_v = max_v.max(row.v);
    }
    let last = rows.last();
    SummaryMetrics {
        reached: last.is_some_and(|r| target_reached(Vec2::new(r.x, r.y), &config.guidance)),
        t_final: last.map_or(0.0, |r| r.t),
        rows: rows.len(),
        dt: config.sim.dt,
        t_max: config.sim.t_max,
        gamma: config.safety.gamma,
        min_distance,
        d_min,
        violations,
        infeasible_accel: rows
            .iter()
            .filter(|r| r.a_status == QpStatus::InfeasibleBestEffort)
            .count(),
        infeasible_turn: rows
            .iter()
            .filter(|r| r.r_status == QpStatus::InfeasibleBestEffort)
            .count(),
        steering_undefined,
        max_abs_r,
        max_abs_a,
        min_v,
        max_v,
    }
}

pub fn summary_json(summary: &SummaryMetrics) -> String {
    serde_json::to_string_pretty(summary).expect("summary serializes")
}

/// Intervals between the instants at which d_min circles are drawn.
const SVG_SNAPSHOTS: usize = 4;

/// Plot of the vehicle path, obstacle paths, d_min circles at evenly spaced
/// instants and the target's acceptance circle.
pub fn write_svg(log: &TrajectoryLog, config: &ScenarioConfig) -> String {
    let obstacles = config.resolved_obstacles();
    let t_end = log.records.last().map_or(0.0, |r| r.t);
    let stride = ((log.records.len() / 2000).max(1)) as f64 * log.dt;
    let obstacle_paths: Vec<Vec<Vec2>> = obstacles
        .iter()
        .map(|o| {
            let n = (t_end / stride).ceil() as usize;
            (0..=n)
                .map(|k| o.model.sample((k as f64 * stride).min(t_end)).p)
                .collect()
        })
        .collect();
    let vehicle: Vec<Vec2> = log
        .records
        .iter()
        .step_by((log.records.len() / 2000).max(1))
        .chain(log.records.last())
        .map(|r| r.state.position())
        .collect();

    let mut lo = config.guidance.target;
    let mut hi = config.guidance.target;
    for p in vehicle.iter().chain(obstacle_paths.iter().flatten()) {
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let pad = 10.0;
    let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
    let scale = 800.0 / w.max(h);
    let map = |p: Vec2| ((p.x - lo.x + pad) * scale, (hi.y - p.y + pad) * scale);
    let poly = |pts: &[Vec2]| {
        pts.iter()
            .map(|&p| {
                let (x, y) = map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}">"#,
        w * scale,
        h * scale
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (o, path) in obstacles.iter().zip(&obstacle_paths) {
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="gray" stroke-dasharray="4 3"/>"#,
            poly(path)
        );
        for k in 0..=SVG_SNAPSHOTS {
            let t = t_end * k as f64 / SVG_SNAPSHOTS as f64;
            let (cx, cy) = map(o.model.sample(t).p);
            let _ = writeln!(
                svg,
                r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="none" stroke="red" stroke-dasharray="2 2"/>"#,
                o.d_min * scale
            );
        }
    }
    let _ = writeln!(
        svg,
        r#"<polyline points="{}" fill="none" stroke="blue" stroke-width="1.5"/>"#,
        poly(&vehicle)
    );
    let (tx, ty) = map(config.guidance.target);
    let _ = writeln!(
        svg,
        r#"<circle cx="{tx:.2}" cy="{ty:.2}" r="{:.2}" fill="none" stroke="green"/>"#,
        config.guidance.d_acc * scale
    );
    if let Some(first) = vehicle.first() {
        let (sx, sy) = map(*first);
        let _ = writeln!(
            svg,
            r#"<circle cx="{sx:.2}" cy="{sy:.2}" r="3" fill="blue"/>"#
        );
    }
    svg.push_str("</svg>\n");
    svg
}
