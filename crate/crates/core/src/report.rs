//! Result tables and their on-disk forms: CSV rows (one per sweep point and
//! seed, every row echoing its parameter tuple), a JSON summary with the
//! config hash and per-check pass/fail, and minimal standalone SVG line
//! charts.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::propagate::Trajectory;
use crate::scenario::ScenarioConfig;
use crate::state::{bloch_vector, partial_trace};
use crate::units;
use crate::Result;

#[derive(Clone, Debug, Serialize)]
pub struct RunMeta {
    pub config_hash: String,
    pub version: String,
    pub seed_base: u64,
    pub seeds: u64,
    pub notes: Vec<String>,
}

/// Check of one reported quantity against an expected window.
#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub expected_low: f64,
    pub expected_high: f64,
}

impl CheckOutcome {
    pub fn window(name: &str, measured: f64, low: f64, high: f64) -> Self {
        CheckOutcome {
            name: name.into(),
            pass: measured.is_finite() && measured >= low && measured <= high,
            measured,
            expected_low: low,
            expected_high: high,
        }
    }

    pub fn at_least(name: &str, measured: f64, low: f64) -> Self {
        Self::window(name, measured, low, f64::INFINITY)
    }
}

#[derive(Clone, Debug)]
pub struct ResultSet {
    pub scenario: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub meta: RunMeta,
}

impl ResultSet {
    pub fn new(scenario: &str, columns: &[&str], meta: RunMeta) -> Self {
        ResultSet {
            scenario: scenario.into(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            meta,
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Sort rows lexicographically by the leading parameter columns so that
    /// assembly order (e.g. from a parallel map) never leaks into the output.
    pub fn sort_rows(&mut self) {
        self.rows.sort_by(|a, b| {
            for (x, y) in a.iter().zip(b.iter()) {
                match x.partial_cmp(y) {
                    Some(std::cmp::Ordering::Equal) | Option::None => continue,
                    Some(ord) => return ord,
                }
            }
            std::cmp::Ordering::Equal
        });
    }

    /// Mean and standard deviation of `value_col` grouped by `key_col`,
    /// returned in ascending key order.
    pub fn group_stats(&self, key_col: &str, value_col: &str) -> Vec<GroupStat> {
        let (Some(ki), Some(vi)) = (self.column_index(key_col), self.column_index(value_col))
        else {
            return Vec::new();
        };
        let mut keys: Vec<f64> = Vec::new();
        for r in &self.rows {
            if !keys.iter().any(|k| (k - r[ki]).abs() < 1e-12) {
                keys.push(r[ki]);
            }
        }
        keys.sort_by(|a, b| a.partial_cmp(b).unwrap());
        keys.into_iter()
            .map(|key| {
                let vals: Vec<f64> = self
                    .rows
                    .iter()
                    .filter(|r| (r[ki] - key).abs() < 1e-12)
                    .map(|r| r[vi])
                    .collect();
                let n = vals.len().max(1) as f64;
                let mean = vals.iter().sum::<f64>() / n;
                let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
                GroupStat { key, mean, std: var.sqrt(), count: vals.len() }
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn json_summary(&self, checks: &[CheckOutcome]) -> serde_json::Value {
        let mut column_stats = serde_json::Map::new();
        for (i, name) in self.columns.iter().enumerate() {
            let vals: Vec<f64> = self.rows.iter().map(|r| r[i]).filter(|v| v.is_finite()).collect();
            if vals.is_empty() {
                continue;
            }
            let n = vals.len() as f64;
            let mean = vals.iter().sum::<f64>() / n;
            let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            column_stats.insert(
                name.clone(),
                serde_json::json!({ "mean": mean, "std": var.sqrt(), "min": min, "max": max }),
            );
        }
        serde_json::json!({
            "scenario": self.scenario,
            "config_hash": self.meta.config_hash,
            "version": self.meta.version,
            "seed_base": self.meta.seed_base,
            "seeds": self.meta.seeds,
            "rows": self.rows.len(),
            "columns": self.columns,
            "column_stats": column_stats,
            "notes": self.meta.notes,
            "checks": checks,
        })
    }

    pub fn write_json<W: Write>(&self, mut w: W, checks: &[CheckOutcome]) -> Result<()> {
        let value = self.json_summary(checks);
        let text = serde_json::to_string_pretty(&value)
            .map_err(|e| Error::ConfigParse(e.to_string()))?;
        writeln!(w, "{text}")?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupStat {
    pub key: f64,
    pub mean: f64,
    pub std: f64,
    pub count: usize,
}

/// SHA-256 of the canonical TOML form of a scenario config.
pub fn config_hash(cfg: &ScenarioConfig) -> String {
    let text = cfg.to_toml();
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn meta_for(cfg: &ScenarioConfig) -> RunMeta {
    RunMeta {
        config_hash: config_hash(cfg),
        version: env!("CARGO_PKG_VERSION").into(),
        seed_base: cfg.run.seed_base,
        seeds: cfg.run.seeds,
        notes: Vec::new(),
    }
}

/// Trajectory CSV: Bloch components and populations for one qubit, basis
/// populations and the reduced excited-state population for two.
pub fn write_trajectory_csv<W: Write>(mut w: W, traj: &Trajectory) -> Result<()> {
    let dim = traj.final_state().dim();
    if dim == 2 {
        writeln!(w, "time_ns,bloch_x,bloch_y,bloch_z,pop_0,pop_1")?;
        for (t, s) in traj.times.iter().zip(traj.states.iter()) {
            let b = bloch_vector(s)?;
            writeln!(
                w,
                "{},{},{},{},{},{}",
                units::s_to_ns(*t),
                b[0],
                b[1],
                b[2],
                s.population(0),
                s.population(1)
            )?;
        }
    } else {
        writeln!(w, "time_ns,pop_00,pop_01,pop_10,pop_11,pop_q4_excited")?;
        for (t, s) in traj.times.iter().zip(traj.states.iter()) {
            let reduced = partial_trace(s, 1)?;
            writeln!(
                w,
                "{},{},{},{},{},{}",
                units::s_to_ns(*t),
                s.population(0),
                s.population(1),
                s.population(2),
                s.population(3),
                reduced.population(1)
            )?;
        }
    }
    Ok(())
}

pub struct SvgSeries {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const SVG_COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

/// Minimal standalone SVG line chart.
pub fn write_svg_chart<W: Write>(
    mut w: W,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[SvgSeries],
) -> Result<()> {
    let (width, height) = (720.0, 480.0);
    let (ml, mr, mt, mb) = (70.0, 20.0, 40.0, 50.0);
    let pts: Vec<(f64, f64)> = series.iter().flat_map(|s| s.points.iter().cloned()).collect();
    if pts.is_empty() {
        return Err(Error::InvalidState("no points to plot".into()));
    }
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in &pts {
        if x.is_finite() && y.is_finite() {
            x0 = x0.min(*x);
            x1 = x1.max(*x);
            y0 = y0.min(*y);
            y1 = y1.max(*y);
        }
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    if !(y1 > y0) {
        y1 = y0 + 1.0;
    }
    let pad = 0.04 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let sx = |x: f64| ml + (x - x0) / (x1 - x0) * (width - ml - mr);
    let sy = |y: f64| height - mb - (y - y0) / (y1 - y0) * (height - mt - mb);

    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )?;
    writeln!(w, r#"<rect width="{width}" height="{height}" fill="white"/>"#)?;
    writeln!(
        w,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{title}</text>"#,
        width / 2.0
    )?;
    // axes
    writeln!(
        w,
        r#"<line x1="{ml}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        height - mb,
        width - mr,
        height - mb
    )?;
    writeln!(w, r#"<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{}" stroke="black"/>"#, height - mb)?;
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        writeln!(
            w,
            r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{fx:.4}</text>"#,
            sx(fx),
            height - mb + 18.0
        )?;
        writeln!(
            w,
            r#"<text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="11">{fy:.4}</text>"#,
            ml - 6.0,
            sy(fy) + 4.0
        )?;
        writeln!(
            w,
            r##"<line x1="{ml}" y1="{0}" x2="{1}" y2="{0}" stroke="#dddddd"/>"##,
            sy(fy),
            width - mr
        )?;
    }
    writeln!(
        w,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">{x_label}</text>"#,
        (ml + width - mr) / 2.0,
        height - 12.0
    )?;
    writeln!(
        w,
        r#"<text x="16" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 {})">{y_label}</text>"#,
        (mt + height - mb) / 2.0,
        (mt + height - mb) / 2.0
    )?;
    for (i, s) in series.iter().enumerate() {
        let color = SVG_COLORS[i % SVG_COLORS.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
            .collect();
        if path.is_empty() {
            continue;
        }
        writeln!(
            w,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        )?;
        writeln!(
            w,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{color}">{}</text>"#,
            width - mr - 150.0,
            mt + 16.0 * (i as f64 + 1.0),
            s.name
        )?;
    }
    writeln!(w, "</svg>")?;
    Ok(())
}

/// Write a result set (CSV + JSON + optional SVG) into a directory, using
/// the scenario id as the file stem. Returns the paths written.
pub fn write_result_files(
    dir: &Path,
    rs: &ResultSet,
    checks: &[CheckOutcome],
    svg: Option<(&str, &str, &[SvgSeries])>,
) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let csv_path = dir.join(format!("{}.csv", rs.scenario));
    rs.write_csv(std::fs::File::create(&csv_path)?)?;
    written.push(csv_path);
    let json_path = dir.join(format!("{}.json", rs.scenario));
    rs.write_json(std::fs::File::create(&json_path)?, checks)?;
    written.push(json_path);
    if let Some((x_label, y_label, series)) = svg {
        if !series.is_empty() {
            let svg_path = dir.join(format!("{}.svg", rs.scenario));
            write_svg_chart(
                std::fs::File::create(&svg_path)?,
                &rs.scenario,
                x_label,
                y_label,
                series,
            )?;
            written.push(svg_path);
        }
    }
    Ok(written)
}
