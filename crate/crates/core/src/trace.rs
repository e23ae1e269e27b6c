//! Trace rows, CSV/JSON output, the run summary and plot-data export.

use crate::error::SimError;
use crate::scenario::ScenarioConfig;
use crate::sim::{Role, Simulation, TickReport};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

/// One row per node per tick. Angles are in degrees, speeds in mm/s,
/// signal strengths in dBm. Follower-only columns are empty for other
/// roles; link columns describe the hop to the next node ahead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub tick: usize,
    pub t: f64,
    pub node: String,
    pub role: String,
    pub x: f64,
    pub y: f64,
    pub heading_deg: f64,
    pub mode: Option<String>,
    pub situation: Option<String>,
    pub antenna_center_deg: Option<f64>,
    pub bearing_deg: Option<f64>,
    pub true_bearing_deg: Option<f64>,
    pub doa_in_window: Option<bool>,
    pub v_relative: Option<f64>,
    pub v_leader_perp: Option<f64>,
    pub tracking_feasible: Option<bool>,
    pub rssi_leader: Option<f64>,
    pub rssi_behind: Option<f64>,
    pub v_left: f64,
    pub v_right: f64,
    pub link_rssi_fwd: Option<f64>,
    pub link_rssi_bwd: Option<f64>,
    pub connected: bool,
    pub throughput_mbps: f64,
}

impl TraceRow {
    pub fn is_follower(&self) -> bool {
        self.role == Role::Follower.as_str()
    }
}

pub fn rows_from_report(report: &TickReport) -> Vec<TraceRow> {
    report
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let s = &n.state;
            let f = n.follower.as_ref();
            let link = report.chain.links.get(i);
            TraceRow {
                tick: report.tick,
                t: report.t,
                node: n.name.clone(),
                role: s.role.as_str().to_string(),
                x: s.pose.x,
                y: s.pose.y,
                heading_deg: s.pose.heading.to_degrees(),
                mode: (s.role == Role::Follower).then(|| s.mode.as_str().to_string()),
                situation: f.map(|f| f.situation.as_str().to_string()),
                antenna_center_deg: f.map(|f| f.scan_center.to_degrees()),
                bearing_deg: f.map(|f| f.bearing.to_degrees()),
                true_bearing_deg: f.map(|f| f.true_bearing.to_degrees()),
                doa_in_window: f.map(|f| f.doa_in_window),
                v_relative: f.map(|f| f.v_relative),
                v_leader_perp: f.map(|f| f.v_leader_perp),
                tracking_feasible: f.map(|f| f.tracking_feasible),
                rssi_leader: f.map(|f| f.rssi_leader),
                rssi_behind: f.and_then(|f| f.rssi_behind),
                v_left: s.wheels.v_left,
                v_right: s.wheels.v_right,
                link_rssi_fwd: link.map(|l| l.rssi_forward),
                link_rssi_bwd: link.map(|l| l.rssi_backward),
                connected: report.chain.connected,
                throughput_mbps: report.chain.throughput_mbps,
            }
        })
        .collect()
}

/// Runs a scenario to completion and returns its trace.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Vec<TraceRow>, SimError> {
    let reports = Simulation::new(config)?.run()?;
    Ok(reports.iter().flat_map(rows_from_report).collect())
}

pub fn write_trace<W: Write>(rows: &[TraceRow], out: W) -> Result<(), SimError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace<R: Read>(input: R) -> Result<Vec<TraceRow>, SimError> {
    csv::Reader::from_reader(input)
        .deserialize()
        .collect::<Result<Vec<_>, _>>()
        .map_err(SimError::from)
}

pub fn read_trace_file(path: impl AsRef<Path>) -> Result<Vec<TraceRow>, SimError> {
    read_trace(std::fs::File::open(path)?)
}

/// Run metrics, computed from trace rows alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub ticks: usize,
    pub duration_s: f64,
    pub min_throughput_mbps: f64,
    pub mean_throughput_mbps: f64,
    /// First time the chain was disconnected, if ever (s).
    pub first_disconnection_s: Option<f64>,
    /// Final distance from each non-leader node to the node ahead (m).
    pub final_distances: BTreeMap<String, f64>,
    /// Root-mean-square bearing error per follower (deg).
    pub bearing_rms_error_deg: BTreeMap<String, f64>,
}

impl Summary {
    pub fn from_trace(rows: &[TraceRow]) -> Self {
        let mut per_tick: BTreeMap<usize, &TraceRow> = BTreeMap::new();
        for r in rows {
            per_tick.entry(r.tick).or_insert(r);
        }
        let throughput: Vec<f64> = per_tick.values().map(|r| r.throughput_mbps).collect();
        let min = throughput.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = if throughput.is_empty() {
            0.0
        } else {
            throughput.iter().sum::<f64>() / throughput.len() as f64
        };
        let first_disconnection_s = per_tick.values().find(|r| !r.connected).map(|r| r.t);

        let mut final_distances = BTreeMap::new();
        if let Some(&last_tick) = per_tick.keys().last() {
            let last: Vec<&TraceRow> = rows.iter().filter(|r| r.tick == last_tick).collect();
            for w in last.windows(2) {
                let d = (w[1].x - w[0].x).hypot(w[1].y - w[0].y);
                final_distances.insert(w[0].node.clone(), d);
            }
        }

        let mut sq: BTreeMap<String, (f64, usize)> = BTreeMap::new();
        for r in rows.iter().filter(|r| r.is_follower()) {
            if let (Some(b), Some(tb)) = (r.bearing_deg, r.true_bearing_deg) {
                let e = wrap_deg(b - tb);
                let entry = sq.entry(r.node.clone()).or_insert((0.0, 0));
                entry.0 += e * e;
                entry.1 += 1;
            }
        }
        let bearing_rms_error_deg = sq
            .into_iter()
            .map(|(k, (s, n))| (k, (s / n as f64).sqrt()))
            .collect();

        Self {
            ticks: per_tick.len(),
            duration_s: per_tick.values().last().map_or(0.0, |r| r.t),
            min_throughput_mbps: if min.is_finite() { min } else { 0.0 },
            mean_throughput_mbps: mean,
            first_disconnection_s,
            final_distances,
            bearing_rms_error_deg,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

fn wrap_deg(d: f64) -> f64 {
    (d + 180.0).rem_euclid(360.0) - 180.0
}

/// Plot-data series that can be extracted from a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportKind {
    Throughput,
    Bearing,
    Path,
    Rssi,
}

impl std::str::FromStr for ExportKind {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "throughput" => Ok(ExportKind::Throughput),
            "bearing" => Ok(ExportKind::Bearing),
            "path" => Ok(ExportKind::Path),
            "rssi" => Ok(ExportKind::Rssi),
            other => Err(SimError::UnknownExportKind(other.to_string())),
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes a tidy CSV table for one series kind.
pub fn export_plotdata<W: Write>(rows: &[TraceRow], kind: ExportKind, out: W) -> Result<(), SimError> {
    let mut w = csv::Writer::from_writer(out);
    match kind {
        ExportKind::Path => {
            w.write_record(["t", "node", "x", "y"])?;
            for r in rows {
                w.write_record([r.t.to_string(), r.node.clone(), r.x.to_string(), r.y.to_string()])?;
            }
        }
        ExportKind::Throughput => {
            w.write_record(["t", "throughput_mbps"])?;
            let mut last = None;
            for r in rows {
                if last != Some(r.tick) {
                    w.write_record([r.t.to_string(), r.throughput_mbps.to_string()])?;
                    last = Some(r.tick);
                }
            }
        }
        ExportKind::Bearing => {
            w.write_record(["t", "node", "bearing_deg", "true_bearing_deg", "antenna_center_deg"])?;
            for r in rows.iter().filter(|r| r.bearing_deg.is_some()) {
                w.write_record([
                    r.t.to_string(),
                    r.node.clone(),
                    opt(r.bearing_deg),
                    opt(r.true_bearing_deg),
                    opt(r.antenna_center_deg),
                ])?;
            }
        }
        ExportKind::Rssi => {
            w.write_record(["t", "node", "rssi_leader", "rssi_behind", "link_rssi_fwd", "link_rssi_bwd"])?;
            for r in rows {
                w.write_record([
                    r.t.to_string(),
                    r.node.clone(),
                    opt(r.rssi_leader),
                    opt(r.rssi_behind),
                    opt(r.link_rssi_fwd),
                    opt(r.link_rssi_bwd),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes `trace.csv` and `summary.json` into `dir`.
pub fn write_run(dir: impl AsRef<Path>, rows: &[TraceRow]) -> Result<Summary, SimError> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    write_trace(rows, std::fs::File::create(dir.join("trace.csv"))?)?;
    let summary = Summary::from_trace(rows);
    std::fs::write(dir.join("summary.json"), summary.to_json())?;
    Ok(summary)
}
