//! File formats for episode logs and their flat exports.
//!
//! CSV exports write three tables plus an `export.json` index naming the
//! schema:
//!
//! * `trajectory.csv`: `step,time,agent,x,y,z,alpha,theta`, one row per agent
//!   per step. An episode with no steps gets one row per agent at `t = 0`.
//! * `series.csv`: per-step separation, rewards, TD errors, actions and
//!   firing entropy for both agents.
//! * `summary.csv`: the episode summary row.
//!
//! JSON exports write the same content as a single `export.json` document.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::episode::{EpisodeLog, EpisodeSummary, EPISODE_SCHEMA};
use super::HarnessError;
use crate::env::AgentState;

pub const EXPORT_SCHEMA: &str = "peg3d.export/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl FromStr for ExportFormat {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(HarnessError::Config(format!("unknown export format {other:?}"))),
        }
    }
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), HarnessError> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|e| HarnessError::io(path, e))
}

pub fn write_log(path: &Path, log: &EpisodeLog) -> Result<(), HarnessError> {
    write_json(path, log)
}

pub fn read_log(path: &Path) -> Result<EpisodeLog, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let log: EpisodeLog = serde_json::from_str(&text).map_err(|e| HarnessError::from(e).in_file(path))?;
    if log.schema != EPISODE_SCHEMA {
        return Err(HarnessError::Schema {
            expected: EPISODE_SCHEMA,
            found: log.schema,
        }
        .in_file(path));
    }
    Ok(log)
}

pub fn write_summary_csv<W: Write>(rows: &[EpisodeSummary], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| HarnessError::Csv(e.into()))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub step: usize,
    pub time: f64,
    pub agent: String,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub alpha: f64,
    pub theta: f64,
}

impl TrajectoryRow {
    fn new(step: usize, time: f64, agent: &str, s: &AgentState) -> Self {
        TrajectoryRow {
            step,
            time,
            agent: agent.to_string(),
            x: s.position.x,
            y: s.position.y,
            z: s.position.z,
            alpha: s.heading.alpha,
            theta: s.heading.theta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub step: usize,
    pub time: f64,
    pub separation: f64,
    pub pursuer_reward: f64,
    pub evader_reward: f64,
    pub pursuer_td: f64,
    pub evader_td: f64,
    pub pursuer_dalpha: f64,
    pub pursuer_dtheta: f64,
    pub evader_dalpha: f64,
    pub evader_dtheta: f64,
    pub pursuer_entropy: f64,
    pub evader_entropy: f64,
    pub pursuer_in_cone: bool,
    pub evader_in_cone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportDocument {
    pub schema: String,
    pub seed: u64,
    pub trajectory: Vec<TrajectoryRow>,
    pub series: Vec<SeriesRow>,
    pub summary: EpisodeSummary,
}

fn trajectory(log: &EpisodeLog) -> Vec<TrajectoryRow> {
    if log.steps.is_empty() {
        return vec![
            TrajectoryRow::new(0, 0.0, "pursuer", &log.initial_pursuer),
            TrajectoryRow::new(0, 0.0, "evader", &log.initial_evader),
        ];
    }
    log.steps
        .iter()
        .flat_map(|s| {
            [
                TrajectoryRow::new(s.step, s.time, "pursuer", &s.pursuer.state),
                TrajectoryRow::new(s.step, s.time, "evader", &s.evader.state),
            ]
        })
        .collect()
}

fn series(log: &EpisodeLog) -> Vec<SeriesRow> {
    log.steps
        .iter()
        .map(|s| SeriesRow {
            step: s.step,
            time: s.time,
            separation: s.separation,
            pursuer_reward: s.pursuer.reward.total,
            evader_reward: s.evader.reward.total,
            pursuer_td: s.pursuer.td_error,
            evader_td: s.evader.td_error,
            pursuer_dalpha: s.pursuer.action.executed[0],
            pursuer_dtheta: s.pursuer.action.executed[1],
            evader_dalpha: s.evader.action.executed[0],
            evader_dtheta: s.evader.action.executed[1],
            pursuer_entropy: s.pursuer.firing_entropy,
            evader_entropy: s.evader.firing_entropy,
            pursuer_in_cone: s.pursuer.in_cone,
            evader_in_cone: s.evader.in_cone,
        })
        .collect()
}

pub fn export_document(log: &EpisodeLog) -> ExportDocument {
    ExportDocument {
        schema: EXPORT_SCHEMA.to_string(),
        seed: log.seed,
        trajectory: trajectory(log),
        series: series(log),
        summary: log.summary.clone(),
    }
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), HarnessError> {
    let file = fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    for r in rows {
        w.serialize(r).map_err(|e| HarnessError::from(e).in_file(path))?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

#[derive(Serialize)]
struct CsvIndex<'a> {
    schema: &'a str,
    seed: u64,
    files: [&'a str; 3],
}

/// Writes the export files for `log` into `dir` and returns their paths.
pub fn export_log(log: &EpisodeLog, format: ExportFormat, dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let doc = export_document(log);
    match format {
        ExportFormat::Json => {
            let path = dir.join("export.json");
            write_json(&path, &doc)?;
            Ok(vec![path])
        }
        ExportFormat::Csv => {
            let names = ["trajectory.csv", "series.csv", "summary.csv"];
            let paths: Vec<PathBuf> = names.iter().map(|n| dir.join(n)).collect();
            write_csv(&paths[0], &doc.trajectory)?;
            if doc.series.is_empty() {
                // header only, so the file still parses
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(SERIES_HEADER)?;
                let bytes = w.into_inner().map_err(|e| HarnessError::Config(e.to_string()))?;
                fs::write(&paths[1], bytes).map_err(|e| HarnessError::io(&paths[1], e))?;
            } else {
                write_csv(&paths[1], &doc.series)?;
            }
            write_csv(&paths[2], std::slice::from_ref(&doc.summary))?;
            let index = dir.join("export.json");
            write_json(
                &index,
                &CsvIndex {
                    schema: EXPORT_SCHEMA,
                    seed: log.seed,
                    files: names,
                },
            )?;
            let mut all = paths;
            all.push(index);
            Ok(all)
        }
    }
}

const SERIES_HEADER: [&str; 15] = [
    "step",
    "time",
    "separation",
    "pursuer_reward",
    "evader_reward",
    "pursuer_td",
    "evader_td",
    "pursuer_dalpha",
    "pursuer_dtheta",
    "evader_dalpha",
    "evader_dtheta",
    "pursuer_entropy",
    "evader_entropy",
    "pursuer_in_cone",
    "evader_in_cone",
];
