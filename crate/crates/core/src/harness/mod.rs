//! Training and evaluation driver: configs, episodes, checkpoints, exports.

mod config;
mod episode;
mod export;
mod run;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::env::EnvError;
use crate::facl::LearnerError;
use crate::fuzzy::FuzzyError;

pub use config::{
    load_scenario_file, AgentSpeeds, ArenaConfig, Freeze, ObstacleSpec, RunConfig, Scenario, TrainConfig,
    CONFIG_SCHEMA, OBSTACLE_KEEP_CLEAR,
};
pub use episode::{run_episode, AgentStep, EpisodeContext, EpisodeLog, EpisodeSummary, StepLog, EPISODE_SCHEMA};
pub use export::{export_log, read_log, write_log, write_summary_csv, ExportFormat, EXPORT_SCHEMA};
pub use run::{
    evaluate, greedy_episode, reward_slope, train, Checkpoint, Evaluation, MetricsTable, RunManifest, TrainOutput, Trainer,
    CHECKPOINT_SCHEMA, MANIFEST_SCHEMA,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error("expected schema {expected}, found {found:?}")]
    Schema { expected: &'static str, found: String },
    #[error("checkpoint layout mismatch: {0}")]
    Layout(String),
    #[error("{}: {error}", path.display())]
    Io { path: PathBuf, error: std::io::Error },
    #[error("{}: {error}", path.display())]
    InFile { path: PathBuf, error: Box<HarnessError> },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Learner(#[from] LearnerError),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, error: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.to_path_buf(),
            error,
        }
    }

    pub(crate) fn in_file(self, path: &Path) -> Self {
        match self {
            e @ (HarnessError::Io { .. } | HarnessError::InFile { .. }) => e,
            e => HarnessError::InFile {
                path: path.to_path_buf(),
                error: Box::new(e),
            },
        }
    }
}
