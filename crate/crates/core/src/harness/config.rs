//! Run configuration and the built-in scenarios.
//!
//! A run is described by one TOML document with `[train]`, `[arena]`,
//! `[agents]`, `[scenario]`, `[reward]` and `[learner]` tables. Every key is
//! optional and falls back to the reference setup.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::env::{Arena, Heading, Obstacle, SteeringMode};
use crate::facl::LearnerConfig;
use crate::geometry::{pursuit_cone_halfangle, Point3};
use crate::reward::RewardConfig;

pub const CONFIG_SCHEMA: &str = "peg3d.config/1";

/// Minimum distance between a random obstacle center and either start.
pub const OBSTACLE_KEEP_CLEAR: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Freeze {
    #[default]
    None,
    Pursuer,
    Evader,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub episodes: usize,
    /// Step cap per episode; the arena's time limit applies as well.
    pub max_plays: usize,
    pub seed: u64,
    pub freeze: Freeze,
    /// Persist the full log of every n-th episode; 0 keeps only the last.
    pub log_every: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            episodes: 200,
            max_plays: 1000,
            seed: 0,
            freeze: Freeze::None,
            log_every: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ArenaConfig {
    pub extents: Point3,
    pub dt: f64,
    pub capture_distance: f64,
    pub max_time: f64,
    pub steering: SteeringMode,
}

impl Default for ArenaConfig {
    fn default() -> Self {
        let a = Arena::default();
        ArenaConfig {
            extents: a.extents,
            dt: a.dt,
            capture_distance: a.capture_distance,
            max_time: a.max_time,
            steering: a.steering,
        }
    }
}

impl ArenaConfig {
    /// Arena without obstacles; those are placed per episode.
    pub fn empty_arena(&self) -> Arena {
        Arena {
            extents: self.extents,
            obstacles: Vec::new(),
            capture_distance: self.capture_distance,
            max_time: self.max_time,
            dt: self.dt,
            steering: self.steering,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AgentSpeeds {
    pub pursuer_speed: f64,
    pub evader_speed: f64,
}

impl Default for AgentSpeeds {
    fn default() -> Self {
        AgentSpeeds {
            pursuer_speed: 1.1,
            evader_speed: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObstacleSpec {
    /// `count` spheres of `radius`. With a seed the layout is fixed; without
    /// one it is redrawn every episode from the run's random stream.
    Random {
        count: usize,
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Explicit { list: Vec<Obstacle> },
}

impl Default for ObstacleSpec {
    fn default() -> Self {
        ObstacleSpec::Random {
            count: 3,
            radius: 1.0,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub pursuer_start: Point3,
    pub evader_start: Point3,
    /// Initial `[alpha, theta]`; defaults to facing along the line of sight
    /// (pursuer towards the evader, evader away from the pursuer).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pursuer_heading: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evader_heading: Option<[f64; 2]>,
    #[serde(default)]
    pub obstacles: ObstacleSpec,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario::builtin(1).expect("scenario 1 exists")
    }
}

const BUILTIN_STARTS: [([f64; 3], [f64; 3]); 4] = [
    ([5.0, 30.0, 0.0], [5.0, 5.0, 0.0]),
    ([5.0, 5.0, 0.0], [30.0, 30.0, 0.0]),
    ([30.0, 30.0, 0.0], [30.0, 5.0, 0.0]),
    ([30.0, 30.0, 0.0], [5.0, 30.0, 0.0]),
];

impl Scenario {
    /// Reference scenarios 1 to 4.
    pub fn builtin(index: usize) -> Option<Scenario> {
        let (p, e) = *BUILTIN_STARTS.get(index.checked_sub(1)?)?;
        Some(Scenario {
            name: format!("scenario-{index}"),
            pursuer_start: p.into(),
            evader_start: e.into(),
            pursuer_heading: None,
            evader_heading: None,
            obstacles: ObstacleSpec::default(),
        })
    }

    pub fn all_builtin() -> Vec<Scenario> {
        (1..=BUILTIN_STARTS.len()).filter_map(Scenario::builtin).collect()
    }

    pub fn initial_headings(&self) -> (Heading, Heading) {
        let los = self.evader_start - self.pursuer_start;
        let pick = |given: Option<[f64; 2]>, fallback: Point3| match given {
            Some([a, t]) => Heading::new(a, t),
            None => Heading::along(fallback),
        };
        (pick(self.pursuer_heading, los), pick(self.evader_heading, los))
    }

    pub fn validate(&self, arena: &ArenaConfig) -> Result<(), HarnessError> {
        let box_ = arena.empty_arena();
        for (who, p) in [("pursuer", self.pursuer_start), ("evader", self.evader_start)] {
            if !box_.contains(p) {
                return Err(HarnessError::Config(format!(
                    "{who} start {:?} lies outside the arena",
                    p.to_array()
                )));
            }
        }
        match &self.obstacles {
            ObstacleSpec::Explicit { list } => {
                let mut a = box_;
                a.obstacles = list.clone();
                a.validate()?;
                for (who, p) in [("pursuer", self.pursuer_start), ("evader", self.evader_start)] {
                    if a.collision_check(p) {
                        return Err(HarnessError::Config(format!("{who} starts inside an obstacle")));
                    }
                }
            }
            ObstacleSpec::Random { radius, .. } => {
                if !(*radius > 0.0) {
                    return Err(HarnessError::Config("obstacle radius must be positive".into()));
                }
            }
        }
        Ok(())
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub schema: String,
    pub train: TrainConfig,
    pub arena: ArenaConfig,
    pub agents: AgentSpeeds,
    pub scenario: Scenario,
    pub reward: RewardConfig,
    pub learner: LearnerConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema: CONFIG_SCHEMA.to_string(),
            train: TrainConfig::default(),
            arena: ArenaConfig::default(),
            agents: AgentSpeeds::default(),
            scenario: Scenario::default(),
            reward: RewardConfig::default(),
            learner: LearnerConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self, HarnessError> {
        let cfg: RunConfig = toml::from_str(s).map_err(|e| HarnessError::Config(e.to_string()))?;
        if cfg.schema != CONFIG_SCHEMA {
            return Err(HarnessError::Schema {
                expected: CONFIG_SCHEMA,
                found: cfg.schema,
            });
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| e.in_file(path))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("run config serializes to TOML")
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.train.episodes == 0 {
            return Err(HarnessError::Config("episodes must be at least 1".into()));
        }
        if self.train.max_plays == 0 {
            return Err(HarnessError::Config("max_plays must be at least 1".into()));
        }
        self.arena.empty_arena().validate()?;
        let s = self.agents;
        pursuit_cone_halfangle(s.pursuer_speed, s.evader_speed)
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        self.scenario.validate(&self.arena)?;
        self.reward.validate().map_err(HarnessError::Config)?;
        self.learner.validate()?;
        Ok(())
    }
}

/// Loads a scenario from a TOML file holding either a bare scenario table or
/// a full run config with a `[scenario]` table.
pub fn load_scenario_file(path: &Path) -> Result<Scenario, HarnessError> {
    #[derive(Deserialize)]
    struct Wrapped {
        scenario: Scenario,
    }
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    toml::from_str::<Wrapped>(&text)
        .map(|w| w.scenario)
        .or_else(|_| toml::from_str::<Scenario>(&text))
        .map_err(|e| HarnessError::Config(e.to_string()).in_file(path))
}
