use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{Freeze, ObstacleSpec, RunConfig, Scenario, OBSTACLE_KEEP_CLEAR};
use super::episode::{run_episode, EpisodeContext, EpisodeLog, EpisodeSummary};
use super::export::{write_json, write_log, write_summary_csv};
use super::HarnessError;
use crate::env::{AgentState, Arena, Outcome, SENSING_RANGE};
use crate::facl::Learner;
use crate::fuzzy::RuleBase;

pub const CHECKPOINT_SCHEMA: &str = "peg3d.checkpoint/1";
pub const MANIFEST_SCHEMA: &str = "peg3d.manifest/1";

/// Rule index order recorded in checkpoints.
const RULE_ORDER: &str = "row-major over inputs [separation, opponent angle, obstacle distance, obstacle angle]; first input varies slowest";

const STREAM_OBSTACLES: u64 = 0;
const STREAM_PURSUER: u64 = 1;
const STREAM_EVADER: u64 = 2;
const STREAM_EVALUATION: u64 = 3;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Learned weights of both agents together with the layout and the config
/// that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub schema: String,
    pub seed: u64,
    pub episodes_trained: usize,
    pub rule_order: String,
    pub rule_base: RuleBase,
    pub pursuer: Learner,
    pub evader: Learner,
    pub config: RunConfig,
}

impl Checkpoint {
    pub fn check_layout(&self) -> Result<(), HarnessError> {
        if self.schema != CHECKPOINT_SCHEMA {
            return Err(HarnessError::Schema {
                expected: CHECKPOINT_SCHEMA,
                found: self.schema.clone(),
            });
        }
        let rules = self.rule_base.rule_count();
        for (who, l) in [("pursuer", &self.pursuer), ("evader", &self.evader)] {
            l.check_layout(rules)
                .map_err(|e| HarnessError::Layout(format!("{who}: {e}")))?;
        }
        if self.rule_base.input_count() != 4 {
            return Err(HarnessError::Layout(format!(
                "rule base has {} inputs, agents sense 4",
                self.rule_base.input_count()
            )));
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let cp: Checkpoint = serde_json::from_str(&text).map_err(|e| HarnessError::from(e).in_file(path))?;
        cp.check_layout().map_err(|e| e.in_file(path))?;
        Ok(cp)
    }

    pub fn save(&self, path: &Path) -> Result<(), HarnessError> {
        write_json(path, self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: String,
    pub code_version: String,
    pub seed: u64,
    pub config: RunConfig,
    pub episodes: Vec<EpisodeSummary>,
    pub checkpoint: Option<String>,
    pub logs: Vec<String>,
}

fn start_states(cfg: &RunConfig, scenario: &Scenario) -> (AgentState, AgentState) {
    let (hp, he) = scenario.initial_headings();
    (
        AgentState {
            position: scenario.pursuer_start,
            heading: hp,
            speed: cfg.agents.pursuer_speed,
        },
        AgentState {
            position: scenario.evader_start,
            heading: he,
            speed: cfg.agents.evader_speed,
        },
    )
}

fn arena_for(cfg: &RunConfig, scenario: &Scenario, rng: &mut ChaCha8Rng) -> Result<Arena, HarnessError> {
    let mut arena = cfg.arena.empty_arena();
    let avoid = [scenario.pursuer_start, scenario.evader_start];
    match &scenario.obstacles {
        ObstacleSpec::Explicit { list } => arena.obstacles = list.clone(),
        ObstacleSpec::Random { count, radius, seed: Some(s) } => {
            let mut fixed = stream(*s, STREAM_OBSTACLES);
            arena.place_random_obstacles(*count, *radius, &avoid, OBSTACLE_KEEP_CLEAR, &mut fixed)?;
        }
        ObstacleSpec::Random { count, radius, seed: None } => {
            arena.place_random_obstacles(*count, *radius, &avoid, OBSTACLE_KEEP_CLEAR, rng)?;
        }
    }
    Ok(arena)
}

/// Episode-by-episode trainer. Both agents learn at once unless one is frozen.
#[derive(Debug, Clone)]
pub struct Trainer {
    config: RunConfig,
    rules: RuleBase,
    pursuer: Learner,
    evader: Learner,
    obstacle_rng: ChaCha8Rng,
    pursuer_rng: ChaCha8Rng,
    evader_rng: ChaCha8Rng,
    summaries: Vec<EpisodeSummary>,
}

impl Trainer {
    pub fn new(config: RunConfig) -> Result<Self, HarnessError> {
        config.validate()?;
        let rules = RuleBase::pursuit_default(SENSING_RANGE);
        let n = rules.rule_count();
        let seed = config.train.seed;
        Ok(Trainer {
            pursuer: Learner::new(config.learner, n)?,
            evader: Learner::new(config.learner, n)?,
            rules,
            obstacle_rng: stream(seed, STREAM_OBSTACLES),
            pursuer_rng: stream(seed, STREAM_PURSUER),
            evader_rng: stream(seed, STREAM_EVADER),
            summaries: Vec::new(),
            config,
        })
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn rules(&self) -> &RuleBase {
        &self.rules
    }

    pub fn pursuer(&self) -> &Learner {
        &self.pursuer
    }

    pub fn evader(&self) -> &Learner {
        &self.evader
    }

    pub fn summaries(&self) -> &[EpisodeSummary] {
        &self.summaries
    }

    pub fn episodes_done(&self) -> usize {
        self.summaries.len()
    }

    pub fn is_finished(&self) -> bool {
        self.episodes_done() >= self.config.train.episodes
    }

    pub fn run_episode(&mut self) -> Result<EpisodeLog, HarnessError> {
        let cfg = &self.config;
        let arena = arena_for(cfg, &cfg.scenario, &mut self.obstacle_rng)?;
        let learning = match cfg.train.freeze {
            Freeze::None => [true, true],
            Freeze::Pursuer => [false, true],
            Freeze::Evader => [true, false],
            Freeze::Both => [false, false],
        };
        let ctx = EpisodeContext {
            arena: &arena,
            rules: &self.rules,
            reward: &cfg.reward,
            speeds: cfg.agents,
            max_plays: cfg.train.max_plays,
            learning,
        };
        let log = run_episode(
            &ctx,
            self.summaries.len(),
            cfg.train.seed,
            start_states(cfg, &cfg.scenario),
            &mut self.pursuer,
            &mut self.evader,
            &mut self.pursuer_rng,
            &mut self.evader_rng,
        )?;
        self.summaries.push(log.summary.clone());
        Ok(log)
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            schema: CHECKPOINT_SCHEMA.to_string(),
            seed: self.config.train.seed,
            episodes_trained: self.summaries.len(),
            rule_order: RULE_ORDER.to_string(),
            rule_base: self.rules.clone(),
            pursuer: self.pursuer.clone(),
            evader: self.evader.clone(),
            config: self.config.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutput {
    pub manifest: RunManifest,
    pub checkpoint: Checkpoint,
    pub last_log: EpisodeLog,
}

/// Runs the full training loop. With `out`, writes `config.toml`,
/// `summary.csv`, `checkpoint.json`, `manifest.json` and episode logs under
/// `episodes/`.
pub fn train(config: &RunConfig, out: Option<&Path>) -> Result<TrainOutput, HarnessError> {
    let mut trainer = Trainer::new(config.clone())?;
    if let Some(dir) = out {
        fs::create_dir_all(dir.join("episodes")).map_err(|e| HarnessError::io(dir, e))?;
        let cfg_path = dir.join("config.toml");
        fs::write(&cfg_path, config.to_toml_string()).map_err(|e| HarnessError::io(&cfg_path, e))?;
    }
    let every = config.train.log_every;
    let total = config.train.episodes;
    let mut logs = Vec::new();
    let mut last = None;
    while !trainer.is_finished() {
        let log = trainer.run_episode()?;
        let idx = log.summary.episode;
        let keep = idx + 1 == total || (every > 0 && idx % every == 0);
        if keep {
            if let Some(dir) = out {
                let name = format!("episodes/episode-{idx:04}.json");
                write_log(&dir.join(&name), &log)?;
                logs.push(name);
            }
        }
        last = Some(log);
    }
    let checkpoint = trainer.checkpoint();
    let manifest = RunManifest {
        schema: MANIFEST_SCHEMA.to_string(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.train.seed,
        config: config.clone(),
        episodes: trainer.summaries().to_vec(),
        checkpoint: out.map(|_| "checkpoint.json".to_string()),
        logs,
    };
    if let Some(dir) = out {
        checkpoint.save(&dir.join("checkpoint.json"))?;
        let summary_path = dir.join("summary.csv");
        let file = fs::File::create(&summary_path).map_err(|e| HarnessError::io(&summary_path, e))?;
        write_summary_csv(trainer.summaries(), file).map_err(|e| e.in_file(&summary_path))?;
        write_json(&dir.join("manifest.json"), &manifest)?;
    }
    Ok(TrainOutput {
        manifest,
        checkpoint,
        last_log: last.expect("at least one episode"),
    })
}

/// Aggregate of noise-free evaluation runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsTable {
    pub scenario: String,
    pub n: usize,
    pub captures: usize,
    pub capture_rate: f64,
    /// Over captured runs only; `None` when nothing was captured.
    pub capture_time_mean: Option<f64>,
    pub capture_time_std: Option<f64>,
    pub final_distance_max_captured: Option<f64>,
    pub pursuer_path_mean: f64,
    pub pursuer_path_std: f64,
    pub evader_path_mean: f64,
    pub evader_path_std: f64,
    pub collisions: usize,
    pub max_duration: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub metrics: MetricsTable,
    pub runs: Vec<EpisodeSummary>,
}

fn mean_std(xs: &[f64]) -> Option<(f64, f64)> {
    if xs.is_empty() {
        return None;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    Some((mean, var.sqrt()))
}

impl MetricsTable {
    pub fn from_runs(scenario: &str, runs: &[EpisodeSummary]) -> Self {
        let captured: Vec<&EpisodeSummary> = runs.iter().filter(|r| r.outcome == Outcome::Captured).collect();
        let times: Vec<f64> = captured.iter().filter_map(|r| r.capture_time).collect();
        let ct = mean_std(&times);
        let pp = mean_std(&runs.iter().map(|r| r.pursuer_path).collect::<Vec<_>>()).unwrap_or((0.0, 0.0));
        let ep = mean_std(&runs.iter().map(|r| r.evader_path).collect::<Vec<_>>()).unwrap_or((0.0, 0.0));
        MetricsTable {
            scenario: scenario.to_string(),
            n: runs.len(),
            captures: captured.len(),
            capture_rate: if runs.is_empty() {
                0.0
            } else {
                captured.len() as f64 / runs.len() as f64
            },
            capture_time_mean: ct.map(|c| c.0),
            capture_time_std: ct.map(|c| c.1),
            final_distance_max_captured: captured.iter().map(|r| r.final_distance).reduce(f64::max),
            pursuer_path_mean: pp.0,
            pursuer_path_std: pp.1,
            evader_path_mean: ep.0,
            evader_path_std: ep.1,
            collisions: runs.iter().map(|r| r.collisions).sum(),
            max_duration: runs.iter().map(|r| r.duration).fold(0.0, f64::max),
        }
    }
}

fn play_greedy(
    checkpoint: &Checkpoint,
    scenario: &Scenario,
    run: usize,
    seed: u64,
    obstacle_rng: &mut ChaCha8Rng,
) -> Result<EpisodeLog, HarnessError> {
    let cfg = &checkpoint.config;
    let arena = arena_for(cfg, scenario, obstacle_rng)?;
    let ctx = EpisodeContext {
        arena: &arena,
        rules: &checkpoint.rule_base,
        reward: &cfg.reward,
        speeds: cfg.agents,
        max_plays: cfg.train.max_plays,
        learning: [false, false],
    };
    // greedy actions draw no noise
    let (mut idle_p, mut idle_e) = (stream(seed, STREAM_PURSUER), stream(seed, STREAM_EVADER));
    run_episode(
        &ctx,
        run,
        seed,
        start_states(cfg, scenario),
        &mut checkpoint.pursuer.clone(),
        &mut checkpoint.evader.clone(),
        &mut idle_p,
        &mut idle_e,
    )
}

fn prepare<'a>(checkpoint: &'a Checkpoint, scenario: Option<&'a Scenario>) -> Result<&'a Scenario, HarnessError> {
    checkpoint.check_layout()?;
    let scenario = scenario.unwrap_or(&checkpoint.config.scenario);
    scenario.validate(&checkpoint.config.arena)?;
    Ok(scenario)
}

/// Plays `n_runs` noise-free episodes with frozen weights. Random obstacle
/// layouts without a fixed seed are redrawn per run from `seed`.
pub fn evaluate(
    checkpoint: &Checkpoint,
    scenario: Option<&Scenario>,
    n_runs: usize,
    seed: u64,
) -> Result<Evaluation, HarnessError> {
    let scenario = prepare(checkpoint, scenario)?;
    let mut obstacle_rng = stream(seed, STREAM_EVALUATION);
    let runs = (0..n_runs)
        .map(|run| play_greedy(checkpoint, scenario, run, seed, &mut obstacle_rng).map(|log| log.summary))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Evaluation {
        metrics: MetricsTable::from_runs(&scenario.name, &runs),
        runs,
    })
}

/// Full log of the first run [`evaluate`] would play with the same arguments.
pub fn greedy_episode(
    checkpoint: &Checkpoint,
    scenario: Option<&Scenario>,
    seed: u64,
) -> Result<EpisodeLog, HarnessError> {
    let scenario = prepare(checkpoint, scenario)?;
    play_greedy(checkpoint, scenario, 0, seed, &mut stream(seed, STREAM_EVALUATION))
}

/// Least-squares slope of the pursuer's episode return against episode index.
pub fn reward_slope(summaries: &[EpisodeSummary]) -> f64 {
    let n = summaries.len() as f64;
    if summaries.len() < 2 {
        return 0.0;
    }
    let mx = (n - 1.0) / 2.0;
    let my = summaries.iter().map(|s| s.pursuer_return).sum::<f64>() / n;
    let (num, den) = summaries.iter().enumerate().fold((0.0, 0.0), |(a, b), (i, s)| {
        let dx = i as f64 - mx;
        (a + dx * (s.pursuer_return - my), b + dx * dx)
    });
    num / den
}
