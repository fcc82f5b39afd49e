use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use peg3d::harness::{
    evaluate, export_log, load_scenario_file, read_log, reward_slope, train, Checkpoint, ExportFormat, RunConfig,
    Scenario,
};
use peg3d::Outcome;

#[derive(Parser)]
#[command(name = "peg3d", version, about = "3D pursuit-evasion with fuzzy actor-critic learners")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a pursuer and an evader against each other.
    Train {
        /// Built-in scenario number (1-4) or a scenario TOML file.
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Run config TOML; defaults are used for anything it leaves out.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Overrides `train.episodes` from the config.
        #[arg(long)]
        episodes: Option<usize>,
    },
    /// Noise-free evaluation of a checkpoint.
    Evaluate {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long, default_value_t = 20)]
        runs: usize,
        /// Seed for per-run obstacle layouts.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Evaluate on another scenario than the one trained on.
        #[arg(long)]
        scenario: Option<String>,
        /// Print the metrics and per-run summaries as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Export an episode log as CSV tables or one JSON document.
    Replay {
        #[arg(long)]
        log: PathBuf,
        #[arg(long, value_parser = parse_format)]
        export: ExportFormat,
        /// Output directory; defaults to `<log stem>-export` next to the log.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Built-in scenarios.
    Scenarios {
        #[command(subcommand)]
        action: ScenarioAction,
    },
    /// Print the default run config as TOML.
    DefaultConfig,
}

#[derive(Subcommand)]
enum ScenarioAction {
    List,
}

fn parse_format(s: &str) -> Result<ExportFormat, String> {
    s.parse().map_err(|_| format!("expected csv or json, got {s:?}"))
}

fn resolve_scenario(arg: &str) -> Result<Scenario> {
    if let Ok(n) = arg.parse::<usize>() {
        return Scenario::builtin(n).with_context(|| format!("no built-in scenario {n}; use 1-4 or a file"));
    }
    let path = Path::new(arg);
    if !path.exists() {
        bail!("scenario {arg:?} is neither 1-4 nor an existing file");
    }
    Ok(load_scenario_file(path)?)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.2}"))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train {
            scenario,
            seed,
            config,
            out,
            episodes,
        } => {
            let mut cfg = match &config {
                Some(p) => RunConfig::load(p)?,
                None => RunConfig::default(),
            };
            cfg.scenario = resolve_scenario(&scenario)?;
            if let Some(s) = seed {
                cfg.train.seed = s;
            }
            if let Some(n) = episodes {
                cfg.train.episodes = n;
            }
            let result = train(&cfg, Some(&out))?;
            let eps = &result.manifest.episodes;
            let captures = eps.iter().filter(|e| e.outcome == Outcome::Captured).count();
            let tail = &eps[eps.len().saturating_sub(10)..];
            let tail_caps = tail.iter().filter(|e| e.outcome == Outcome::Captured).count();
            println!(
                "{}: {} episodes, {} captured ({} of last {}), reward slope {:.4}",
                cfg.scenario.name,
                eps.len(),
                captures,
                tail_caps,
                tail.len(),
                reward_slope(eps)
            );
            println!("wrote {}", out.display());
        }
        Command::Evaluate {
            checkpoint,
            runs,
            seed,
            scenario,
            json,
        } => {
            let cp = Checkpoint::load(&checkpoint)?;
            let sc = scenario.as_deref().map(resolve_scenario).transpose()?;
            let ev = evaluate(&cp, sc.as_ref(), runs, seed)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&ev)?);
            } else {
                let m = &ev.metrics;
                println!("scenario            {}", m.scenario);
                println!("runs                {}", m.n);
                println!("capture rate        {:.2} ({}/{})", m.capture_rate, m.captures, m.n);
                println!(
                    "capture time [s]    {} +- {}",
                    fmt_opt(m.capture_time_mean),
                    fmt_opt(m.capture_time_std)
                );
                println!("max capture dist    {}", fmt_opt(m.final_distance_max_captured));
                println!("pursuer path [m]    {:.2} +- {:.2}", m.pursuer_path_mean, m.pursuer_path_std);
                println!("evader path [m]     {:.2} +- {:.2}", m.evader_path_mean, m.evader_path_std);
                println!("collisions          {}", m.collisions);
            }
        }
        Command::Replay { log, export, out } => {
            let episode = read_log(&log)?;
            let dir = out.unwrap_or_else(|| {
                let stem = log.file_stem().and_then(|s| s.to_str()).unwrap_or("episode");
                log.with_file_name(format!("{stem}-export"))
            });
            for p in export_log(&episode, export, &dir)? {
                println!("{}", p.display());
            }
        }
        Command::Scenarios {
            action: ScenarioAction::List,
        } => {
            for (i, s) in Scenario::all_builtin().iter().enumerate() {
                let p = s.pursuer_start;
                let e = s.evader_start;
                println!(
                    "{}  {:<12} P=({}, {}, {})  E=({}, {}, {})",
                    i + 1,
                    s.name,
                    p.x,
                    p.y,
                    p.z,
                    e.x,
                    e.y,
                    e.z
                );
            }
        }
        Command::DefaultConfig => print!("{}", RunConfig::default().to_toml_string()),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
