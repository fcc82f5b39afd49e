//! A single pursuit-evasion episode: both agents sense, act and learn from
//! the same simultaneous transition.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::AgentSpeeds;
use super::HarnessError;
use crate::env::{AgentState, Arena, Obstacle, Outcome};
use crate::facl::{extract_inputs, Action, Learner, Role};
use crate::fuzzy::{FiringVector, RuleBase};
use crate::geometry::{evader_in_cone, pursuer_in_cone};
use crate::reward::{reward_terms, RewardConfig, RewardTerms, Transition};

pub const EPISODE_SCHEMA: &str = "peg3d.episode/1";

/// One agent's side of a logged step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentStep {
    /// State after the step.
    pub state: AgentState,
    pub action: Action,
    pub reward: RewardTerms,
    pub td_error: f64,
    pub firing_entropy: f64,
    /// Whether the executed heading stayed inside the agent's optimal cone.
    pub in_cone: bool,
    pub obstacle_distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepLog {
    pub step: usize,
    pub time: f64,
    pub separation: f64,
    pub pursuer: AgentStep,
    pub evader: AgentStep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeSummary {
    pub episode: usize,
    pub outcome: Outcome,
    pub steps: usize,
    pub duration: f64,
    pub final_distance: f64,
    pub capture_time: Option<f64>,
    pub pursuer_path: f64,
    pub evader_path: f64,
    pub pursuer_min_clearance: f64,
    pub evader_min_clearance: f64,
    /// Number of times either agent entered an obstacle.
    pub collisions: usize,
    /// Fraction of steps with the heading inside the optimal cone; 1 for an
    /// episode with no steps.
    pub pursuer_cone_fraction: f64,
    pub evader_cone_fraction: f64,
    pub pursuer_return: f64,
    pub evader_return: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeLog {
    pub schema: String,
    pub seed: u64,
    pub dt: f64,
    pub obstacles: Vec<Obstacle>,
    pub initial_pursuer: AgentState,
    pub initial_evader: AgentState,
    pub steps: Vec<StepLog>,
    pub summary: EpisodeSummary,
}

/// Fixed inputs of one episode.
#[derive(Debug, Clone, Copy)]
pub struct EpisodeContext<'a> {
    pub arena: &'a Arena,
    pub rules: &'a RuleBase,
    pub reward: &'a RewardConfig,
    pub speeds: AgentSpeeds,
    pub max_plays: usize,
    /// Per role (pursuer, evader): explore with noise and update weights.
    pub learning: [bool; 2],
}

struct Sensed {
    phi: FiringVector,
    obstacle: f64,
}

fn sense(ctx: &EpisodeContext, me: &AgentState, other: &AgentState, role: Role) -> Result<Sensed, HarnessError> {
    let x = extract_inputs(me, other, ctx.arena, role);
    Ok(Sensed {
        phi: ctx.rules.fire(&x)?,
        obstacle: x[2],
    })
}

fn choose<R: Rng + ?Sized>(
    learner: &Learner,
    phi: &FiringVector,
    learning: bool,
    rng: &mut R,
) -> Result<Action, HarnessError> {
    Ok(if learning {
        learner.act(phi, rng)?
    } else {
        learner.act_greedy(phi)?
    })
}

/// Runs one episode to capture, timeout or the step cap, updating learners
/// whose `learning` flag is set.
#[allow(clippy::too_many_arguments)]
pub fn run_episode<R: Rng + ?Sized>(
    ctx: &EpisodeContext,
    episode: usize,
    seed: u64,
    start: (AgentState, AgentState),
    pursuer: &mut Learner,
    evader: &mut Learner,
    pursuer_rng: &mut R,
    evader_rng: &mut R,
) -> Result<EpisodeLog, HarnessError> {
    let arena = ctx.arena;
    let (mut p, mut e) = start;
    let mut steps = Vec::new();
    let mut outcome = arena.check_termination(&p, &e, 0.0);

    let mut sp = sense(ctx, &p, &e, Role::Pursuer)?;
    let mut se = sense(ctx, &e, &p, Role::Evader)?;

    let mut step = 0;
    while outcome == Outcome::Running && step < ctx.max_plays {
        step += 1;
        let ap = choose(pursuer, &sp.phi, ctx.learning[0], pursuer_rng)?;
        let ae = choose(evader, &se.phi, ctx.learning[1], evader_rng)?;

        let sight = e.position - p.position;
        let p_next = arena.step_agent(&p, ap.executed.into(), sight);
        let e_next = arena.step_agent(&e, ae.executed.into(), sight);
        let time = step as f64 * arena.dt;
        outcome = arena.check_termination(&p_next, &e_next, time);
        if outcome == Outcome::Running && step == ctx.max_plays {
            outcome = Outcome::Timeout;
        }
        let terminal = outcome != Outcome::Running;
        let captured = outcome == Outcome::Captured;

        let sep_prev = p.position.distance(e.position);
        let sep_next = p_next.position.distance(e_next.position);
        let transition = |me: &AgentState, me_next: &AgentState| {
            let nearest = arena.nearest_obstacle(me_next.position);
            let obstacle_prev = match nearest.obstacle {
                Some(o) => o.surface_distance(me.position),
                None => nearest.distance,
            };
            Transition {
                obstacle_prev,
                obstacle_next: nearest.distance,
                separation_prev: sep_prev,
                separation_next: sep_next,
                captured,
            }
        };
        let rp = reward_terms(&transition(&p, &p_next), Role::Pursuer, ctx.reward);
        let re = reward_terms(&transition(&e, &e_next), Role::Evader, ctx.reward);

        let sp_next = sense(ctx, &p_next, &e_next, Role::Pursuer)?;
        let se_next = sense(ctx, &e_next, &p_next, Role::Evader)?;

        let td_p = pursuer.td_error(&sp.phi, &sp_next.phi, rp.total, terminal)?;
        let td_e = evader.td_error(&se.phi, &se_next.phi, re.total, terminal)?;
        if ctx.learning[0] {
            pursuer.update_actor(&sp.phi, &ap, td_p);
            pursuer.update_critic(&sp.phi, td_p);
        }
        if ctx.learning[1] {
            evader.update_actor(&se.phi, &ae, td_e);
            evader.update_critic(&se.phi, td_e);
        }

        let p_dir = p_next.heading.direction();
        let e_dir = e_next.heading.direction();
        let s = ctx.speeds;
        let p_cone = pursuer_in_cone(p_dir, p.position, e.position, s.pursuer_speed, s.evader_speed)
            .unwrap_or(true);
        let e_cone = evader_in_cone(e_dir, p.position, e.position).unwrap_or(true);

        steps.push(StepLog {
            step,
            time,
            separation: sep_next,
            pursuer: AgentStep {
                state: p_next,
                action: ap,
                reward: rp,
                td_error: td_p,
                firing_entropy: sp.phi.entropy(),
                in_cone: p_cone,
                obstacle_distance: sp_next.obstacle,
            },
            evader: AgentStep {
                state: e_next,
                action: ae,
                reward: re,
                td_error: td_e,
                firing_entropy: se.phi.entropy(),
                in_cone: e_cone,
                obstacle_distance: se_next.obstacle,
            },
        });

        p = p_next;
        e = e_next;
        sp = sp_next;
        se = se_next;
    }
    if outcome == Outcome::Running {
        // max_plays == 0 is rejected by config validation; guard anyway.
        outcome = Outcome::Timeout;
    }

    let summary = summarize(episode, outcome, arena, start, &steps);
    Ok(EpisodeLog {
        schema: EPISODE_SCHEMA.to_string(),
        seed,
        dt: arena.dt,
        obstacles: arena.obstacles.clone(),
        initial_pursuer: start.0,
        initial_evader: start.1,
        steps,
        summary,
    })
}

fn summarize(
    episode: usize,
    outcome: Outcome,
    arena: &Arena,
    start: (AgentState, AgentState),
    steps: &[StepLog],
) -> EpisodeSummary {
    let n = steps.len();
    let path = |pick: fn(&StepLog) -> &AgentStep, origin: &AgentState| {
        let mut last = origin.position;
        steps.iter().fold(0.0, |acc, s| {
            let here = pick(s).state.position;
            let d = here.distance(last);
            last = here;
            acc + d
        })
    };
    let clearance = |pick: fn(&StepLog) -> &AgentStep, origin: &AgentState| {
        steps
            .iter()
            .map(|s| pick(s).obstacle_distance)
            .fold(arena.nearest_obstacle(origin.position).distance, f64::min)
    };
    let fraction = |pick: fn(&StepLog) -> &AgentStep| {
        if n == 0 {
            1.0
        } else {
            steps.iter().filter(|s| pick(s).in_cone).count() as f64 / n as f64
        }
    };
    let collisions = [
        (start.0.position, (|s: &StepLog| &s.pursuer) as fn(&StepLog) -> &AgentStep),
        (start.1.position, |s: &StepLog| &s.evader),
    ]
    .iter()
    .map(|(origin, pick)| {
        let mut inside = arena.collision_check(*origin);
        steps
            .iter()
            .filter(|s| {
                let now = pick(s).obstacle_distance < 0.0;
                let entered = now && !inside;
                inside = now;
                entered
            })
            .count()
    })
    .sum();
    let final_distance = steps
        .last()
        .map(|s| s.separation)
        .unwrap_or_else(|| start.0.position.distance(start.1.position));
    let duration = n as f64 * arena.dt;

    EpisodeSummary {
        episode,
        outcome,
        steps: n,
        duration,
        final_distance,
        capture_time: (outcome == Outcome::Captured).then_some(duration),
        pursuer_path: path(|s| &s.pursuer, &start.0),
        evader_path: path(|s| &s.evader, &start.1),
        pursuer_min_clearance: clearance(|s| &s.pursuer, &start.0),
        evader_min_clearance: clearance(|s| &s.evader, &start.1),
        collisions,
        pursuer_cone_fraction: fraction(|s| &s.pursuer),
        evader_cone_fraction: fraction(|s| &s.evader),
        pursuer_return: steps.iter().map(|s| s.pursuer.reward.total).sum(),
        evader_return: steps.iter().map(|s| s.evader.reward.total).sum(),
    }
}
