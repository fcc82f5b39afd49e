//! Fuzzy actor-critic learner.
//!
//! One learner drives one agent. The actor has a weight vector per output
//! channel (azimuth turn, polar turn); the critic has a single weight vector.
//! Both read the same firing vector, so every per-weight sensitivity is the
//! firing strength of that rule.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::{AgentState, Arena, STEER_LIMIT};
use crate::fuzzy::{infer, FiringVector, FuzzyError};
use crate::geometry::angle_between;

/// Output channels: azimuth increment, polar increment.
pub const CHANNELS: usize = 2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LearnerError {
    #[error("actor learning rate {actor} must be below critic learning rate {critic}")]
    LearningRateOrder { actor: f64, critic: f64 },
    #[error("learning rates must be positive and finite")]
    LearningRate,
    #[error("discount {0} outside [0, 1)")]
    Discount(f64),
    #[error("exploration std dev {0} must be positive")]
    Sigma(f64),
    #[error("weight vectors have {got} entries, rule base has {expected}")]
    Layout { expected: usize, got: usize },
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Pursuer,
    Evader,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LearnerConfig {
    pub alpha_actor: f64,
    pub alpha_critic: f64,
    pub gamma: f64,
    /// Standard deviation of the exploration noise.
    pub sigma: f64,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            alpha_actor: 0.001,
            alpha_critic: 0.05,
            gamma: 0.95,
            // variance 0.01
            sigma: 0.1,
        }
    }
}

impl LearnerConfig {
    pub fn validate(&self) -> Result<(), LearnerError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.alpha_actor) || !ok(self.alpha_critic) {
            return Err(LearnerError::LearningRate);
        }
        if self.alpha_actor >= self.alpha_critic {
            return Err(LearnerError::LearningRateOrder {
                actor: self.alpha_actor,
                critic: self.alpha_critic,
            });
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(LearnerError::Discount(self.gamma));
        }
        if !ok(self.sigma) {
            return Err(LearnerError::Sigma(self.sigma));
        }
        Ok(())
    }
}

/// Commanded output `u` and the executed, noise-perturbed and clamped `u'`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Action {
    pub commanded: [f64; CHANNELS],
    pub executed: [f64; CHANNELS],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Learner {
    pub config: LearnerConfig,
    pub actor: [Vec<f64>; CHANNELS],
    pub critic: Vec<f64>,
}

impl Learner {
    /// Zero-initialized learner for a rule base with `rules` rules.
    pub fn new(config: LearnerConfig, rules: usize) -> Result<Self, LearnerError> {
        config.validate()?;
        Ok(Learner {
            config,
            actor: [vec![0.0; rules], vec![0.0; rules]],
            critic: vec![0.0; rules],
        })
    }

    pub fn rule_count(&self) -> usize {
        self.critic.len()
    }

    pub fn check_layout(&self, rules: usize) -> Result<(), LearnerError> {
        for v in self.actor.iter().chain(std::iter::once(&self.critic)) {
            if v.len() != rules {
                return Err(LearnerError::Layout {
                    expected: rules,
                    got: v.len(),
                });
            }
        }
        Ok(())
    }

    pub fn commanded(&self, phi: &FiringVector) -> Result<[f64; CHANNELS], LearnerError> {
        Ok([infer(phi, &self.actor[0])?, infer(phi, &self.actor[1])?])
    }

    /// Actor output plus independent Gaussian noise per channel, clamped to
    /// the steering limit.
    pub fn act<R: Rng + ?Sized>(&self, phi: &FiringVector, rng: &mut R) -> Result<Action, LearnerError> {
        let commanded = self.commanded(phi)?;
        let noise = Normal::new(0.0, self.config.sigma).map_err(|_| LearnerError::Sigma(self.config.sigma))?;
        let mut executed = [0.0; CHANNELS];
        for (e, u) in executed.iter_mut().zip(commanded) {
            *e = (u + noise.sample(rng)).clamp(-STEER_LIMIT, STEER_LIMIT);
        }
        Ok(Action { commanded, executed })
    }

    /// Noise-free action, used for evaluation and frozen agents.
    pub fn act_greedy(&self, phi: &FiringVector) -> Result<Action, LearnerError> {
        let commanded = self.commanded(phi)?;
        Ok(Action {
            commanded,
            executed: commanded.map(|u| u.clamp(-STEER_LIMIT, STEER_LIMIT)),
        })
    }

    pub fn value(&self, phi: &FiringVector) -> Result<f64, LearnerError> {
        Ok(infer(phi, &self.critic)?)
    }

    /// `r + gamma * V(s') - V(s)`, with `V(s') = 0` on terminal transitions.
    pub fn td_error(
        &self,
        phi_t: &FiringVector,
        phi_next: &FiringVector,
        reward: f64,
        terminal: bool,
    ) -> Result<f64, LearnerError> {
        let next = if terminal { 0.0 } else { self.value(phi_next)? };
        Ok(reward + self.config.gamma * next - self.value(phi_t)?)
    }

    pub fn update_actor(&mut self, phi_t: &FiringVector, action: &Action, delta: f64) {
        let cfg = self.config;
        for (c, weights) in self.actor.iter_mut().enumerate() {
            let explore = (action.executed[c] - action.commanded[c]) / cfg.sigma;
            let step = cfg.alpha_actor * delta * explore;
            if step == 0.0 {
                continue;
            }
            for (w, p) in weights.iter_mut().zip(phi_t.as_slice()) {
                *w += step * p;
            }
        }
    }

    pub fn update_critic(&mut self, phi_t: &FiringVector, delta: f64) {
        let step = self.config.alpha_critic * delta;
        for (z, p) in self.critic.iter_mut().zip(phi_t.as_slice()) {
            *z += step * p;
        }
    }
}

/// Learner inputs `[d_PE, heading-to-opponent angle, obstacle distance,
/// heading-to-obstacle angle]` for an agent `me` facing `opponent`.
///
/// The same layout serves both roles; only the agent whose heading is used
/// changes. Coincident points give angle 0, an empty arena gives angle pi.
pub fn extract_inputs(me: &AgentState, opponent: &AgentState, arena: &Arena, _role: Role) -> [f64; 4] {
    let dir = me.heading.direction();
    let to_opponent = opponent.position - me.position;
    let d_pe = to_opponent.norm();
    let delta = angle_between(dir, to_opponent).unwrap_or(0.0);
    let nearest = arena.nearest_obstacle(me.position);
    let delta_obstacle = match nearest.obstacle {
        Some(o) => angle_between(dir, o.center - me.position).unwrap_or(0.0),
        None => PI,
    };
    [d_pe, delta, nearest.distance, delta_obstacle]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::Heading;
    use crate::geometry::Point3;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn learner() -> Learner {
        Learner::new(LearnerConfig::default(), 4).unwrap()
    }

    #[test]
    fn config_guards() {
        let mut c = LearnerConfig::default();
        c.validate().unwrap();
        c.alpha_actor = 0.05;
        assert!(matches!(c.validate(), Err(LearnerError::LearningRateOrder { .. })));
        let c = LearnerConfig { gamma: 1.0, ..LearnerConfig::default() };
        assert_eq!(c.validate(), Err(LearnerError::Discount(1.0)));
        let c = LearnerConfig { sigma: 0.0, ..LearnerConfig::default() };
        assert_eq!(c.validate(), Err(LearnerError::Sigma(0.0)));
    }

    #[test]
    fn zero_weights_act_zero() {
        let l = learner();
        let a = l.act_greedy(&FiringVector::uniform(4)).unwrap();
        assert_eq!(a.commanded, [0.0, 0.0]);
        assert_eq!(a.executed, [0.0, 0.0]);
    }

    #[test]
    fn one_hot_picks_rule_weight() {
        let mut l = learner();
        l.actor[0][2] = 0.3;
        l.actor[1][2] = -0.1;
        let a = l.act_greedy(&FiringVector::one_hot(4, 2)).unwrap();
        assert_eq!(a.commanded, [0.3, -0.1]);
    }

    #[test]
    fn executed_is_clamped() {
        let mut l = learner();
        l.actor[0] = vec![FRAC_PI_3; 4];
        let a = l.act_greedy(&FiringVector::uniform(4)).unwrap();
        assert_eq!(a.executed[0], FRAC_PI_4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let a = l.act(&FiringVector::uniform(4), &mut rng).unwrap();
            assert!(a.executed.iter().all(|u| u.abs() <= FRAC_PI_4));
        }
    }

    #[test]
    fn td_error_examples() {
        let mut l = learner();
        let phi = FiringVector::one_hot(4, 0);
        let next = FiringVector::one_hot(4, 1);
        assert_eq!(l.td_error(&phi, &next, 1.0, false).unwrap(), 1.0);
        l.critic = vec![2.0, 1.0, 0.0, 0.0];
        assert_eq!(l.td_error(&phi, &next, 0.0, true).unwrap(), -2.0);
        l.critic = vec![0.5, 1.0, 0.0, 0.0];
        assert!((l.td_error(&phi, &next, 0.0, false).unwrap() - 0.45).abs() < 1e-15);
    }

    #[test]
    fn actor_update_examples() {
        let mut l = learner();
        let phi = FiringVector::one_hot(4, 1);
        let moved = Action { commanded: [0.0, 0.0], executed: [0.1, 0.0] };
        l.update_actor(&phi, &moved, 0.0);
        assert_eq!(l.actor[0], vec![0.0; 4]);
        let still = Action { commanded: [0.2, 0.2], executed: [0.2, 0.2] };
        l.update_actor(&phi, &still, 3.0);
        assert_eq!(l.actor[0], vec![0.0; 4]);
        // (u' - u) / sigma = 1
        l.update_actor(&phi, &moved, 1.0);
        assert!((l.actor[0][1] - 0.001).abs() < 1e-15);
        assert_eq!(l.actor[0][0], 0.0);
        assert_eq!(l.actor[1], vec![0.0; 4]);
    }

    #[test]
    fn critic_update_examples() {
        let mut l = learner();
        l.update_critic(&FiringVector::one_hot(4, 3), 0.0);
        assert_eq!(l.critic, vec![0.0; 4]);
        l.update_critic(&FiringVector::one_hot(4, 3), 1.0);
        assert!((l.critic[3] - 0.05).abs() < 1e-15);
        let mut l = learner();
        l.update_critic(&FiringVector::uniform(4), 1.0);
        for z in &l.critic {
            assert!((z - 0.05 / 4.0).abs() < 1e-15);
        }
    }

    #[test]
    fn layout_check() {
        let l = learner();
        assert!(l.check_layout(4).is_ok());
        assert_eq!(l.check_layout(625), Err(LearnerError::Layout { expected: 625, got: 4 }));
    }

    fn agent(x: f64, y: f64, z: f64, heading: Heading) -> AgentState {
        AgentState { position: Point3::new(x, y, z), heading, speed: 1.0 }
    }

    #[test]
    fn inputs_for_pursuer() {
        let arena = Arena::default();
        let east = Heading::new(0.0, FRAC_PI_2);
        let p = agent(0.0, 0.0, 0.0, east);
        let x = extract_inputs(&p, &agent(5.0, 0.0, 0.0, east), &arena, Role::Pursuer);
        assert_eq!(x[0], 5.0);
        assert!(x[1].abs() < 1e-15);
        let x = extract_inputs(&p, &agent(0.0, 5.0, 0.0, east), &arena, Role::Pursuer);
        assert!((x[1] - FRAC_PI_2).abs() < 1e-15);
        let x = extract_inputs(&p, &agent(3.0, 4.0, 0.0, east), &arena, Role::Pursuer);
        assert_eq!(x[0], 5.0);
        assert_eq!(x[2], crate::env::SENSING_RANGE);
        assert_eq!(x[3], PI);
    }

    #[test]
    fn inputs_for_evader_use_own_heading() {
        let mut arena = Arena::default();
        arena.obstacles.push(crate::env::Obstacle { center: Point3::new(10.0, 13.0, 5.0), radius: 1.0 });
        let p = agent(5.0, 5.0, 5.0, Heading::new(0.0, FRAC_PI_2));
        let e = agent(10.0, 5.0, 5.0, Heading::new(0.0, FRAC_PI_2));
        let x = extract_inputs(&e, &p, &arena, Role::Evader);
        assert_eq!(x[0], 5.0);
        assert!((x[1] - PI).abs() < 1e-15);
        assert!((x[2] - 7.0).abs() < 1e-12);
        assert!((x[3] - FRAC_PI_2).abs() < 1e-15);
        let same = extract_inputs(&e, &e, &arena, Role::Evader);
        assert_eq!(same[1], 0.0);
    }
}
