//! Potential-field reward: obstacles repel, the evader attracts the pursuer,
//! and capture pays a bonus. The evader receives the attraction and capture
//! terms with their signs flipped.

use serde::{Deserialize, Serialize};

use crate::facl::Role;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RewardConfig {
    /// Repulsion coefficient.
    pub alpha_r: f64,
    /// Attraction coefficient.
    pub beta_a: f64,
    /// Capture bonus.
    pub gamma_s: f64,
    pub w_r: f64,
    pub w_a: f64,
}

impl Default for RewardConfig {
    fn default() -> Self {
        RewardConfig {
            alpha_r: 10.0,
            beta_a: 5.0,
            gamma_s: 20.0,
            w_r: 5.0,
            w_a: 10.0,
        }
    }
}

impl RewardConfig {
    pub fn validate(&self) -> Result<(), String> {
        let fields = [
            ("alpha_r", self.alpha_r),
            ("beta_a", self.beta_a),
            ("gamma_s", self.gamma_s),
            ("w_r", self.w_r),
            ("w_a", self.w_a),
        ];
        match fields.iter().find(|(_, v)| !(v.is_finite() && *v > 0.0)) {
            Some((name, v)) => Err(format!("reward coefficient {name} = {v} must be positive")),
            None => Ok(()),
        }
    }
}

/// Distances one agent sees across a single step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    /// Surface distance to the obstacle nearest at `t + 1`, measured at `t`.
    pub obstacle_prev: f64,
    pub obstacle_next: f64,
    pub separation_prev: f64,
    pub separation_next: f64,
    pub captured: bool,
}

/// `1 - exp(-alpha_r * (d_next - d_prev))`; positive when moving away.
pub fn repulsion_reward(d_prev: f64, d_next: f64, cfg: &RewardConfig) -> f64 {
    1.0 - (-cfg.alpha_r * (d_next - d_prev)).exp()
}

/// `exp(-beta_a * (d_next - d_prev)) - 1` for the pursuer, negated for the evader.
pub fn attraction_reward(d_prev: f64, d_next: f64, role: Role, cfg: &RewardConfig) -> f64 {
    let r = (-cfg.beta_a * (d_next - d_prev)).exp() - 1.0;
    match role {
        Role::Pursuer => r,
        Role::Evader => -r,
    }
}

pub fn success_reward(captured: bool, role: Role, cfg: &RewardConfig) -> f64 {
    let r = if captured { cfg.gamma_s } else { 0.0 };
    match role {
        Role::Pursuer => r,
        Role::Evader => -r,
    }
}

/// Per-term breakdown of one agent's reward.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RewardTerms {
    pub repulsion: f64,
    pub attraction: f64,
    pub success: f64,
    pub total: f64,
}

pub fn reward_terms(t: &Transition, role: Role, cfg: &RewardConfig) -> RewardTerms {
    let repulsion = repulsion_reward(t.obstacle_prev, t.obstacle_next, cfg);
    let attraction = attraction_reward(t.separation_prev, t.separation_next, role, cfg);
    let success = success_reward(t.captured, role, cfg);
    RewardTerms {
        repulsion,
        attraction,
        success,
        total: cfg.w_r * repulsion + cfg.w_a * attraction + success,
    }
}

pub fn total_reward(t: &Transition, role: Role, cfg: &RewardConfig) -> f64 {
    reward_terms(t, role, cfg).total
}
