//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Three operations are exposed: a dominance map through the horizontal
//! plane of both agents, membership curves of an input partition, and a
//! short training run followed by one noise-free evaluation episode.

use wasm_bindgen::prelude::*;

use peg3d::env::SteeringMode;
use peg3d::fuzzy::InputPartition;
use peg3d::geometry::{apollonius_sphere, dominance, Point3, Region, SpeedRatio};
use peg3d::harness::{greedy_episode, train, ObstacleSpec, RunConfig, Scenario};
use peg3d::Outcome;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// Dominance sphere cut by the plane `z`: `[cx, cy, cz, radius]`, with P and
/// E both placed at height `z`.
#[wasm_bindgen]
pub fn apollonius_circle(px: f64, py: f64, ex: f64, ey: f64, z: f64, ratio: f64) -> Result<Vec<f64>, JsError> {
    let s = apollonius_sphere(
        Point3::new(px, py, z),
        Point3::new(ex, ey, z),
        SpeedRatio::new(ratio).map_err(js_err)?,
    )
    .map_err(js_err)?;
    Ok(vec![s.center.x, s.center.y, s.center.z, s.radius])
}

/// Region codes on an `n` by `n` grid over `[0, size]^2` at the agents'
/// height, row-major from y = 0: 0 evader, 1 boundary, 2 pursuer.
#[wasm_bindgen]
pub fn dominance_grid(px: f64, py: f64, ex: f64, ey: f64, ratio: f64, size: f64, n: usize) -> Result<Vec<u8>, JsError> {
    let a = SpeedRatio::new(ratio).map_err(js_err)?;
    let s = apollonius_sphere(Point3::new(px, py, 0.0), Point3::new(ex, ey, 0.0), a).map_err(js_err)?;
    let cell = size / n as f64;
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let x = Point3::new((i as f64 + 0.5) * cell, (j as f64 + 0.5) * cell, 0.0);
            out.push(match dominance(x, &s, a).map_err(js_err)? {
                Region::EvaderDominant => 0,
                Region::Boundary => 1,
                Region::PursuerDominant => 2,
            });
        }
    }
    Ok(out)
}

/// Memberships of `count` evenly spaced triangles over `[lo, hi]` sampled
/// at `samples` points: `count` consecutive rows of `samples` values.
#[wasm_bindgen]
pub fn membership_curves(lo: f64, hi: f64, count: usize, samples: usize) -> Result<Vec<f64>, JsError> {
    let p = InputPartition::evenly_spaced(lo, hi, count).map_err(js_err)?;
    let xs: Vec<f64> = (0..samples)
        .map(|k| lo + (hi - lo) * k as f64 / (samples.max(2) - 1) as f64)
        .collect();
    let columns: Vec<Vec<f64>> = xs.iter().map(|&x| p.memberships(x)).collect();
    Ok((0..count).flat_map(|m| columns.iter().map(move |c| c[m])).collect())
}

/// Memberships of `x` in each of `count` evenly spaced triangles over `[lo, hi]`.
#[wasm_bindgen]
pub fn membership_at(lo: f64, hi: f64, count: usize, x: f64) -> Result<Vec<f64>, JsError> {
    Ok(InputPartition::evenly_spaced(lo, hi, count).map_err(js_err)?.memberships(x))
}

/// Outcome of [`simulate`].
#[wasm_bindgen]
pub struct Simulation {
    trajectory: Vec<f64>,
    captured: bool,
    duration: f64,
    final_distance: f64,
    training_captures: usize,
}

#[wasm_bindgen]
impl Simulation {
    /// `[px, py, pz, ex, ey, ez]` per step, starting with the initial state.
    pub fn trajectory(&self) -> Vec<f64> {
        self.trajectory.clone()
    }

    pub fn captured(&self) -> bool {
        self.captured
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn final_distance(&self) -> f64 {
        self.final_distance
    }

    pub fn training_captures(&self) -> usize {
        self.training_captures
    }
}

fn steering_mode(name: &str) -> Result<SteeringMode, JsError> {
    match name {
        "line_of_sight" => Ok(SteeringMode::LineOfSight),
        "incremental" => Ok(SteeringMode::Incremental),
        "absolute" => Ok(SteeringMode::Absolute),
        other => Err(JsError::new(&format!("unknown steering mode {other:?}"))),
    }
}

/// Trains both agents on built-in scenario `scenario` (1-4) for `episodes`
/// episodes without obstacles, then plays one noise-free episode.
#[wasm_bindgen]
pub fn simulate(scenario: usize, seed: u32, episodes: usize, steering: &str) -> Result<Simulation, JsError> {
    let mut cfg = RunConfig::default();
    cfg.scenario = Scenario::builtin(scenario).ok_or_else(|| JsError::new("scenario must be 1-4"))?;
    cfg.scenario.obstacles = ObstacleSpec::Explicit { list: vec![] };
    cfg.arena.steering = steering_mode(steering)?;
    cfg.train.seed = seed.into();
    cfg.train.episodes = episodes.max(1);
    let out = train(&cfg, None).map_err(js_err)?;
    let training_captures = out
        .manifest
        .episodes
        .iter()
        .filter(|s| s.outcome == Outcome::Captured)
        .count();
    let log = greedy_episode(&out.checkpoint, None, seed.into()).map_err(js_err)?;
    let mut trajectory = Vec::with_capacity(6 * (log.steps.len() + 1));
    let mut push = |a: Point3, b: Point3| trajectory.extend([a.x, a.y, a.z, b.x, b.y, b.z]);
    push(log.initial_pursuer.position, log.initial_evader.position);
    for s in &log.steps {
        push(s.pursuer.state.position, s.evader.state.position);
    }
    let summary = log.summary;
    Ok(Simulation {
        trajectory,
        captured: summary.outcome == Outcome::Captured,
        duration: summary.duration,
        final_distance: summary.final_distance,
        training_captures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_matches_reference_pair() {
        let c = apollonius_circle(10.0, 10.0, -10.0, -10.0, 10.0, 0.5).unwrap();
        assert!((c[0] + 50.0 / 3.0).abs() < 1e-9 && (c[1] + 50.0 / 3.0).abs() < 1e-9);
        assert!((c[3] - 18.856180831641268).abs() < 1e-9);
    }

    #[test]
    fn grid_has_both_regions() {
        let g = dominance_grid(5.0, 30.0, 5.0, 5.0, 1.0 / 1.1, 35.0, 35).unwrap();
        assert_eq!(g.len(), 35 * 35);
        // evader's cell (5, 5) and pursuer's cell (5, 30)
        assert_eq!(g[5 * 35 + 5], 0);
        assert_eq!(g[30 * 35 + 5], 2);
    }

    #[test]
    fn curves_sum_to_one() {
        let c = membership_curves(0.0, 35.0, 5, 50).unwrap();
        assert_eq!(c.len(), 250);
        for k in 0..50 {
            let s: f64 = (0..5).map(|m| c[m * 50 + k]).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        let at = membership_at(0.0, 35.0, 5, 35.0 / 8.0).unwrap();
        assert!((at[0] - 0.5).abs() < 1e-12 && (at[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn short_simulation_runs() {
        let s = simulate(1, 3, 5, "line_of_sight").unwrap();
        let t = s.trajectory();
        assert_eq!(t.len() % 6, 0);
        assert_eq!(&t[..6], &[5.0, 30.0, 0.0, 5.0, 5.0, 0.0]);
        assert!(s.captured());
        assert!(s.final_distance() <= 1.0);
    }
}
