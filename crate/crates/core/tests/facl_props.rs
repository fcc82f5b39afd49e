use std::f64::consts::PI;

use peg3d::env::{Arena, Heading, Obstacle, STEER_LIMIT};
use peg3d::facl::{extract_inputs, Learner, LearnerConfig, Role};
use peg3d::fuzzy::{FiringVector, RuleBase};
use peg3d::geometry::Point3;
use peg3d::AgentState;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn inputs() -> impl Strategy<Value = [f64; 4]> {
    (0.0f64..35.0, 0.0..PI, 0.0f64..35.0, 0.0..PI).prop_map(|(a, b, c, d)| [a, b, c, d])
}

fn weights() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 625)
}

fn learner_with(actor0: Vec<f64>, actor1: Vec<f64>, critic: Vec<f64>) -> Learner {
    let mut l = Learner::new(LearnerConfig::default(), 625).unwrap();
    l.actor = [actor0, actor1];
    l.critic = critic;
    l
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outputs_differentiate_to_firing_strengths(x in inputs(), w0 in weights(), w1 in weights(), z in weights(), l in 0usize..625) {
        let phi = RuleBase::pursuit_default(35.0).fire(&x).unwrap();
        let base = learner_with(w0, w1, z);
        let h = 1e-4;
        let nudge = |f: &dyn Fn(&mut Learner, f64)| {
            let mut up = base.clone();
            let mut down = base.clone();
            f(&mut up, h);
            f(&mut down, -h);
            (up, down)
        };
        let (up, down) = nudge(&|m, d| m.critic[l] += d);
        let fd = (up.value(&phi).unwrap() - down.value(&phi).unwrap()) / (2.0 * h);
        prop_assert!((fd - phi.as_slice()[l]).abs() < 1e-6);
        for c in 0..2 {
            let (up, down) = nudge(&|m, d| m.actor[c][l] += d);
            let fd = (up.commanded(&phi).unwrap()[c] - down.commanded(&phi).unwrap()[c]) / (2.0 * h);
            prop_assert!((fd - phi.as_slice()[l]).abs() < 1e-6);
        }
    }

    #[test]
    fn updates_move_outputs_along_the_gradient(x in inputs(), w0 in weights(), z in weights(), delta in -5.0f64..5.0, seed in any::<u64>()) {
        let phi = RuleBase::pursuit_default(35.0).fire(&x).unwrap();
        let norm2: f64 = phi.as_slice().iter().map(|p| p * p).sum();
        let mut l = learner_with(w0.clone(), w0, z);
        let cfg = l.config;

        let v0 = l.value(&phi).unwrap();
        l.update_critic(&phi, delta);
        let dv = l.value(&phi).unwrap() - v0;
        prop_assert!((dv - cfg.alpha_critic * delta * norm2).abs() < 1e-9);

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let act = l.act(&phi, &mut rng).unwrap();
        let u0 = l.commanded(&phi).unwrap();
        l.update_actor(&phi, &act, delta);
        let u1 = l.commanded(&phi).unwrap();
        for c in 0..2 {
            let expected = cfg.alpha_actor * delta * (act.executed[c] - act.commanded[c]) / cfg.sigma * norm2;
            prop_assert!((u1[c] - u0[c] - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn actions_stay_within_the_steering_limit(x in inputs(), w0 in weights(), w1 in weights(), seed in any::<u64>()) {
        let phi = RuleBase::pursuit_default(35.0).fire(&x).unwrap();
        let mut w0 = w0;
        for w in &mut w0 { *w *= 3.0; }
        let l = learner_with(w0, w1, vec![0.0; 625]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = l.act(&phi, &mut rng).unwrap();
        let g = l.act_greedy(&phi).unwrap();
        for c in 0..2 {
            prop_assert!(a.executed[c].abs() <= STEER_LIMIT);
            prop_assert_eq!(g.executed[c], g.commanded[c].clamp(-STEER_LIMIT, STEER_LIMIT));
        }
    }

    #[test]
    fn acting_is_deterministic_per_seed(x in inputs(), w0 in weights(), seed in any::<u64>()) {
        let phi = RuleBase::pursuit_default(35.0).fire(&x).unwrap();
        let l = learner_with(w0.clone(), w0, vec![0.0; 625]);
        let mut r1 = ChaCha8Rng::seed_from_u64(seed);
        let mut r2 = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..5 {
            prop_assert_eq!(l.act(&phi, &mut r1).unwrap(), l.act(&phi, &mut r2).unwrap());
        }
    }

    #[test]
    fn inputs_are_in_range(
        me in (0.0f64..35.0, 0.0f64..35.0, 0.0f64..20.0),
        other in (0.0f64..35.0, 0.0f64..35.0, 0.0f64..20.0),
        alpha in -PI..PI,
        theta in 0.0..PI,
        obstacle in prop::option::of((5.0f64..30.0, 5.0f64..30.0, 2.0f64..18.0)),
    ) {
        let mut arena = Arena::default();
        if let Some((x, y, z)) = obstacle {
            arena.obstacles.push(Obstacle { center: Point3::new(x, y, z), radius: 1.0 });
        }
        let state = |p: (f64, f64, f64)| AgentState {
            position: Point3::new(p.0, p.1, p.2),
            heading: Heading::new(alpha, theta),
            speed: 1.0,
        };
        let x = extract_inputs(&state(me), &state(other), &arena, Role::Pursuer);
        let d = Point3::new(me.0, me.1, me.2).distance(Point3::new(other.0, other.1, other.2));
        prop_assert!((x[0] - d).abs() < 1e-12);
        prop_assert!((0.0..=PI).contains(&x[1]) && (0.0..=PI).contains(&x[3]));
        prop_assert!(x[2] <= 35.0);
    }
}

#[test]
fn critic_converges_to_mean_reward() {
    let cfg = LearnerConfig { gamma: 0.0, ..LearnerConfig::default() };
    let mut l = Learner::new(cfg, 1).unwrap();
    let phi = FiringVector::one_hot(1, 0);
    let rewards = Normal::new(0.3, 0.1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let r = rewards.sample(&mut rng);
        let delta = l.td_error(&phi, &phi, r, false).unwrap();
        l.update_critic(&phi, delta);
    }
    let v = l.value(&phi).unwrap();
    assert!((v - 0.3).abs() <= 0.05, "critic at {v}");
}

#[test]
fn terminal_transition_ignores_next_value() {
    let mut l = Learner::new(LearnerConfig::default(), 1).unwrap();
    l.critic[0] = 2.0;
    let phi = FiringVector::one_hot(1, 0);
    assert_eq!(l.td_error(&phi, &phi, 1.0, true).unwrap(), 1.0 - 2.0);
    assert!((l.td_error(&phi, &phi, 1.0, false).unwrap() - (1.0 + 0.95 * 2.0 - 2.0)).abs() < 1e-15);
}
