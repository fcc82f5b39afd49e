use peg3d::facl::Role;
use peg3d::reward::{attraction_reward, repulsion_reward, reward_terms, success_reward, RewardConfig, Transition};
use proptest::prelude::*;

fn transition() -> impl Strategy<Value = Transition> {
    (0.0f64..30.0, -0.2f64..0.2, 0.0f64..50.0, -0.25f64..0.25, any::<bool>()).prop_map(|(o, do_, s, ds, c)| {
        Transition {
            obstacle_prev: o,
            obstacle_next: o + do_,
            separation_prev: s,
            separation_next: s + ds,
            captured: c,
        }
    })
}

proptest! {
    #[test]
    fn pursuit_terms_are_zero_sum(t in transition()) {
        let cfg = RewardConfig::default();
        let p = reward_terms(&t, Role::Pursuer, &cfg);
        let e = reward_terms(&t, Role::Evader, &cfg);
        prop_assert_eq!(p.attraction, -e.attraction);
        prop_assert_eq!(p.success, -e.success);
        // the obstacle term is not inverted
        prop_assert_eq!(p.repulsion, e.repulsion);
        prop_assert!((p.total - (cfg.w_r * p.repulsion + cfg.w_a * p.attraction + p.success)).abs() < 1e-12);
    }

    #[test]
    fn repulsion_bounded_and_increasing(d in 0.0f64..30.0, a in -0.3f64..0.3, b in -0.3f64..0.3) {
        let cfg = RewardConfig::default();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let r_lo = repulsion_reward(d, d + lo, &cfg);
        let r_hi = repulsion_reward(d, d + hi, &cfg);
        prop_assert!(r_lo <= r_hi);
        prop_assert!(r_hi < 1.0);
        prop_assert_eq!(repulsion_reward(d, d + hi, &cfg) > 0.0, hi > 0.0);
    }

    #[test]
    fn attraction_bounded_and_decreasing_for_pursuer(d in 0.0f64..50.0, a in -0.3f64..0.3, b in -0.3f64..0.3) {
        let cfg = RewardConfig::default();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let r_lo = attraction_reward(d, d + lo, Role::Pursuer, &cfg);
        let r_hi = attraction_reward(d, d + hi, Role::Pursuer, &cfg);
        prop_assert!(r_lo >= r_hi);
        prop_assert!(r_hi > -1.0);
        prop_assert!(attraction_reward(d, d + hi, Role::Evader, &cfg) < 1.0);
    }
}

#[test]
fn success_only_on_capture() {
    let cfg = RewardConfig::default();
    assert_eq!(success_reward(false, Role::Pursuer, &cfg), 0.0);
    assert_eq!(success_reward(true, Role::Pursuer, &cfg), 20.0);
    assert_eq!(success_reward(true, Role::Evader, &cfg), -20.0);
}
