use std::f64::consts::{FRAC_PI_4, PI};

use peg3d::env::{advance, wrap_angle, AgentState, Arena, Heading, StepCommand, SteeringMode, STEER_LIMIT};
use peg3d::geometry::Point3;
use proptest::prelude::*;

fn state() -> impl Strategy<Value = AgentState> {
    (
        (0.0..35.0, 0.0..35.0, 0.0..20.0),
        -PI..PI,
        0.0..PI,
        0.1f64..3.0,
    )
        .prop_map(|((x, y, z), alpha, theta, speed)| AgentState {
            position: Point3::new(x, y, z),
            heading: Heading::new(alpha, theta),
            speed,
        })
}

fn mode() -> impl Strategy<Value = SteeringMode> {
    prop_oneof![
        Just(SteeringMode::Incremental),
        Just(SteeringMode::Absolute),
        Just(SteeringMode::LineOfSight),
    ]
}

fn command() -> impl Strategy<Value = StepCommand> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, t)| StepCommand::new(a, t))
}

proptest! {
    #[test]
    fn displacement_is_speed_times_dt(
        s in state(),
        cmd in command(),
        dt in 0.01f64..1.0,
        m in mode(),
        sight in (-10.0f64..10.0, -10.0f64..10.0, -10.0f64..10.0),
    ) {
        let sight = Point3::new(sight.0, sight.1, sight.2);
        let n = advance(&s, cmd, dt, m, sight);
        prop_assert!((n.position.distance(s.position) - s.speed * dt).abs() < 1e-12);
        prop_assert!((n.heading.direction().norm() - 1.0).abs() < 1e-12);
        prop_assert!(n.heading.alpha > -PI && n.heading.alpha <= PI);
        prop_assert!((0.0..=PI).contains(&n.heading.theta));
    }

    #[test]
    fn commands_are_clamped(a in -10.0f64..10.0, t in -10.0f64..10.0) {
        let c = StepCommand::new(a, t);
        prop_assert!(c.dalpha.abs() <= STEER_LIMIT && c.dtheta.abs() <= STEER_LIMIT);
        if a.abs() <= FRAC_PI_4 {
            prop_assert_eq!(c.dalpha, a);
        }
    }

    #[test]
    fn zero_command_flies_straight(s in state(), steps in 2usize..50) {
        let arena = Arena {
            extents: Point3::new(1e4, 1e4, 1e4),
            steering: SteeringMode::Incremental,
            ..Arena::default()
        };
        let s = AgentState { position: s.position + Point3::new(5e3, 5e3, 5e3), ..s };
        let dir = s.heading.direction();
        let mut cur = s;
        for k in 1..=steps {
            cur = arena.step_agent(&cur, StepCommand::default(), Point3::ZERO);
            let expected = s.position + dir * (s.speed * arena.dt * k as f64);
            prop_assert!(cur.position.distance(expected) < 1e-9);
        }
        prop_assert_eq!(cur.heading, s.heading);
    }

    #[test]
    fn stepping_never_leaves_the_box(s in state(), cmds in prop::collection::vec(command(), 1..40), m in mode()) {
        let arena = Arena { steering: m, dt: 1.0, ..Arena::default() };
        let mut cur = s;
        for c in cmds {
            cur = arena.step_agent(&cur, c, Point3::new(1.0, 1.0, 0.0));
            prop_assert!(arena.contains(cur.position));
        }
    }

    #[test]
    fn wrap_angle_range(a in -100.0f64..100.0) {
        let w = wrap_angle(a);
        prop_assert!(w > -PI && w <= PI);
        let turns = (a - w) / (2.0 * PI);
        prop_assert!((turns - turns.round()).abs() < 1e-9);
    }

    #[test]
    fn heading_along_round_trips(v in (-5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0)) {
        let v = Point3::new(v.0, v.1, v.2);
        prop_assume!(v.norm() > 1e-6);
        let d = Heading::along(v).direction();
        prop_assert!(d.distance(v * (1.0 / v.norm())) < 1e-9);
    }
}
