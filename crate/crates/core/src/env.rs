//! Arena, agent kinematics and termination rules.

use std::f64::consts::{FRAC_PI_4, PI};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point3;

/// Per-step steering limit on each heading channel, in radians.
pub const STEER_LIMIT: f64 = FRAC_PI_4;

/// Reported obstacle distance when the arena holds no obstacles.
pub const SENSING_RANGE: f64 = 35.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvError {
    #[error("invalid arena: {0}")]
    InvalidArena(String),
    #[error("invalid obstacle at {center:?} with radius {radius}: {reason}")]
    InvalidObstacle {
        center: Point3,
        radius: f64,
        reason: &'static str,
    },
    #[error("could not place {wanted} obstacles after {attempts} attempts")]
    Placement { wanted: usize, attempts: usize },
}

/// Direction of travel as azimuth `alpha` (from +x in the x-y plane) and
/// polar angle `theta` (from +z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Heading {
    pub alpha: f64,
    pub theta: f64,
}

impl Heading {
    pub fn new(alpha: f64, theta: f64) -> Self {
        Heading {
            alpha: wrap_angle(alpha),
            theta: theta.clamp(0.0, PI),
        }
    }

    /// Heading pointing along `v`; a zero vector gives the horizontal +x heading.
    pub fn along(v: Point3) -> Self {
        let n = v.norm();
        if n == 0.0 {
            return Heading::new(0.0, PI / 2.0);
        }
        let alpha = if v.x == 0.0 && v.y == 0.0 { 0.0 } else { v.y.atan2(v.x) };
        Heading::new(alpha, (v.z / n).clamp(-1.0, 1.0).acos())
    }

    /// Unit vector `(sin t cos a, sin t sin a, cos t)`.
    pub fn direction(&self) -> Point3 {
        let (st, ct) = self.theta.sin_cos();
        let (sa, ca) = self.alpha.sin_cos();
        Point3::new(st * ca, st * sa, ct)
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub position: Point3,
    pub heading: Heading,
    pub speed: f64,
}

/// Heading change requested for one step, clamped to `[-pi/4, pi/4]` per channel.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StepCommand {
    pub dalpha: f64,
    pub dtheta: f64,
}

impl StepCommand {
    pub fn new(dalpha: f64, dtheta: f64) -> Self {
        StepCommand {
            dalpha: dalpha.clamp(-STEER_LIMIT, STEER_LIMIT),
            dtheta: dtheta.clamp(-STEER_LIMIT, STEER_LIMIT),
        }
    }
}

impl From<[f64; 2]> for StepCommand {
    fn from(u: [f64; 2]) -> Self {
        StepCommand::new(u[0], u[1])
    }
}

/// How a [`StepCommand`] acts on the heading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SteeringMode {
    /// The command is a turn added to the persistent heading.
    Incremental,
    /// The command sets the heading outright: azimuth `dalpha`, elevation
    /// `dtheta` above the horizontal plane.
    Absolute,
    /// The command offsets the heading from the agent's line of sight
    /// (pursuer towards the evader, evader away from the pursuer). A zero
    /// command is pure pursuit or pure flight. With a coincident pair the
    /// current heading stands in for the line of sight.
    #[default]
    LineOfSight,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Obstacle {
    pub center: Point3,
    pub radius: f64,
}

impl Obstacle {
    pub fn surface_distance(&self, pos: Point3) -> f64 {
        pos.distance(self.center) - self.radius
    }
}

/// Nearest obstacle and the signed distance to its surface. `obstacle` is
/// `None` when the arena is empty, with the distance pinned to [`SENSING_RANGE`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearestObstacle {
    pub obstacle: Option<Obstacle>,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Arena {
    /// Box `[0, x] x [0, y] x [0, z]`.
    pub extents: Point3,
    pub obstacles: Vec<Obstacle>,
    pub capture_distance: f64,
    pub max_time: f64,
    pub dt: f64,
    #[serde(default)]
    pub steering: SteeringMode,
}

impl Default for Arena {
    fn default() -> Self {
        Arena {
            extents: Point3::new(35.0, 35.0, 20.0),
            obstacles: Vec::new(),
            capture_distance: 1.0,
            max_time: 100.0,
            dt: 0.1,
            steering: SteeringMode::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Running,
    Captured,
    Timeout,
}

impl Arena {
    pub fn validate(&self) -> Result<(), EnvError> {
        let e = self.extents;
        if !(e.x > 0.0 && e.y > 0.0 && e.z > 0.0) || !e.is_finite() {
            return Err(EnvError::InvalidArena(format!("extents {:?} must be positive", e)));
        }
        if !(self.capture_distance > 0.0) {
            return Err(EnvError::InvalidArena("capture distance must be positive".into()));
        }
        if !(self.dt > 0.0) {
            return Err(EnvError::InvalidArena("dt must be positive".into()));
        }
        if !(self.max_time > 0.0) {
            return Err(EnvError::InvalidArena("max_time must be positive".into()));
        }
        for o in &self.obstacles {
            self.check_obstacle(o)?;
        }
        Ok(())
    }

    fn check_obstacle(&self, o: &Obstacle) -> Result<(), EnvError> {
        let bad = |reason| EnvError::InvalidObstacle {
            center: o.center,
            radius: o.radius,
            reason,
        };
        if !(o.radius > 0.0) {
            return Err(bad("radius must be positive"));
        }
        let c = o.center;
        let e = self.extents;
        let inside = |v: f64, hi: f64| v - o.radius >= 0.0 && v + o.radius <= hi;
        if !(inside(c.x, e.x) && inside(c.y, e.y) && inside(c.z, e.z)) {
            return Err(bad("obstacle must lie fully inside the arena"));
        }
        Ok(())
    }

    pub fn contains(&self, p: Point3) -> bool {
        let e = self.extents;
        (0.0..=e.x).contains(&p.x) && (0.0..=e.y).contains(&p.y) && (0.0..=e.z).contains(&p.z)
    }

    pub fn clip(&self, p: Point3) -> Point3 {
        Point3::new(
            p.x.clamp(0.0, self.extents.x),
            p.y.clamp(0.0, self.extents.y),
            p.z.clamp(0.0, self.extents.z),
        )
    }

    /// One kinematic step followed by clipping to the arena box. `sight` is
    /// the agent's line of sight, used only by [`SteeringMode::LineOfSight`].
    pub fn step_agent(&self, state: &AgentState, cmd: StepCommand, sight: Point3) -> AgentState {
        let mut next = advance(state, cmd, self.dt, self.steering, sight);
        next.position = self.clip(next.position);
        next
    }

    pub fn check_termination(&self, pursuer: &AgentState, evader: &AgentState, elapsed: f64) -> Outcome {
        if pursuer.position.distance(evader.position) <= self.capture_distance {
            Outcome::Captured
        } else if elapsed > self.max_time {
            Outcome::Timeout
        } else {
            Outcome::Running
        }
    }

    pub fn nearest_obstacle(&self, pos: Point3) -> NearestObstacle {
        self.obstacles
            .iter()
            .map(|o| (o, o.surface_distance(pos)))
            .fold(None, |best: Option<(&Obstacle, f64)>, (o, d)| match best {
                Some((_, bd)) if bd <= d => best,
                _ => Some((o, d)),
            })
            .map(|(o, d)| NearestObstacle {
                obstacle: Some(*o),
                distance: d,
            })
            .unwrap_or(NearestObstacle {
                obstacle: None,
                distance: SENSING_RANGE,
            })
    }

    pub fn collision_check(&self, pos: Point3) -> bool {
        self.obstacles.iter().any(|o| o.surface_distance(pos) < 0.0)
    }

    /// Adds `count` obstacles with centers drawn uniformly inside the box,
    /// rejecting any center closer than `keep_clear` to one of `avoid`.
    pub fn place_random_obstacles<R: Rng + ?Sized>(
        &mut self,
        count: usize,
        radius: f64,
        avoid: &[Point3],
        keep_clear: f64,
        rng: &mut R,
    ) -> Result<(), EnvError> {
        let e = self.extents;
        if 2.0 * radius > e.x.min(e.y).min(e.z) || !(radius > 0.0) {
            return Err(EnvError::InvalidObstacle {
                center: Point3::ZERO,
                radius,
                reason: "radius does not fit the arena",
            });
        }
        let max_attempts = 1000 * count.max(1);
        let mut placed = 0;
        let mut attempts = 0;
        while placed < count {
            if attempts >= max_attempts {
                return Err(EnvError::Placement { wanted: count, attempts });
            }
            attempts += 1;
            let center = Point3::new(
                rng.random_range(radius..=e.x - radius),
                rng.random_range(radius..=e.y - radius),
                rng.random_range(radius..=e.z - radius),
            );
            if avoid.iter().any(|a| a.distance(center) < keep_clear) {
                continue;
            }
            self.obstacles.push(Obstacle { center, radius });
            placed += 1;
        }
        Ok(())
    }
}

/// Kinematic update without boundary handling: turn, then move `v * dt`
/// along the new heading.
pub fn advance(state: &AgentState, cmd: StepCommand, dt: f64, mode: SteeringMode, sight: Point3) -> AgentState {
    let cmd = StepCommand::new(cmd.dalpha, cmd.dtheta);
    let heading = match mode {
        SteeringMode::Incremental => Heading::new(
            state.heading.alpha + cmd.dalpha,
            state.heading.theta + cmd.dtheta,
        ),
        SteeringMode::Absolute => Heading::new(cmd.dalpha, PI / 2.0 - cmd.dtheta),
        SteeringMode::LineOfSight => {
            let base = if sight.norm() > 0.0 { Heading::along(sight) } else { state.heading };
            Heading::new(base.alpha + cmd.dalpha, base.theta + cmd.dtheta)
        }
    };
    let position = state.position + heading.direction() * (state.speed * dt);
    AgentState {
        position,
        heading,
        speed: state.speed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn agent(pos: Point3, alpha: f64, theta: f64, speed: f64) -> AgentState {
        AgentState {
            position: pos,
            heading: Heading::new(alpha, theta),
            speed,
        }
    }

    fn unbounded(dt: f64) -> Arena {
        Arena {
            extents: Point3::new(1e6, 1e6, 1e6),
            dt,
            steering: SteeringMode::Incremental,
            ..Arena::default()
        }
    }

    #[test]
    fn line_of_sight_offsets_from_sight_line() {
        let s = agent(Point3::ZERO, 2.0, 0.3, 1.0);
        let sight = Point3::new(0.0, 1.0, 0.0);
        let n = advance(&s, StepCommand::default(), 1.0, SteeringMode::LineOfSight, sight);
        assert!((n.position - sight).norm() < 1e-12);
        let n = advance(&s, StepCommand::new(FRAC_PI_4, 0.0), 1.0, SteeringMode::LineOfSight, sight);
        assert!((n.heading.alpha - 3.0 * FRAC_PI_4).abs() < 1e-12);
        assert!((n.heading.theta - FRAC_PI_2).abs() < 1e-12);
        // no sight line: the current heading is kept
        let n = advance(&s, StepCommand::default(), 1.0, SteeringMode::LineOfSight, Point3::ZERO);
        assert_eq!(n.heading, s.heading);
    }

    #[test]
    fn unit_motion_along_x() {
        let s = agent(Point3::ZERO, 0.0, FRAC_PI_2, 1.0);
        let n = unbounded(1.0).step_agent(&s, StepCommand::default(), Point3::ZERO);
        assert!((n.position.x - 1.0).abs() < 1e-15);
        assert!(n.position.y.abs() < 1e-15 && n.position.z.abs() < 1e-15);
    }

    #[test]
    fn polar_zero_moves_straight_up() {
        for alpha in [0.0, 1.0, -2.5] {
            let s = agent(Point3::ZERO, alpha, 0.0, 1.0);
            let n = unbounded(1.0).step_agent(&s, StepCommand::default(), Point3::ZERO);
            assert_eq!(n.position, Point3::new(0.0, 0.0, 1.0));
        }
    }

    #[test]
    fn turn_then_move() {
        let s = agent(Point3::ZERO, 0.0, FRAC_PI_2, 1.1);
        let n = unbounded(0.1).step_agent(&s, StepCommand::new(FRAC_PI_4, 0.0), Point3::ZERO);
        assert!((n.heading.alpha - FRAC_PI_4).abs() < 1e-15);
        assert!((n.position.x - 0.07778174593052023).abs() < 1e-12);
        assert!((n.position.y - 0.07778174593052023).abs() < 1e-12);
        assert!(n.position.z.abs() < 1e-12);
    }

    #[test]
    fn commands_are_clamped() {
        let c = StepCommand::new(2.0, -3.0);
        assert_eq!(c.dalpha, FRAC_PI_4);
        assert_eq!(c.dtheta, -FRAC_PI_4);
    }

    #[test]
    fn heading_wraps_and_polar_clamps() {
        let s = agent(Point3::ZERO, 3.0, 0.1, 1.0);
        let n = advance(&s, StepCommand::new(0.7, -0.7), 0.1, SteeringMode::Incremental, Point3::ZERO);
        assert!((n.heading.alpha - (3.7 - 2.0 * PI)).abs() < 1e-12);
        assert_eq!(n.heading.theta, 0.0);
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
    }

    #[test]
    fn absolute_steering_sets_heading() {
        let s = agent(Point3::ZERO, 2.0, 0.3, 1.0);
        let n = advance(&s, StepCommand::new(0.5, 0.0), 1.0, SteeringMode::Absolute, Point3::ZERO);
        assert!((n.heading.alpha - 0.5).abs() < 1e-15);
        assert!((n.heading.theta - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn clipped_to_box() {
        let arena = Arena::default();
        let s = agent(Point3::new(34.95, 10.0, 0.0), 0.0, FRAC_PI_2, 1.0);
        let n = arena.step_agent(&s, StepCommand::default(), Point3::ZERO);
        assert_eq!(n.position.x, 35.0);
        let down = agent(Point3::new(5.0, 5.0, 0.0), 0.0, PI, 1.0);
        assert_eq!(arena.step_agent(&down, StepCommand::default(), Point3::ZERO).position.z, 0.0);
    }

    #[test]
    fn termination_rules() {
        let arena = Arena::default();
        let p = agent(Point3::ZERO, 0.0, FRAC_PI_2, 1.1);
        let at = |x: f64| agent(Point3::new(x, 0.0, 0.0), 0.0, FRAC_PI_2, 1.0);
        assert_eq!(arena.check_termination(&p, &at(0.66), 40.0), Outcome::Captured);
        assert_eq!(arena.check_termination(&p, &at(5.0), 100.1), Outcome::Timeout);
        assert_eq!(arena.check_termination(&p, &at(1.0), 10.0), Outcome::Captured);
        assert_eq!(arena.check_termination(&p, &at(0.5), 200.0), Outcome::Captured);
        assert_eq!(arena.check_termination(&p, &at(5.0), 100.0), Outcome::Running);
    }

    #[test]
    fn nearest_obstacle_cases() {
        let mut arena = Arena {
            obstacles: vec![Obstacle {
                center: Point3::new(3.0, 0.0, 0.0),
                radius: 1.0,
            }],
            ..Arena::default()
        };
        let n = arena.nearest_obstacle(Point3::ZERO);
        assert_eq!(n.distance, 2.0);
        assert!(!arena.collision_check(Point3::ZERO));

        let inside = arena.nearest_obstacle(Point3::new(3.5, 0.0, 0.0));
        assert!(inside.distance < 0.0);
        assert!(arena.collision_check(Point3::new(3.5, 0.0, 0.0)));

        arena.obstacles = vec![
            Obstacle { center: Point3::new(0.0, 3.0, 0.0), radius: 1.0 },
            Obstacle { center: Point3::new(0.0, 6.0, 0.0), radius: 1.0 },
        ];
        let n = arena.nearest_obstacle(Point3::ZERO);
        assert_eq!(n.distance, 2.0);
        assert_eq!(n.obstacle.unwrap().center.y, 3.0);

        arena.obstacles.clear();
        let n = arena.nearest_obstacle(Point3::ZERO);
        assert!(n.obstacle.is_none());
        assert_eq!(n.distance, SENSING_RANGE);
    }

    #[test]
    fn random_obstacles_respect_clearance() {
        let mut arena = Arena::default();
        let starts = [Point3::new(5.0, 30.0, 0.0), Point3::new(5.0, 5.0, 0.0)];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        arena.place_random_obstacles(10, 1.0, &starts, 3.0, &mut rng).unwrap();
        assert_eq!(arena.obstacles.len(), 10);
        arena.validate().unwrap();
        for o in &arena.obstacles {
            for s in &starts {
                assert!(o.center.distance(*s) >= 3.0);
            }
        }
    }

    #[test]
    fn validation_rejects_bad_arenas() {
        let mut a = Arena::default();
        a.dt = 0.0;
        assert!(a.validate().is_err());
        let mut a = Arena::default();
        a.obstacles.push(Obstacle { center: Point3::new(0.5, 5.0, 5.0), radius: 1.0 });
        assert!(a.validate().is_err());
    }

    #[test]
    fn heading_along_vector() {
        let h = Heading::along(Point3::new(0.0, -2.0, 0.0));
        assert!((h.alpha + FRAC_PI_2).abs() < 1e-15);
        assert!((h.theta - FRAC_PI_2).abs() < 1e-15);
        let d = h.direction();
        assert!((d.y + 1.0).abs() < 1e-15);
    }
}
