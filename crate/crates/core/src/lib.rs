//! Three-dimensional pursuit-evasion games with fuzzy actor-critic learners.
//!
//! * [`geometry`]: Apollonius dominance sphere and optimal motion cones.
//! * [`env`]: arena, kinematics, obstacles and termination.
//! * [`fuzzy`]: triangular partitions, rule firing and weighted inference.
//! * [`facl`]: actor-critic learner and sensor inputs.
//! * [`reward`]: potential-field reward terms.
//! * [`harness`]: training, evaluation, checkpoints and exports.

pub mod env;
pub mod facl;
pub mod fuzzy;
pub mod geometry;
pub mod harness;
pub mod reward;

pub use env::{AgentState, Arena, Heading, Obstacle, Outcome, StepCommand};
pub use facl::{Learner, LearnerConfig, Role};
pub use fuzzy::{FiringVector, RuleBase};
pub use geometry::{ApolloniusSphere, Point3, Region, SpeedRatio};
pub use harness::{Checkpoint, RunConfig, Scenario};
pub use reward::RewardConfig;
