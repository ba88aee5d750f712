//! Task allocation, mood dynamics and goal modelling for agile teams.
//!
//! The crate is organised around one simulator and three supporting tools:
//!
//! * [`simulation`] runs discrete-day multi-agent scenarios where tasks are
//!   handed out by the SMART planner in [`allocation`] or by the
//!   accept-when-requested baseline;
//! * [`fcm`] iterates fuzzy cognitive maps of developer mood;
//! * [`metrics`] derives competence, productivity and correlations from
//!   simulated runs and real activity logs;
//! * [`goalnet`] turns user stories into hierarchical Goal Net models.
//!
//! Scenario configuration lives in [`model`] and [`scenario`]; [`cli`] wires
//! everything to the `smart-agile` binary.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod allocation;
pub mod cli;
pub mod fcm;
pub mod goalnet;
pub mod metrics;
pub mod model;
pub mod scenario;
pub mod simulation;

pub use allocation::{smart_plan, AllocationPlan, TypeEconomics};
pub use fcm::{ConceptMap, StateVector, Terminal, Trajectory, Transform};
pub use goalnet::{build_goal_net, parse_story, validate_net, GoalNet, UserStory};
pub use metrics::{competence, pearson, SprintRecord};
pub use model::{Allocator, ScenarioConfig};
pub use scenario::{load_scenario, preset};
pub use simulation::{run, run_repeated, RunResult};
