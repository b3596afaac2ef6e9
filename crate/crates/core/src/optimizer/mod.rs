//! Gate search: ensemble cost, bound-constrained quasi-Newton minimization,
//! restarts and the recurrence driver.

pub mod config;
pub mod cost;
pub mod lbfgsb;
pub mod multistart;
pub mod recurrence;
pub mod sampling;

pub use config::OptimizerConfig;
pub use cost::{average_cost, cost_and_gradient, CostEvaluation, Ensemble, GradientMode, Selection};
pub use multistart::{multistart, MultistartResult};
pub use recurrence::{fixed_gate_chain, overall_success, recurrence_optimize, FixedGateRun, RecurrenceResult};
pub use sampling::{sample, SampleSet, SequenceKind};
