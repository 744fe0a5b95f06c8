//! The constraint solver: a deterministic stack machine over states
//! `(F, Θ, θ, C)`.

mod error;
mod frame;
mod machine;
mod partition;
mod run;

pub use error::{InternalError, InvariantKind, SolveError, TypeError, TypeErrorKind};
pub use frame::{atv, delta_of, gamma_of, plug, term_names_of, xi_of, Frame};
pub use machine::{
    check_state, guards, measure, reify_state, state_wf, step, step_observed, unifier_constraint, PartitionObserver,
    Rule, SolverState, StepOutcome,
};
pub use partition::{partition, rank, rank_partition};
pub use run::{infer, infer_in, initial_constraint, run, Inference, PartitionCall, RunConfig, RunOutput, RunStats, TraceRecord};
