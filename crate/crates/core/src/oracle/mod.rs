//! Declarative checkers used to test the solver: the typing judgement, the
//! instantiation judgement, first-order matching and constraint
//! satisfiability.
//!
//! Unknown types (the argument type of an application, the parameter type of
//! an unannotated lambda, instantiations and existential witnesses) are
//! represented by holes and solved with the shared unifier. Let bindings ask
//! the solver for principal types and most general solutions.

mod holes;
mod instantiation;
mod sat;
mod typing;

pub use instantiation::{check_instantiation, instantiate, match_instance, match_types, Instantiation};
pub use sat::check_constraint_sat;
pub use typing::{check_typing, ground, principal_via_solver, Principal};
