//! Constraint-based type inference for FreezeML.
//!
//! Terms are translated into constraints, which a deterministic stack machine
//! solves using restriction-aware unification. The [`oracle`] module holds
//! declarative checkers used to test the solver.

pub mod syntax;
pub mod surface;
pub mod constraint;
pub mod unify;
pub mod solver;
pub mod oracle;
pub mod prelude;
pub mod gen;
