use std::fmt;

use thiserror::Error;

use crate::syntax::{SourceSpan, TermVar, TyVar, Type};
use crate::unify::UnifyError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeErrorKind {
    Unify(Box<UnifyError>),
    /// `mono(a)` failed: `θ(a)` is polymorphic.
    MonoFailure(TyVar, Type),
    /// A variable of a def annotation was instantiated with a polytype.
    DefMonoFailure(TermVar, TyVar, Type),
    /// A rigid variable escaped its quantifier.
    RigidEscape(TyVar),
    UnboundVariable(TermVar),
    /// An annotation mentions a type variable not in scope.
    UnboundTypeVariable(TyVar),
    IllFormedTerm(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub span: Option<SourceSpan>,
}

impl TypeError {
    pub fn new(kind: TypeErrorKind, span: Option<SourceSpan>) -> TypeError {
        TypeError { kind, span }
    }
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeErrorKind::Unify(e) => write!(f, "{e}"),
            TypeErrorKind::MonoFailure(a, t) => {
                write!(f, "`{}` must be monomorphic but is `{t}`", Type::var(a))
            }
            TypeErrorKind::DefMonoFailure(x, a, t) => write!(
                f,
                "the type of `{x}` must be monomorphic, but `{}` is `{t}` (annotate the binder)",
                Type::var(a)
            ),
            TypeErrorKind::RigidEscape(a) => {
                write!(f, "quantified variable `{}` escapes its scope", Type::var(a))
            }
            TypeErrorKind::UnboundVariable(x) => write!(f, "unbound variable `{x}`"),
            TypeErrorKind::UnboundTypeVariable(a) => write!(f, "unbound type variable `{}`", a.name),
            TypeErrorKind::IllFormedTerm(msg) => write!(f, "ill-formed term: {msg}"),
        }
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.span {
            Some(span) => write!(f, "type error at {span}: {}", self.kind),
            None => write!(f, "type error: {}", self.kind),
        }
    }
}

impl std::error::Error for TypeError {}

/// Which runtime assertion fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvariantKind {
    WellFormedness,
    Measure,
    Determinism,
    RankPartition,
    StepBudget,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("internal invariant violated at step {step} ({kind:?}): {message}")]
pub struct InternalError {
    pub kind: InvariantKind,
    pub step: usize,
    pub message: String,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("{0}")]
    Type(TypeError),
    #[error("{0}")]
    Internal(InternalError),
}

impl From<TypeError> for SolveError {
    fn from(e: TypeError) -> SolveError {
        SolveError::Type(e)
    }
}
