//! Core syntax: types, terms, contexts and the structural judgements on them.

pub mod context;
pub mod term;
pub mod types;

pub use context::{RestrictionContext, TermContext, TypeContext};
pub use term::{
    classify_value, is_guarded_value, split, terms_alpha_equal, wf_term, Origin, SourceSpan, Term,
    TermKind, TermVar, ValueClass,
};
pub use types::{
    alpha_equal, alpha_equal_in, apply_type_subst, freshen_binders, wf_type, Ctor, NameSupply,
    Restriction, TyVar, Type,
};
