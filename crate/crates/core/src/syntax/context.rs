//! Type contexts, restriction contexts and term contexts.

use indexmap::IndexMap;

use super::term::TermVar;
use super::types::{Restriction, TyVar, Type};

/// An ordered set of type variables (Δ or Ξ).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeContext {
    vars: Vec<TyVar>,
}

impl TypeContext {
    pub fn new() -> TypeContext {
        TypeContext::default()
    }

    pub fn from_vars(vars: impl IntoIterator<Item = TyVar>) -> TypeContext {
        let mut ctx = TypeContext::new();
        for a in vars {
            ctx.push(a);
        }
        ctx
    }

    /// Adds `a`; duplicates are ignored.
    pub fn push(&mut self, a: TyVar) {
        if !self.vars.contains(&a) {
            self.vars.push(a);
        }
    }

    pub fn contains(&self, a: &TyVar) -> bool {
        self.vars.contains(a)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TyVar> {
        self.vars.iter()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn as_slice(&self) -> &[TyVar] {
        &self.vars
    }

    pub fn extended(&self, more: &[TyVar]) -> TypeContext {
        let mut out = self.clone();
        for a in more {
            out.push(a.clone());
        }
        out
    }
}

impl FromIterator<TyVar> for TypeContext {
    fn from_iter<I: IntoIterator<Item = TyVar>>(iter: I) -> Self {
        TypeContext::from_vars(iter)
    }
}

/// Θ: restrictions of flexible variables, in binding order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RestrictionContext {
    map: IndexMap<TyVar, Restriction>,
}

impl RestrictionContext {
    pub fn new() -> RestrictionContext {
        RestrictionContext::default()
    }

    pub fn get(&self, a: &TyVar) -> Option<Restriction> {
        self.map.get(a).copied()
    }

    pub fn contains(&self, a: &TyVar) -> bool {
        self.map.contains_key(a)
    }

    pub fn insert(&mut self, a: TyVar, r: Restriction) {
        self.map.insert(a, r);
    }

    pub fn remove(&mut self, a: &TyVar) {
        self.map.shift_remove(a);
    }

    pub fn keys(&self) -> impl Iterator<Item = &TyVar> {
        self.map.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TyVar, Restriction)> {
        self.map.iter().map(|(k, r)| (k, *r))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Index of `a` in binding order.
    pub fn position(&self, a: &TyVar) -> Option<usize> {
        self.map.get_index_of(a)
    }
}

impl FromIterator<(TyVar, Restriction)> for RestrictionContext {
    fn from_iter<I: IntoIterator<Item = (TyVar, Restriction)>>(iter: I) -> Self {
        RestrictionContext { map: iter.into_iter().collect() }
    }
}

/// Γ: term variables and their types, in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermContext {
    map: IndexMap<TermVar, Type>,
}

impl TermContext {
    pub fn new() -> TermContext {
        TermContext::default()
    }

    /// Binds `x`, replacing any previous binding.
    pub fn insert(&mut self, x: TermVar, t: Type) {
        self.map.shift_remove(&x);
        self.map.insert(x, t);
    }

    pub fn get(&self, x: &TermVar) -> Option<&Type> {
        self.map.get(x)
    }

    pub fn contains(&self, x: &TermVar) -> bool {
        self.map.contains_key(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TermVar, &Type)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn max_uid(&self) -> u32 {
        self.map.values().map(Type::max_uid).max().unwrap_or(0)
    }
}

impl FromIterator<(TermVar, Type)> for TermContext {
    fn from_iter<I: IntoIterator<Item = (TermVar, Type)>>(iter: I) -> Self {
        let mut ctx = TermContext::new();
        for (x, t) in iter {
            ctx.insert(x, t);
        }
        ctx
    }
}
