//! Restriction-aware unification of System F types with ordered quantifiers.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::syntax::{apply_type_subst, wf_type, Ctor, NameSupply, Restriction, RestrictionContext, TyVar, Type, TypeContext};

/// A substitution on flexible variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subst {
    map: BTreeMap<TyVar, Type>,
}

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn singleton(a: TyVar, t: Type) -> Subst {
        let mut s = Subst::new();
        s.insert(a, t);
        s
    }

    pub fn identity_on<'a>(vars: impl IntoIterator<Item = &'a TyVar>) -> Subst {
        Subst { map: vars.into_iter().map(|a| (a.clone(), Type::Var(a.clone()))).collect() }
    }

    pub fn insert(&mut self, a: TyVar, t: Type) {
        self.map.insert(a, t);
    }

    pub fn remove(&mut self, a: &TyVar) {
        self.map.remove(a);
    }

    pub fn get(&self, a: &TyVar) -> Option<&Type> {
        self.map.get(a)
    }

    pub fn contains(&self, a: &TyVar) -> bool {
        self.map.contains_key(a)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TyVar, &Type)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn as_map(&self) -> &BTreeMap<TyVar, Type> {
        &self.map
    }

    pub fn apply(&self, t: &Type) -> Type {
        apply_type_subst(&self.map, t)
    }

    /// The image of a variable (itself when unmapped).
    pub fn image(&self, a: &TyVar) -> Type {
        self.map.get(a).cloned().unwrap_or_else(|| Type::Var(a.clone()))
    }

    /// Restriction of the domain to `keep`.
    pub fn restrict(&self, keep: impl Fn(&TyVar) -> bool) -> Subst {
        Subst { map: self.map.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), v.clone())).collect() }
    }

    /// Variables mapped to something other than themselves.
    pub fn determined(&self) -> BTreeSet<TyVar> {
        self.map
            .iter()
            .filter(|(k, v)| !matches!(v, Type::Var(b) if b == *k))
            .map(|(k, _)| k.clone())
            .collect()
    }

    /// θ∘θ = θ: no determined variable occurs in any image.
    pub fn is_idempotent(&self) -> bool {
        let det = self.determined();
        self.map.values().all(|v| v.ftv_ordered().iter().all(|a| !det.contains(a)))
    }

    /// Free variables of all images.
    pub fn range_ftv(&self) -> BTreeSet<TyVar> {
        self.map.values().flat_map(|v| v.ftv_ordered()).collect()
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("substitution composition would not be idempotent")]
pub struct CompositionError;

/// `outer ∘ inner`: apply `inner`, then `outer`. The result must be idempotent.
pub fn compose(outer: &Subst, inner: &Subst) -> Result<Subst, CompositionError> {
    let mut out = Subst::new();
    for (k, v) in inner.iter() {
        out.insert(k.clone(), outer.apply(v));
    }
    for (k, v) in outer.iter() {
        if !inner.contains(k) {
            out.insert(k.clone(), v.clone());
        }
    }
    if out.is_idempotent() {
        Ok(out)
    } else {
        Err(CompositionError)
    }
}

fn ctor_phrase(d: Ctor) -> &'static str {
    match d {
        Ctor::Arrow => "a function type",
        Ctor::Product => "a product type",
        Ctor::Int => "Int",
        Ctor::Unit => "Unit",
        Ctor::Bool => "Bool",
        Ctor::List => "a list type",
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum UnifyError {
    #[error("type mismatch: {} vs {} (cannot unify `{left}` with `{right}`)", ctor_phrase(*d1), ctor_phrase(*d2))]
    CtorClash { d1: Ctor, d2: Ctor, left: Type, right: Type },
    #[error("constructor arity mismatch between `{left}` and `{right}`")]
    ArityMismatch { left: Type, right: Type },
    #[error("occurs check: `{var}` occurs in `{1}`", var = Type::Var(.0.clone()))]
    OccursViolation(TyVar, Type),
    #[error("restriction violation: monomorphic `{var}` cannot be `{1}`", var = Type::Var(.0.clone()))]
    RestrictionViolation(TyVar, Type),
    #[error("quantifier escape: bound variable `{var}` escapes its scope", var = Type::Var(.0.clone()))]
    QuantifierEscape(TyVar),
    #[error("quantifier mismatch: cannot unify quantified type `{left}` with unquantified type `{right}`")]
    QuantifierMismatch { left: Type, right: Type },
    #[error("rigid type mismatch: cannot unify `{left}` with `{right}`")]
    RigidMismatch { left: Type, right: Type },
    #[error("internal: {0}")]
    Composition(#[from] CompositionError),
}

/// `demote(R, Θ, vars)`: with `Mono`, every listed variable becomes `Mono`.
pub fn demote(r: Restriction, theta_env: &RestrictionContext, vars: &BTreeSet<TyVar>) -> RestrictionContext {
    let mut out = theta_env.clone();
    if r == Restriction::Mono {
        for a in vars {
            if out.contains(a) {
                out.insert(a.clone(), Restriction::Mono);
            }
        }
    }
    out
}

/// Most general unifier of two types whose flexible variables are in `theta_env`.
///
/// Returns the demoted restriction context and a substitution mapping only the
/// variables it binds.
pub fn unify(
    delta: &TypeContext,
    theta_env: &RestrictionContext,
    a: &Type,
    b: &Type,
    supply: &mut NameSupply,
) -> Result<(RestrictionContext, Subst), UnifyError> {
    match (a, b) {
        (Type::Var(x), Type::Var(y)) if x == y => Ok((theta_env.clone(), Subst::new())),
        (Type::Var(x), _) if theta_env.contains(x) => bind(delta, theta_env, x, b),
        (_, Type::Var(y)) if theta_env.contains(y) => bind(delta, theta_env, y, a),
        (Type::Ctor(d1, args1), Type::Ctor(d2, args2)) => {
            if d1 != d2 {
                return Err(UnifyError::CtorClash { d1: *d1, d2: *d2, left: a.clone(), right: b.clone() });
            }
            if args1.len() != args2.len() {
                return Err(UnifyError::ArityMismatch { left: a.clone(), right: b.clone() });
            }
            let mut theta = theta_env.clone();
            let mut sub = Subst::new();
            for (s, t) in args1.iter().zip(args2) {
                let (th, si) = unify(delta, &theta, &sub.apply(s), &sub.apply(t), supply)?;
                sub = compose(&si, &sub)?;
                theta = th;
            }
            Ok((theta, sub))
        }
        (Type::Forall(x, s), Type::Forall(y, t)) => {
            let c = supply.fresh("c");
            let cv = Type::Var(c.clone());
            let inner_delta = delta.extended(std::slice::from_ref(&c));
            let (theta, sub) = unify(&inner_delta, theta_env, &s.subst1(x, &cv), &t.subst1(y, &cv), supply)?;
            if sub.range_ftv().contains(&c) {
                return Err(UnifyError::QuantifierEscape(c));
            }
            Ok((theta, sub))
        }
        (Type::Forall(..), _) => Err(UnifyError::QuantifierMismatch { left: a.clone(), right: b.clone() }),
        (_, Type::Forall(..)) => Err(UnifyError::QuantifierMismatch { left: b.clone(), right: a.clone() }),
        _ => Err(UnifyError::RigidMismatch { left: a.clone(), right: b.clone() }),
    }
}

fn bind(
    delta: &TypeContext,
    theta_env: &RestrictionContext,
    x: &TyVar,
    t: &Type,
) -> Result<(RestrictionContext, Subst), UnifyError> {
    if t.occurs_free(x) {
        return Err(UnifyError::OccursViolation(x.clone(), t.clone()));
    }
    let r = theta_env.get(x).unwrap_or(Restriction::Poly);
    let flex: BTreeSet<TyVar> = t.ftv_ordered().into_iter().filter(|v| !delta.contains(v)).collect();
    let theta1 = demote(r, theta_env, &flex);
    if !wf_type(delta, &theta1, r, t) {
        return Err(UnifyError::RestrictionViolation(x.clone(), t.clone()));
    }
    Ok((theta1, Subst::singleton(x.clone(), t.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::alpha_equal;

    fn v(n: &str, uid: u32) -> TyVar {
        TyVar::new(n, uid)
    }

    fn ctx(entries: &[(&TyVar, Restriction)]) -> RestrictionContext {
        entries.iter().map(|(a, r)| ((*a).clone(), *r)).collect()
    }

    fn supply() -> NameSupply {
        NameSupply::above(100)
    }

    #[test]
    fn demotion_through_binding() {
        let (a, b) = (v("a", 1), v("b", 2));
        let theta = ctx(&[(&a, Restriction::Mono), (&b, Restriction::Poly)]);
        let bb = Type::arrow(Type::var(&b), Type::var(&b));
        let (th, s) = unify(&TypeContext::new(), &theta, &Type::var(&a), &bb, &mut supply()).unwrap();
        assert_eq!(th.get(&b), Some(Restriction::Mono));
        assert_eq!(s, Subst::singleton(a, bb));
    }

    #[test]
    fn mono_variable_rejects_polytype() {
        let (a, c) = (v("a", 1), v("c", 3));
        let theta = ctx(&[(&a, Restriction::Mono)]);
        let poly = Type::forall(std::slice::from_ref(&c), Type::arrow(Type::var(&c), Type::var(&c)));
        let err = unify(&TypeContext::new(), &theta, &Type::var(&a), &poly, &mut supply()).unwrap_err();
        assert!(matches!(err, UnifyError::RestrictionViolation(..)));
    }

    #[test]
    fn alpha_equal_quantified_types() {
        let (a, c, d) = (v("a", 1), v("c", 3), v("d", 4));
        let theta = ctx(&[(&a, Restriction::Poly)]);
        let l = Type::forall(std::slice::from_ref(&c), Type::arrow(Type::var(&c), Type::var(&c)));
        let r = Type::forall(std::slice::from_ref(&d), Type::arrow(Type::var(&d), Type::var(&d)));
        let (th, s) = unify(&TypeContext::new(), &theta, &l, &r, &mut supply()).unwrap();
        assert_eq!(th, theta);
        assert!(s.is_empty());
    }

    // No idempotent substitution can equate `a` and `List a`: any image of `a`
    // would have to contain itself.
    #[test]
    fn occurs_check() {
        let a = v("a", 1);
        let theta = ctx(&[(&a, Restriction::Poly)]);
        let err = unify(&TypeContext::new(), &theta, &Type::var(&a), &Type::list(Type::var(&a)), &mut supply())
            .unwrap_err();
        assert!(matches!(err, UnifyError::OccursViolation(..)));
    }

    #[test]
    fn quantifier_escape() {
        // ∀c. c → c  vs  ∀d. d → a  with a flexible: a would capture the bound variable
        let (a, c, d) = (v("a", 1), v("c", 3), v("d", 4));
        let theta = ctx(&[(&a, Restriction::Poly)]);
        let l = Type::forall(std::slice::from_ref(&c), Type::arrow(Type::var(&c), Type::var(&c)));
        let r = Type::forall(std::slice::from_ref(&d), Type::arrow(Type::var(&d), Type::var(&a)));
        let err = unify(&TypeContext::new(), &theta, &l, &r, &mut supply()).unwrap_err();
        assert!(matches!(err, UnifyError::QuantifierEscape(_)));
    }

    #[test]
    fn quantifier_order_matters() {
        let (a, b) = (v("a", 1), v("b", 2));
        let l = Type::forall(&[a.clone(), b.clone()], Type::arrow(Type::var(&a), Type::var(&b)));
        let r = Type::forall(&[b.clone(), a.clone()], Type::arrow(Type::var(&a), Type::var(&b)));
        assert!(unify(&TypeContext::new(), &RestrictionContext::new(), &l, &r, &mut supply()).is_err());
    }

    #[test]
    fn sequential_components() {
        let (a, b) = (v("a", 1), v("b", 2));
        let theta = ctx(&[(&a, Restriction::Poly), (&b, Restriction::Poly)]);
        let l = Type::arrow(Type::var(&a), Type::var(&a));
        let r = Type::arrow(Type::var(&b), Type::int());
        let (_, s) = unify(&TypeContext::new(), &theta, &l, &r, &mut supply()).unwrap();
        assert!(alpha_equal(&s.apply(&l), &s.apply(&r)));
        assert_eq!(s.apply(&Type::var(&a)), Type::int());
        assert!(s.is_idempotent());
    }

    #[test]
    fn demote_examples() {
        let (b, c) = (v("b", 2), v("c", 3));
        let theta = ctx(&[(&b, Restriction::Poly)]);
        let set: BTreeSet<TyVar> = [b.clone()].into_iter().collect();
        assert_eq!(demote(Restriction::Poly, &theta, &set), theta);
        let theta = ctx(&[(&b, Restriction::Poly), (&c, Restriction::Poly)]);
        let out = demote(Restriction::Mono, &theta, &set);
        assert_eq!(out, ctx(&[(&b, Restriction::Mono), (&c, Restriction::Poly)]));
        assert_eq!(demote(Restriction::Mono, &RestrictionContext::new(), &BTreeSet::new()), RestrictionContext::new());
    }

    #[test]
    fn compose_examples() {
        let (a, b) = (v("a", 1), v("b", 2));
        let theta = Subst::singleton(a.clone(), Type::arrow(Type::var(&b), Type::var(&b)));
        assert_eq!(compose(&Subst::new(), &theta).unwrap(), theta);
        let out = compose(&Subst::singleton(b.clone(), Type::int()), &theta).unwrap();
        let mut expected = Subst::new();
        expected.insert(a, Type::arrow(Type::int(), Type::int()));
        expected.insert(b, Type::int());
        assert_eq!(out, expected);
        assert_eq!(compose(&theta, &theta).unwrap(), theta);
    }
}
