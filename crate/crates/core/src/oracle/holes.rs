use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{wf_type, NameSupply, Restriction, RestrictionContext, TyVar, Type, TypeContext};
use crate::unify::{compose, demote, unify, Subst};

/// Unknown types awaiting a solution, each confined to the rigid variables in
/// scope when it was created.
///
/// Rigid variables form a stack; a hole's level is the stack height at its
/// creation, and its solution may only mention rigid variables below that
/// height. Binding a hole lowers the levels of the holes in its solution.
#[derive(Clone, Debug)]
pub(crate) struct Holes {
    pub env: RestrictionContext,
    pub subst: Subst,
    level: BTreeMap<TyVar, usize>,
    pub supply: NameSupply,
}

impl Holes {
    pub fn new(supply: NameSupply) -> Holes {
        Holes { env: RestrictionContext::new(), subst: Subst::new(), level: BTreeMap::new(), supply }
    }

    pub fn fresh(&mut self, r: Restriction, rigid: &[TyVar]) -> Type {
        let h = self.supply.fresh("h");
        self.env.insert(h.clone(), r);
        self.level.insert(h.clone(), rigid.len());
        Type::var(&h)
    }

    pub fn is_hole(&self, a: &TyVar) -> bool {
        self.env.contains(a)
    }

    pub fn resolve(&self, t: &Type) -> Type {
        self.subst.apply(t)
    }

    /// Unsolved holes of `t`, in order of first occurrence.
    pub fn open_holes(&self, t: &Type) -> Vec<TyVar> {
        self.resolve(t).ftv_ordered().into_iter().filter(|a| self.is_hole(a)).collect()
    }

    pub fn unify(&mut self, rigid: &[TyVar], a: &Type, b: &Type) -> bool {
        let delta = TypeContext::from_vars(rigid.iter().cloned());
        let (a, b) = (self.resolve(a), self.resolve(b));
        let Ok((env, sub)) = unify(&delta, &self.env, &a, &b, &mut self.supply) else {
            return false;
        };
        let mut level = self.level.clone();
        for (h, t) in sub.iter() {
            let lvl = level[h];
            for v in t.ftv() {
                match level.get(&v).copied() {
                    Some(l) => {
                        level.insert(v, l.min(lvl));
                    }
                    None => {
                        if !rigid[..lvl].contains(&v) {
                            return false;
                        }
                    }
                }
            }
        }
        let Ok(subst) = compose(&sub, &self.subst) else {
            return false;
        };
        self.env = env;
        self.subst = subst;
        self.level = level;
        true
    }

    /// Demotes the holes of `t` and checks it is a monotype over `rigid`.
    pub fn require_mono(&mut self, rigid: &[TyVar], t: &Type) -> bool {
        let t = self.resolve(t);
        let holes: BTreeSet<TyVar> = t.ftv().into_iter().filter(|a| self.is_hole(a)).collect();
        let env = demote(Restriction::Mono, &self.env, &holes);
        let delta = TypeContext::from_vars(rigid.iter().cloned());
        if !wf_type(&delta, &env, Restriction::Mono, &t) {
            return false;
        }
        self.env = env;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels_block_escape() {
        let outer = TyVar::new("r", 1);
        let inner = TyVar::new("s", 2);
        let mut holes = Holes::new(NameSupply::above(10));
        let h = holes.fresh(Restriction::Poly, std::slice::from_ref(&outer));
        let rigid = [outer.clone(), inner.clone()];
        assert!(!holes.unify(&rigid, &h, &Type::var(&inner)));
        assert!(holes.unify(&rigid, &h, &Type::var(&outer)));
    }

    #[test]
    fn levels_propagate_through_bindings() {
        let outer = TyVar::new("r", 1);
        let inner = TyVar::new("s", 2);
        let mut holes = Holes::new(NameSupply::above(10));
        let h_out = holes.fresh(Restriction::Poly, &[]);
        let rigid = [outer.clone(), inner.clone()];
        let h_in = holes.fresh(Restriction::Poly, &rigid);
        assert!(holes.unify(&rigid, &h_out, &Type::list(h_in.clone())));
        assert!(!holes.unify(&rigid, &h_in, &Type::var(&inner)));
        assert!(holes.unify(&rigid, &h_in, &Type::int()));
        assert_eq!(holes.resolve(&h_out), Type::list(Type::int()));
    }

    #[test]
    fn mono_requirement() {
        let mut holes = Holes::new(NameSupply::above(10));
        let h = holes.fresh(Restriction::Poly, &[]);
        assert!(holes.require_mono(&[], &h));
        let c = TyVar::new("c", 3);
        let poly = Type::forall(std::slice::from_ref(&c), Type::var(&c));
        assert!(!holes.unify(&[], &h, &poly));
    }
}
