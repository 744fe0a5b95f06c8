use std::collections::BTreeMap;

use crate::constraint::freshen_annotations;
use crate::solver::{infer_in, RunConfig, SolveError};
use crate::syntax::{
    apply_type_subst, is_guarded_value, split, NameSupply, Restriction, RestrictionContext, Term, TermContext,
    TermKind, TermVar, TyVar, Type, TypeContext,
};

use super::holes::Holes;

/// A principal type `(Δ′, A′)` together with the restrictions the solver
/// recorded for `Δ′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Principal {
    pub vars: TypeContext,
    pub restrictions: RestrictionContext,
    pub ty: Type,
}

/// The principal type of `m`, read off the solver: residual flexible
/// variables become the fresh rigid `Δ′`.
pub fn principal_via_solver(delta: &TypeContext, gamma: &TermContext, m: &Term) -> Result<Principal, SolveError> {
    let mut supply = NameSupply::new();
    principal_in(delta, gamma, m, &mut supply)
}

pub(crate) fn principal_in(
    delta: &TypeContext,
    gamma: &TermContext,
    m: &Term,
    supply: &mut NameSupply,
) -> Result<Principal, SolveError> {
    let r = infer_in(delta, gamma, m, &RunConfig::default(), supply)?;
    Ok(Principal {
        vars: r.residual.keys().cloned().collect(),
        restrictions: r.residual,
        ty: r.result_type,
    })
}

/// Replaces every variable of `vars` in `t` by `with`.
pub fn ground(t: &Type, vars: impl IntoIterator<Item = TyVar>, with: &Type) -> Type {
    let map: BTreeMap<TyVar, Type> = vars.into_iter().map(|v| (v, with.clone())).collect();
    apply_type_subst(&map, t)
}

/// Decides `Δ; Γ ⊢ M : A`.
pub fn check_typing(delta: &TypeContext, gamma: &TermContext, m: &Term, a: &Type) -> bool {
    let top = delta.iter().map(|v| v.uid).chain([gamma.max_uid(), m.max_uid(), a.max_uid()]).max().unwrap_or(0);
    let mut supply = NameSupply::above(top);
    let m = freshen_annotations(m, &mut supply);
    let mut checker = Checker { holes: Holes::new(supply) };
    let mut rigid: Vec<TyVar> = delta.iter().cloned().collect();
    let mut env: Vec<(TermVar, Type)> = gamma.iter().map(|(x, t)| (x.clone(), t.clone())).collect();
    checker.check(&mut rigid, &mut env, &m, a)
}

struct Checker {
    holes: Holes,
}

fn lookup<'a>(env: &'a [(TermVar, Type)], x: &TermVar) -> Option<&'a Type> {
    env.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t)
}

impl Checker {
    fn check(&mut self, rigid: &mut Vec<TyVar>, env: &mut Vec<(TermVar, Type)>, m: &Term, a: &Type) -> bool {
        match &m.kind {
            TermKind::FrozenVar(x) => match lookup(env, x).cloned() {
                Some(t) => self.holes.unify(rigid, &t, a),
                None => false,
            },
            TermKind::Var(x) => {
                let Some(t) = lookup(env, x).map(|t| self.holes.resolve(t)) else {
                    return false;
                };
                let (vars, h) = t.prenex();
                let map: BTreeMap<TyVar, Type> =
                    vars.iter().map(|v| (v.clone(), self.holes.fresh(Restriction::Poly, rigid))).collect();
                let h = apply_type_subst(&map, h);
                self.holes.unify(rigid, &h, a)
            }
            TermKind::App(f, arg) => {
                let h = self.holes.fresh(Restriction::Poly, rigid);
                self.check(rigid, env, f, &Type::arrow(h.clone(), a.clone())) && self.check(rigid, env, arg, &h)
            }
            TermKind::Lam(x, body) => {
                let s = self.holes.fresh(Restriction::Mono, rigid);
                let b = self.holes.fresh(Restriction::Poly, rigid);
                if !self.holes.unify(rigid, &Type::arrow(s.clone(), b.clone()), a) {
                    return false;
                }
                self.under(env, x, s, |c, env| c.check(rigid, env, body, &b))
            }
            TermKind::LamAnn(x, ann, body) => {
                let b = self.holes.fresh(Restriction::Poly, rigid);
                if !self.holes.unify(rigid, &Type::arrow(ann.clone(), b.clone()), a) {
                    return false;
                }
                self.under(env, x, ann.clone(), |c, env| c.check(rigid, env, body, &b))
            }
            TermKind::LetAnn(x, ann, bound, body) => {
                let (prefix, inner) = split(ann, bound);
                let depth = rigid.len();
                rigid.extend(prefix);
                let ok = self.check(rigid, env, bound, &inner);
                rigid.truncate(depth);
                ok && self.under(env, x, ann.clone(), |c, env| c.check(rigid, env, body, a))
            }
            TermKind::Let(x, bound, body) => match self.let_type(rigid, env, bound) {
                Some(t) => self.under(env, x, t, |c, env| c.check(rigid, env, body, a)),
                None => false,
            },
        }
    }

    fn under(
        &mut self,
        env: &mut Vec<(TermVar, Type)>,
        x: &TermVar,
        t: Type,
        f: impl FnOnce(&mut Checker, &mut Vec<(TermVar, Type)>) -> bool,
    ) -> bool {
        env.push((x.clone(), t));
        let ok = f(self, env);
        env.pop();
        ok
    }

    /// The type given to `x` by a plain let: the principal type of `bound`,
    /// generalised if `bound` is a guarded value and otherwise instantiated
    /// with monomorphic unknowns.
    fn let_type(&mut self, rigid: &mut Vec<TyVar>, env: &mut Vec<(TermVar, Type)>, bound: &Term) -> Option<Type> {
        let mut gamma = TermContext::new();
        for (x, t) in env.iter() {
            gamma.insert(x.clone(), self.holes.resolve(t));
        }
        // Open holes of the context stand for types over the current rigid
        // variables, so the solver sees them as rigid.
        let mut outer = TypeContext::from_vars(rigid.iter().cloned());
        for (_, t) in gamma.iter() {
            for h in self.holes.open_holes(t) {
                outer.push(h);
            }
        }
        let principal = principal_in(&outer, &gamma, bound, &mut self.holes.supply).ok()?;
        let generalised: Vec<TyVar> = principal.ty.ftv_ordered().into_iter().filter(|v| !outer.contains(v)).collect();

        let depth = rigid.len();
        rigid.extend(generalised.iter().cloned());
        let ok = self.check(rigid, env, bound, &principal.ty);
        rigid.truncate(depth);
        if !ok {
            return None;
        }

        if is_guarded_value(bound) {
            Some(Type::forall(&generalised, principal.ty))
        } else {
            let map: BTreeMap<TyVar, Type> =
                generalised.iter().map(|v| (v.clone(), self.holes.fresh(Restriction::Mono, rigid))).collect();
            Some(apply_type_subst(&map, &principal.ty))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::SolveError;
    use crate::surface::Session;

    fn setup(entries: &[(&str, &str)]) -> (Session, TermContext) {
        let mut sess = Session::new();
        let gamma = entries.iter().map(|(x, t)| (TermVar::new(x), sess.parse_type(t).unwrap())).collect();
        (sess, gamma)
    }

    fn check(entries: &[(&str, &str)], term: &str, ty: &str) -> bool {
        let (mut sess, gamma) = setup(entries);
        let m = sess.parse_term(term).unwrap();
        let a = sess.parse_type(ty).unwrap();
        check_typing(&TypeContext::new(), &gamma, &m, &a)
    }

    const ID: (&str, &str) = ("id", "forall a. a -> a");

    #[test]
    fn frozen_and_plain_variables() {
        assert!(check(&[ID], "~id", "forall a. a -> a"));
        assert!(!check(&[ID], "id", "forall a. a -> a"));
        assert!(check(&[ID], "id", "Int -> Int"));
        assert!(check(&[ID], "id", "(forall b. b -> b) -> (forall b. b -> b)"));
    }

    #[test]
    fn let_generalisation_is_forced() {
        assert!(!check(&[ID], "let f = fun x -> x in ~f", "Int -> Int"));
        assert!(check(&[ID], "let f = fun x -> x in ~f", "forall a. a -> a"));
        assert!(check(&[ID], "let f = fun x -> x in f", "Int -> Int"));
    }

    #[test]
    fn monomorphic_let() {
        assert!(check(&[ID], "let x = id id in x", "Int -> Int"));
        assert!(check(&[ID], "let x = id id in x", "Bool -> Bool"));
        assert!(!check(&[ID], "let x = id id in x", "forall d. d -> d"));
        assert!(!check(&[ID], "let x = id id in x", "(forall d. d -> d) -> (forall d. d -> d)"));
    }

    #[test]
    fn lambdas_are_monomorphic() {
        assert!(check(&[], "fun x -> x", "Int -> Int"));
        assert!(!check(&[], "fun x -> x", "forall b. b -> b"));
        assert!(!check(&[], "fun x -> x", "(forall b. b -> b) -> (forall b. b -> b)"));
        assert!(!check(&[], "fun f -> f f", "Int -> Int"));
        assert!(check(&[], "fun (f : forall a. a -> a) -> f f", "(forall a. a -> a) -> Int -> Int"));
    }

    #[test]
    fn annotated_let_scopes_prefix() {
        assert!(check(&[], "let (g : forall a. a -> a) = fun (y : a) -> y in ~g", "forall b. b -> b"));
        assert!(!check(&[("3", "Int")], "let (g : forall a. a -> a) = fun y -> 3 in g", "Int -> Int"));
    }

    #[test]
    fn principal_types() {
        let (mut sess, gamma) = setup(&[ID]);
        let p = principal_via_solver(&TypeContext::new(), &gamma, &sess.parse_term("fun x -> x").unwrap()).unwrap();
        assert_eq!(p.vars.len(), 1);
        let b = p.vars.iter().next().unwrap();
        assert_eq!(p.ty, Type::arrow(Type::var(b), Type::var(b)));

        let p = principal_via_solver(&TypeContext::new(), &gamma, &sess.parse_term("~id").unwrap()).unwrap();
        assert!(p.vars.is_empty());
        assert!(crate::syntax::alpha_equal(&p.ty, gamma.get(&TermVar::new("id")).unwrap()));

        let r = principal_via_solver(&TypeContext::new(), &TermContext::new(), &sess.parse_term("fun f -> f f").unwrap());
        assert!(matches!(r, Err(SolveError::Type(_))));
    }
}
