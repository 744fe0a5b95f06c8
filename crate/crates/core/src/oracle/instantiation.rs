use std::collections::BTreeMap;

use crate::syntax::{apply_type_subst, alpha_equal, wf_type, Restriction, RestrictionContext, TyVar, Type, TypeContext};

/// A type instantiation `δ`.
pub type Instantiation = BTreeMap<TyVar, Type>;

/// `Δ ⊢ δ : Δ′ ⇒_R Δ″`
pub fn check_instantiation(
    delta: &TypeContext,
    inst: &Instantiation,
    domain: &TypeContext,
    r: Restriction,
    extra: &TypeContext,
) -> bool {
    let scope = delta.extended(extra.as_slice());
    let env = RestrictionContext::new();
    inst.len() == domain.len()
        && domain.iter().all(|a| match inst.get(a) {
            Some(t) => wf_type(&scope, &env, r, t),
            None => false,
        })
}

/// First-order matching: finds `δ` over `vars` with `δ(pattern)` alpha-equal
/// to `target`. Bound variables of either side never escape into `δ`.
pub fn match_types(vars: &[TyVar], pattern: &Type, target: &Type) -> Option<Instantiation> {
    let mut out = Instantiation::new();
    let mut bound = Vec::new();
    go(vars, pattern, target, &mut bound, &mut out).then_some(out)
}

fn go(
    vars: &[TyVar],
    p: &Type,
    t: &Type,
    bound: &mut Vec<(TyVar, TyVar)>,
    out: &mut Instantiation,
) -> bool {
    match (p, t) {
        (Type::Var(a), _) if vars.contains(a) && !bound.iter().any(|(l, _)| l == a) => {
            if t.ftv().iter().any(|v| bound.iter().any(|(_, r)| r == v)) {
                return false;
            }
            match out.get(a) {
                Some(prev) => alpha_equal(prev, t),
                None => {
                    out.insert(a.clone(), t.clone());
                    true
                }
            }
        }
        (Type::Var(a), Type::Var(b)) => {
            match (bound.iter().rev().find(|(l, _)| l == a), bound.iter().rev().find(|(_, r)| r == b)) {
                (Some((_, r)), Some((l, _))) => r == b && l == a,
                (None, None) => a == b,
                _ => false,
            }
        }
        (Type::Ctor(d1, a1), Type::Ctor(d2, a2)) => {
            d1 == d2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| go(vars, x, y, bound, out))
        }
        (Type::Forall(a, s), Type::Forall(b, u)) => {
            bound.push((a.clone(), b.clone()));
            let ok = go(vars, s, u, bound, out);
            bound.pop();
            ok
        }
        _ => false,
    }
}

/// Matches the body of a prenex scheme `∀ā.H` against `target` over `ā`.
/// Quantified variables not occurring in `H` are left unmapped.
pub fn match_instance(scheme: &Type, target: &Type) -> Option<Instantiation> {
    let (vars, body) = scheme.prenex();
    match_types(&vars, body, target)
}

/// Applies an instantiation.
pub fn instantiate(inst: &Instantiation, t: &Type) -> Type {
    apply_type_subst(inst, t)
}
