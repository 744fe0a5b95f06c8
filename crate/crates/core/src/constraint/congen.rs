use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{
    apply_type_subst, freshen_binders, is_guarded_value, split, NameSupply, Restriction, Term, TermKind,
    TermVar, TyVar, Type,
};

use super::Constraint;

/// `⟦m : a⟧`. Fresh variables are drawn from `supply` left to right.
pub fn congen(m: &Term, a: &Type, supply: &mut NameSupply) -> Constraint {
    let origin = m.origin;
    match &m.kind {
        TermKind::FrozenVar(x) => Constraint::Freeze(x.clone(), a.clone(), origin),
        TermKind::Var(x) => Constraint::Inst(x.clone(), a.clone(), origin),
        TermKind::App(f, arg) => {
            let a1 = supply.fresh("a");
            let cf = congen(f, &Type::arrow(Type::var(&a1), a.clone()), supply);
            let ca = congen(arg, &Type::var(&a1), supply);
            Constraint::exists(&a1, Constraint::and(cf, ca))
        }
        TermKind::Lam(x, body) => {
            let a1 = supply.fresh("a");
            let a2 = supply.fresh("a");
            let eq = Constraint::Eq(Type::arrow(Type::var(&a1), Type::var(&a2)), a.clone(), origin);
            let cb = congen(body, &Type::var(&a2), supply);
            let def = Constraint::Def(x.clone(), Type::var(&a1), Box::new(cb), origin);
            Constraint::exists(&a1, Constraint::exists(&a2, Constraint::and(eq, def)))
        }
        TermKind::LamAnn(x, b, body) => {
            let a1 = supply.fresh("a");
            let eq = Constraint::Eq(Type::arrow(b.clone(), Type::var(&a1)), a.clone(), origin);
            let cb = congen(body, &Type::var(&a1), supply);
            let def = Constraint::Def(x.clone(), b.clone(), Box::new(cb), origin);
            Constraint::exists(&a1, Constraint::and(eq, def))
        }
        TermKind::LetAnn(x, ann, bound, body) => {
            // Both annotated rows: `split` yields the empty prefix for
            // non-guarded bound terms.
            let (prefix, h) = split(ann, bound);
            let cm = congen(bound, &h, supply);
            let cm = prefix
                .iter()
                .rev()
                .fold(cm, |c, v| Constraint::Forall(v.clone(), Box::new(c), origin));
            let cn = congen(body, a, supply);
            Constraint::and(cm, Constraint::Def(x.clone(), ann.clone(), Box::new(cn), origin))
        }
        TermKind::Let(x, bound, body) => {
            let r = if is_guarded_value(bound) { Restriction::Poly } else { Restriction::Mono };
            let b = supply.fresh("b");
            let cm = congen(bound, &Type::var(&b), supply);
            let cn = congen(body, a, supply);
            Constraint::let_(r, x, &b, cm, cn)
        }
    }
}

/// Renames term binders so that no binder shadows another binder or a name in
/// `reserved`. Free occurrences are left alone.
pub fn uniquify_binders(m: &Term, reserved: &BTreeSet<TermVar>) -> Term {
    let mut taken: BTreeSet<TermVar> = reserved.clone();
    taken.extend(m.term_names());
    let mut seen: BTreeSet<TermVar> = reserved.clone();
    let mut env: Vec<(TermVar, TermVar)> = Vec::new();
    rename(m, &mut env, &mut seen, &mut taken)
}

fn pick(x: &TermVar, seen: &mut BTreeSet<TermVar>, taken: &mut BTreeSet<TermVar>) -> TermVar {
    if seen.insert(x.clone()) {
        return x.clone();
    }
    let y = (1..)
        .map(|i| TermVar::new(&format!("{}_{}", x.as_str(), i)))
        .find(|y| !taken.contains(y))
        .unwrap();
    taken.insert(y.clone());
    seen.insert(y.clone());
    y
}

fn lookup(env: &[(TermVar, TermVar)], x: &TermVar) -> TermVar {
    env.iter()
        .rev()
        .find(|(from, _)| from == x)
        .map(|(_, to)| to.clone())
        .unwrap_or_else(|| x.clone())
}

fn rename(
    m: &Term,
    env: &mut Vec<(TermVar, TermVar)>,
    seen: &mut BTreeSet<TermVar>,
    taken: &mut BTreeSet<TermVar>,
) -> Term {
    let kind = match &m.kind {
        TermKind::Var(x) => TermKind::Var(lookup(env, x)),
        TermKind::FrozenVar(x) => TermKind::FrozenVar(lookup(env, x)),
        TermKind::App(f, a) => TermKind::App(
            Box::new(rename(f, env, seen, taken)),
            Box::new(rename(a, env, seen, taken)),
        ),
        TermKind::Lam(x, body) | TermKind::LamAnn(x, _, body) => {
            let y = pick(x, seen, taken);
            env.push((x.clone(), y.clone()));
            let body = Box::new(rename(body, env, seen, taken));
            env.pop();
            match &m.kind {
                TermKind::LamAnn(_, t, _) => TermKind::LamAnn(y, t.clone(), body),
                _ => TermKind::Lam(y, body),
            }
        }
        TermKind::Let(x, bound, body) | TermKind::LetAnn(x, _, bound, body) => {
            let bound = Box::new(rename(bound, env, seen, taken));
            let y = pick(x, seen, taken);
            env.push((x.clone(), y.clone()));
            let body = Box::new(rename(body, env, seen, taken));
            env.pop();
            match &m.kind {
                TermKind::LetAnn(_, t, _, _) => TermKind::LetAnn(y, t.clone(), bound, body),
                _ => TermKind::Let(y, bound, body),
            }
        }
    };
    Term { kind, origin: m.origin }
}

/// Gives every quantifier in every annotation a fresh variable, keeping the
/// scoping of annotated-let prefixes over their bound terms.
pub fn freshen_annotations(m: &Term, supply: &mut NameSupply) -> Term {
    fn go(m: &Term, env: &BTreeMap<TyVar, Type>, supply: &mut NameSupply) -> Term {
        let fix = |t: &Type, supply: &mut NameSupply| freshen_binders(&apply_type_subst(env, t), supply);
        let kind = match &m.kind {
            TermKind::Var(_) | TermKind::FrozenVar(_) => m.kind.clone(),
            TermKind::App(f, a) => TermKind::App(Box::new(go(f, env, supply)), Box::new(go(a, env, supply))),
            TermKind::Lam(x, body) => TermKind::Lam(x.clone(), Box::new(go(body, env, supply))),
            TermKind::LamAnn(x, t, body) => {
                let t = fix(t, supply);
                TermKind::LamAnn(x.clone(), t, Box::new(go(body, env, supply)))
            }
            TermKind::Let(x, bound, body) => {
                TermKind::Let(x.clone(), Box::new(go(bound, env, supply)), Box::new(go(body, env, supply)))
            }
            TermKind::LetAnn(x, t, bound, body) => {
                let t2 = fix(t, supply);
                let (old, _) = split(t, bound);
                let (new, _) = split(&t2, bound);
                let mut inner = env.clone();
                for (o, n) in old.iter().zip(&new) {
                    inner.insert(o.clone(), Type::var(n));
                }
                let bound = go(bound, &inner, supply);
                TermKind::LetAnn(x.clone(), t2, Box::new(bound), Box::new(go(body, env, supply)))
            }
        };
        Term { kind, origin: m.origin }
    }
    go(m, &BTreeMap::new(), supply)
}
