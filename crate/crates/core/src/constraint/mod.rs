//! Constraints, their well-formedness, and the translation from terms.

mod congen;

use std::fmt;

use crate::surface::Names;
use crate::syntax::{Origin, Restriction, TermContext, TermVar, TyVar, Type, TypeContext};

pub use congen::{congen, freshen_annotations, uniquify_binders};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    True,
    And(Box<Constraint>, Box<Constraint>),
    Eq(Type, Type, Origin),
    Freeze(TermVar, Type, Origin),
    Inst(TermVar, Type, Origin),
    Forall(TyVar, Box<Constraint>, Origin),
    Exists(TyVar, Box<Constraint>),
    Mono(TyVar, Origin),
    Def(TermVar, Type, Box<Constraint>, Origin),
    LetPoly(TermVar, TyVar, Box<Constraint>, Box<Constraint>),
    LetMono(TermVar, TyVar, Box<Constraint>, Box<Constraint>),
}

impl Constraint {
    pub fn and(c1: Constraint, c2: Constraint) -> Constraint {
        Constraint::And(Box::new(c1), Box::new(c2))
    }

    pub fn eq(a: Type, b: Type) -> Constraint {
        Constraint::Eq(a, b, Origin(None))
    }

    pub fn freeze(x: &str, a: Type) -> Constraint {
        Constraint::Freeze(TermVar::new(x), a, Origin(None))
    }

    pub fn inst(x: &str, a: Type) -> Constraint {
        Constraint::Inst(TermVar::new(x), a, Origin(None))
    }

    pub fn forall(a: &TyVar, c: Constraint) -> Constraint {
        Constraint::Forall(a.clone(), Box::new(c), Origin(None))
    }

    pub fn exists(a: &TyVar, c: Constraint) -> Constraint {
        Constraint::Exists(a.clone(), Box::new(c))
    }

    pub fn mono(a: &TyVar) -> Constraint {
        Constraint::Mono(a.clone(), Origin(None))
    }

    pub fn def(x: &str, a: Type, c: Constraint) -> Constraint {
        Constraint::Def(TermVar::new(x), a, Box::new(c), Origin(None))
    }

    pub fn let_(r: Restriction, x: &TermVar, a: &TyVar, c1: Constraint, c2: Constraint) -> Constraint {
        match r {
            Restriction::Poly => Constraint::LetPoly(x.clone(), a.clone(), Box::new(c1), Box::new(c2)),
            Restriction::Mono => Constraint::LetMono(x.clone(), a.clone(), Box::new(c1), Box::new(c2)),
        }
    }

    /// The parts of a let constraint.
    pub fn as_let(&self) -> Option<(Restriction, &TermVar, &TyVar, &Constraint, &Constraint)> {
        match self {
            Constraint::LetPoly(x, a, c1, c2) => Some((Restriction::Poly, x, a, c1, c2)),
            Constraint::LetMono(x, a, c1, c2) => Some((Restriction::Mono, x, a, c1, c2)),
            _ => None,
        }
    }

    /// Constraint size, as used by the termination measure.
    pub fn size(&self) -> usize {
        match self {
            Constraint::True => 0,
            Constraint::Mono(..) | Constraint::Eq(..) => 1,
            Constraint::Freeze(..) | Constraint::Inst(..) => 2,
            Constraint::Exists(_, c) | Constraint::Forall(_, c, _) | Constraint::Def(_, _, c, _) => 1 + c.size(),
            Constraint::And(c1, c2) => 1 + c1.size() + c2.size(),
            Constraint::LetPoly(_, _, c1, c2) | Constraint::LetMono(_, _, c1, c2) => 3 + c1.size() + c2.size(),
        }
    }

    /// Number of instantiation constraints.
    pub fn insts(&self) -> usize {
        match self {
            Constraint::Inst(..) => 1,
            Constraint::True | Constraint::Mono(..) | Constraint::Eq(..) | Constraint::Freeze(..) => 0,
            Constraint::Exists(_, c) | Constraint::Forall(_, c, _) | Constraint::Def(_, _, c, _) => c.insts(),
            Constraint::And(c1, c2) | Constraint::LetPoly(_, _, c1, c2) | Constraint::LetMono(_, _, c1, c2) => {
                c1.insts() + c2.insts()
            }
        }
    }

    /// Free type variables, in order of first appearance.
    pub fn ftv_ordered(&self) -> Vec<TyVar> {
        fn go(c: &Constraint, bound: &mut Vec<TyVar>, out: &mut Vec<TyVar>) {
            let add = |t: &Type, bound: &Vec<TyVar>, out: &mut Vec<TyVar>| {
                for a in t.ftv_ordered() {
                    if !bound.contains(&a) && !out.contains(&a) {
                        out.push(a);
                    }
                }
            };
            match c {
                Constraint::True => {}
                Constraint::And(c1, c2) => {
                    go(c1, bound, out);
                    go(c2, bound, out);
                }
                Constraint::Eq(a, b, _) => {
                    add(a, bound, out);
                    add(b, bound, out);
                }
                Constraint::Freeze(_, a, _) | Constraint::Inst(_, a, _) => add(a, bound, out),
                Constraint::Mono(a, _) => add(&Type::Var(a.clone()), bound, out),
                Constraint::Forall(a, c, _) | Constraint::Exists(a, c) => {
                    bound.push(a.clone());
                    go(c, bound, out);
                    bound.pop();
                }
                Constraint::Def(_, a, c, _) => {
                    add(a, bound, out);
                    go(c, bound, out);
                }
                Constraint::LetPoly(_, a, c1, c2) | Constraint::LetMono(_, a, c1, c2) => {
                    bound.push(a.clone());
                    go(c1, bound, out);
                    bound.pop();
                    go(c2, bound, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Largest type-variable uid mentioned anywhere.
    pub fn max_uid(&self) -> u32 {
        match self {
            Constraint::True => 0,
            Constraint::And(c1, c2) => c1.max_uid().max(c2.max_uid()),
            Constraint::Eq(a, b, _) => a.max_uid().max(b.max_uid()),
            Constraint::Freeze(_, a, _) | Constraint::Inst(_, a, _) => a.max_uid(),
            Constraint::Mono(a, _) => a.uid,
            Constraint::Forall(a, c, _) | Constraint::Exists(a, c) => a.uid.max(c.max_uid()),
            Constraint::Def(_, a, c, _) => a.max_uid().max(c.max_uid()),
            Constraint::LetPoly(_, a, c1, c2) | Constraint::LetMono(_, a, c1, c2) => {
                a.uid.max(c1.max_uid()).max(c2.max_uid())
            }
        }
    }

    /// A source span attached to this constraint, if any.
    pub fn origin(&self) -> Origin {
        match self {
            Constraint::Eq(_, _, o)
            | Constraint::Freeze(_, _, o)
            | Constraint::Inst(_, _, o)
            | Constraint::Forall(_, _, o)
            | Constraint::Mono(_, o)
            | Constraint::Def(_, _, _, o) => *o,
            _ => Origin(None),
        }
    }
}

/// Δ;Ξ;Γ for constraint well-formedness.
#[derive(Clone, Debug, Default)]
pub struct ConstraintContext {
    pub delta: TypeContext,
    pub xi: TypeContext,
    pub gamma: TermContext,
}

fn wf_over(delta: &[TyVar], xi: &[TyVar], t: &Type) -> bool {
    fn go(delta: &[TyVar], xi: &[TyVar], bound: &mut Vec<TyVar>, t: &Type) -> bool {
        match t {
            Type::Var(a) => bound.contains(a) || delta.contains(a) || xi.contains(a),
            Type::Ctor(d, args) => args.len() == d.arity() && args.iter().all(|s| go(delta, xi, bound, s)),
            Type::Forall(a, body) => {
                if delta.contains(a) || xi.contains(a) {
                    return false;
                }
                bound.push(a.clone());
                let ok = go(delta, xi, bound, body);
                bound.pop();
                ok
            }
        }
    }
    go(delta, xi, &mut Vec::new(), t)
}

/// `Δ;Ξ;Γ ⊢ wf C`. Term variables are checked for presence only.
pub fn wf_constraint(ctx: &ConstraintContext, c: &Constraint) -> bool {
    let names: Vec<TermVar> = ctx.gamma.iter().map(|(x, _)| x.clone()).collect();
    wf_with_names(&ctx.delta, &ctx.xi, &names, c)
}

pub(crate) fn wf_with_names(delta: &TypeContext, xi: &TypeContext, names: &[TermVar], c: &Constraint) -> bool {
    let mut delta = delta.as_slice().to_vec();
    let mut xi = xi.as_slice().to_vec();
    if xi.iter().any(|a| delta.contains(a)) {
        return false;
    }
    wf_go(&mut delta, &mut xi, &mut names.to_vec(), c)
}

fn wf_go(delta: &mut Vec<TyVar>, xi: &mut Vec<TyVar>, gamma: &mut Vec<TermVar>, c: &Constraint) -> bool {
    let fresh = |a: &TyVar, delta: &Vec<TyVar>, xi: &Vec<TyVar>| !delta.contains(a) && !xi.contains(a);
    match c {
        Constraint::True => true,
        Constraint::And(c1, c2) => wf_go(delta, xi, gamma, c1) && wf_go(delta, xi, gamma, c2),
        Constraint::Eq(a, b, _) => wf_over(delta, xi, a) && wf_over(delta, xi, b),
        Constraint::Freeze(x, a, _) | Constraint::Inst(x, a, _) => gamma.contains(x) && wf_over(delta, xi, a),
        Constraint::Mono(a, _) => delta.contains(a) || xi.contains(a),
        Constraint::Forall(a, c, _) => {
            if !fresh(a, delta, xi) {
                return false;
            }
            delta.push(a.clone());
            let ok = wf_go(delta, xi, gamma, c);
            delta.pop();
            ok
        }
        Constraint::Exists(a, c) => {
            if !fresh(a, delta, xi) {
                return false;
            }
            xi.push(a.clone());
            let ok = wf_go(delta, xi, gamma, c);
            xi.pop();
            ok
        }
        Constraint::Def(x, a, c, _) => {
            if !wf_over(delta, xi, a) {
                return false;
            }
            gamma.push(x.clone());
            let ok = wf_go(delta, xi, gamma, c);
            gamma.pop();
            ok
        }
        Constraint::LetPoly(x, a, c1, c2) | Constraint::LetMono(x, a, c1, c2) => {
            if !fresh(a, delta, xi) {
                return false;
            }
            xi.push(a.clone());
            let ok = wf_go(delta, xi, gamma, c1);
            xi.pop();
            if !ok {
                return false;
            }
            gamma.push(x.clone());
            let ok = wf_go(delta, xi, gamma, c2);
            gamma.pop();
            ok
        }
    }
}

/// Fully parenthesised textual form.
pub fn dump_constraint(c: &Constraint) -> String {
    let mut names = Names::new();
    names.reserve_free(c.ftv_ordered().iter().map(|a| Type::Var(a.clone())).collect::<Vec<_>>().iter());
    let mut out = String::new();
    dump(&mut names, c, &mut out);
    out
}

fn dump(names: &mut Names, c: &Constraint, out: &mut String) {
    match c {
        Constraint::True => out.push_str("true"),
        Constraint::And(c1, c2) => {
            out.push('(');
            dump(names, c1, out);
            out.push_str(" /\\ ");
            dump(names, c2, out);
            out.push(')');
        }
        Constraint::Eq(a, b, _) => {
            let (a, b) = (names.type_to_string(a), names.type_to_string(b));
            out.push_str(&format!("({a} == {b})"));
        }
        Constraint::Freeze(x, a, _) => {
            let a = names.type_to_string(a);
            out.push_str(&format!("~({x} : {a})"));
        }
        Constraint::Inst(x, a, _) => {
            let a = names.type_to_string(a);
            out.push_str(&format!("({x} <= {a})"));
        }
        Constraint::Mono(a, _) => {
            let a = names.type_to_string(&Type::Var(a.clone()));
            out.push_str(&format!("mono({a})"));
        }
        Constraint::Forall(a, body, _) | Constraint::Exists(a, body) => {
            let kw = if matches!(c, Constraint::Forall(..)) { "forall" } else { "exists" };
            let n = names.name_binder(a);
            out.push_str(&format!("({kw} {n}. "));
            dump(names, body, out);
            out.push(')');
        }
        Constraint::Def(x, a, body, _) => {
            let a = names.type_to_string(a);
            out.push_str(&format!("(def ({x} : {a}) in "));
            dump(names, body, out);
            out.push(')');
        }
        Constraint::LetPoly(x, a, c1, c2) | Constraint::LetMono(x, a, c1, c2) => {
            let kw = if matches!(c, Constraint::LetPoly(..)) { "let*" } else { "let@" };
            let n = names.name_binder(a);
            out.push_str(&format!("({kw} {x} = ^{n}. "));
            dump(names, c1, out);
            out.push_str(" in ");
            dump(names, c2, out);
            out.push(')');
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&dump_constraint(self))
    }
}
