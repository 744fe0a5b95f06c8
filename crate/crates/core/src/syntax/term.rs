//! Terms, value classification, `split`, and term well-formedness.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::context::{RestrictionContext, TermContext, TypeContext};
use super::types::{alpha_equal_in, wf_type, Restriction, TyVar, Type};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermVar(pub Arc<str>);

impl TermVar {
    pub fn new(s: &str) -> TermVar {
        TermVar(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TermVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A region of source text. Offsets are in bytes; line and column are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl Default for SourceSpan {
    fn default() -> SourceSpan {
        SourceSpan { start: 0, end: 0, line: 1, column: 1 }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Source position metadata. Never affects equality or hashing.
#[derive(Clone, Copy, Debug, Default)]
pub struct Origin(pub Option<SourceSpan>);

impl PartialEq for Origin {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl Eq for Origin {}

impl Hash for Origin {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TermKind {
    FrozenVar(TermVar),
    Var(TermVar),
    App(Box<Term>, Box<Term>),
    Lam(TermVar, Box<Term>),
    LamAnn(TermVar, Type, Box<Term>),
    Let(TermVar, Box<Term>, Box<Term>),
    LetAnn(TermVar, Type, Box<Term>, Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub kind: TermKind,
    pub origin: Origin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueClass {
    GuardedValue,
    ValueOnly,
    NonValue,
}

impl Term {
    pub fn new(kind: TermKind) -> Term {
        Term { kind, origin: Origin(None) }
    }

    pub fn at(mut self, span: SourceSpan) -> Term {
        self.origin = Origin(Some(span));
        self
    }

    pub fn span(&self) -> Option<SourceSpan> {
        self.origin.0
    }

    pub fn var(x: &str) -> Term {
        Term::new(TermKind::Var(TermVar::new(x)))
    }

    pub fn frozen(x: &str) -> Term {
        Term::new(TermKind::FrozenVar(TermVar::new(x)))
    }

    pub fn app(m: Term, n: Term) -> Term {
        Term::new(TermKind::App(Box::new(m), Box::new(n)))
    }

    pub fn lam(x: &str, m: Term) -> Term {
        Term::new(TermKind::Lam(TermVar::new(x), Box::new(m)))
    }

    pub fn lam_ann(x: &str, a: Type, m: Term) -> Term {
        Term::new(TermKind::LamAnn(TermVar::new(x), a, Box::new(m)))
    }

    pub fn let_(x: &str, m: Term, n: Term) -> Term {
        Term::new(TermKind::Let(TermVar::new(x), Box::new(m), Box::new(n)))
    }

    pub fn let_ann(x: &str, a: Type, m: Term, n: Term) -> Term {
        Term::new(TermKind::LetAnn(TermVar::new(x), a, Box::new(m), Box::new(n)))
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        match &self.kind {
            TermKind::FrozenVar(_) | TermKind::Var(_) => 1,
            TermKind::App(m, n) => 1 + m.size() + n.size(),
            TermKind::Lam(_, m) | TermKind::LamAnn(_, _, m) => 1 + m.size(),
            TermKind::Let(_, m, n) | TermKind::LetAnn(_, _, m, n) => 1 + m.size() + n.size(),
        }
    }

    /// Largest type-variable uid mentioned in an annotation.
    pub fn max_uid(&self) -> u32 {
        match &self.kind {
            TermKind::FrozenVar(_) | TermKind::Var(_) => 0,
            TermKind::App(m, n) | TermKind::Let(_, m, n) => m.max_uid().max(n.max_uid()),
            TermKind::Lam(_, m) => m.max_uid(),
            TermKind::LamAnn(_, a, m) => a.max_uid().max(m.max_uid()),
            TermKind::LetAnn(_, a, m, n) => a.max_uid().max(m.max_uid()).max(n.max_uid()),
        }
    }

    /// Every term variable name appearing in the term, bound or free.
    pub fn term_names(&self) -> BTreeSet<TermVar> {
        fn go(m: &Term, out: &mut BTreeSet<TermVar>) {
            match &m.kind {
                TermKind::FrozenVar(x) | TermKind::Var(x) => {
                    out.insert(x.clone());
                }
                TermKind::App(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                TermKind::Lam(x, b) | TermKind::LamAnn(x, _, b) => {
                    out.insert(x.clone());
                    go(b, out);
                }
                TermKind::Let(x, a, b) | TermKind::LetAnn(x, _, a, b) => {
                    out.insert(x.clone());
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    /// Free term variables, in first-occurrence order.
    pub fn free_term_vars(&self) -> Vec<TermVar> {
        fn go(m: &Term, bound: &mut Vec<TermVar>, out: &mut Vec<TermVar>) {
            match &m.kind {
                TermKind::FrozenVar(x) | TermKind::Var(x) => {
                    if !bound.contains(x) && !out.contains(x) {
                        out.push(x.clone());
                    }
                }
                TermKind::App(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                TermKind::Lam(x, b) | TermKind::LamAnn(x, _, b) => {
                    bound.push(x.clone());
                    go(b, bound, out);
                    bound.pop();
                }
                TermKind::Let(x, a, b) | TermKind::LetAnn(x, _, a, b) => {
                    go(a, bound, out);
                    bound.push(x.clone());
                    go(b, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

/// Membership in the value grammars: `GuardedValue` ⊆ values, `ValueOnly`
/// are values that are not guarded (they end in a frozen variable).
pub fn classify_value(m: &Term) -> ValueClass {
    match &m.kind {
        TermKind::FrozenVar(_) => ValueClass::ValueOnly,
        TermKind::Var(_) | TermKind::Lam(..) | TermKind::LamAnn(..) => ValueClass::GuardedValue,
        TermKind::App(..) => ValueClass::NonValue,
        TermKind::Let(_, v, w) | TermKind::LetAnn(_, _, v, w) => {
            if classify_value(v) == ValueClass::NonValue {
                ValueClass::NonValue
            } else {
                classify_value(w)
            }
        }
    }
}

pub fn is_guarded_value(m: &Term) -> bool {
    classify_value(m) == ValueClass::GuardedValue
}

/// The quantifier prefix that scopes over `m` when `m` is a guarded value.
pub fn split(a: &Type, m: &Term) -> (Vec<TyVar>, Type) {
    if is_guarded_value(m) {
        let (vars, body) = a.prenex();
        (vars, body.clone())
    } else {
        (Vec::new(), a.clone())
    }
}

/// `Δ;Γ ⊢ wf M`. Term bindings are tracked by name only.
pub fn wf_term(delta: &TypeContext, gamma: &TermContext, m: &Term) -> bool {
    let names: Vec<TermVar> = gamma.iter().map(|(x, _)| x.clone()).collect();
    wf_names(delta, &mut names.clone(), m)
}

fn wf_annotation(delta: &TypeContext, a: &Type) -> bool {
    wf_type(delta, &RestrictionContext::new(), Restriction::Poly, a)
}

fn wf_names(delta: &TypeContext, gamma: &mut Vec<TermVar>, m: &Term) -> bool {
    match &m.kind {
        TermKind::FrozenVar(x) | TermKind::Var(x) => gamma.contains(x),
        TermKind::App(a, b) => wf_names(delta, gamma, a) && wf_names(delta, gamma, b),
        TermKind::Lam(x, body) => {
            gamma.push(x.clone());
            let ok = wf_names(delta, gamma, body);
            gamma.pop();
            ok
        }
        TermKind::LamAnn(x, a, body) => {
            if !wf_annotation(delta, a) {
                return false;
            }
            gamma.push(x.clone());
            let ok = wf_names(delta, gamma, body);
            gamma.pop();
            ok
        }
        TermKind::Let(x, bound, body) => {
            if !wf_names(delta, gamma, bound) {
                return false;
            }
            gamma.push(x.clone());
            let ok = wf_names(delta, gamma, body);
            gamma.pop();
            ok
        }
        TermKind::LetAnn(x, a, bound, body) => {
            if !wf_annotation(delta, a) {
                return false;
            }
            let (prefix, _) = split(a, bound);
            if prefix.iter().any(|p| delta.contains(p)) {
                return false;
            }
            if !wf_names(&delta.extended(&prefix), gamma, bound) {
                return false;
            }
            gamma.push(x.clone());
            let ok = wf_names(delta, gamma, body);
            gamma.pop();
            ok
        }
    }
}

/// Structural equality of terms, with annotations compared up to renaming of
/// bound type variables (including the prefix scoping of annotated lets).
pub fn terms_alpha_equal(a: &Term, b: &Term) -> bool {
    fn go(env: &mut Vec<(TyVar, TyVar)>, a: &Term, b: &Term) -> bool {
        match (&a.kind, &b.kind) {
            (TermKind::FrozenVar(x), TermKind::FrozenVar(y)) | (TermKind::Var(x), TermKind::Var(y)) => x == y,
            (TermKind::App(m1, n1), TermKind::App(m2, n2)) => go(env, m1, m2) && go(env, n1, n2),
            (TermKind::Lam(x, m1), TermKind::Lam(y, m2)) => x == y && go(env, m1, m2),
            (TermKind::LamAnn(x, t1, m1), TermKind::LamAnn(y, t2, m2)) => {
                x == y && alpha_equal_in(env, t1, t2) && go(env, m1, m2)
            }
            (TermKind::Let(x, m1, n1), TermKind::Let(y, m2, n2)) => {
                x == y && go(env, m1, m2) && go(env, n1, n2)
            }
            (TermKind::LetAnn(x, t1, m1, n1), TermKind::LetAnn(y, t2, m2, n2)) => {
                if x != y || !alpha_equal_in(env, t1, t2) || !go(env, n1, n2) {
                    return false;
                }
                let (p1, _) = split(t1, m1);
                let (p2, _) = split(t2, m2);
                if p1.len() != p2.len() {
                    return false;
                }
                let depth = env.len();
                env.extend(p1.into_iter().zip(p2));
                let ok = go(env, m1, m2);
                env.truncate(depth);
                ok
            }
            _ => false,
        }
    }
    go(&mut Vec::new(), a, b)
}
