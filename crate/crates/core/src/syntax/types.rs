//! Types, type variables and the fresh-name supply.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::context::{RestrictionContext, TypeContext};

/// A type variable. Identity is the `uid`; `name` is only a printing hint.
#[derive(Clone, Debug)]
pub struct TyVar {
    pub name: Arc<str>,
    pub uid: u32,
}

impl TyVar {
    pub fn new(name: &str, uid: u32) -> TyVar {
        TyVar { name: Arc::from(name), uid }
    }

    fn with_uid(&self, uid: u32) -> TyVar {
        TyVar { name: self.name.clone(), uid }
    }
}

impl PartialEq for TyVar {
    fn eq(&self, other: &Self) -> bool {
        self.uid == other.uid
    }
}
impl Eq for TyVar {}

impl PartialOrd for TyVar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for TyVar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.uid.cmp(&other.uid)
    }
}

impl Hash for TyVar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.uid.hash(state);
    }
}

/// Hands out type variables with unique uids. One supply per inference run.
#[derive(Clone, Debug, Default)]
pub struct NameSupply {
    next: u32,
}

impl NameSupply {
    pub fn new() -> NameSupply {
        NameSupply { next: 1 }
    }

    /// A supply whose uids are all larger than `uid`.
    pub fn above(uid: u32) -> NameSupply {
        NameSupply { next: uid + 1 }
    }

    pub fn fresh(&mut self, hint: &str) -> TyVar {
        let uid = self.next;
        self.next += 1;
        let base = hint.trim_end_matches(|c: char| c.is_ascii_digit());
        let base = if base.is_empty() { "t" } else { base };
        TyVar::new(&format!("{base}{uid}"), uid)
    }

    /// A variable that keeps `text` verbatim (used for source-level names).
    pub fn named(&mut self, text: &str) -> TyVar {
        let uid = self.next;
        self.next += 1;
        TyVar::new(text, uid)
    }

    /// Make sure future uids are above `uid`.
    pub fn bump_past(&mut self, uid: u32) {
        if self.next <= uid {
            self.next = uid + 1;
        }
    }

    pub fn peek(&self) -> u32 {
        self.next
    }
}

/// Restrictions on flexible variables. `Mono < Poly`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Restriction {
    Mono,
    Poly,
}

impl Restriction {
    pub fn symbol(self) -> &'static str {
        match self {
            Restriction::Mono => "•",
            Restriction::Poly => "⋆",
        }
    }

    pub fn word(self) -> &'static str {
        match self {
            Restriction::Mono => "mono",
            Restriction::Poly => "poly",
        }
    }
}

/// The constructor registry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ctor {
    Arrow,
    Product,
    Int,
    Unit,
    Bool,
    List,
}

impl Ctor {
    pub const ALL: [Ctor; 6] = [
        Ctor::Arrow,
        Ctor::Product,
        Ctor::Int,
        Ctor::Unit,
        Ctor::Bool,
        Ctor::List,
    ];

    pub fn arity(self) -> usize {
        match self {
            Ctor::Arrow | Ctor::Product => 2,
            Ctor::Int | Ctor::Unit | Ctor::Bool => 0,
            Ctor::List => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Ctor::Arrow => "->",
            Ctor::Product => "*",
            Ctor::Int => "Int",
            Ctor::Unit => "Unit",
            Ctor::Bool => "Bool",
            Ctor::List => "List",
        }
    }

    /// Constructors that can be written as a capitalised name.
    pub fn from_name(name: &str) -> Option<Ctor> {
        match name {
            "Int" => Some(Ctor::Int),
            "Unit" => Some(Ctor::Unit),
            "Bool" => Some(Ctor::Bool),
            "List" => Some(Ctor::List),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Var(TyVar),
    Ctor(Ctor, Vec<Type>),
    Forall(TyVar, Box<Type>),
}

impl Type {
    pub fn var(a: &TyVar) -> Type {
        Type::Var(a.clone())
    }

    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Ctor(Ctor::Arrow, vec![a, b])
    }

    pub fn product(a: Type, b: Type) -> Type {
        Type::Ctor(Ctor::Product, vec![a, b])
    }

    pub fn list(a: Type) -> Type {
        Type::Ctor(Ctor::List, vec![a])
    }

    pub fn int() -> Type {
        Type::Ctor(Ctor::Int, vec![])
    }

    pub fn unit() -> Type {
        Type::Ctor(Ctor::Unit, vec![])
    }

    pub fn bool() -> Type {
        Type::Ctor(Ctor::Bool, vec![])
    }

    /// `∀a1 … an. body`
    pub fn forall(vars: &[TyVar], body: Type) -> Type {
        vars.iter()
            .rev()
            .fold(body, |acc, a| Type::Forall(a.clone(), Box::new(acc)))
    }

    pub fn is_monotype(&self) -> bool {
        match self {
            Type::Var(_) => true,
            Type::Ctor(_, args) => args.iter().all(Type::is_monotype),
            Type::Forall(..) => false,
        }
    }

    pub fn is_guarded(&self) -> bool {
        !matches!(self, Type::Forall(..))
    }

    /// The maximal quantifier prefix and the guarded body underneath it.
    pub fn prenex(&self) -> (Vec<TyVar>, &Type) {
        let mut vars = Vec::new();
        let mut t = self;
        while let Type::Forall(a, body) = t {
            vars.push(a.clone());
            t = body;
        }
        (vars, t)
    }

    /// Free variables in order of first appearance (pre-order, left to right).
    pub fn ftv_ordered(&self) -> Vec<TyVar> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_ftv(&mut bound, &mut seen, &mut out);
        out
    }

    fn collect_ftv(&self, bound: &mut Vec<TyVar>, seen: &mut BTreeSet<TyVar>, out: &mut Vec<TyVar>) {
        match self {
            Type::Var(a) => {
                if !bound.contains(a) && seen.insert(a.clone()) {
                    out.push(a.clone());
                }
            }
            Type::Ctor(_, args) => {
                for t in args {
                    t.collect_ftv(bound, seen, out);
                }
            }
            Type::Forall(a, body) => {
                bound.push(a.clone());
                body.collect_ftv(bound, seen, out);
                bound.pop();
            }
        }
    }

    pub fn ftv(&self) -> BTreeSet<TyVar> {
        self.ftv_ordered().into_iter().collect()
    }

    pub fn occurs_free(&self, a: &TyVar) -> bool {
        match self {
            Type::Var(b) => a == b,
            Type::Ctor(_, args) => args.iter().any(|t| t.occurs_free(a)),
            Type::Forall(b, body) => a != b && body.occurs_free(a),
        }
    }

    /// Largest uid mentioned anywhere, bound or free.
    pub fn max_uid(&self) -> u32 {
        match self {
            Type::Var(a) => a.uid,
            Type::Ctor(_, args) => args.iter().map(Type::max_uid).max().unwrap_or(0),
            Type::Forall(a, body) => a.uid.max(body.max_uid()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Type::Var(_) => 1,
            Type::Ctor(_, args) => 1 + args.iter().map(Type::depth).max().unwrap_or(0),
            Type::Forall(_, body) => 1 + body.depth(),
        }
    }

    pub fn count_quantifiers(&self) -> usize {
        match self {
            Type::Var(_) => 0,
            Type::Ctor(_, args) => args.iter().map(Type::count_quantifiers).sum(),
            Type::Forall(_, body) => 1 + body.count_quantifiers(),
        }
    }

    /// Replace a single variable.
    pub fn subst1(&self, a: &TyVar, by: &Type) -> Type {
        let mut map = BTreeMap::new();
        map.insert(a.clone(), by.clone());
        apply_type_subst(&map, self)
    }
}

/// Equality up to renaming of bound variables. Quantifier order matters.
pub fn alpha_equal(a: &Type, b: &Type) -> bool {
    alpha_equal_in(&mut Vec::new(), a, b)
}

/// Alpha-equality under an environment of already paired binders.
pub fn alpha_equal_in(env: &mut Vec<(TyVar, TyVar)>, a: &Type, b: &Type) -> bool {
    match (a, b) {
        (Type::Var(x), Type::Var(y)) => {
            for (l, r) in env.iter().rev() {
                if l == x || r == y {
                    return l == x && r == y;
                }
            }
            x == y
        }
        (Type::Ctor(d1, args1), Type::Ctor(d2, args2)) => {
            d1 == d2
                && args1.len() == args2.len()
                && args1.iter().zip(args2).all(|(s, t)| alpha_equal_in(env, s, t))
        }
        (Type::Forall(x, s), Type::Forall(y, t)) => {
            env.push((x.clone(), y.clone()));
            let ok = alpha_equal_in(env, s, t);
            env.pop();
            ok
        }
        _ => false,
    }
}

/// Simultaneous, capture-avoiding substitution.
pub fn apply_type_subst(map: &BTreeMap<TyVar, Type>, t: &Type) -> Type {
    if map.is_empty() {
        return t.clone();
    }
    match t {
        Type::Var(a) => map.get(a).cloned().unwrap_or_else(|| t.clone()),
        Type::Ctor(d, args) => Type::Ctor(*d, args.iter().map(|s| apply_type_subst(map, s)).collect()),
        Type::Forall(a, body) => {
            let mut inner = map.clone();
            inner.remove(a);
            inner.retain(|k, _| body.occurs_free(k));
            if inner.is_empty() {
                return t.clone();
            }
            let captures = inner.values().any(|r| r.occurs_free(a));
            if captures {
                let top = inner
                    .iter()
                    .map(|(k, v)| k.uid.max(v.max_uid()))
                    .max()
                    .unwrap_or(0)
                    .max(body.max_uid());
                let fresh = a.with_uid(top + 1);
                inner.insert(a.clone(), Type::Var(fresh.clone()));
                Type::Forall(fresh, Box::new(apply_type_subst(&inner, body)))
            } else {
                Type::Forall(a.clone(), Box::new(apply_type_subst(&inner, body)))
            }
        }
    }
}

/// `Δ;Θ ⊢_R A`. Rigid variables are monomorphic; flexible ones carry their
/// restriction; a quantifier needs `Poly`.
pub fn wf_type(delta: &TypeContext, theta_env: &RestrictionContext, r: Restriction, t: &Type) -> bool {
    fn go(delta: &TypeContext, bound: &mut Vec<TyVar>, theta: &RestrictionContext, r: Restriction, t: &Type) -> bool {
        match t {
            Type::Var(a) => {
                if bound.contains(a) || delta.contains(a) {
                    true
                } else {
                    theta.get(a).is_some_and(|ra| ra <= r)
                }
            }
            Type::Ctor(d, args) => {
                args.len() == d.arity() && args.iter().all(|s| go(delta, bound, theta, r, s))
            }
            Type::Forall(a, body) => {
                if r != Restriction::Poly || delta.contains(a) || theta.contains(a) {
                    return false;
                }
                bound.push(a.clone());
                let ok = go(delta, bound, theta, r, body);
                bound.pop();
                ok
            }
        }
    }
    go(delta, &mut Vec::new(), theta_env, r, t)
}

/// Rename every bound variable to a fresh one, keeping the text.
pub fn freshen_binders(t: &Type, supply: &mut NameSupply) -> Type {
    fn go(t: &Type, env: &mut HashMap<TyVar, TyVar>, supply: &mut NameSupply) -> Type {
        match t {
            Type::Var(a) => Type::Var(env.get(a).cloned().unwrap_or_else(|| a.clone())),
            Type::Ctor(d, args) => Type::Ctor(*d, args.iter().map(|s| go(s, env, supply)).collect()),
            Type::Forall(a, body) => {
                let b = supply.named(&a.name);
                let saved = env.insert(a.clone(), b.clone());
                let out = Type::Forall(b, Box::new(go(body, env, supply)));
                match saved {
                    Some(prev) => env.insert(a.clone(), prev),
                    None => env.remove(a),
                };
                out
            }
        }
    }
    go(t, &mut HashMap::new(), supply)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str, uid: u32) -> TyVar {
        TyVar::new(n, uid)
    }

    // Independent free-variable oracle: collect all variable occurrences with
    // their enclosing binder sets, then keep unbound ones.
    fn naive_ftv(t: &Type) -> Vec<TyVar> {
        fn walk(t: &Type, binders: &[TyVar], acc: &mut Vec<(TyVar, bool)>) {
            match t {
                Type::Var(a) => acc.push((a.clone(), binders.contains(a))),
                Type::Ctor(_, args) => args.iter().for_each(|s| walk(s, binders, acc)),
                Type::Forall(a, body) => {
                    let mut b = binders.to_vec();
                    b.push(a.clone());
                    walk(body, &b, acc)
                }
            }
        }
        let mut acc = Vec::new();
        walk(t, &[], &mut acc);
        let mut out: Vec<TyVar> = Vec::new();
        for (a, is_bound) in acc {
            if !is_bound && !out.contains(&a) {
                out.push(a);
            }
        }
        out
    }

    #[test]
    fn ftv_examples() {
        let (a, b, c, d) = (v("a", 1), v("b", 2), v("c", 3), v("d", 4));
        let t = Type::forall(std::slice::from_ref(&a), Type::arrow(Type::var(&a), Type::var(&b)));
        assert_eq!(t.ftv_ordered(), vec![b.clone()]);
        let t = Type::arrow(Type::var(&b), Type::arrow(Type::var(&a), Type::var(&b)));
        assert_eq!(t.ftv_ordered(), vec![b.clone(), a.clone()]);
        let t = Type::arrow(
            Type::var(&c),
            Type::arrow(
                Type::forall(std::slice::from_ref(&a), Type::arrow(Type::var(&a), Type::var(&c))),
                Type::var(&d),
            ),
        );
        assert_eq!(t.ftv_ordered(), naive_ftv(&t));
        assert_eq!(t.ftv_ordered(), vec![c, d]);
    }

    #[test]
    fn alpha_examples() {
        let (a, b, c) = (v("a", 1), v("b", 2), v("c", 3));
        let id_a = Type::forall(std::slice::from_ref(&a), Type::arrow(Type::var(&a), Type::var(&a)));
        let id_b = Type::forall(std::slice::from_ref(&b), Type::arrow(Type::var(&b), Type::var(&b)));
        assert!(alpha_equal(&id_a, &id_b));
        let ab = Type::forall(&[a.clone(), b.clone()], Type::arrow(Type::var(&a), Type::var(&b)));
        let ba = Type::forall(&[b.clone(), a.clone()], Type::arrow(Type::var(&a), Type::var(&b)));
        assert!(!alpha_equal(&ab, &ba));
        let abc = Type::forall(&[a.clone(), b.clone(), c], Type::arrow(Type::var(&a), Type::var(&b)));
        assert!(!alpha_equal(&ab, &abc));
    }

    #[test]
    fn alpha_respects_shadowing() {
        let (a, b) = (v("a", 1), v("b", 2));
        // ∀a.∀b.a  vs  ∀b.∀b.b
        let l = Type::forall(&[a.clone(), b.clone()], Type::var(&a));
        let r = Type::forall(&[b.clone(), b.clone()], Type::var(&b));
        assert!(!alpha_equal(&l, &r));
        // a free vs bound a
        let l = Type::forall(std::slice::from_ref(&b), Type::var(&a));
        let r = Type::forall(std::slice::from_ref(&a), Type::var(&a));
        assert!(!alpha_equal(&l, &r));
    }

    #[test]
    fn subst_examples() {
        let (a, b) = (v("a", 1), v("b", 2));
        let mut m = BTreeMap::new();
        m.insert(a.clone(), Type::int());
        assert_eq!(
            apply_type_subst(&m, &Type::arrow(Type::var(&a), Type::var(&a))),
            Type::arrow(Type::int(), Type::int())
        );

        let mut m = BTreeMap::new();
        m.insert(a.clone(), Type::var(&b));
        let t = Type::forall(std::slice::from_ref(&b), Type::arrow(Type::var(&b), Type::var(&a)));
        let out = apply_type_subst(&m, &t);
        match &out {
            Type::Forall(b2, body) => {
                assert_ne!(b2, &b);
                assert_eq!(**body, Type::arrow(Type::var(b2), Type::var(&b)));
            }
            _ => panic!("expected a quantifier"),
        }

        let empty = BTreeMap::new();
        assert_eq!(apply_type_subst(&empty, &t), t);
    }

    #[test]
    fn wf_examples() {
        let (a, b) = (v("a", 1), v("b", 2));
        let delta = TypeContext::from_vars([a.clone()]);
        assert!(wf_type(&delta, &RestrictionContext::new(), Restriction::Mono, &Type::var(&a)));
        let mut theta = RestrictionContext::new();
        theta.insert(b.clone(), Restriction::Poly);
        assert!(!wf_type(&TypeContext::new(), &theta, Restriction::Mono, &Type::var(&b)));
        let c = v("c", 3);
        let poly = Type::forall(std::slice::from_ref(&c), Type::arrow(Type::var(&c), Type::var(&c)));
        assert!(wf_type(&TypeContext::new(), &RestrictionContext::new(), Restriction::Poly, &poly));
        assert!(!wf_type(&TypeContext::new(), &RestrictionContext::new(), Restriction::Mono, &poly));
        assert!(!wf_type(&TypeContext::new(), &RestrictionContext::new(), Restriction::Poly, &Type::Ctor(Ctor::List, vec![])));
    }

    #[test]
    fn supply_is_monotone() {
        let mut s = NameSupply::above(10);
        let x = s.fresh("a");
        let y = s.fresh("a7");
        assert_eq!(x.uid, 11);
        assert_eq!(&*y.name, "a12");
    }
}
