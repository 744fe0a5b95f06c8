//! Seeded random generation of types and terms, and term shrinking.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{split, NameSupply, Term, TermKind, TermVar, TyVar, Type};

pub type GenRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bounds for random types.
#[derive(Clone, Copy, Debug)]
pub struct TypeShape {
    pub max_depth: usize,
    pub max_quantifiers: usize,
}

/// A random type over the free variables `vars`. Quantified variables are
/// drawn from `supply`.
pub fn random_type(rng: &mut GenRng, shape: TypeShape, vars: &[TyVar], supply: &mut NameSupply) -> Type {
    let mut budget = shape.max_quantifiers;
    let mut scope = vars.to_vec();
    type_go(rng, shape.max_depth, &mut budget, &mut scope, supply)
}

fn type_go(rng: &mut GenRng, depth: usize, budget: &mut usize, scope: &mut Vec<TyVar>, supply: &mut NameSupply) -> Type {
    if depth == 0 || rng.gen_bool(0.3) {
        if !scope.is_empty() && rng.gen_bool(0.6) {
            return Type::var(scope.choose(rng).unwrap());
        }
        return match rng.gen_range(0..3) {
            0 => Type::int(),
            1 => Type::bool(),
            _ => Type::unit(),
        };
    }
    let roll = rng.gen_range(0..100);
    if roll < 20 && *budget > 0 {
        *budget -= 1;
        let a = supply.fresh(["a", "b", "c"][rng.gen_range(0..3)]);
        scope.push(a.clone());
        let body = type_go(rng, depth - 1, budget, scope, supply);
        scope.pop();
        return Type::Forall(a, Box::new(body));
    }
    match roll % 4 {
        0 | 1 => {
            let a = type_go(rng, depth - 1, budget, scope, supply);
            let b = type_go(rng, depth - 1, budget, scope, supply);
            Type::arrow(a, b)
        }
        2 => {
            let a = type_go(rng, depth - 1, budget, scope, supply);
            let b = type_go(rng, depth - 1, budget, scope, supply);
            Type::product(a, b)
        }
        _ => Type::list(type_go(rng, depth - 1, budget, scope, supply)),
    }
}

/// Bounds for random terms.
#[derive(Clone, Debug)]
pub struct TermShape {
    pub max_size: usize,
    /// Names available as free variables, usually the prelude.
    pub globals: Vec<TermVar>,
}

/// A random well-scoped term of at most `shape.max_size` nodes. Integer
/// literals may occur free; annotations only mention variables they bind or
/// that an enclosing annotated let brings into scope.
pub fn random_term(rng: &mut GenRng, shape: &TermShape, supply: &mut NameSupply) -> Term {
    let mut g = TermGen { rng, globals: &shape.globals, supply, locals: Vec::new(), tyvars: Vec::new(), counter: 0 };
    let size = g.rng.gen_range(1..=shape.max_size.max(1));
    g.term(size)
}

struct TermGen<'a> {
    rng: &'a mut GenRng,
    globals: &'a [TermVar],
    supply: &'a mut NameSupply,
    locals: Vec<TermVar>,
    tyvars: Vec<TyVar>,
    counter: usize,
}

const ANNOTATION: TypeShape = TypeShape { max_depth: 2, max_quantifiers: 1 };

impl TermGen<'_> {
    fn binder(&mut self) -> TermVar {
        self.counter += 1;
        TermVar::new(&format!("x{}", self.counter))
    }

    fn name(&mut self) -> TermVar {
        if !self.locals.is_empty() && (self.globals.is_empty() || self.rng.gen_bool(0.55)) {
            return self.locals.choose(self.rng).unwrap().clone();
        }
        if self.globals.is_empty() || self.rng.gen_bool(0.1) {
            return TermVar::new(&self.rng.gen_range(0..10).to_string());
        }
        self.globals.choose(self.rng).unwrap().clone()
    }

    fn leaf(&mut self) -> Term {
        let x = self.name();
        if !crate::prelude::is_literal(&x) && self.rng.gen_bool(0.2) {
            Term::new(TermKind::FrozenVar(x))
        } else {
            Term::new(TermKind::Var(x))
        }
    }

    fn annotation(&mut self) -> Type {
        let scope = self.tyvars.clone();
        random_type(self.rng, ANNOTATION, &scope, self.supply)
    }

    fn term(&mut self, size: usize) -> Term {
        if size <= 1 {
            return self.leaf();
        }
        if size == 2 {
            return self.lam(2);
        }
        match self.rng.gen_range(0..100) {
            0..=39 => self.app(size),
            40..=59 => self.lam(size),
            60..=84 => self.let_plain(size),
            _ => self.let_annotated(size),
        }
    }

    fn app(&mut self, size: usize) -> Term {
        let left = self.rng.gen_range(1..=size - 2);
        let f = if self.rng.gen_bool(0.5) { self.leaf() } else { self.term(left) };
        let rest = size - 1 - f.size();
        let a = self.term(rest.max(1));
        Term::app(f, a)
    }

    fn lam(&mut self, size: usize) -> Term {
        let x = self.binder();
        let annotate = self.rng.gen_bool(0.25);
        let ann = annotate.then(|| self.annotation());
        self.locals.push(x.clone());
        let body = self.term(size - 1);
        self.locals.pop();
        match ann {
            Some(t) => Term::new(TermKind::LamAnn(x, t, Box::new(body))),
            None => Term::new(TermKind::Lam(x, Box::new(body))),
        }
    }

    fn let_plain(&mut self, size: usize) -> Term {
        let x = self.binder();
        let left = self.rng.gen_range(1..=size - 2);
        let bound = self.term(left);
        self.locals.push(x.clone());
        let body = self.term((size - 1 - bound.size()).max(1));
        self.locals.pop();
        Term::new(TermKind::Let(x, Box::new(bound), Box::new(body)))
    }

    fn let_annotated(&mut self, size: usize) -> Term {
        let x = self.binder();
        let ann = self.annotation();
        let left = self.rng.gen_range(2..=size - 1).min(size - 2).max(1);
        // Bind the prefix only for bound terms that will be guarded values.
        let as_value = left >= 2 && self.rng.gen_bool(0.7);
        let bound = if as_value {
            let depth = self.tyvars.len();
            self.tyvars.extend(ann.prenex().0);
            let m = self.lam(left);
            self.tyvars.truncate(depth);
            m
        } else {
            self.term(left)
        };
        self.locals.push(x.clone());
        let body = self.term((size - 1 - bound.size()).max(1));
        self.locals.pop();
        Term::new(TermKind::LetAnn(x, ann, Box::new(bound), Box::new(body)))
    }
}

/// Smaller variants of `m`: its immediate subterms (when closed enough to
/// stand alone), and `m` with one child shrunk or an annotation dropped.
pub fn shrink_term(m: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    let bound_free = |n: &Term, x: &TermVar| !n.free_term_vars().contains(x);
    match &m.kind {
        TermKind::Var(_) | TermKind::FrozenVar(_) => {}
        TermKind::App(f, a) => {
            out.push((**f).clone());
            out.push((**a).clone());
            out.extend(shrink_term(f).into_iter().map(|f2| Term::app(f2, (**a).clone())));
            out.extend(shrink_term(a).into_iter().map(|a2| Term::app((**f).clone(), a2)));
        }
        TermKind::Lam(x, body) => {
            if bound_free(body, x) {
                out.push((**body).clone());
            }
            out.extend(shrink_term(body).into_iter().map(|b| Term::new(TermKind::Lam(x.clone(), Box::new(b)))));
        }
        TermKind::LamAnn(x, t, body) => {
            out.push(Term::new(TermKind::Lam(x.clone(), body.clone())));
            out.extend(
                shrink_term(body).into_iter().map(|b| Term::new(TermKind::LamAnn(x.clone(), t.clone(), Box::new(b)))),
            );
        }
        TermKind::Let(x, bound, body) => {
            out.push((**bound).clone());
            if bound_free(body, x) {
                out.push((**body).clone());
            }
            out.extend(
                shrink_term(bound)
                    .into_iter()
                    .map(|b| Term::new(TermKind::Let(x.clone(), Box::new(b), body.clone()))),
            );
            out.extend(
                shrink_term(body)
                    .into_iter()
                    .map(|b| Term::new(TermKind::Let(x.clone(), bound.clone(), Box::new(b)))),
            );
        }
        TermKind::LetAnn(x, t, bound, body) => {
            if split(t, bound).0.is_empty() || bound.max_uid() == 0 {
                out.push(Term::new(TermKind::Let(x.clone(), bound.clone(), body.clone())));
            }
            if bound_free(body, x) {
                out.push((**body).clone());
            }
            out.extend(
                shrink_term(body)
                    .into_iter()
                    .map(|b| Term::new(TermKind::LetAnn(x.clone(), t.clone(), bound.clone(), Box::new(b)))),
            );
        }
    }
    out
}

/// Greedily shrinks `m` while `fails` keeps holding.
pub fn minimize(m: &Term, fails: impl Fn(&Term) -> bool) -> Term {
    let mut best = m.clone();
    'outer: loop {
        for candidate in shrink_term(&best) {
            if candidate.size() < best.size() && fails(&candidate) {
                best = candidate;
                continue 'outer;
            }
        }
        return best;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{wf_term, TermContext, TypeContext};

    fn globals() -> Vec<TermVar> {
        ["id", "choose", "single"].iter().map(|s| TermVar::new(s)).collect()
    }

    #[test]
    fn terms_respect_size_and_scope() {
        let mut rng = rng_from_seed(7);
        let shape = TermShape { max_size: 25, globals: globals() };
        for _ in 0..300 {
            let mut supply = NameSupply::above(100);
            let m = random_term(&mut rng, &shape, &mut supply);
            assert!(m.size() <= 25, "{}", m.size());
            let mut gamma: TermContext = globals().into_iter().map(|x| (x, Type::int())).collect();
            gamma = crate::prelude::bind_literals(&m, &gamma);
            assert!(wf_term(&TypeContext::new(), &gamma, &m), "{}", crate::surface::print_term(&m));
        }
    }

    #[test]
    fn seeds_are_deterministic() {
        let shape = TermShape { max_size: 20, globals: globals() };
        let a = random_term(&mut rng_from_seed(3), &shape, &mut NameSupply::above(10));
        let b = random_term(&mut rng_from_seed(3), &shape, &mut NameSupply::above(10));
        assert_eq!(a, b);
    }

    #[test]
    fn types_respect_shape() {
        let mut rng = rng_from_seed(11);
        let shape = TypeShape { max_depth: 4, max_quantifiers: 2 };
        for _ in 0..300 {
            let t = random_type(&mut rng, shape, &[], &mut NameSupply::above(10));
            assert!(t.depth() <= 5);
            assert!(t.count_quantifiers() <= 2);
            assert!(t.ftv().is_empty());
        }
    }

    #[test]
    fn shrinking_reaches_a_minimum() {
        let m = crate::surface::parse_term("let x = id id in (fun y -> x) 3").unwrap();
        let small = minimize(&m, |t| t.free_term_vars().contains(&TermVar::new("id")));
        assert_eq!(small, Term::var("id"));
    }
}
