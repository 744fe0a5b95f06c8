use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::constraint::{wf_with_names, Constraint};
use crate::syntax::{
    apply_type_subst, wf_type, NameSupply, Origin, Restriction, RestrictionContext, TermVar, TyVar, Type,
    TypeContext,
};
use crate::unify::{compose, demote, unify, Subst};

use super::error::{TypeError, TypeErrorKind};
use super::frame::{delta_of, gamma_of, plug, xi_of, Frame};
use super::partition::partition;

/// `(F, Θ, θ, C)`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverState {
    pub stack: Vec<Frame>,
    pub theta_env: RestrictionContext,
    pub subst: Subst,
    pub current: Constraint,
}

impl SolverState {
    /// `(·, ·, ∅, C)`
    pub fn initial(c: Constraint) -> SolverState {
        SolverState { stack: Vec::new(), theta_env: RestrictionContext::new(), subst: Subst::new(), current: c }
    }

    /// Final states have the shape `(∀Δ :: ∃Ξ, Θ, θ, true)`.
    pub fn is_final(&self) -> bool {
        if self.current != Constraint::True {
            return false;
        }
        let foralls = self.stack.iter().take_while(|f| matches!(f, Frame::Forall(..))).count();
        self.stack[foralls..].iter().all(Frame::is_exists)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Eq,
    Freeze,
    Inst,
    Mono,
    ConjPush,
    ConjPop,
    ExistsPush,
    ExistsLower,
    ForallPush,
    ForallPop,
    DefPush,
    DefPop,
    LetPush,
    LetPolyPop,
    LetMonoPop,
}

impl Rule {
    pub const ALL: [Rule; 15] = [
        Rule::Eq,
        Rule::Freeze,
        Rule::Inst,
        Rule::Mono,
        Rule::ConjPush,
        Rule::ConjPop,
        Rule::ExistsPush,
        Rule::ExistsLower,
        Rule::ForallPush,
        Rule::ForallPop,
        Rule::DefPush,
        Rule::DefPop,
        Rule::LetPush,
        Rule::LetPolyPop,
        Rule::LetMonoPop,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Eq => "S-Eq",
            Rule::Freeze => "S-Freeze",
            Rule::Inst => "S-Inst",
            Rule::Mono => "S-Mono",
            Rule::ConjPush => "S-ConjPush",
            Rule::ConjPop => "S-ConjPop",
            Rule::ExistsPush => "S-ExistsPush",
            Rule::ExistsLower => "S-ExistsLower",
            Rule::ForallPush => "S-ForallPush",
            Rule::ForallPop => "S-ForallPop",
            Rule::DefPush => "S-DefPush",
            Rule::DefPop => "S-DefPop",
            Rule::LetPush => "S-LetPush",
            Rule::LetPolyPop => "S-LetPolyPop",
            Rule::LetMonoPop => "S-LetMonoPop",
        }
    }

    /// Whether this rule's left-hand side matches `s`, judged by shape alone.
    pub fn matches(self, s: &SolverState) -> bool {
        let c = &s.current;
        let done = *c == Constraint::True;
        let top = s.stack.last();
        let run = exists_run(&s.stack);
        let below_run = s.stack.len().checked_sub(run + 1).map(|i| &s.stack[i]);
        match self {
            Rule::Eq => matches!(c, Constraint::Eq(..)),
            Rule::Freeze => matches!(c, Constraint::Freeze(..)),
            Rule::Inst => matches!(c, Constraint::Inst(..)),
            Rule::Mono => matches!(c, Constraint::Mono(..)),
            Rule::ConjPush => matches!(c, Constraint::And(..)),
            Rule::ExistsPush => matches!(c, Constraint::Exists(..)),
            Rule::ForallPush => matches!(c, Constraint::Forall(..)),
            Rule::DefPush => matches!(c, Constraint::Def(..)),
            Rule::LetPush => matches!(c, Constraint::LetPoly(..) | Constraint::LetMono(..)),
            Rule::ConjPop => done && matches!(top, Some(Frame::Conj(_))),
            Rule::ForallPop => done && matches!(top, Some(Frame::Forall(..))),
            Rule::DefPop => done && matches!(top, Some(Frame::Def(..))),
            Rule::ExistsLower => {
                done && run > 0 && matches!(below_run, Some(f) if !matches!(f, Frame::Let { .. } | Frame::Exists(_)))
            }
            Rule::LetPolyPop => {
                done && matches!(below_run, Some(Frame::Let { restriction: Restriction::Poly, .. }))
            }
            Rule::LetMonoPop => {
                done && matches!(below_run, Some(Frame::Let { restriction: Restriction::Mono, .. }))
            }
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Every rule whose left-hand side matches `s`.
pub fn guards(s: &SolverState) -> Vec<Rule> {
    Rule::ALL.into_iter().filter(|r| r.matches(s)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Stepped(Rule, SolverState),
    /// The state was final; it is handed back unchanged.
    Final(SolverState),
    Stuck(TypeError),
}

/// Length of the maximal run of ∃ frames at the top of the stack.
fn exists_run(stack: &[Frame]) -> usize {
    stack.iter().rev().take_while(|f| f.is_exists()).count()
}

fn stuck(kind: TypeErrorKind, origin: Origin) -> StepOutcome {
    StepOutcome::Stuck(TypeError::new(kind, origin.0))
}

fn exists_many(vars: &[TyVar], c: Constraint) -> Constraint {
    vars.iter().rev().fold(c, |acc, a| Constraint::exists(a, acc))
}

fn demote_flexible(s: &SolverState, t: &Type) -> RestrictionContext {
    let delta = delta_of(&s.stack);
    let flex: BTreeSet<TyVar> = t.ftv().into_iter().filter(|v| !delta.contains(v)).collect();
    demote(Restriction::Mono, &s.theta_env, &flex)
}

/// A hook observing every call to `partition`: the variables, the stack split
/// below and above them, and the state's θ and Θ.
pub type PartitionObserver<'a> = dyn FnMut(&[TyVar], &[Frame], &[Frame], &Subst, &RestrictionContext) + 'a;

/// Performs one step of the machine.
pub fn step(s: SolverState, supply: &mut NameSupply) -> StepOutcome {
    step_observed(s, supply, &mut |_, _, _, _, _| {})
}

pub fn step_observed(mut s: SolverState, supply: &mut NameSupply, observe: &mut PartitionObserver<'_>) -> StepOutcome {
    if s.is_final() {
        return StepOutcome::Final(s);
    }
    let current = std::mem::replace(&mut s.current, Constraint::True);
    match current {
        Constraint::Eq(a, b, origin) => {
            let delta = delta_of(&s.stack);
            let (a, b) = (s.subst.apply(&a), s.subst.apply(&b));
            match unify(&delta, &s.theta_env, &a, &b, supply) {
                Ok((theta_env, sub)) => match compose(&sub, &s.subst) {
                    Ok(subst) => {
                        s.theta_env = theta_env;
                        s.subst = subst;
                        StepOutcome::Stepped(Rule::Eq, s)
                    }
                    Err(e) => stuck(TypeErrorKind::Unify(Box::new(e.into())), origin),
                },
                Err(e) => stuck(TypeErrorKind::Unify(Box::new(e)), origin),
            }
        }
        Constraint::Freeze(x, a, origin) => match gamma_of(&s.stack).get(&x) {
            Some(t) => {
                s.current = Constraint::Eq(t.clone(), a, origin);
                StepOutcome::Stepped(Rule::Freeze, s)
            }
            None => stuck(TypeErrorKind::UnboundVariable(x), origin),
        },
        Constraint::Inst(x, a, origin) => match gamma_of(&s.stack).get(&x) {
            Some(t) => {
                let (vars, h) = t.prenex();
                let fresh: Vec<TyVar> = vars.iter().map(|v| supply.fresh(&v.name)).collect();
                let map: BTreeMap<TyVar, Type> =
                    vars.iter().cloned().zip(fresh.iter().map(Type::var)).collect();
                let h = apply_type_subst(&map, h);
                s.current = exists_many(&fresh, Constraint::Eq(h, a, origin));
                StepOutcome::Stepped(Rule::Inst, s)
            }
            None => stuck(TypeErrorKind::UnboundVariable(x), origin),
        },
        Constraint::Mono(a, origin) => {
            let t = s.subst.image(&a);
            let theta_env = demote_flexible(&s, &t);
            if !wf_type(&delta_of(&s.stack), &theta_env, Restriction::Mono, &t) {
                return stuck(TypeErrorKind::MonoFailure(a, t), origin);
            }
            s.theta_env = theta_env;
            StepOutcome::Stepped(Rule::Mono, s)
        }
        Constraint::And(c1, c2) => {
            s.stack.push(Frame::Conj(*c2));
            s.current = *c1;
            StepOutcome::Stepped(Rule::ConjPush, s)
        }
        Constraint::Exists(a, c) => {
            s.theta_env.insert(a.clone(), Restriction::Poly);
            s.subst.insert(a.clone(), Type::var(&a));
            s.stack.push(Frame::Exists(a));
            s.current = *c;
            StepOutcome::Stepped(Rule::ExistsPush, s)
        }
        Constraint::Forall(a, c, origin) => {
            s.stack.push(Frame::Forall(a, origin));
            s.current = *c;
            StepOutcome::Stepped(Rule::ForallPush, s)
        }
        Constraint::Def(x, a, c, origin) => {
            let theta_env = demote_flexible(&s, &s.subst.apply(&a));
            let delta = delta_of(&s.stack);
            for v in a.ftv_ordered() {
                let t = s.subst.image(&v);
                if !wf_type(&delta, &theta_env, Restriction::Mono, &t) {
                    return stuck(TypeErrorKind::DefMonoFailure(x, v, t), origin);
                }
            }
            s.theta_env = theta_env;
            s.stack.push(Frame::Def(x, a, origin));
            s.current = *c;
            StepOutcome::Stepped(Rule::DefPush, s)
        }
        Constraint::LetPoly(x, b, c1, c2) => let_push(s, Restriction::Poly, x, b, *c1, *c2),
        Constraint::LetMono(x, b, c1, c2) => let_push(s, Restriction::Mono, x, b, *c1, *c2),
        Constraint::True => pop(s, observe),
    }
}

fn let_push(mut s: SolverState, restriction: Restriction, x: TermVar, b: TyVar, c1: Constraint, c2: Constraint) -> StepOutcome {
    s.theta_env.insert(b.clone(), Restriction::Poly);
    s.subst.insert(b.clone(), Type::var(&b));
    s.stack.push(Frame::Let { restriction, x, a: b, rest: c2 });
    s.current = c1;
    StepOutcome::Stepped(Rule::LetPush, s)
}

fn pop(mut s: SolverState, observe: &mut PartitionObserver<'_>) -> StepOutcome {
    let run = exists_run(&s.stack);
    if run == 0 {
        return match s.stack.pop() {
            Some(Frame::Conj(c)) => {
                s.current = c;
                StepOutcome::Stepped(Rule::ConjPop, s)
            }
            Some(Frame::Forall(a, origin)) => {
                let escapes = s.theta_env.keys().any(|v| s.subst.image(v).occurs_free(&a));
                if escapes {
                    return stuck(TypeErrorKind::RigidEscape(a), origin);
                }
                StepOutcome::Stepped(Rule::ForallPop, s)
            }
            Some(Frame::Def(..)) => StepOutcome::Stepped(Rule::DefPop, s),
            Some(f @ Frame::Let { .. }) => {
                s.stack.push(f);
                let_pop(s, 0, observe)
            }
            Some(Frame::Exists(_)) | None => unreachable!("final states are handled before popping"),
        };
    }
    let base = s.stack.len() - run - 1;
    if matches!(s.stack[base], Frame::Let { .. }) {
        return let_pop(s, run, observe);
    }
    let upper = s.stack.split_off(base + 1);
    let xi: Vec<TyVar> = upper.iter().filter_map(|f| f.type_binder().cloned()).collect();
    observe(&xi, &s.stack, &upper, &s.subst, &s.theta_env);
    let (kept, lowered) = partition(&xi, &s.subst, &s.theta_env);
    let f = s.stack.pop().expect("frame below the existential run");
    s.stack.extend(lowered.iter().cloned().map(Frame::Exists));
    s.stack.push(f);
    drop_vars(&mut s, &kept);
    StepOutcome::Stepped(Rule::ExistsLower, s)
}

fn drop_vars(s: &mut SolverState, vars: &[TyVar]) {
    for v in vars {
        s.theta_env.remove(v);
        s.subst.remove(v);
    }
}

fn let_pop(mut s: SolverState, run: usize, observe: &mut PartitionObserver<'_>) -> StepOutcome {
    let base = s.stack.len() - run - 1;
    let upper = s.stack.split_off(base);
    let xi: Vec<TyVar> = upper.iter().filter_map(|f| f.type_binder().cloned()).collect();
    observe(&xi, &s.stack, &upper, &s.subst, &s.theta_env);
    let (kept, lowered) = partition(&xi, &s.subst, &s.theta_env);
    let (restriction, x, b, rest) = match upper.into_iter().next() {
        Some(Frame::Let { restriction, x, a, rest }) => (restriction, x, a, rest),
        _ => unreachable!("let_pop requires a let frame"),
    };
    let a = s.subst.image(&b);
    let generalised: Vec<TyVar> = a.ftv_ordered().into_iter().filter(|v| kept.contains(v)).collect();
    match restriction {
        Restriction::Poly => {
            s.stack.extend(lowered.iter().cloned().map(Frame::Exists));
            drop_vars(&mut s, &kept);
            s.current = def_after_let(x, Type::forall(&generalised, a), rest);
            StepOutcome::Stepped(Rule::LetPolyPop, s)
        }
        Restriction::Mono => {
            let survivors: Vec<TyVar> =
                xi.iter().filter(|v| lowered.contains(v) || generalised.contains(v)).cloned().collect();
            let dropped: Vec<TyVar> = kept.iter().filter(|v| !generalised.contains(v)).cloned().collect();
            s.stack.extend(survivors.into_iter().map(Frame::Exists));
            drop_vars(&mut s, &dropped);
            s.current = def_after_let(x, a, rest);
            StepOutcome::Stepped(Rule::LetMonoPop, s)
        }
    }
}

fn def_after_let(x: TermVar, t: Type, rest: Constraint) -> Constraint {
    Constraint::Def(x, t, Box::new(rest), Origin(None))
}

/// Lexicographic termination measure `(insts(F[C]), |F[C]|, |C|, i)` where `i`
/// is the 0-based stack index of the topmost ∃ frame, or 0.
pub fn measure(s: &SolverState) -> (usize, usize, usize, usize) {
    let insts = s.current.insts() + s.stack.iter().map(Frame::insts).sum::<usize>();
    let size = s.current.size() + s.stack.iter().map(Frame::size).sum::<usize>();
    let top = s.stack.iter().rposition(Frame::is_exists).unwrap_or(0);
    (insts, size, s.current.size(), top)
}

/// `𝔘(Θ, θ)`: `mono(a)` for every `a : •`, then `a ≗ θ(a)` for every `a`.
pub fn unifier_constraint(theta_env: &RestrictionContext, subst: &Subst) -> Constraint {
    let monos = theta_env
        .iter()
        .filter(|(_, r)| *r == Restriction::Mono)
        .map(|(a, _)| Constraint::mono(a));
    let eqs = theta_env.keys().map(|a| Constraint::eq(Type::var(a), subst.image(a)));
    let parts: Vec<Constraint> = monos.chain(eqs).collect();
    parts.into_iter().rev().reduce(|acc, c| Constraint::and(c, acc)).unwrap_or(Constraint::True)
}

/// `F[C ∧ 𝔘(Θ, θ)]`
pub fn reify_state(s: &SolverState) -> Constraint {
    plug(&s.stack, Constraint::and(s.current.clone(), unifier_constraint(&s.theta_env, &s.subst)))
}

/// Checks every state invariant, describing the first violation found.
pub fn check_state(s: &SolverState) -> Result<(), String> {
    let delta = delta_of(&s.stack);
    let xi = xi_of(&s.stack);

    let keys: Vec<&TyVar> = s.theta_env.keys().collect();
    let bound: Vec<&TyVar> = xi.iter().collect();
    if keys != bound {
        return Err("restriction context does not match the flexible binders of the stack".into());
    }
    let dom: Vec<&TyVar> = s.subst.iter().map(|(a, _)| a).collect();
    let mut sorted_keys = keys.clone();
    sorted_keys.sort();
    if dom != sorted_keys {
        return Err("substitution domain differs from the restriction context".into());
    }
    for (a, r) in s.theta_env.iter() {
        if !wf_type(&delta, &s.theta_env, r, &s.subst.image(a)) {
            return Err(format!("θ({}) = {} is not well-formed at {}", Type::var(a), s.subst.image(a), r.word()));
        }
    }
    if !s.subst.is_idempotent() {
        return Err("substitution is not idempotent".into());
    }

    let mut type_binders = BTreeSet::new();
    let mut term_binders = BTreeSet::new();
    for f in &s.stack {
        if let Some(a) = f.type_binder() {
            if !type_binders.insert(a.clone()) {
                return Err(format!("type binder {} bound twice", Type::var(a)));
            }
        }
        if let Some(x) = f.term_binder() {
            if !term_binders.insert(x.clone()) {
                return Err(format!("term binder {x} bound twice"));
            }
        }
    }

    let mut delta_below = TypeContext::new();
    let mut xi_below = TypeContext::new();
    let mut names_below: Vec<TermVar> = Vec::new();
    for f in &s.stack {
        match f {
            Frame::Conj(c) => {
                if !wf_with_names(&delta_below, &xi_below, &names_below, c) {
                    return Err(format!("frame constraint {c} is not well-formed"));
                }
            }
            Frame::Let { x, a, rest, .. } => {
                let mut names = names_below.clone();
                names.push(x.clone());
                if !wf_with_names(&delta_below, &xi_below, &names, rest) {
                    return Err(format!("let body {rest} is not well-formed"));
                }
                xi_below.push(a.clone());
            }
            Frame::Def(x, t, _) => {
                if !t.ftv().iter().all(|v| delta_below.contains(v) || xi_below.contains(v)) {
                    return Err(format!("annotation of {x} mentions unbound variables"));
                }
                // Rigid variables bound above the frame are monomorphic too; an
                // escape through them is caught when their frame pops.
                for v in s.subst.apply(t).ftv() {
                    if !delta.contains(&v) && s.theta_env.get(&v) != Some(Restriction::Mono) {
                        return Err(format!("variable {} of def {x} is not monomorphic", Type::var(&v)));
                    }
                }
                names_below.push(x.clone());
            }
            Frame::Forall(a, _) => delta_below.push(a.clone()),
            Frame::Exists(a) => xi_below.push(a.clone()),
        }
    }
    if !wf_with_names(&delta, &xi, &names_below, &s.current) {
        return Err(format!("current constraint {} is not well-formed", s.current));
    }
    Ok(())
}

pub fn state_wf(s: &SolverState) -> bool {
    check_state(s).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unify::UnifyError;

    fn v(n: &str, uid: u32) -> TyVar {
        TyVar::new(n, uid)
    }

    fn id_type(uid: u32) -> Type {
        let a = v("a", uid);
        Type::forall(std::slice::from_ref(&a), Type::arrow(Type::var(&a), Type::var(&a)))
    }

    fn with_id(inner: Constraint) -> Constraint {
        Constraint::def("id", id_type(1), inner)
    }

    #[test]
    fn inst_opens_prefix_with_fresh_variables() {
        let r = v("r", 2);
        let s = SolverState {
            stack: vec![Frame::Def(TermVar::new("id"), id_type(1), Origin(None)), Frame::Forall(r.clone(), Origin(None))],
            theta_env: RestrictionContext::new(),
            subst: Subst::new(),
            current: Constraint::inst("id", Type::var(&r)),
        };
        let mut supply = NameSupply::above(10);
        match step(s, &mut supply) {
            StepOutcome::Stepped(Rule::Inst, s2) => match &s2.current {
                Constraint::Exists(a, body) => {
                    assert_ne!(a.uid, 1);
                    let a_ty = Type::var(a);
                    assert_eq!(**body, Constraint::eq(Type::arrow(a_ty.clone(), a_ty), Type::var(&r)));
                }
                other => panic!("unexpected {other}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn forall_pop_detects_escape() {
        let (a, b) = (v("a", 1), v("b", 2));
        let mut subst = Subst::new();
        subst.insert(b.clone(), Type::var(&a));
        let s = SolverState {
            stack: vec![Frame::Exists(b.clone()), Frame::Forall(a.clone(), Origin(None))],
            theta_env: [(b, Restriction::Poly)].into_iter().collect(),
            subst,
            current: Constraint::True,
        };
        match step(s, &mut NameSupply::above(10)) {
            StepOutcome::Stuck(e) => assert_eq!(e.kind, TypeErrorKind::RigidEscape(a)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn conj_pop_resumes_rest() {
        let c2 = Constraint::eq(Type::int(), Type::int());
        let s = SolverState {
            stack: vec![Frame::Conj(c2.clone())],
            theta_env: RestrictionContext::new(),
            subst: Subst::new(),
            current: Constraint::True,
        };
        assert_eq!(step(s, &mut NameSupply::new()), StepOutcome::Stepped(Rule::ConjPop, SolverState::initial(c2)));
    }

    #[test]
    fn final_takes_precedence_over_lowering() {
        let (a, b) = (v("a", 1), v("b", 2));
        let s = SolverState {
            stack: vec![Frame::Forall(a, Origin(None)), Frame::Exists(b.clone())],
            theta_env: [(b.clone(), Restriction::Poly)].into_iter().collect(),
            subst: Subst::identity_on([&b]),
            current: Constraint::True,
        };
        assert!(s.is_final());
        assert_eq!(guards(&s), vec![Rule::ExistsLower]);
        assert!(matches!(step(s, &mut NameSupply::above(10)), StepOutcome::Final(_)));
    }

    #[test]
    fn reification() {
        assert_eq!(reify_state(&SolverState::initial(Constraint::True)), Constraint::and(Constraint::True, Constraint::True));

        let a = v("a", 1);
        let s = SolverState {
            stack: vec![Frame::Exists(a.clone())],
            theta_env: [(a.clone(), Restriction::Mono)].into_iter().collect(),
            subst: Subst::identity_on([&a]),
            current: Constraint::True,
        };
        let expected = Constraint::exists(
            &a,
            Constraint::and(Constraint::True, Constraint::and(Constraint::mono(&a), Constraint::eq(Type::var(&a), Type::var(&a)))),
        );
        assert_eq!(reify_state(&s), expected);

        let c1 = Constraint::mono(&a);
        let c2 = Constraint::eq(Type::int(), Type::int());
        let s = SolverState {
            stack: vec![Frame::Forall(a.clone(), Origin(None)), Frame::Conj(c2.clone())],
            theta_env: RestrictionContext::new(),
            subst: Subst::new(),
            current: c1.clone(),
        };
        let expected = Constraint::forall(&a, Constraint::and(Constraint::and(c1, Constraint::True), c2));
        assert_eq!(reify_state(&s), expected);
    }

    #[test]
    fn well_formedness_examples() {
        let a = v("a", 1);
        let s = SolverState::initial(with_id(Constraint::True));
        assert!(state_wf(&s));

        let dup = SolverState {
            stack: vec![Frame::Exists(a.clone()), Frame::Exists(a.clone())],
            theta_env: [(a.clone(), Restriction::Poly)].into_iter().collect(),
            subst: Subst::identity_on([&a]),
            current: Constraint::True,
        };
        assert!(!state_wf(&dup));

        let poly_def = SolverState {
            stack: vec![
                Frame::Exists(a.clone()),
                Frame::Def(TermVar::new("x"), Type::arrow(Type::var(&a), Type::var(&a)), Origin(None)),
            ],
            theta_env: [(a.clone(), Restriction::Poly)].into_iter().collect(),
            subst: Subst::identity_on([&a]),
            current: Constraint::True,
        };
        assert!(!state_wf(&poly_def));
    }

    #[test]
    fn measure_sizes() {
        let a = v("a", 1);
        let s = SolverState::initial(Constraint::inst("x", Type::var(&a)));
        assert_eq!(measure(&s), (1, 2, 2, 0));
        let s = SolverState {
            stack: vec![Frame::Forall(v("r", 3), Origin(None)), Frame::Exists(a.clone())],
            theta_env: [(a.clone(), Restriction::Poly)].into_iter().collect(),
            subst: Subst::identity_on([&a]),
            current: Constraint::True,
        };
        assert_eq!(measure(&s), (0, 2, 0, 1));
    }

    #[test]
    fn frozen_id_applied_to_literal_is_stuck() {
        // (~id) 3 with 3 : Int
        let a = v("a", 10);
        let a1 = v("a", 11);
        let c = Constraint::exists(
            &a,
            Constraint::def(
                "3",
                Type::int(),
                Constraint::exists(
                    &a1,
                    Constraint::and(
                        Constraint::freeze("id", Type::arrow(Type::var(&a1), Type::var(&a))),
                        Constraint::inst("3", Type::var(&a1)),
                    ),
                ),
            ),
        );
        let mut s = SolverState::initial(with_id(c));
        let mut supply = NameSupply::above(20);
        loop {
            assert!(state_wf(&s), "{:?}", check_state(&s));
            match step(s, &mut supply) {
                StepOutcome::Stepped(_, next) => s = next,
                StepOutcome::Final(_) => panic!("expected a type error"),
                StepOutcome::Stuck(e) => {
                    assert!(matches!(e.kind, TypeErrorKind::Unify(ref u) if matches!(**u, UnifyError::QuantifierMismatch { .. })), "{e}");
                    break;
                }
            }
        }
    }
}
