use freezeml::constraint::{congen, freshen_annotations, uniquify_binders, wf_constraint, ConstraintContext};
use freezeml::gen::{random_term, rng_from_seed, TermShape};
use freezeml::prelude::{bind_literals, default_prelude};
use freezeml::solver::{infer_in, RunConfig, SolveError};
use freezeml::surface::Session;
use freezeml::syntax::{alpha_equal, NameSupply, Term, TermContext, TermKind, TermVar, Type, TypeContext};
use proptest::prelude::*;

fn prelude() -> TermContext {
    default_prelude(&mut Session::new())
}

fn term(seed: u64, gamma: &TermContext) -> Term {
    let globals = gamma.iter().map(|(x, _)| x.clone()).collect();
    random_term(&mut rng_from_seed(seed), &TermShape { max_size: 18, globals }, &mut NameSupply::above(gamma.max_uid()))
}

/// Renames every binder `xN` to `yN`.
fn rename(m: &Term) -> Term {
    let r = |x: &TermVar| match x.as_str().strip_prefix('x') {
        Some(n) => TermVar::new(&format!("y{n}")),
        None => x.clone(),
    };
    let b = |m: &Term| Box::new(rename(m));
    let kind = match &m.kind {
        TermKind::Var(x) => TermKind::Var(r(x)),
        TermKind::FrozenVar(x) => TermKind::FrozenVar(r(x)),
        TermKind::App(f, a) => TermKind::App(b(f), b(a)),
        TermKind::Lam(x, body) => TermKind::Lam(r(x), b(body)),
        TermKind::LamAnn(x, t, body) => TermKind::LamAnn(r(x), t.clone(), b(body)),
        TermKind::Let(x, m1, m2) => TermKind::Let(r(x), b(m1), b(m2)),
        TermKind::LetAnn(x, t, m1, m2) => TermKind::LetAnn(r(x), t.clone(), b(m1), b(m2)),
    };
    Term::new(kind)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solver_invariants_hold(s: u64) {
        let base = prelude();
        let m = term(s, &base);
        let gamma = bind_literals(&m, &base);
        let config = RunConfig { check_invariants: true, ..RunConfig::default() };
        match infer_in(&TypeContext::new(), &gamma, &m, &config, &mut NameSupply::new()) {
            Err(SolveError::Internal(e)) => prop_assert!(false, "{}", e.message),
            Ok(r) => prop_assert!(r.stats.rank_checks == r.stats.partition_calls),
            Err(SolveError::Type(_)) => {}
        }
    }

    #[test]
    fn inference_is_invariant_under_renaming(s: u64) {
        let base = prelude();
        let m = term(s, &base);
        let gamma = bind_literals(&m, &base);
        let n = freshen_annotations(&rename(&m), &mut NameSupply::above(10_000));
        let r1 = infer_in(&TypeContext::new(), &gamma, &m, &RunConfig::default(), &mut NameSupply::new());
        let r2 = infer_in(&TypeContext::new(), &gamma, &n, &RunConfig::default(), &mut NameSupply::above(20_000));
        match (r1, r2) {
            (Ok(a), Ok(b)) => {
                // Residuals are free, so compare after closing over them.
                let close = |t: &Type, vs: Vec<_>| Type::forall(&vs, t.clone());
                prop_assert!(alpha_equal(
                    &close(&a.result_type, a.residual.keys().cloned().collect()),
                    &close(&b.result_type, b.residual.keys().cloned().collect()),
                ));
                let ra: Vec<_> = a.residual.iter().map(|(_, r)| r).collect();
                let rb: Vec<_> = b.residual.iter().map(|(_, r)| r).collect();
                prop_assert_eq!(ra, rb);
            }
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.is_ok(), b.is_ok()),
        }
    }

    #[test]
    fn generated_constraints_are_well_formed(s: u64) {
        let base = prelude();
        let m = term(s, &base);
        let gamma = bind_literals(&m, &base);
        let mut supply = NameSupply::above(gamma.max_uid().max(m.max_uid()));
        let reserved = gamma.iter().map(|(x, _)| x.clone()).collect();
        let m = freshen_annotations(&uniquify_binders(&m, &reserved), &mut supply);
        let a = supply.fresh("a");
        let c = congen(&m, &Type::var(&a), &mut supply);
        let ctx = ConstraintContext { delta: TypeContext::new(), xi: TypeContext::from_vars([a]), gamma };
        prop_assert!(wf_constraint(&ctx, &c));
    }
}
