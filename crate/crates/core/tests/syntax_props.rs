use std::collections::BTreeMap;

use freezeml::gen::{random_term, random_type, rng_from_seed, TermShape, TypeShape};
use freezeml::prelude::bind_literals;
use freezeml::surface::{parse_term, parse_type, print_term, print_type, Session};
use freezeml::syntax::{
    alpha_equal, apply_type_subst, classify_value, freshen_binders, is_guarded_value, terms_alpha_equal, wf_term,
    wf_type, NameSupply, Restriction, RestrictionContext, Term, TermContext, TermVar, TyVar, Type, TypeContext,
    ValueClass,
};
use proptest::prelude::*;

const SHAPE: TypeShape = TypeShape { max_depth: 4, max_quantifiers: 2 };

fn vars() -> Vec<TyVar> {
    (1..=3).map(|i| TyVar::new(&format!("v{i}"), i)).collect()
}

fn open_type(seed: u64) -> Type {
    random_type(&mut rng_from_seed(seed), SHAPE, &vars(), &mut NameSupply::above(10))
}

fn closed_type(seed: u64) -> Type {
    random_type(&mut rng_from_seed(seed), SHAPE, &[], &mut NameSupply::above(10))
}

fn term(seed: u64) -> Term {
    let globals = ["id", "choose", "single", "auto"].iter().map(|s| TermVar::new(s)).collect();
    random_term(&mut rng_from_seed(seed), &TermShape { max_size: 20, globals }, &mut NameSupply::above(10))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn alpha_equivalence_is_an_equivalence(s1: u64, s2: u64) {
        let a = open_type(s1);
        let b = freshen_binders(&a, &mut NameSupply::above(500));
        let c = freshen_binders(&b, &mut NameSupply::above(900));
        prop_assert!(alpha_equal(&a, &a));
        prop_assert!(alpha_equal(&a, &b) && alpha_equal(&b, &a));
        prop_assert!(alpha_equal(&a, &c));
        let d = open_type(s2);
        prop_assert_eq!(alpha_equal(&a, &d), alpha_equal(&d, &a));
    }

    #[test]
    fn ftv_is_invariant_under_renaming_binders(s: u64) {
        let a = open_type(s);
        let b = freshen_binders(&a, &mut NameSupply::above(500));
        prop_assert_eq!(a.ftv(), b.ftv());
        prop_assert_eq!(a.ftv_ordered(), b.ftv_ordered());
        prop_assert!(a.ftv().iter().all(|v| vars().contains(v)));
    }

    #[test]
    fn substitution_commutes_with_ftv(s: u64, t: u64) {
        let a = open_type(s);
        let v = vars();
        let map: BTreeMap<TyVar, Type> = [(v[0].clone(), closed_type(t)), (v[1].clone(), Type::var(&v[2]))].into_iter().collect();
        let applied = apply_type_subst(&map, &a);
        let expected: std::collections::BTreeSet<TyVar> = a
            .ftv()
            .into_iter()
            .flat_map(|x| map.get(&x).map(Type::ftv).unwrap_or_else(|| [x].into_iter().collect()))
            .collect();
        prop_assert_eq!(applied.ftv(), expected);
        // Composition: applying twice equals applying the composed map.
        let second: BTreeMap<TyVar, Type> = [(v[2].clone(), Type::int())].into_iter().collect();
        let composed: BTreeMap<TyVar, Type> = map
            .iter()
            .map(|(k, t)| (k.clone(), apply_type_subst(&second, t)))
            .chain(second.clone())
            .collect();
        prop_assert!(alpha_equal(&apply_type_subst(&second, &applied), &apply_type_subst(&composed, &a)));
    }

    #[test]
    fn mono_wf_implies_poly_wf(s: u64, mono_mask: u8) {
        let a = open_type(s);
        let v = vars();
        let delta = TypeContext::from_vars([v[0].clone()]);
        let mut env = RestrictionContext::new();
        for (i, x) in v[1..].iter().enumerate() {
            let r = if mono_mask & (1 << i) != 0 { Restriction::Mono } else { Restriction::Poly };
            env.insert(x.clone(), r);
        }
        if wf_type(&delta, &env, Restriction::Mono, &a) {
            prop_assert!(wf_type(&delta, &env, Restriction::Poly, &a));
            prop_assert!(a.is_monotype());
        }
    }

    #[test]
    fn guarded_values_are_values(s: u64) {
        let m = term(s);
        if is_guarded_value(&m) {
            prop_assert_ne!(classify_value(&m), ValueClass::NonValue);
        }
    }

    #[test]
    fn printed_types_reparse(s: u64) {
        let a = closed_type(s);
        let printed = print_type(&a);
        let back = parse_type(&printed).map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
        prop_assert!(alpha_equal(&a, &back), "{} reparsed as {}", printed, print_type(&back));
    }

    #[test]
    fn printed_terms_reparse(s: u64) {
        let m = term(s);
        let printed = print_term(&m);
        let back = Session::new().parse_term(&printed).map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
        prop_assert!(terms_alpha_equal(&m, &back), "{} reparsed as {}", printed, print_term(&back));
    }

    #[test]
    fn generated_terms_are_well_formed(s: u64) {
        let m = term(s);
        let globals: TermContext = ["id", "choose", "single", "auto"].iter().map(|x| (TermVar::new(x), Type::int())).collect();
        prop_assert!(wf_term(&TypeContext::new(), &bind_literals(&m, &globals), &m));
    }

    #[test]
    fn parser_never_panics(src in "[a-z0-9 ()~:.,>=-]{0,40}") {
        let _ = parse_term(&src);
        let _ = parse_type(&src);
    }

    #[test]
    fn parser_never_panics_on_keywords(words in prop::collection::vec(
        prop::sample::select(vec!["fun", "let", "in", "forall", "x", "a", "->", "(", ")", "~", ":", "=", ".", "Int", "List", ","]),
        0..20,
    )) {
        let src = words.join(" ");
        let _ = parse_term(&src);
        let _ = parse_type(&src);
    }
}
