//! Randomized laws tying the syntax, reduction, and typing layers together.
//!
//! Two sources of inputs: a raw AST strategy that draws arbitrary (often
//! ill-typed, sometimes open) terms for the purely syntactic laws, and the
//! seeded type-directed generator for laws that need terms the evaluator
//! and checker accept.

use lre_core::btype::{btype, UEnv, UType};
use lre_core::denote::{denote_member, Bounds};
use lre_core::eval::{eval, step, EvalOutcome};
use lre_core::gen::{GenConfig, Generator};
use lre_core::lr::{expr_related, EquivEnv};
use lre_core::parred::{
    check_backward_simulation, check_cotermination, check_forward_simulation, congruent, parred,
    sample_parred,
};
use lre_core::parse::{parse_expr, parse_type};
use lre_core::proofs::{proof_index, prove_refl};
use lre_core::syntax::{
    alpha_eq, alpha_eq_type, alpha_key, free_vars, fresh_name, is_value, subst, BaseType,
    ConstKind, Env, Expr, Type,
};
use lre_core::tri::TriBool;
use lre_core::typing::{check, subtype, synth};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

const FUEL: usize = 10_000;

fn name_pool() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("x"), Just("y"), Just("z"), Just("f"), Just("w")]
}

fn arb_base() -> impl Strategy<Value = BaseType> {
    prop_oneof![Just(BaseType::Bool), Just(BaseType::Unit)]
}

fn arb_const() -> impl Strategy<Value = ConstKind> {
    prop_oneof![
        Just(ConstKind::True),
        Just(ConstKind::False),
        Just(ConstKind::UnitVal),
        arb_base().prop_map(ConstKind::EqOp),
        (arb_base(), any::<bool>()).prop_map(|(b, flip)| {
            let c = match (b, flip) {
                (BaseType::Bool, true) => ConstKind::True,
                (BaseType::Bool, false) => ConstKind::False,
                (BaseType::Unit, _) => ConstKind::UnitVal,
            };
            ConstKind::EqOpPartial(Box::new(c), b)
        }),
    ]
}

fn arb_expr(depth: u32) -> BoxedStrategy<Expr> {
    if depth == 0 {
        prop_oneof![
            arb_const().prop_map(Expr::Const),
            name_pool().prop_map(Expr::var),
        ]
        .boxed()
    } else {
        let sub = arb_expr(depth - 1);
        let ty = arb_type(depth - 1);
        prop_oneof![
            2 => arb_expr(0),
            3 => (sub.clone(), sub.clone()).prop_map(|(f, a)| Expr::app(f, a)),
            3 => (name_pool(), ty.clone(), sub.clone())
                .prop_map(|(x, t, b)| Expr::lam(x, t, b)),
            1 => (arb_base(), sub.clone(), sub.clone(), sub.clone())
                .prop_map(|(b, l, r, p)| Expr::beq(b, l, r, p)),
            1 => (name_pool(), ty.clone(), ty, sub.clone(), sub.clone(), sub)
                .prop_map(|(x, d, c, l, r, p)| Expr::xeq(x, d, c, l, r, p)),
        ]
        .boxed()
    }
}

fn arb_type(depth: u32) -> BoxedStrategy<Type> {
    if depth == 0 {
        arb_base().prop_map(Type::trivial).boxed()
    } else {
        let sub_t = arb_type(depth - 1);
        let sub_e = arb_expr(depth - 1);
        prop_oneof![
            2 => arb_base().prop_map(Type::trivial),
            2 => (name_pool(), arb_base(), sub_e.clone())
                .prop_map(|(x, b, r)| Type::refined(x, b, r)),
            2 => (name_pool(), sub_t.clone(), sub_t.clone())
                .prop_map(|(x, d, c)| Type::fun(x, d, c)),
            1 => (sub_t, sub_e.clone(), sub_e).prop_map(|(i, l, r)| Type::eqrt(i, l, r)),
        ]
        .boxed()
    }
}

fn gen_closed(seed: u64) -> Expr {
    let mut g = Generator::new(GenConfig {
        seed,
        ..GenConfig::default()
    });
    g.gen_closed_expr()
}

fn gen_ty(seed: u64) -> Type {
    let mut g = Generator::new(GenConfig {
        seed,
        ..GenConfig::default()
    });
    g.gen_type(2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn subst_of_absent_variable_changes_nothing(e in arb_expr(2), v in arb_expr(1)) {
        // "q" is outside the name pool, so it is never free in e.
        prop_assert!(alpha_eq(&subst(&e, "q", &v), &e));
    }

    #[test]
    fn subst_bounds_free_variables(e in arb_expr(2), x in name_pool(), v in arb_expr(1)) {
        let result = free_vars(&subst(&e, x, &v));
        let mut allowed: BTreeSet<_> = free_vars(&e);
        allowed.remove(x);
        allowed.extend(free_vars(&v));
        prop_assert!(result.is_subset(&allowed), "{result:?} not within {allowed:?}");
    }

    #[test]
    fn alpha_key_characterizes_alpha_equality(e1 in arb_expr(2), e2 in arb_expr(2)) {
        prop_assert!(alpha_eq(&e1, &e1));
        prop_assert_eq!(alpha_eq(&e1, &e2), alpha_key(&e1) == alpha_key(&e2));
    }

    #[test]
    fn renaming_a_binder_is_alpha_neutral(
        x in name_pool(),
        t in arb_type(1),
        body in arb_expr(2),
    ) {
        let mut avoid = free_vars(&body);
        avoid.insert(x.to_string());
        let z = fresh_name("zz", &avoid);
        let original = Expr::lam(x, t.clone(), body.clone());
        let renamed = Expr::lam(z.clone(), t, subst(&body, x, &Expr::var(z)));
        prop_assert!(alpha_eq(&original, &renamed));
    }

    #[test]
    fn printed_expressions_reparse(e in arb_expr(2)) {
        let printed = e.to_string();
        let reparsed = parse_expr(&printed).expect("printed form must parse");
        prop_assert!(alpha_eq(&e, &reparsed), "{printed} reparsed as {reparsed}");
        prop_assert_eq!(printed, reparsed.to_string());
    }

    #[test]
    fn printed_types_reparse(t in arb_type(2)) {
        let printed = t.to_string();
        let reparsed = parse_type(&printed).expect("printed form must parse");
        prop_assert!(alpha_eq_type(&t, &reparsed), "{printed} reparsed as {reparsed}");
        prop_assert_eq!(printed, reparsed.to_string());
    }

    #[test]
    fn parser_never_panics(s in "\\PC*") {
        let _ = parse_expr(&s);
        let _ = parse_type(&s);
    }

    #[test]
    fn values_do_not_step(e in arb_expr(2)) {
        if is_value(&e) {
            prop_assert_eq!(step(&e), None);
        }
    }

    #[test]
    fn parallel_reduction_is_reflexive(e in arb_expr(2)) {
        prop_assert!(parred(&e, &e));
    }

    #[test]
    fn sampled_reducts_are_parallel_steps(e in arb_expr(2), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (r, _) = sample_parred(&e, &mut rng);
        prop_assert!(parred(&e, &r), "{e} does not parallel-step to sampled {r}");
    }

    #[test]
    fn contraction_free_samples_are_congruent(e in arb_expr(2), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (r, fired) = sample_parred(&e, &mut rng);
        if fired == 0 {
            prop_assert!(congruent(&e, &r));
        }
        if congruent(&e, &r) {
            prop_assert!(parred(&e, &r));
        }
    }

    #[test]
    fn parallel_reduction_is_substitutive(
        e in arb_expr(2),
        d in arb_expr(1),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (e2, _) = sample_parred(&e, &mut rng);
        let (d2, _) = sample_parred(&d, &mut rng);
        prop_assert!(parred(&subst(&e, "x", &d), &subst(&e2, "x", &d2)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn erasure_commutes_with_substitution(e in arb_expr(2), seed in any::<u64>()) {
        let mut uenv = UEnv::empty();
        for name in free_vars(&e) {
            if name != "x" {
                uenv = uenv.bind(name, UType::Bool);
            }
        }
        let with_x = uenv.bind("x", UType::Bool);
        if let Ok(t) = btype(&with_x, &e) {
            let mut g = Generator::new(GenConfig { seed, ..GenConfig::default() });
            let v = g.gen_expr(&UType::Bool, 6).unwrap_or_else(|| Expr::truth(true));
            prop_assert_eq!(btype(&uenv, &subst(&e, "x", &v)), Ok(t));
        }
    }

    #[test]
    fn single_steps_are_parallel_steps(seed in any::<u64>()) {
        let e = gen_closed(seed);
        if let Some(e2) = step(&e) {
            prop_assert!(parred(&e, &e2), "{e} steps to {e2} but does not parallel-step");
        }
    }

    #[test]
    fn more_fuel_never_changes_a_settled_run(seed in any::<u64>()) {
        let e = gen_closed(seed);
        let short = eval(&e, 60);
        if !matches!(short, EvalOutcome::FuelExhausted(_)) {
            prop_assert_eq!(eval(&e, FUEL), short);
        }
    }

    #[test]
    fn simulations_never_refute_sampled_steps(seed in any::<u64>(), sample_seed in any::<u64>()) {
        let e = gen_closed(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(sample_seed);
        let (r, _) = sample_parred(&e, &mut rng);
        let fwd = check_forward_simulation(&e, &r, FUEL);
        prop_assert!(fwd.premise_holds);
        prop_assert_ne!(fwd.verdict, TriBool::No, "forward: {:?}", fwd);
        let bwd = check_backward_simulation(&e, &r, FUEL);
        prop_assert_ne!(bwd.verdict, TriBool::No, "backward: {:?}", bwd);
        let cot = check_cotermination(&e, &r, FUEL);
        prop_assert_ne!(cot.verdict, TriBool::No, "cotermination: {:?}", cot);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn synthesized_types_hold_denotationally(seed in any::<u64>()) {
        let e = gen_closed(seed);
        let b = Bounds::default();
        if let Ok(t) = synth(&Env::empty(), &e, &b) {
            let verdict = denote_member(&e, &t, &b);
            prop_assert_ne!(verdict, TriBool::No, "{} : {} refuted", e, t);
        }
    }

    #[test]
    fn subtyping_is_reflexive(seed in any::<u64>()) {
        let t = gen_ty(seed);
        prop_assert_ne!(subtype(&Env::empty(), &t, &t, &Bounds::default()), TriBool::No);
    }

    #[test]
    fn subtyping_never_flips_across_a_chain(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (t1, t2, t3) = (gen_ty(s1), gen_ty(s2), gen_ty(s3));
        let b = Bounds::default();
        if subtype(&Env::empty(), &t1, &t2, &b) == TriBool::Yes
            && subtype(&Env::empty(), &t2, &t3, &b) == TriBool::Yes
        {
            prop_assert_ne!(subtype(&Env::empty(), &t1, &t3, &b), TriBool::No);
        }
    }

    #[test]
    fn terms_relate_to_themselves(seed in any::<u64>()) {
        let e = gen_closed(seed);
        let b = Bounds::default();
        if let Ok(t) = synth(&Env::empty(), &e, &b) {
            let verdict = expr_related(&EquivEnv::empty(), &e, &e, &t, &b);
            prop_assert_ne!(verdict, TriBool::No, "{} unrelated to itself at {}", e, t);
        }
    }

    #[test]
    fn the_relation_is_closed_under_parallel_steps(seed in any::<u64>(), sample_seed in any::<u64>()) {
        let e = gen_closed(seed);
        let b = Bounds::default();
        if let Ok(t) = synth(&Env::empty(), &e, &b) {
            let mut rng = ChaCha8Rng::seed_from_u64(sample_seed);
            let (r, _) = sample_parred(&e, &mut rng);
            let verdict = expr_related(&EquivEnv::empty(), &e, &r, &t, &b);
            prop_assert_ne!(verdict, TriBool::No, "{} unrelated to reduct {} at {}", e, r, t);
        }
    }

    #[test]
    fn denotation_is_monotone_in_fuel(seed in any::<u64>(), tseed in any::<u64>()) {
        let e = gen_closed(seed);
        let t = gen_ty(tseed);
        let small = denote_member(&e, &t, &Bounds::new(60, 2));
        if small != TriBool::Unknown {
            prop_assert_eq!(denote_member(&e, &t, &Bounds::new(FUEL, 2)), small);
        }
    }

    #[test]
    fn reflexivity_proofs_check(seed in any::<u64>()) {
        let e = gen_closed(seed);
        let b = Bounds::default();
        let v = match eval(&e, FUEL) {
            EvalOutcome::Value(v) => v,
            _ => return Ok(()),
        };
        let t = match synth(&Env::empty(), &v, &b) {
            Ok(t) => t,
            Err(_) => return Ok(()),
        };
        let index = match proof_index(&t) {
            Ok(i) => i,
            Err(_) => return Ok(()),
        };
        let proof = match prove_refl(&v, &t) {
            Ok(p) => p,
            Err(err) => {
                return Err(TestCaseError::fail(format!(
                    "no reflexivity proof for {v} at {t}: {err}"
                )))
            }
        };
        let target = Type::eqrt(index, v.clone(), v);
        prop_assert_ne!(check(&Env::empty(), &proof, &target, &b).tri(), TriBool::No);
    }
}
