use hgl_core::bundle::Bundle;
use hgl_core::catalog::{q_z2, super_line, sweedler, trivial_bundle, trivial_comonoid_bundle};
use hgl_core::dsl::{assert_equal, evaluate, parse, random_chain, random_expr, typecheck, DslError, Environment, Expr};
use hgl_core::{tensor, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn comonoid_env() -> Environment<Rational> {
    Environment::from_bundle(&Bundle::Comonoid(trivial_comonoid_bundle(&q_z2()))).unwrap()
}

#[test]
fn can_composite_matches_the_library_precomposite() {
    let b = trivial_comonoid_bundle(&q_z2());
    let env = Environment::from_bundle(&Bundle::Comonoid(b.clone())).unwrap();
    let e = parse("(cm(P) * id(H)) ; (id(P) * act(P))").unwrap();
    let (d, c) = typecheck(&e, &env).unwrap();
    assert_eq!((d.dim(), c.dim()), (4, 4));
    assert_eq!(evaluate(&e, &env).unwrap().matrix(), b.can_precomposite().unwrap().matrix());
}

#[test]
fn algebra_side_precomposite() {
    let b = trivial_bundle(&sweedler());
    let env = Environment::from_bundle(&Bundle::Algebra(b.clone())).unwrap();
    let e = parse("(id(P) * coact(P)) ; (m(P) * id(H))").unwrap();
    assert_eq!(evaluate(&e, &env).unwrap().matrix(), b.can_precomposite().unwrap().matrix());
}

#[test]
fn counit_then_multiplication_is_a_type_error() {
    let err = typecheck(&parse("cu(H) ; m(H)").unwrap(), &comonoid_env()).unwrap_err();
    assert!(matches!(err, DslError::Type { .. }), "{err}");
}

#[test]
fn endpoint_mismatch_is_a_type_error() {
    let env = comonoid_env();
    let r = assert_equal("x", &parse("m(H)").unwrap(), &parse("id(H)").unwrap(), &env);
    assert!(matches!(r, Err(DslError::Type { .. })));
}

#[test]
fn unknown_names() {
    let env = comonoid_env();
    assert!(matches!(typecheck(&parse("nope").unwrap(), &env), Err(DslError::Unknown { .. })));
    assert!(matches!(typecheck(&parse("m(Q)").unwrap(), &env), Err(DslError::Unknown { .. })));
}

#[test]
fn parse_errors() {
    assert_eq!(parse("id(P ;").unwrap_err().position, 6);
    assert_eq!(parse("").unwrap_err().position, 1);
    assert_eq!(parse("m(H) ;").unwrap_err().position, 7);
    assert_eq!(parse("br(P)").unwrap_err().position, 5);
    let e = parse("id(P) $").unwrap_err();
    assert_eq!(e.position, 7);
}

#[test]
fn graded_hexagon_and_antipode() {
    let env = Environment::from_bundle(&Bundle::Algebra(trivial_bundle(&super_line()))).unwrap();
    let hex = assert_equal(
        "hexagon",
        &parse("br(P, H*H)").unwrap(),
        &parse("(br(P,H) * id(H)) ; (id(H) * br(P,H))").unwrap(),
        &env,
    )
    .unwrap();
    assert!(hex.passed());
    // x⊗x ↦ −x⊗x on the odd part
    let sq = evaluate(&parse("br(H,H) ; br(H,H)").unwrap(), &env).unwrap();
    assert!(sq.is_identity());
    let br = evaluate(&parse("br(H,H)").unwrap(), &env).unwrap();
    assert!(br.matrix().entries().any(|(_, _, v)| *v == Rational::integer(-1)));
}

#[test]
fn thousand_random_round_trips() {
    let env = Environment::from_bundle(&Bundle::Algebra(trivial_bundle(&sweedler()))).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let e = random_expr(&env, &mut rng, 4);
        let printed = e.to_string();
        assert_eq!(parse(&printed).unwrap(), e, "{printed}");
        typecheck(&e, &env).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evaluation_is_a_strict_monoidal_functor(seed in any::<u64>()) {
        let env = comonoid_env();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = vec!["P".to_string(), "H".to_string()];
        let (a, mid) = random_chain(&env, &mut rng, &start, 2);
        let (b, _) = random_chain(&env, &mut rng, &mid, 2);
        let (c, _) = random_chain(&env, &mut rng, &start[1..], 1);
        let (fa, fb, fc) = (evaluate(&a, &env).unwrap(), evaluate(&b, &env).unwrap(), evaluate(&c, &env).unwrap());
        prop_assert_eq!(evaluate(&Expr::then(a.clone(), b.clone()), &env).unwrap(), fb.compose(&fa).unwrap());
        prop_assert_eq!(evaluate(&Expr::compose(b.clone(), a.clone()), &env).unwrap(), fb.compose(&fa).unwrap());
        prop_assert_eq!(evaluate(&Expr::tensor(a.clone(), c.clone()), &env).unwrap(), tensor(&fa, &fc).unwrap());
        let text = format!("({a}) * ({c})");
        prop_assert_eq!(parse(&text).unwrap(), Expr::tensor(a, c));
    }
}
