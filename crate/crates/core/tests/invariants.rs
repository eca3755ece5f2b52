use num_bigint::BigInt;
use num_rational::BigRational;

use qlap::cyclo::{Ambient, CycElt, RootSpec, SumRange};
use qlap::invariants::*;
use qlap::laurent::LaurentPoly;
use qlap::wrt::{normalized_wrt, NormalizerKind, Variant};

fn q(e: i64) -> LaurentPoly {
    LaurentPoly::q_pow(e)
}

fn signed(p: LaurentPoly, k: u32) -> LaurentPoly {
    if k.is_multiple_of(2) {
        p
    } else {
        -p
    }
}

#[test]
fn poincare_and_fig8_series() {
    // coefficients against the basis (q^{k+1})_{k+1}/(1−q), with the prefactor q folded in
    let poincare = universal_series(&builtin("poincare", None).unwrap(), 15).unwrap();
    let fig8 = universal_series(&builtin("fig8-zhs", None).unwrap(), 15).unwrap();
    assert_eq!(poincare.basis, Basis::Zhs);
    for k in 0..15u32 {
        let ki = k as i64;
        assert_eq!(
            poincare.coeffs[k as usize],
            signed(q(1 - (ki + 2) * (3 * ki + 1) / 2), k)
        );
        assert_eq!(fig8.coeffs[k as usize], q(1 - (ki + 1) * (ki + 1)));
    }
}

#[test]
fn m2_series_displays() {
    for name in ["fig8-f2", "whitehead-2-m1"] {
        let e = universal_series(&builtin(name, None).unwrap(), 21).unwrap();
        assert_eq!(e.basis, Basis::M2);
        for n in 0..=20i64 {
            assert_eq!(
                e.coeffs[n as usize],
                LaurentPoly::v_pow(-n * (n + 2)),
                "{name} n={n}"
            );
        }
    }
}

#[test]
fn trivial_series() {
    let one = HabiroElem::one(Basis::M2);
    for n in [3u32, 5, 8, 12, 16] {
        assert!(eval_habiro(&one, RootSpec::new(n, 1).unwrap())
            .unwrap()
            .is_one());
    }
    let c = taylor(&one, Center::One, 5).unwrap();
    assert_eq!(
        c[0],
        num_complex::Complex::new(
            BigRational::from_integer(BigInt::from(1)),
            BigRational::from_integer(BigInt::from(0))
        )
    );
    assert!(c[1..]
        .iter()
        .all(|x| x.re == BigRational::from_integer(0.into())
            && x.im == BigRational::from_integer(0.into())));
}

#[test]
fn inadmissible_and_short_truncations() {
    let e = universal_series(&builtin("fig8-f2", None).unwrap(), 20).unwrap();
    assert!(matches!(
        eval_habiro(&e, RootSpec::new(2, 1).unwrap()),
        Err(InvariantError::InadmissibleOrder(2))
    ));
    assert!(matches!(
        eval_habiro(&e, RootSpec::new(10, 1).unwrap()),
        Err(InvariantError::InadmissibleOrder(10))
    ));
    let short = universal_series(&builtin("fig8-f2", None).unwrap(), 2).unwrap();
    assert!(matches!(
        eval_habiro(&short, RootSpec::new(16, 1).unwrap()),
        Err(InvariantError::TruncationTooShort { .. })
    ));
    let l = builtin("fig8-f2", None).unwrap();
    assert!(evaluate(&l, RootSpec::new(7, 1).unwrap(), Some(0)).is_err());
}

#[test]
fn universal_equals_brute_force() {
    for (name, orders) in [
        ("poincare", vec![3u32, 5, 7, 8, 9, 12, 16]),
        ("fig8-zhs", vec![3, 5, 8, 11]),
        ("left-trefoil-m1", vec![3, 5, 7, 8, 12]),
        ("fig8-f2", vec![3, 5, 8, 12, 16]),
        ("whitehead-2-m1", vec![3, 7, 8, 12, 20]),
        ("lens-2-1", vec![5, 8, 12]),
        ("whitehead-m1-m4", vec![3, 5, 7, 8, 16]),
    ] {
        let l = builtin(name, None).unwrap();
        for n in orders {
            let (u, b) = compare_at(&l, n, 1, None).unwrap();
            assert_eq!(u, b, "{name} N={n}");
        }
    }
}

#[test]
fn other_primitive_roots() {
    let l = builtin("fig8-f2", None).unwrap();
    for (n, j) in [(8u32, 3i64), (8, 5), (12, 5), (9, 2)] {
        let (u, b) = compare_at(&l, n, j, None).unwrap();
        assert_eq!(u, b, "N={n} j={j}");
        let (u, b) = compare_at(&l, n, j, None).unwrap();
        assert_eq!(u, b);
    }
    let l = builtin("whitehead-2-m1", None).unwrap();
    for eps in [0, 1] {
        let (u, b) = compare_at(&l, 12, 7, Some(eps)).unwrap();
        assert_eq!(u, b, "ε={eps}");
    }
}

#[test]
fn refinements_sum_to_plain_value() {
    for name in [
        "fig8-f2",
        "whitehead-2-m1",
        "lens-2-1",
        "whitehead-m1-m4",
        "lens-b-1",
    ] {
        let b = (name == "lens-b-1").then_some(-8);
        let l = builtin(name, b).unwrap();
        for n in [8u32, 12, 16, 20, 24] {
            let root = RootSpec::new(n, 1).unwrap();
            let Ok(plain) = evaluate(&l, root, None) else {
                continue;
            };
            let parts: Vec<CycElt> = (0..2)
                .map(|e| evaluate(&l, root, Some(e)).unwrap())
                .collect();
            assert_eq!(&parts[0] + &parts[1], plain, "{name} N={n}");
        }
    }
}

#[test]
fn refined_values_against_brute_force() {
    for (name, n) in [
        ("fig8-f2", 8u32),
        ("whitehead-2-m1", 12),
        ("fig8-f2", 20),
        ("whitehead-m1-m4", 24),
    ] {
        let l = builtin(name, None).unwrap();
        for eps in [0, 1] {
            let (u, b) = compare_at(&l, n, 1, Some(eps)).unwrap();
            assert_eq!(u, b, "{name} N={n} ε={eps}");
        }
    }
}

#[test]
fn spin_refinements_are_integral_after_one_minus_v() {
    let l = builtin("fig8-f2", None).unwrap();
    for n in [8u32, 16, 24, 32] {
        let root = RootSpec::new(n, 1).unwrap();
        for eps in [0, 1] {
            let x = evaluate(&l, root, Some(eps)).unwrap();
            let one_minus_v = &CycElt::one(root) - &CycElt::root_power(root, 1);
            assert!((&one_minus_v * &x).is_algebraic_integer(), "N={n} ε={eps}");
        }
    }
}

#[test]
fn integrality_counterexamples() {
    // τ'_{L(2,1),σ₀} at N = 12 is (3 + √3)/2
    let l = builtin("lens-2-1", None).unwrap();
    let x = evaluate(&l, RootSpec::new(12, 1).unwrap(), Some(0)).unwrap();
    let (re, im) = x.to_complex();
    assert!((re - (3.0 + 3f64.sqrt()) / 2.0).abs() < 1e-12 && im.abs() < 1e-12);
    assert!(!x.is_algebraic_integer());
    // τ'_{L(−4,1),σ₀} at q = i is (1 + i)/2
    let l = builtin("lens-b-1", Some(-4)).unwrap();
    let amb = Ambient::for_q_order(4, 1).unwrap();
    let x = evaluate_at(&l, &amb, Some(0)).unwrap();
    let i = amb.imaginary_unit().unwrap();
    let half = BigRational::new(1.into(), 2.into());
    assert_eq!(x, (&amb.one() + &i).scale(&half));
}

#[test]
fn plain_values_are_integral() {
    for name in BUILTIN_NAMES {
        let b = (*name == "lens-b-1").then_some(-4);
        let l = builtin(name, b).unwrap();
        for n in [3u32, 5, 7, 8, 9, 12, 16] {
            if let Ok(x) = evaluate(&l, RootSpec::new(n, 1).unwrap(), None) {
                assert!(x.is_algebraic_integer(), "{name} N={n}");
            }
        }
    }
}

#[test]
fn theorem_le_matches_state_sums() {
    let knots = [
        CyclotomicKnot::unknot(),
        CyclotomicKnot::right_trefoil(),
        CyclotomicKnot::left_trefoil(),
        CyclotomicKnot::figure_eight(),
    ];
    let mut compared = 0;
    for r in 2..=24u32 {
        let amb = Ambient::for_q_order(r, 1).unwrap();
        for b in [1i64, -1, 2, -2] {
            for k in &knots {
                let Ok(value) = theorem_le_eval(k, b, &amb) else {
                    continue;
                };
                let l = SurgeryPresentation::knot(k.clone(), b);
                let brute = normalized_wrt(
                    &l,
                    &amb,
                    Variant::for_r(r),
                    None,
                    NormalizerKind::None,
                    SumRange::FullPeriod,
                )
                .unwrap();
                assert_eq!(value, brute, "r={r} b={b}");
                compared += 1;
            }
        }
    }
    assert_eq!(compared, 280);
}

#[test]
fn general_b_example() {
    let l = builtin("whitehead-m1-m4", None).unwrap();
    let amb = Ambient::for_q_order(8, 1).unwrap();
    let x0 = general_b_eval(&l, Some(0), &amb).unwrap();
    let x1 = general_b_eval(&l, Some(1), &amb).unwrap();
    assert_eq!(&x0 + &x1, general_b_eval(&l, None, &amb).unwrap());
    let odd = Ambient::for_q_order(5, 1).unwrap();
    assert!(matches!(
        general_b_eval(&l, Some(0), &odd),
        Err(InvariantError::Refinement(_))
    ));
    let excluded = Ambient::for_q_order(2, 1).unwrap();
    assert!(general_b_eval(&l, None, &excluded).is_err());
}

#[test]
fn taylor_expansions() {
    for name in ["poincare", "fig8-zhs", "left-trefoil-m1"] {
        let e = universal_series(&builtin(name, None).unwrap(), 12).unwrap();
        assert!(
            all_integral(&taylor(&e, Center::One, 12).unwrap()),
            "{name}"
        );
    }
    for name in ["fig8-f2", "whitehead-2-m1"] {
        let e = universal_series(&builtin(name, None).unwrap(), 24).unwrap();
        let c = taylor(&e, Center::One, 12).unwrap();
        assert!(all_dyadic(&c), "{name}");
        assert!(
            !all_integral(&c),
            "{name}: some coefficient has a power of 2 in the denominator"
        );
        assert!(matches!(
            taylor(&e, Center::MinusOne, 13),
            Err(InvariantError::TruncationTooShort { .. })
        ));
    }
}

#[test]
fn p_adic_congruences() {
    for name in ["poincare", "fig8-f2"] {
        let e = universal_series(&builtin(name, None).unwrap(), 16).unwrap();
        for p in [5u32, 7] {
            for m in 1..=6 {
                assert!(ohtsuki_congruence(&e, p, m).unwrap(), "{name} p={p} m={m}");
            }
        }
    }
}

#[test]
fn manifold_json() {
    let json = r#"{"components":[{"framing":2},{"framing":-1}],"coeffs":{"kind":"builtin","name":"whitehead"}}"#;
    assert_eq!(
        manifold_from_json(json).unwrap(),
        builtin("whitehead-2-m1", None).unwrap()
    );
    let table = r#"{"components":[{"framing":1}],"coeffs":{"kind":"table","entries":[[[0],{"0":"1"}],[[1],{"-2":"-1"}]]}}"#;
    let parsed = manifold_from_json(table);
    assert!(parsed.is_ok() || matches!(parsed, Err(InvariantError::Parse(_))));
    assert!(matches!(
        manifold_from_json(
            r#"{"components":[{"framing":0}],"coeffs":{"kind":"builtin","name":"unknot"}}"#
        ),
        Err(InvariantError::BadFraming(_))
    ));
    assert!(matches!(
        manifold_from_json("[]"),
        Err(InvariantError::Parse(_))
    ));
    assert!(matches!(
        builtin("nope", None),
        Err(InvariantError::UnknownBuiltin(_))
    ));
}

#[test]
fn classification() {
    assert_eq!(
        classify(&builtin("poincare", None).unwrap()).unwrap(),
        ManifoldKind::Zhs
    );
    assert_eq!(
        classify(&builtin("fig8-f2", None).unwrap()).unwrap(),
        ManifoldKind::M2
    );
    assert_eq!(
        classify(&builtin("whitehead-m1-m4", None).unwrap()).unwrap(),
        ManifoldKind::GeneralB(-4)
    );
    assert_eq!(
        classify(&builtin("lens-b-1", Some(3)).unwrap()).unwrap(),
        ManifoldKind::GeneralB(3)
    );
}

#[test]
fn series_json_round_trip() {
    let e = universal_series(&builtin("whitehead-2-m1", None).unwrap(), 6).unwrap();
    let s = serde_json::to_string(&e).unwrap();
    assert!(s.contains("\"basis\":\"M2\""));
    assert_eq!(serde_json::from_str::<HabiroElem>(&s).unwrap(), e);
}
