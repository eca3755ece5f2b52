use qlap::laurent::{BiLaurent, LaurentError, LaurentPoly, Substitution};

fn v(e: i64) -> LaurentPoly {
    LaurentPoly::v_pow(e)
}

fn one() -> LaurentPoly {
    LaurentPoly::one()
}

#[test]
fn products() {
    assert_eq!(&(&one() - &v(1)) * &(&one() + &v(1)), &one() - &v(2));
    let lhs = &(&one() - &LaurentPoly::q_pow(2)) * &(&one() - &LaurentPoly::q_pow(3));
    assert_eq!(
        lhs,
        LaurentPoly::from_terms([(0, 1), (4, -1), (6, -1), (10, 1)])
    );
}

#[test]
fn additive_identity() {
    let f = BiLaurent::one()
        .mul_one_minus(1, &one())
        .mul_one_minus(-1, &one());
    assert_eq!(&f + &BiLaurent::zero(), f);
    assert_eq!(f.coeff(0), LaurentPoly::constant(2));
    assert_eq!(f.coeff(1), LaurentPoly::constant(-1));
    assert_eq!(f.coeff(-1), LaurentPoly::constant(-1));
}

#[test]
fn substitutions() {
    assert_eq!(
        (&one() + &v(3)).substitute(Substitution::NegateV),
        &one() - &v(3)
    );
    assert_eq!(v(2).substitute(Substitution::InvertV), v(-2));
    assert_eq!(
        (&v(1) + &v(-2)).substitute(Substitution::PowerV(3)),
        &v(3) + &v(-6)
    );
}

#[test]
fn exact_division() {
    assert_eq!(
        (&one() - &LaurentPoly::q_pow(1))
            .divide_exact(&(&one() - &v(1)))
            .unwrap(),
        &one() + &v(1)
    );
    let num = &(&one() - &LaurentPoly::q_pow(2)) * &(&one() - &LaurentPoly::q_pow(3));
    let quot = num
        .divide_exact(&(&one() - &LaurentPoly::q_pow(1)))
        .unwrap();
    assert_eq!(
        quot,
        &(&one() + &LaurentPoly::q_pow(1)) * &(&one() - &LaurentPoly::q_pow(3))
    );
    assert!(matches!(
        (&one() - &v(3)).divide_exact(&(&one() - &v(2))),
        Err(LaurentError::NotDivisible)
    ));
}

#[test]
fn color_specialization() {
    let f0 = BiLaurent::one()
        .mul_one_minus(1, &one())
        .mul_one_minus(-1, &one());
    assert!(f0.color_specialize(0).is_zero());
    let expect = &(&LaurentPoly::constant(2) - &LaurentPoly::q_pow(1)) - &LaurentPoly::q_pow(-1);
    assert_eq!(f0.color_specialize(1), expect);
    assert_eq!(BiLaurent::x_monomial(3, one()).color_specialize(2), v(12));
}

#[test]
fn evaluation_at_plus_minus_one() {
    let p = LaurentPoly::from_terms([(-3, 2), (0, 5), (1, -1)]);
    assert_eq!(p.value_at_one(), 6.into());
    assert_eq!(p.value_at_minus_one(), 4.into());
}

#[test]
fn json_round_trip() {
    let p = LaurentPoly::from_terms([(-3, 2), (0, 5), (7, -1)]);
    let s = serde_json::to_string(&p).unwrap();
    assert_eq!(serde_json::from_str::<LaurentPoly>(&s).unwrap(), p);
    assert!(serde_json::from_str::<LaurentPoly>("\"not a poly\"").is_err());
}
