use qlap::cyclo::Ambient;
use qlap::laurent::{BiLaurent, LaurentPoly};
use qlap::qkit::*;

fn q(e: i64) -> LaurentPoly {
    LaurentPoly::q_pow(e)
}

fn one_minus(p: LaurentPoly) -> LaurentPoly {
    &LaurentPoly::one() - &p
}

fn one_plus(p: LaurentPoly) -> LaurentPoly {
    &LaurentPoly::one() + &p
}

#[test]
fn pochhammer_values() {
    assert_eq!(pochhammer(1, 1), one_minus(q(1)));
    assert_eq!(pochhammer(2, 2), &one_minus(q(2)) * &one_minus(q(3)));
    for n in 0..=25u32 {
        assert!(pochhammer(n as i64 + 1, n + 1)
            .divide_exact(&one_minus(q(1)))
            .is_ok());
    }
}

#[test]
fn pochhammer_vanishes_at_roots() {
    for r in 1..=12u32 {
        let amb = Ambient::for_q_order(r, 1).unwrap();
        for n in r - 1..r + 3 {
            assert!(
                amb.eval_v(&pochhammer(n as i64 + 1, n + 1)).is_zero(),
                "r={r} n={n}"
            );
        }
        assert!(!amb.eval_v(&pochhammer(1, r - 1)).is_zero(), "r={r}");
    }
}

#[test]
fn f_values() {
    let f0 = f_poly(0);
    let expect = BiLaurent::one()
        .mul_one_minus(1, &LaurentPoly::one())
        .mul_one_minus(-1, &LaurentPoly::one());
    assert_eq!(f0, expect);
    for k in 0..6 {
        let f = f_poly(k);
        assert!(f.color_specialize(0).is_zero());
        assert_eq!(f.invert_x(), f);
    }
}

#[test]
fn neg_v_products() {
    assert!(neg_v_product(0).is_one());
    let v3 = LaurentPoly::v_pow(3);
    assert_eq!(neg_v_product(1), &one_plus(q(1)) * &one_minus(v3));
    for k in 0..=25 {
        assert_eq!(neg_v_product(k), neg_v_product_factored(k));
    }
}

#[test]
fn q_binomials() {
    for n in 0..8 {
        assert!(qbinom(n, 0).unwrap().is_one());
    }
    assert_eq!(qbinom(2, 1).unwrap(), one_plus(q(1)));
    assert!(qbinom(2, 3).is_err());
    assert!(
        balanced_binom(5, 2)
            .unwrap()
            .substitute(qlap::laurent::Substitution::InvertV)
            == balanced_binom(5, 2).unwrap()
    );
}

#[test]
fn alternating_binomial_sums_vanish_at_one() {
    for k in 0..=12u32 {
        let n = 2 * k + 1;
        let s: num_bigint::BigInt = (0..=n)
            .map(|j| at_q_one(&qbinom(n, j).unwrap()) * if j % 2 == 0 { 1 } else { -1 })
            .sum();
        assert_eq!(s, 0.into());
    }
}

#[test]
fn s_nk_and_basis_change() {
    for n in 1..=12 {
        assert!(s_nk(n, 0).unwrap().is_one());
    }
    assert!(basis_change_coeff(1, 0).unwrap().is_one());
    assert!(s_nk(3, 3).is_err());
    // (q^{1+n})_k (q^{1−n})_k (−1)^k q^{−k(k+1)/2}
    for n in 1..=12i64 {
        for k in 0..n {
            let rhs = &(&q(-k * (k + 1) / 2) * &color_factor(n, k as u32))
                .scale(&(if k % 2 == 0 { 1 } else { -1 }).into());
            assert_eq!(s_nk(n, k).unwrap(), rhs.clone(), "n={n} k={k}");
        }
    }
}

#[test]
fn shell_ratio_is_the_plus_product() {
    for k in 0..10 {
        for k0 in 0..=k {
            let lhs = &neg_v_product(k0) * &pochhammer(k as i64 + 1, k + 1);
            let rhs = &(&neg_v_product(k) * &plus_odd_product(k0, k))
                * &pochhammer(k0 as i64 + 1, k0 + 1);
            assert_eq!(lhs, rhs);
        }
    }
}
