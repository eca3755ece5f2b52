//! q-series building blocks: Pochhammer symbols, quantum integers,
//! q-binomials, the color polynomials F_k and the basis products of the
//! universal series.

use num_bigint::BigInt;
use thiserror::Error;

use crate::laurent::{BiLaurent, LaurentError, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QkitError {
    #[error("quotient is not exact: {0}")]
    NotDivisible(&'static str),
    #[error("index out of range: {0}")]
    OutOfRange(String),
}

fn one() -> LaurentPoly {
    LaurentPoly::one()
}

fn q(e: i64) -> LaurentPoly {
    LaurentPoly::q_pow(e)
}

fn exact(a: &LaurentPoly, b: &LaurentPoly, what: &'static str) -> Result<LaurentPoly, QkitError> {
    a.divide_exact(b).map_err(|e| match e {
        LaurentError::NotDivisible | LaurentError::DivisionByZero => QkitError::NotDivisible(what),
        LaurentError::Parse(_) => unreachable!(),
    })
}

/// `1 − qᵉ`
pub fn one_minus_q(e: i64) -> LaurentPoly {
    &one() - &q(e)
}

/// `(qᵐ)ₙ = ∏_{i<n} (1 − q^{m+i})`
pub fn pochhammer(m: i64, n: u32) -> LaurentPoly {
    (0..n as i64).map(|i| one_minus_q(m + i)).product()
}

/// `(q)ₙ`
pub fn q_factorial(n: u32) -> LaurentPoly {
    pochhammer(1, n)
}

/// Balanced quantum integer `[n] = (vⁿ − v⁻ⁿ)/(v − v⁻¹)`.
pub fn qint(n: i64) -> LaurentPoly {
    if n == 0 {
        return LaurentPoly::zero();
    }
    let sign = n.signum();
    let m = n.abs();
    let p = LaurentPoly::from_terms((0..m).map(|i| (m - 1 - 2 * i, 1)));
    if sign < 0 {
        -p
    } else {
        p
    }
}

/// `{n} = vⁿ − v⁻ⁿ`
pub fn brace(n: i64) -> LaurentPoly {
    &LaurentPoly::v_pow(n) - &LaurentPoly::v_pow(-n)
}

/// Balanced factorial `[n]! = [1][2]…[n]`.
pub fn balanced_factorial(n: u32) -> LaurentPoly {
    (1..=n as i64).map(qint).product()
}

/// Gaussian binomial `(q)ₙ / ((q)ₖ (q)_{n−k})` in q.
pub fn qbinom(n: u32, k: u32) -> Result<LaurentPoly, QkitError> {
    if k > n {
        return Err(QkitError::OutOfRange(format!("qbinom({n}, {k})")));
    }
    let den = &q_factorial(k) * &q_factorial(n - k);
    exact(&q_factorial(n), &den, "q-binomial")
}

/// Balanced binomial `[a]! / ([b]! [a−b]!)` in v.
pub fn balanced_binom(a: u32, b: u32) -> Result<LaurentPoly, QkitError> {
    if b > a {
        return Err(QkitError::OutOfRange(format!("balanced_binom({a}, {b})")));
    }
    let den = &balanced_factorial(b) * &balanced_factorial(a - b);
    exact(&balanced_factorial(a), &den, "balanced binomial")
}

/// `S(n,k) = {n−k}{n−k+1}…{n+k} / {n}` for 0 ≤ k < n.
pub fn s_nk(n: i64, k: i64) -> Result<LaurentPoly, QkitError> {
    if n < 1 || k < 0 || k >= n {
        return Err(QkitError::OutOfRange(format!(
            "S({n}, {k}) needs 0 ≤ k < n"
        )));
    }
    let num: LaurentPoly = (n - k..=n + k).map(brace).product();
    exact(&num, &brace(n), "S(n,k)")
}

/// Coefficient `(−1)^{n−1−k} [n+k choose n−1−k]` of the basis change.
pub fn basis_change_coeff(n: u32, k: u32) -> Result<LaurentPoly, QkitError> {
    if n < 1 || k > n - 1 {
        return Err(QkitError::OutOfRange(format!(
            "basis_change_coeff({n}, {k})"
        )));
    }
    let c = balanced_binom(n + k, n - 1 - k)?;
    Ok(if (n - 1 - k).is_multiple_of(2) { c } else { -c })
}

/// `F_k = (x)_{k+1} (x⁻¹)_{k+1}` with x = q^λ, i.e. ∏_{i≤k} (1 − x qⁱ)(1 − x⁻¹ qⁱ).
pub fn f_poly(k: u32) -> BiLaurent {
    let mut p = BiLaurent::one();
    for i in 0..=k as i64 {
        p = p.mul_one_minus(1, &q(i));
        p = p.mul_one_minus(-1, &q(i));
    }
    p
}

/// `(q^{1+n})ₖ (q^{1−n})ₖ`, the color factor of the cyclotomic expansion.
pub fn color_factor(n: i64, k: u32) -> LaurentPoly {
    &pochhammer(1 + n, k) * &pochhammer(1 - n, k)
}

/// `(−v²;−v)_{2k} = ∏_{i=2}^{2k+1} (1 + (−v)ⁱ)`
pub fn neg_v_product(k: u32) -> LaurentPoly {
    (2..=2 * k as i64 + 1)
        .map(|i| LaurentPoly::from_terms([(0, 1), (i, if i % 2 == 0 { 1 } else { -1 })]))
        .product()
}

/// The factored form `(1−v³)(1−v⁵)…(1−v^{2k+1})·(1+q)…(1+qᵏ)`.
pub fn neg_v_product_factored(k: u32) -> LaurentPoly {
    let odd: LaurentPoly = (1..=k as i64)
        .map(|i| &one() - &LaurentPoly::v_pow(2 * i + 1))
        .product();
    let even: LaurentPoly = (1..=k as i64).map(|i| &one() + &q(i)).product();
    &odd * &even
}

/// `ωₙ = (q^{n+1})_{n+1} / (1 − q)`, the ZHS basis element.
pub fn zhs_basis(n: u32) -> LaurentPoly {
    exact(
        &pochhammer(n as i64 + 1, n + 1),
        &one_minus_q(1),
        "zhs basis",
    )
    .expect("(q^{n+1})_{n+1} is divisible by 1 − q")
}

/// `(q^{k+1})_{k+1} / (q^{k₀+1})_{k₀+1} = ∏_{i=k₀+1}^{k} (1 + qⁱ)(1 − q^{2i+1})` for k₀ ≤ k.
pub fn shell_ratio(k0: u32, k: u32) -> LaurentPoly {
    assert!(k0 <= k);
    (k0 as i64 + 1..=k as i64)
        .map(|i| &(&one() + &q(i)) * &one_minus_q(2 * i + 1))
        .product()
}

/// `∏_{i=k₀+1}^{k} (1 + v^{2i+1})`, the M2 shell factor.
pub fn plus_odd_product(k0: u32, k: u32) -> LaurentPoly {
    (k0 as i64 + 1..=k as i64)
        .map(|i| &one() + &LaurentPoly::v_pow(2 * i + 1))
        .product()
}

/// `[n]² (1 − q) (q^{1+n})ₖ (q^{1−n})ₖ / (q^{k+1})_{k+1}`, one component's share of Q_L.
///
/// The quotient is exact because ∏_{j=n−k}^{n+k} (1 − qʲ) is divisible by (q)_{2k+1}.
pub fn link_color_factor(n: i64, k: u32) -> Result<LaurentPoly, QkitError> {
    let cf = color_factor(n, k);
    if cf.is_zero() {
        return Ok(LaurentPoly::zero());
    }
    let num = &(&qint(n) * &qint(n)) * &(&one_minus_q(1) * &cf);
    exact(&num, &pochhammer(k as i64 + 1, k + 1), "link color factor")
}

/// `(−1)ᵏ q^{−k(k+3)/2}`, the +1-framed component factor.
pub fn plus_one_factor(k: u32) -> LaurentPoly {
    let k = k as i64;
    LaurentPoly::monomial(-k * (k + 3), if k % 2 == 0 { 1 } else { -1 })
}

/// Value of a q-polynomial at q = 1 (v = 1).
pub fn at_q_one(p: &LaurentPoly) -> BigInt {
    p.value_at_one()
}
