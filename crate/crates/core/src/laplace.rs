//! The Laplace transform on the color variable.
//!
//! `L_b` replaces every `q^{aλ}` by `q^{−a²/b}`. For |b| ≤ 2 the image is an
//! honest Laurent monomial. For general b only the value at a root of unity is
//! defined, and the parity transforms `L^ε_b` follow closed-form case tables.
//! The oracle computes the defining Gauss-sum quotient directly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::cyclo::{gauss_sum, Ambient, CycElt, Parity, PowerSum, SumRange};
use crate::laurent::{BiLaurent, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaplaceError {
    #[error("Laplace transform excluded for b = {b}, r = {r}: t = s + 1")]
    CaseExcluded { b: i64, r: u32 },
    #[error("odd parts of b = {b} and r = {r} are not coprime")]
    NotCoprime { b: i64, r: u32 },
    #[error("b = {0} has no exact small-b Laplace transform (|b| must be 1 or 2)")]
    UnsupportedFraming(i64),
    #[error("b must be nonzero")]
    ZeroFraming,
    #[error("no integral ambient exponent for q^(-{a}²/{b}) at r = {r}")]
    NonIntegralExponent { b: i64, r: u32, a: i64 },
    #[error("Gauss sum γ_(b={b}, r={r}) vanishes")]
    ZeroGaussSum { b: i64, r: u32 },
    #[error("internal table inconsistency: {0}")]
    Internal(String),
}

/// Which branch of the parity tables applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// s ≥ t + 2
    SAboveT,
    /// s = t + 1
    SJustAboveT,
    /// s = t
    SEqualT,
    /// s ≤ t − 2
    SBelowT,
}

/// Split b = 2ᵗc and r = 2ˢd with c, d odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LaplaceCase {
    pub b: i64,
    pub r: u32,
    pub t: u32,
    pub c: i64,
    pub s: u32,
    pub d: u32,
    pub tag: CaseTag,
}

impl LaplaceCase {
    pub fn new(b: i64, r: u32) -> Result<Self, LaplaceError> {
        if b == 0 {
            return Err(LaplaceError::ZeroFraming);
        }
        let t = b.unsigned_abs().trailing_zeros();
        let c = b >> t;
        let s = r.trailing_zeros();
        let d = r >> s;
        if c.unsigned_abs().gcd(&(d as u64)) != 1 {
            return Err(LaplaceError::NotCoprime { b, r });
        }
        let tag = if t == s + 1 {
            return Err(LaplaceError::CaseExcluded { b, r });
        } else if s >= t + 2 {
            CaseTag::SAboveT
        } else if s == t + 1 {
            CaseTag::SJustAboveT
        } else if s == t {
            CaseTag::SEqualT
        } else {
            CaseTag::SBelowT
        };
        Ok(Self {
            b,
            r,
            t,
            c,
            s,
            d,
            tag,
        })
    }
}

/// `L_b` for b ∈ {±1, ±2}: `xᵃ ↦ v^{−2a²/b}`.
pub fn laplace_small(b: i64, p: &BiLaurent) -> Result<LaurentPoly, LaplaceError> {
    if b == 0 {
        return Err(LaplaceError::ZeroFraming);
    }
    if !matches!(b, 1 | -1 | 2 | -2) {
        return Err(LaplaceError::UnsupportedFraming(b));
    }
    let mut out = LaurentPoly::zero();
    for (a, c) in p.terms() {
        out += &c.shift(-2 * a * a / b);
    }
    Ok(out)
}

/// Exponent e with `Aᵉ = ev_r(q^{−a²/b})`, found by completing the square:
/// with b·u ≡ 2a (mod 2r) the λ-shift by u gives A^{−b u²}; for even r a shift
/// by 2w with b·w ≡ a (mod r/2) gives A^{−4 b w²}.
pub fn ev_exponent(b: i64, r: u32, a: i64) -> Option<i64> {
    let r = r as i64;
    for u in 0..2 * r {
        if (b * u - 2 * a).rem_euclid(2 * r) == 0 {
            return Some(-b * u * u);
        }
    }
    if r % 2 == 0 {
        for w in 0..r {
            if (2 * b * w - 2 * a).rem_euclid(r) == 0 {
                return Some(-4 * b * w * w);
            }
        }
    }
    None
}

// Weight classes of the parity tables.
#[derive(Clone, Copy)]
enum Weight {
    Zero,
    One,
    Half,
    MinusHalf,
    /// (1 + σ·I)/2 with σ = ±1
    HalfWithI(i8),
}

fn is_odd_multiple(a: i64, k: u32) -> bool {
    // a = 2^{k−1}·(odd), k ≥ 1
    k >= 1 && {
        let m = 1i64 << (k - 1);
        a % m == 0 && (a / m) % 2 != 0
    }
}

fn is_multiple(a: i64, k: u32) -> bool {
    a % (1i64 << k) == 0
}

/// Parity-table weight of `q^{aλ}` under `L^ε_b`, with `pm` the sign in γ¹ = pm·I·γ⁰ for s = t ≥ 1.
fn parity_weight(case: &LaplaceCase, a: i64, eps: u8, pm: i8) -> Weight {
    let (t, s) = (case.t, case.s);
    let on = |cond: bool| if cond { Weight::One } else { Weight::Zero };
    match case.tag {
        CaseTag::SAboveT => {
            if eps == 1 {
                on(is_odd_multiple(a, t))
            } else {
                on(is_multiple(a, t))
            }
        }
        CaseTag::SJustAboveT => {
            if eps == 0 {
                on(is_odd_multiple(a, t))
            } else {
                on(is_multiple(a, t))
            }
        }
        CaseTag::SEqualT if s == 0 => Weight::Half,
        CaseTag::SEqualT => {
            if is_odd_multiple(a, t) {
                Weight::HalfWithI(if eps == 0 { pm } else { -pm })
            } else if is_multiple(a, t) {
                Weight::HalfWithI(if eps == 0 { -pm } else { pm })
            } else {
                Weight::Zero
            }
        }
        CaseTag::SBelowT => {
            if is_multiple(a, s) {
                Weight::Half
            } else if is_odd_multiple(a, s) {
                if eps == 0 {
                    Weight::Half
                } else {
                    Weight::MinusHalf
                }
            } else {
                Weight::Zero
            }
        }
    }
}

/// Sign σ with γ¹_{b,r} = σ·I·γ⁰_{b,r} (full-period parity sums).
pub fn parity_gauss_sign(b: i64, amb: &Ambient) -> Result<i8, LaplaceError> {
    let i = amb
        .imaginary_unit()
        .ok_or_else(|| LaplaceError::Internal("no imaginary unit in the ambient field".into()))?;
    let g0 = gauss_sum(b, amb, Parity::Even, SumRange::FullPeriod);
    let g1 = gauss_sum(b, amb, Parity::Odd, SumRange::FullPeriod);
    let ig0 = &i * &g0;
    if g1 == ig0 {
        Ok(1)
    } else if g1 == -ig0 {
        Ok(-1)
    } else {
        Err(LaplaceError::Internal(format!(
            "γ¹/γ⁰ ∉ {{±I}} for b = {b}, r = {}",
            amb.r()
        )))
    }
}

/// `ev_r(L^ε_b(P))` via the closed-form case tables; `Parity::All` sums both parities.
pub fn laplace_eval(
    b: i64,
    amb: &Ambient,
    p: &BiLaurent,
    parity: Parity,
) -> Result<CycElt, LaplaceError> {
    let r = amb.r();
    let case = LaplaceCase::new(b, r)?;
    let pm = if case.tag == CaseTag::SEqualT && case.s >= 1 {
        parity_gauss_sign(b, amb)?
    } else {
        1
    };
    let spec = amb.spec();
    let v_exp = amb.v_exp();
    // accumulators for weights 1, 1/2, (1+I)/2, (1−I)/2
    let mut acc_one = PowerSum::new(spec);
    let mut acc_half = PowerSum::new(spec);
    let mut acc_plus = PowerSum::new(spec);
    let mut acc_minus = PowerSum::new(spec);
    let parities: &[u8] = match parity {
        Parity::All => &[0, 1],
        Parity::Even => &[0],
        Parity::Odd => &[1],
    };
    for (a, c) in p.terms() {
        let mut exp = None;
        for &eps in parities {
            let w = parity_weight(&case, a, eps, pm);
            if matches!(w, Weight::Zero) {
                continue;
            }
            let e = match exp {
                Some(e) => e,
                None => {
                    let e = ev_exponent(b, r, a).ok_or(LaplaceError::NonIntegralExponent {
                        b,
                        r,
                        a,
                    })?;
                    let e = amb.a_exp_of(e);
                    exp = Some(e);
                    e
                }
            };
            match w {
                Weight::Zero => {}
                Weight::One => acc_one.add_poly_shifted(c, v_exp, e),
                Weight::Half => acc_half.add_poly_shifted(c, v_exp, e),
                Weight::MinusHalf => acc_half.add_poly_shifted(&-c, v_exp, e),
                Weight::HalfWithI(1) => acc_plus.add_poly_shifted(c, v_exp, e),
                Weight::HalfWithI(_) => acc_minus.add_poly_shifted(c, v_exp, e),
            }
        }
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut out = acc_one.finish() + acc_half.finish().scale(&half);
    let plus = acc_plus.finish();
    let minus = acc_minus.finish();
    if !plus.is_zero() || !minus.is_zero() {
        let i = amb.imaginary_unit().ok_or_else(|| {
            LaplaceError::Internal("no imaginary unit in the ambient field".into())
        })?;
        let one = amb.one();
        let w_plus = (&one + &i).scale(&half);
        let w_minus = (&one - &i).scale(&half);
        out = out + w_plus * plus + w_minus * minus;
    }
    Ok(out)
}

/// Numerator and Gauss sum of the defining quotient
/// `(1/γ_{b,r}) Σ_{λ ≡ ε} q^{b(λ²−1)/4} P(q^λ)`.
pub fn laplace_oracle_parts(
    b: i64,
    amb: &Ambient,
    p: &BiLaurent,
    parity: Parity,
    range: SumRange,
) -> (CycElt, CycElt) {
    let spec = amb.spec();
    let v_exp = amb.v_exp();
    let mut num = PowerSum::new(spec);
    for l in range.colors(amb.r(), parity) {
        for (a, c) in p.terms() {
            num.add_poly_shifted(c, v_exp, amb.a_exp_of(b * (l * l - 1) + 4 * a * l));
        }
    }
    (num.finish(), gauss_sum(b, amb, Parity::All, range))
}

/// The defining Gauss-sum quotient; the reference every closed form is checked against.
pub fn laplace_oracle(
    b: i64,
    amb: &Ambient,
    p: &BiLaurent,
    parity: Parity,
    range: SumRange,
) -> Result<CycElt, LaplaceError> {
    let (num, gamma) = laplace_oracle_parts(b, amb, p, parity, range);
    if gamma.is_zero() {
        return Err(LaplaceError::ZeroGaussSum { b, r: amb.r() });
    }
    Ok(num.div(&gamma).expect("nonzero Gauss sum"))
}

/// Checks the table against the oracle on the monomial `xᵃ` without a field division.
pub fn table_matches_oracle(
    b: i64,
    amb: &Ambient,
    a: i64,
    parity: Parity,
) -> Result<bool, LaplaceError> {
    let mono = BiLaurent::x_monomial(a, LaurentPoly::one());
    let table = laplace_eval(b, amb, &mono, parity)?;
    let (num, gamma) = laplace_oracle_parts(b, amb, &mono, parity, SumRange::FullPeriod);
    if gamma.is_zero() {
        return Err(LaplaceError::ZeroGaussSum { b, r: amb.r() });
    }
    Ok(table * gamma == num)
}
