//! Sparse Laurent polynomials in `v` (with `q = v²`) and in the pair `(x, v)`
//! where `x = q^λ` is the color variable.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("divisor does not divide dividend exactly")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("malformed polynomial JSON: {0}")]
    Parse(String),
}

fn add_exp(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("Laurent exponent overflow")
}

fn mul_exp(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("Laurent exponent overflow")
}

/// Substitution rules on the variable `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Substitution {
    /// v ↦ −v
    NegateV,
    /// v ↦ v⁻¹
    InvertV,
    /// v ↦ vᵐ, m ≠ 0
    PowerV(i64),
}

/// Element of Z[v, v⁻¹] in canonical sparse form (no zero coefficients).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Self::monomial(0, c)
    }

    /// `c·vᵉ`
    pub fn monomial<T: Into<BigInt>>(e: i64, c: T) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// `vᵉ`
    pub fn v_pow(e: i64) -> Self {
        Self::monomial(e, 1)
    }

    /// `qᵉ = v^{2e}`
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(mul_exp(2, e), 1)
    }

    pub fn from_terms<I, T>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, T)>,
        T: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// True when only even powers of v occur, i.e. the polynomial lies in Z[q^{±1}].
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }

    /// Multiplication by `vᵉ`.
    pub fn shift(&self, e: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (add_exp(*k, e), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, x)| (*k, x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn substitute(&self, rule: Substitution) -> Self {
        match rule {
            Substitution::NegateV => Self {
                terms: self
                    .terms
                    .iter()
                    .map(|(e, c)| (*e, if e % 2 == 0 { c.clone() } else { -c }))
                    .collect(),
            },
            Substitution::InvertV => Self {
                terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
            },
            Substitution::PowerV(m) => {
                assert!(m != 0, "v ↦ v^0 is not a valid substitution");
                Self {
                    terms: self
                        .terms
                        .iter()
                        .map(|(e, c)| (mul_exp(*e, m), c.clone()))
                        .collect(),
                }
            }
        }
    }

    /// Value at v = 1.
    pub fn value_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Value at v = −1.
    pub fn value_at_minus_one(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| if e % 2 == 0 { c.clone() } else { -c })
            .sum()
    }

    /// Exact quotient `self / divisor` in Z[v^{±1}].
    pub fn divide_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        let (Some(blo), Some(bhi)) = (divisor.min_exp(), divisor.max_exp()) else {
            return Err(LaurentError::DivisionByZero);
        };
        let (Some(alo), Some(ahi)) = (self.min_exp(), self.max_exp()) else {
            return Ok(Self::zero());
        };
        if ahi - alo < bhi - blo {
            return Err(LaurentError::NotDivisible);
        }
        let mut rem: Vec<BigInt> = vec![BigInt::zero(); (ahi - alo + 1) as usize];
        for (e, c) in &self.terms {
            rem[(e - alo) as usize] = c.clone();
        }
        let dense_b: Vec<(usize, &BigInt)> = divisor
            .terms
            .iter()
            .map(|(e, c)| ((e - blo) as usize, c))
            .collect();
        let lead = &divisor.terms[&bhi];
        let width = (bhi - blo) as usize;
        let mut quotient = Self::zero();
        let mut top = rem.len() - 1;
        while top >= width {
            if !rem[top].is_zero() {
                let (m, r) = rem[top].div_rem(lead);
                if !r.is_zero() {
                    return Err(LaurentError::NotDivisible);
                }
                let base = top - width;
                for (off, c) in &dense_b {
                    rem[base + off] -= &m * *c;
                }
                quotient.add_term(alo + base as i64 - blo, m);
            }
            if top == 0 {
                break;
            }
            top -= 1;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(LaurentError::NotDivisible);
        }
        Ok(quotient)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            match (*e, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "v")?,
                (1, false) => write!(f, "{abs}*v")?,
                (_, true) => write!(f, "v^{e}")?,
                (_, false) => write!(f, "{abs}*v^{e}")?,
            }
        }
        Ok(())
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let (Some(alo), Some(ahi), Some(blo), Some(bhi)) =
            (self.min_exp(), self.max_exp(), rhs.min_exp(), rhs.max_exp())
        else {
            return LaurentPoly::zero();
        };
        let span = (ahi - alo) as usize + (bhi - blo) as usize + 1;
        let dense_product = self.terms.len().saturating_mul(rhs.terms.len()) > span;
        if dense_product {
            let mut acc = vec![BigInt::zero(); span];
            for (ea, ca) in &self.terms {
                for (eb, cb) in &rhs.terms {
                    acc[(ea - alo + eb - blo) as usize] += ca * cb;
                }
            }
            let base = add_exp(alo, blo);
            LaurentPoly {
                terms: acc
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (base + i as i64, c))
                    .collect(),
            }
        } else {
            let mut out = LaurentPoly::zero();
            for (ea, ca) in &self.terms {
                for (eb, cb) in &rhs.terms {
                    out.add_term(add_exp(*ea, *eb), ca * cb);
                }
            }
            out
        }
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident :: $m:ident),*) => {$(
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty { (&self).$m(&rhs) }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &$ty) -> $ty { (&self).$m(rhs) }
        }
        impl $tr<$ty> for &$ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty { self.$m(&rhs) }
        }
    )*};
}

forward_owned!(LaurentPoly, Add::add, Sub::sub, Mul::mul);

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        let mut acc = LaurentPoly::zero();
        for p in iter {
            acc += &p;
        }
        acc
    }
}

impl std::iter::Product for LaurentPoly {
    fn product<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        let mut acc = LaurentPoly::one();
        for p in iter {
            acc = &acc * &p;
        }
        acc
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    var: String,
    terms: Vec<(i64, String)>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LaurentRepr {
            var: "v".into(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.to_string()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = LaurentRepr::deserialize(d)?;
        LaurentPoly::try_from(repr).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<LaurentRepr> for LaurentPoly {
    type Error = LaurentError;
    fn try_from(repr: LaurentRepr) -> Result<Self, LaurentError> {
        if repr.var != "v" {
            return Err(LaurentError::Parse(format!(
                "expected var \"v\", got {:?}",
                repr.var
            )));
        }
        let mut p = LaurentPoly::zero();
        for (e, c) in repr.terms {
            let c: BigInt = c
                .parse()
                .map_err(|_| LaurentError::Parse(format!("bad coefficient {c:?}")))?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

/// Laurent polynomial in the color variable `x = q^λ` with coefficients in Z[v^{±1}].
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BiLaurent {
    terms: BTreeMap<i64, LaurentPoly>,
}

impl BiLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(LaurentPoly::one())
    }

    pub fn constant(c: LaurentPoly) -> Self {
        Self::x_monomial(0, c)
    }

    /// `c(v)·xᵃ`
    pub fn x_monomial(a: i64, c: LaurentPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(a, c);
        }
        Self { terms }
    }

    pub fn add_term(&mut self, a: i64, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(a).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&a);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &LaurentPoly)> + '_ {
        self.terms.iter().map(|(a, c)| (*a, c))
    }

    pub fn coeff(&self, a: i64) -> LaurentPoly {
        self.terms.get(&a).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of (x-exponent, v-exponent) monomials.
    pub fn num_monomials(&self) -> usize {
        self.terms.values().map(LaurentPoly::num_terms).sum()
    }

    /// Sets λ = m, i.e. x ↦ v^{2m}.
    pub fn color_specialize(&self, m: i64) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (a, c) in &self.terms {
            out += &c.shift(mul_exp(2, mul_exp(*a, m)));
        }
        out
    }

    /// x ↦ x⁻¹
    pub fn invert_x(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(a, c)| (-a, c.clone())).collect(),
        }
    }

    /// Applies a substitution to every coefficient, leaving x alone.
    pub fn substitute_v(&self, rule: Substitution) -> Self {
        let mut out = Self::zero();
        for (a, c) in &self.terms {
            out.add_term(*a, &c.substitute(rule));
        }
        out
    }

    /// Multiplication by `(1 − c·xᵃ)`, the building block of Pochhammer products in x.
    pub fn mul_one_minus(&self, a: i64, c: &LaurentPoly) -> Self {
        let mut out = self.clone();
        for (k, p) in &self.terms {
            out.add_term(add_exp(*k, a), &-(p * c));
        }
        out
    }
}

impl fmt::Debug for BiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(a, c)| format!("({c})*x^{a}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl AddAssign<&BiLaurent> for BiLaurent {
    fn add_assign(&mut self, rhs: &BiLaurent) {
        for (a, c) in &rhs.terms {
            self.add_term(*a, c);
        }
    }
}

impl Add for &BiLaurent {
    type Output = BiLaurent;
    fn add(self, rhs: &BiLaurent) -> BiLaurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &BiLaurent {
    type Output = BiLaurent;
    fn sub(self, rhs: &BiLaurent) -> BiLaurent {
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(*a, &-c);
        }
        out
    }
}

impl Mul for &BiLaurent {
    type Output = BiLaurent;
    fn mul(self, rhs: &BiLaurent) -> BiLaurent {
        let mut out = BiLaurent::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(add_exp(*a, *b), &(ca * cb));
            }
        }
        out
    }
}

forward_owned!(BiLaurent, Add::add, Sub::sub, Mul::mul);

#[derive(Serialize, Deserialize)]
struct BiLaurentRepr {
    var: String,
    terms: Vec<(i64, LaurentPoly)>,
}

impl Serialize for BiLaurent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BiLaurentRepr {
            var: "x".into(),
            terms: self.terms.iter().map(|(a, c)| (*a, c.clone())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiLaurent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = BiLaurentRepr::deserialize(d)?;
        if repr.var != "x" {
            return Err(serde::de::Error::custom(format!(
                "expected var \"x\", got {:?}",
                repr.var
            )));
        }
        let mut out = BiLaurent::zero();
        for (a, c) in repr.terms {
            out.add_term(a, &c);
        }
        Ok(out)
    }
}
