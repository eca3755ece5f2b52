//! Exact arithmetic in cyclotomic fields Q(ζ_N), evaluation at roots of unity
//! and quadratic Gauss sums.
//!
//! An element carries its field order `N` and the primitive power `j` of the
//! generator `x = ζ_N^j`; coordinates are taken in the power basis of `x`
//! reduced mod Φ_N. Arithmetic done with the generator as a formal variable
//! is Galois-equivariant, so coordinates do not depend on `j` and `j` only
//! records which complex embedding is meant.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("ζ_{n}^{j} is not a primitive root (gcd(j, N) ≠ 1)")]
    NotPrimitive { n: u32, j: i64 },
    #[error("division by zero in Q(ζ_N)")]
    DivisionByZero,
    #[error("root of order {0} is not admissible here")]
    InadmissibleOrder(u32),
    #[error("operands live in different cyclotomic fields")]
    FieldMismatch,
    #[error("malformed cyclotomic element: {0}")]
    Parse(String),
}

/// The working root ζ_N^j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootSpec {
    order: u32,
    primitive: u32,
}

impl RootSpec {
    pub fn new(order: u32, primitive: i64) -> Result<Self, CycloError> {
        if order == 0 {
            return Err(CycloError::NotPrimitive { n: 0, j: primitive });
        }
        let j = primitive.rem_euclid(order as i64) as u32;
        if j.gcd(&order) != 1 && order != 1 {
            return Err(CycloError::NotPrimitive {
                n: order,
                j: primitive,
            });
        }
        Ok(Self {
            order,
            primitive: j,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn primitive(&self) -> u32 {
        self.primitive
    }

    /// The field generator raised to `e`.
    pub fn power(&self, e: i64) -> CycElt {
        CycElt::root_power(*self, e)
    }
}

/// `make_root(N, j)`
pub fn make_root(order: u32, primitive: i64) -> Result<RootSpec, CycloError> {
    RootSpec::new(order, primitive)
}

struct CycloData {
    phi: usize,
    /// Φ_N, monic, ascending coefficients, length φ(N)+1.
    poly: Vec<i64>,
    /// xᵏ mod Φ_N for 0 ≤ k < N.
    powers: Vec<Vec<i64>>,
}

fn cache() -> &'static Mutex<HashMap<u32, Arc<CycloData>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloData>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cyclotomic_poly(n: u32) -> Vec<i64> {
    // (xⁿ − 1) / ∏_{d | n, d < n} Φ_d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div = data(d).poly.clone();
            num = div_monic(&num, &div);
        }
    }
    num
}

fn div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let dq = rem.len() - 1 - db;
    let mut q = vec![0i64; dq + 1];
    for i in (0..=dq).rev() {
        let c = rem[i + db];
        q[i] = c;
        if c != 0 {
            for (k, bk) in b.iter().enumerate() {
                rem[i + k] = rem[i + k].checked_sub(c.checked_mul(*bk).unwrap()).unwrap();
            }
        }
    }
    debug_assert!(rem.iter().all(|c| *c == 0));
    q
}

fn build(n: u32) -> CycloData {
    let poly = cyclotomic_poly(n);
    let phi = poly.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    if phi == 1 && n == 1 {
        // Φ_1 = x − 1, so x ≡ 1.
        powers.push(cur);
        return CycloData { phi, poly, powers };
    }
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by x and reduce the overflow term with the monic Φ_N
        let top = cur[phi - 1];
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..phi {
                cur[i] = cur[i]
                    .checked_sub(top.checked_mul(poly[i]).unwrap())
                    .unwrap();
            }
        }
    }
    CycloData { phi, poly, powers }
}

fn data(n: u32) -> Arc<CycloData> {
    if let Some(d) = cache().lock().unwrap().get(&n) {
        return d.clone();
    }
    // built outside the lock: construction recurses into smaller orders
    let built = Arc::new(build(n));
    cache().lock().unwrap().entry(n).or_insert(built).clone()
}

/// Euler's totient, the degree of Q(ζ_N).
pub fn phi(n: u32) -> usize {
    data(n).phi
}

/// Integer coefficients of Φ_N in ascending order.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    data(n).poly.clone()
}

/// Element of Q(ζ_N) stored as an integer coordinate vector over a positive common denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycElt {
    spec: RootSpec,
    num: Vec<BigInt>,
    den: BigInt,
}

/// Accumulates Σ cₖ·xᵏ with k taken mod N before a single reduction mod Φ_N.
pub struct PowerSum {
    spec: RootSpec,
    acc: Vec<BigInt>,
}

impl PowerSum {
    pub fn new(spec: RootSpec) -> Self {
        Self {
            spec,
            acc: vec![BigInt::zero(); spec.order as usize],
        }
    }

    pub fn add(&mut self, exp: i64, c: &BigInt) {
        let k = exp.rem_euclid(self.spec.order as i64) as usize;
        self.acc[k] += c;
    }

    pub fn add_int(&mut self, exp: i64, c: i64) {
        let k = exp.rem_euclid(self.spec.order as i64) as usize;
        self.acc[k] += c;
    }

    /// Adds `p(xᵉ)`.
    pub fn add_poly(&mut self, p: &LaurentPoly, e: i64) {
        let n = self.spec.order as i64;
        let e = e.rem_euclid(n);
        for (k, c) in p.terms() {
            let idx = ((k.rem_euclid(n) as i128 * e as i128) % n as i128) as usize;
            self.acc[idx] += c;
        }
    }

    /// Adds `xˢ·p(xᵉ)`.
    pub fn add_poly_shifted(&mut self, p: &LaurentPoly, e: i64, s: i64) {
        let n = self.spec.order as i64;
        let e = e.rem_euclid(n);
        let s = s.rem_euclid(n);
        for (k, c) in p.terms() {
            let idx = ((k.rem_euclid(n) as i128 * e as i128 + s as i128) % n as i128) as usize;
            self.acc[idx] += c;
        }
    }

    pub fn finish(self) -> CycElt {
        CycElt::from_cyclic(self.spec, &self.acc, BigInt::one())
    }
}

impl CycElt {
    pub fn zero(spec: RootSpec) -> Self {
        Self {
            spec,
            num: vec![BigInt::zero(); phi(spec.order)],
            den: BigInt::one(),
        }
    }

    pub fn one(spec: RootSpec) -> Self {
        Self::from_int(spec, 1)
    }

    pub fn from_int<T: Into<BigInt>>(spec: RootSpec, c: T) -> Self {
        let mut z = Self::zero(spec);
        z.num[0] = c.into();
        z
    }

    pub fn from_rational(spec: RootSpec, c: &BigRational) -> Self {
        let mut z = Self::zero(spec);
        z.num[0] = c.numer().clone();
        z.den = c.denom().clone();
        z.normalize();
        z
    }

    /// `xᵉ` where x is the field generator.
    pub fn root_power(spec: RootSpec, e: i64) -> Self {
        let d = data(spec.order);
        let k = e.rem_euclid(spec.order as i64) as usize;
        Self {
            spec,
            num: d.powers[k].iter().map(|c| BigInt::from(*c)).collect(),
            den: BigInt::one(),
        }
    }

    /// Builds an element from rational coordinates in the power basis.
    pub fn from_coords(spec: RootSpec, coords: &[BigRational]) -> Result<Self, CycloError> {
        if coords.len() != phi(spec.order) {
            return Err(CycloError::Parse(format!(
                "expected {} coordinates, got {}",
                phi(spec.order),
                coords.len()
            )));
        }
        let den = coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coords
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut z = Self { spec, num, den };
        z.normalize();
        Ok(z)
    }

    fn from_cyclic(spec: RootSpec, acc: &[BigInt], den: BigInt) -> Self {
        let d = data(spec.order);
        let n = spec.order as usize;
        let mut num = vec![BigInt::zero(); d.phi];
        for (k, c) in acc.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &d.powers[k % n];
            for (i, r) in row.iter().enumerate() {
                if *r != 0 {
                    num[i] += c * *r;
                }
            }
        }
        let mut z = Self { spec, num, den };
        z.normalize();
        z
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            self.den = &self.den / &g;
            for c in &mut self.num {
                *c = &*c / &g;
            }
        }
    }

    pub fn spec(&self) -> RootSpec {
        self.spec
    }

    pub fn order(&self) -> u32 {
        self.spec.order
    }

    pub fn coords(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// All coordinates integral; the power basis of ζ_N is an integral basis of Z[ζ_N].
    pub fn is_algebraic_integer(&self) -> bool {
        self.den.is_one()
    }

    /// True when no coordinate denominator is divisible by `p`, i.e. the element
    /// is integral in Z_(p)[ζ_N].
    pub fn is_p_integral(&self, p: u32) -> bool {
        !self.den.is_multiple_of(&BigInt::from(p))
    }

    /// The common denominator of the coordinates.
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.spec, other.spec, "cyclotomic field mismatch");
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CycloError> {
        if self.spec != other.spec {
            return Err(CycloError::FieldMismatch);
        }
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CycloError> {
        if self.spec != other.spec {
            return Err(CycloError::FieldMismatch);
        }
        Ok(self * other)
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        let mut z = Self {
            spec: self.spec,
            num: self.num.iter().map(|x| x * c).collect(),
            den: self.den.clone(),
        };
        z.normalize();
        z
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut z = Self {
            spec: self.spec,
            num: self.num.iter().map(|x| x * c.numer()).collect(),
            den: &self.den * c.denom(),
        };
        z.normalize();
        z
    }

    /// Multiplication by the generator power `xᵉ`.
    pub fn mul_root_power(&self, e: i64) -> Self {
        let n = self.spec.order as i64;
        let mut acc = vec![BigInt::zero(); n as usize];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                acc[(i as i64 + e).rem_euclid(n) as usize] += c;
            }
        }
        Self::from_cyclic(self.spec, &acc, self.den.clone())
    }

    /// Image under the automorphism x ↦ xᵏ (gcd(k, N) = 1).
    pub fn galois(&self, k: i64) -> Self {
        let n = self.spec.order as i64;
        assert!(k.gcd(&n) == 1 || n == 1, "not an automorphism");
        let mut acc = vec![BigInt::zero(); n as usize];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                acc[(i as i64 * k).rem_euclid(n) as usize] += c;
            }
        }
        Self::from_cyclic(self.spec, &acc, self.den.clone())
    }

    /// Complex conjugation x ↦ x⁻¹.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Embeds into Q(ζ_M) for N | M, mapping the generator to the (M/N)-th power of the target generator.
    pub fn embed(&self, target: RootSpec) -> Result<Self, CycloError> {
        let (n, m) = (self.spec.order, target.order);
        if m % n != 0 || target.primitive % n != self.spec.primitive % n {
            return Err(CycloError::FieldMismatch);
        }
        let step = (m / n) as usize;
        let mut acc = vec![BigInt::zero(); m as usize];
        for (i, c) in self.num.iter().enumerate() {
            acc[(i * step) % m as usize] += c;
        }
        Ok(Self::from_cyclic(target, &acc, self.den.clone()))
    }

    pub fn inverse(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        let d = data(self.spec.order);
        let a: Vec<BigRational> = self
            .num
            .iter()
            .map(|c| BigRational::from(c.clone()))
            .collect();
        let m: Vec<BigRational> = d
            .poly
            .iter()
            .map(|c| BigRational::from(BigInt::from(*c)))
            .collect();
        let s = inverse_mod(&a, &m);
        let mut coords = vec![BigRational::zero(); d.phi];
        for (i, c) in s.into_iter().enumerate() {
            coords[i] = c * BigRational::from(self.den.clone());
        }
        Self::from_coords(self.spec, &coords)
    }

    pub fn div(&self, other: &Self) -> Result<Self, CycloError> {
        if self.spec != other.spec {
            return Err(CycloError::FieldMismatch);
        }
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, CycloError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(self.spec);
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Approximate complex value under x ↦ e^{2πi j/N}; for display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.spec.order as f64;
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let (mut re, mut im) = (0.0, 0.0);
        for (i, c) in self.num.iter().enumerate() {
            let ang = 2.0 * std::f64::consts::PI * (self.spec.primitive as f64) * (i as f64) / n;
            let c = c.to_f64().unwrap_or(f64::NAN) / den;
            re += c * ang.cos();
            im += c * ang.sin();
        }
        (re, im)
    }
}

// Extended Euclid over Q: returns s with a·s ≡ 1 (mod m), m irreducible.
fn inverse_mod(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
    let trim = |p: &mut Vec<BigRational>| {
        while p.len() > 1 && p.last().unwrap().is_zero() {
            p.pop();
        }
    };
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0: Vec<BigRational> = vec![BigRational::zero()];
    let mut s1: Vec<BigRational> = vec![BigRational::one()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let qs1 = poly_mul(&q, &s1);
        let mut s2 = poly_sub(&s0, &qs1);
        trim(&mut s2);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is a nonzero constant
    let c = r0[0].clone();
    s0.into_iter().map(|x| x / &c).collect()
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    if rem.len() <= db {
        return (vec![BigRational::zero()], rem);
    }
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); rem.len() - db];
    for i in (0..q.len()).rev() {
        let c = &rem[i + db] / &lead;
        if !c.is_zero() {
            for (k, bk) in b.iter().enumerate() {
                rem[i + k] -= &c * bk;
            }
        }
        q[i] = c;
    }
    rem.truncate(db.max(1));
    while rem.len() > 1 && rem.last().unwrap().is_zero() {
        rem.pop();
    }
    (q, rem)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

impl Add for &CycElt {
    type Output = CycElt;
    fn add(self, rhs: &CycElt) -> CycElt {
        self.check(rhs);
        let num = if self.den == rhs.den {
            self.num.iter().zip(&rhs.num).map(|(a, b)| a + b).collect()
        } else {
            self.num
                .iter()
                .zip(&rhs.num)
                .map(|(a, b)| a * &rhs.den + b * &self.den)
                .collect()
        };
        let den = if self.den == rhs.den {
            self.den.clone()
        } else {
            &self.den * &rhs.den
        };
        let mut z = CycElt {
            spec: self.spec,
            num,
            den,
        };
        z.normalize();
        z
    }
}

impl Neg for &CycElt {
    type Output = CycElt;
    fn neg(self) -> CycElt {
        CycElt {
            spec: self.spec,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycElt {
    type Output = CycElt;
    fn neg(self) -> CycElt {
        -&self
    }
}

impl Sub for &CycElt {
    type Output = CycElt;
    fn sub(self, rhs: &CycElt) -> CycElt {
        self + &(-rhs)
    }
}

impl Mul for &CycElt {
    type Output = CycElt;
    fn mul(self, rhs: &CycElt) -> CycElt {
        self.check(rhs);
        let n = self.spec.order as usize;
        let mut acc = vec![BigInt::zero(); n];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    acc[(i + j) % n] += a * b;
                }
            }
        }
        CycElt::from_cyclic(self.spec, &acc, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<CycElt> for CycElt {
            type Output = CycElt;
            fn $m(self, rhs: CycElt) -> CycElt { (&self).$m(&rhs) }
        }
        impl $tr<&CycElt> for CycElt {
            type Output = CycElt;
            fn $m(self, rhs: &CycElt) -> CycElt { (&self).$m(rhs) }
        }
        impl $tr<CycElt> for &CycElt {
            type Output = CycElt;
            fn $m(self, rhs: CycElt) -> CycElt { self.$m(&rhs) }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl fmt::Debug for CycElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => format!("{c}"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{i}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(
            f,
            "{} in Q(x), x = ζ_{}^{}",
            parts.join(" + "),
            self.spec.order,
            self.spec.primitive
        )
    }
}

#[derive(Serialize, Deserialize)]
struct CycEltRepr {
    order: u32,
    primitive: u32,
    coords: Vec<String>,
}

impl Serialize for CycElt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycEltRepr {
            order: self.spec.order,
            primitive: self.spec.primitive,
            coords: self.coords().iter().map(ToString::to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycElt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = CycEltRepr::deserialize(d)?;
        let spec =
            RootSpec::new(repr.order, repr.primitive as i64).map_err(serde::de::Error::custom)?;
        let coords = repr
            .coords
            .iter()
            .map(|s| s.parse::<BigRational>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| serde::de::Error::custom(format!("bad coordinate: {e}")))?;
        CycElt::from_coords(spec, &coords).map_err(serde::de::Error::custom)
    }
}

/// `p(v)` at v = ζ_N^j, i.e. at the field generator.
pub fn cyc_eval(p: &LaurentPoly, root: RootSpec) -> CycElt {
    eval_at(p, root, 1)
}

/// `p(xᵉ)` where x generates the field of `root`.
pub fn eval_at(p: &LaurentPoly, root: RootSpec, e: i64) -> CycElt {
    let mut acc = PowerSum::new(root);
    acc.add_poly(p, e);
    acc.finish()
}

/// The fixed imaginary unit x^{N/4} of a field with 4 | N.
pub fn imaginary_unit(root: RootSpec) -> Option<CycElt> {
    root.order
        .is_multiple_of(4)
        .then(|| CycElt::root_power(root, (root.order / 4) as i64))
}

/// Ambient ring for state sums: a root A with q := A⁴ of order r and v := A².
///
/// For even r the field is Q(ζ_{4r}) with A the generator. For odd r the field
/// is Q(ζ_r) and A is the odd-order fourth root of q, so v = q^{(r+1)/2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ambient {
    spec: RootSpec,
    a_exp: i64,
    r: u32,
}

impl Ambient {
    /// Ambient ring for q of order r; `primitive` selects the Galois conjugate.
    pub fn for_q_order(r: u32, primitive: i64) -> Result<Self, CycloError> {
        if r == 0 {
            return Err(CycloError::InadmissibleOrder(0));
        }
        if r.is_multiple_of(2) {
            let spec = RootSpec::new(4 * r, primitive)?;
            Ok(Self { spec, a_exp: 1, r })
        } else {
            // q is the generator; A = q^{1/4} computed mod r
            let spec = RootSpec::new(r, primitive)?;
            let inv4 = if r == 1 {
                0
            } else {
                mod_inverse(4, r as i64).unwrap()
            };
            Ok(Self {
                spec,
                a_exp: inv4,
                r,
            })
        }
    }

    /// Ambient ring whose v := A² is the given root. Orders ≡ 2 (mod 4) are rejected.
    pub fn from_v(v: RootSpec) -> Result<Self, CycloError> {
        let n = v.order;
        if n.is_multiple_of(4) {
            let spec = RootSpec::new(2 * n, v.primitive as i64)?;
            Ok(Self {
                spec,
                a_exp: 1,
                r: n / 2,
            })
        } else if n % 2 == 1 {
            Ok(Self {
                spec: v,
                a_exp: ((n as i64 + 1) / 2) % n as i64,
                r: n,
            })
        } else {
            Err(CycloError::InadmissibleOrder(n))
        }
    }

    pub fn spec(&self) -> RootSpec {
        self.spec
    }

    /// Order of q.
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn field_order(&self) -> u32 {
        self.spec.order
    }

    /// Exponent of A in terms of the field generator.
    pub fn a_exp(&self) -> i64 {
        self.a_exp
    }

    pub fn v_exp(&self) -> i64 {
        (2 * self.a_exp).rem_euclid(self.spec.order as i64)
    }

    pub fn q_exp(&self) -> i64 {
        (4 * self.a_exp).rem_euclid(self.spec.order as i64)
    }

    /// The root spec of v = A² inside this field.
    pub fn v_root(&self) -> RootSpec {
        let n = self.spec.order;
        if self.r.is_multiple_of(2) {
            RootSpec::new(n / 2, self.spec.primitive as i64).unwrap()
        } else {
            self.spec
        }
    }

    /// Aᵉ
    pub fn a_pow(&self, e: i64) -> CycElt {
        CycElt::root_power(self.spec, self.a_exp_of(e))
    }

    /// Field-generator exponent of Aᵉ.
    pub fn a_exp_of(&self, e: i64) -> i64 {
        let n = self.spec.order as i128;
        ((self.a_exp as i128 * e as i128).rem_euclid(n)) as i64
    }

    pub fn eval_v(&self, p: &LaurentPoly) -> CycElt {
        eval_at(p, self.spec, self.v_exp())
    }

    /// The fixed imaginary unit of the ambient field (requires 4 | field order).
    pub fn imaginary_unit(&self) -> Option<CycElt> {
        imaginary_unit(self.spec)
    }

    pub fn zero(&self) -> CycElt {
        CycElt::zero(self.spec)
    }

    pub fn one(&self) -> CycElt {
        CycElt::one(self.spec)
    }
}

pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let e = a.rem_euclid(m).extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

/// Restriction of the color λ by parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    All,
    Even,
    Odd,
}

impl Parity {
    pub fn from_eps(eps: u8) -> Self {
        if eps.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn admits(self, lambda: i64) -> bool {
        match self {
            Parity::All => true,
            Parity::Even => lambda.rem_euclid(2) == 0,
            Parity::Odd => lambda.rem_euclid(2) == 1,
        }
    }
}

/// Summation range for λ in Gauss and state sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SumRange {
    /// λ ∈ [0, 2r): a full period of q^{b(λ²−1)/4} for every b.
    #[default]
    FullPeriod,
    /// λ ∈ [0, r) as displayed in the defining formulas.
    Displayed,
}

impl SumRange {
    pub fn colors(self, r: u32, parity: Parity) -> impl Iterator<Item = i64> {
        let end = match self {
            SumRange::FullPeriod => 2 * r as i64,
            SumRange::Displayed => r as i64,
        };
        (0..end).filter(move |l| parity.admits(*l))
    }
}

/// γ^ε_{b,r} = Σ_λ q^{b(λ²−1)/4} over the chosen range and parity.
pub fn gauss_sum(b: i64, amb: &Ambient, parity: Parity, range: SumRange) -> CycElt {
    let mut acc = PowerSum::new(amb.spec);
    for l in range.colors(amb.r, parity) {
        acc.add_int(amb.a_exp_of(b * (l * l - 1)), 1);
    }
    acc.finish()
}
