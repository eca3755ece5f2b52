//! Cyclotomic knot and link data, universal series, their evaluation at roots
//! of unity, refinements and Taylor expansions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::{eval_at, Ambient, CycElt, CycloError, Parity, RootSpec, SumRange};
use crate::laplace::{laplace_eval, LaplaceCase, LaplaceError};
use crate::laurent::{LaurentPoly, Substitution};
use crate::qkit::{f_poly, neg_v_product, plus_odd_product, plus_one_factor, zhs_basis};
use crate::wrt::{self, NormalizerKind, Refinement, Variant, WrtError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("bad framing: {0}")]
    BadFraming(String),
    #[error("root of order {0} is not admissible")]
    InadmissibleOrder(u32),
    #[error("truncation too short: need {needed} terms, have {have}")]
    TruncationTooShort { needed: usize, have: usize },
    #[error("{0}")]
    Refinement(String),
    #[error("normalizer vanishes")]
    ZeroNormalizer,
    #[error("unknown builtin {0:?}")]
    UnknownBuiltin(String),
    #[error("invalid manifold description: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Laplace(#[from] LaplaceError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Wrt(#[from] WrtError),
}

fn sign(k: u32) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum KnotKind {
    Unknot,
    RightTrefoil,
    LeftTrefoil,
    FigureEight,
    Table(Vec<LaurentPoly>),
}

/// A knot given by its cyclotomic coefficients `C_{K,k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicKnot {
    name: String,
    kind: KnotKind,
}

impl CyclotomicKnot {
    pub fn unknot() -> Self {
        Self::named("unknot", KnotKind::Unknot)
    }

    /// `C_k = q^{−k(k+2)}`
    pub fn right_trefoil() -> Self {
        Self::named("trefoil-right", KnotKind::RightTrefoil)
    }

    /// `C_k = qᵏ`
    pub fn left_trefoil() -> Self {
        Self::named("trefoil-left", KnotKind::LeftTrefoil)
    }

    /// `C_k = (−1)ᵏ q^{−k(k+1)/2}`
    pub fn figure_eight() -> Self {
        Self::named("figure-eight", KnotKind::FigureEight)
    }

    /// Finitely many coefficients; the rest are zero.
    pub fn from_table(name: &str, coeffs: Vec<LaurentPoly>) -> Self {
        Self::named(name, KnotKind::Table(coeffs))
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "unknot" => Some(Self::unknot()),
            "trefoil-right" | "right-trefoil" => Some(Self::right_trefoil()),
            "trefoil-left" | "left-trefoil" => Some(Self::left_trefoil()),
            "figure-eight" | "fig8" => Some(Self::figure_eight()),
            _ => None,
        }
    }

    fn named(name: &str, kind: KnotKind) -> Self {
        Self {
            name: name.to_string(),
            kind,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coeff(&self, k: u32) -> LaurentPoly {
        let ki = k as i64;
        match &self.kind {
            KnotKind::Unknot => {
                if k == 0 {
                    LaurentPoly::one()
                } else {
                    LaurentPoly::zero()
                }
            }
            KnotKind::RightTrefoil => LaurentPoly::q_pow(-ki * (ki + 2)),
            KnotKind::LeftTrefoil => LaurentPoly::q_pow(ki),
            KnotKind::FigureEight => LaurentPoly::monomial(-ki * (ki + 1), sign(k)),
            KnotKind::Table(t) => t.get(k as usize).cloned().unwrap_or_default(),
        }
    }

    /// Number of leading coefficients that may be nonzero, when finite.
    pub fn support(&self) -> Option<u32> {
        match &self.kind {
            KnotKind::Unknot => Some(1),
            KnotKind::Table(t) => Some(t.len() as u32),
            _ => None,
        }
    }
}

/// Where the coefficients `C_{L,𝐤}` come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinkCoeffs {
    Knot(CyclotomicKnot),
    /// `C_{(k,k)} = (−1)ᵏ v^{−k(k+1)}`, zero off the diagonal.
    Whitehead,
    Table(BTreeMap<Vec<u32>, LaurentPoly>),
}

/// An algebraically split surgery link: framings and cyclotomic coefficients.
/// Component 0 is the distinguished one; the others are expected to be framed ±1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryPresentation {
    framings: Vec<i64>,
    coeffs: LinkCoeffs,
}

impl SurgeryPresentation {
    pub fn knot(k: CyclotomicKnot, framing: i64) -> Self {
        Self {
            framings: vec![framing],
            coeffs: LinkCoeffs::Knot(k),
        }
    }

    pub fn whitehead(b0: i64, b1: i64) -> Self {
        Self {
            framings: vec![b0, b1],
            coeffs: LinkCoeffs::Whitehead,
        }
    }

    /// The empty link (S³).
    pub fn empty() -> Self {
        Self {
            framings: vec![],
            coeffs: LinkCoeffs::Table(BTreeMap::from([(vec![], LaurentPoly::one())])),
        }
    }

    pub fn from_table(
        framings: Vec<i64>,
        entries: BTreeMap<Vec<u32>, LaurentPoly>,
    ) -> Result<Self, InvariantError> {
        if let Some(k) = entries.keys().find(|k| k.len() != framings.len()) {
            return Err(InvariantError::Parse(format!(
                "multi-index {k:?} has the wrong length for {} components",
                framings.len()
            )));
        }
        let entries = entries.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Self {
            framings,
            coeffs: LinkCoeffs::Table(entries),
        })
    }

    pub fn with_framings(&self, framings: Vec<i64>) -> Result<Self, InvariantError> {
        if framings.len() != self.framings.len() {
            return Err(InvariantError::BadFraming("component count changed".into()));
        }
        Ok(Self {
            framings,
            coeffs: self.coeffs.clone(),
        })
    }

    pub fn num_components(&self) -> usize {
        self.framings.len()
    }

    pub fn framings(&self) -> &[i64] {
        &self.framings
    }

    pub fn coeffs(&self) -> &LinkCoeffs {
        &self.coeffs
    }

    /// σ₊: number of positively framed components.
    pub fn sigma_plus(&self) -> usize {
        self.framings.iter().filter(|b| **b > 0).count()
    }

    /// σ₋: number of negatively framed components.
    pub fn sigma_minus(&self) -> usize {
        self.framings.iter().filter(|b| **b < 0).count()
    }

    pub fn coeff(&self, ks: &[u32]) -> LaurentPoly {
        if ks.len() != self.framings.len() {
            return LaurentPoly::zero();
        }
        match &self.coeffs {
            LinkCoeffs::Knot(k) => k.coeff(ks[0]),
            LinkCoeffs::Whitehead => {
                let k = ks[0];
                if ks[1] != k {
                    return LaurentPoly::zero();
                }
                let ki = k as i64;
                LaurentPoly::monomial(-ki * (ki + 1), sign(k))
            }
            LinkCoeffs::Table(t) => t.get(ks).cloned().unwrap_or_default(),
        }
    }

    /// Nonzero coefficients with max-norm `shell`, in lexicographic order.
    pub fn shell(&self, shell: u32) -> Vec<(Vec<u32>, LaurentPoly)> {
        let nonzero = |ks: Vec<u32>, c: LaurentPoly| (!c.is_zero()).then_some((ks, c));
        match &self.coeffs {
            LinkCoeffs::Knot(k) => nonzero(vec![shell], k.coeff(shell)).into_iter().collect(),
            LinkCoeffs::Whitehead => nonzero(vec![shell, shell], self.coeff(&[shell, shell]))
                .into_iter()
                .collect(),
            LinkCoeffs::Table(t) => t
                .iter()
                .filter(|(ks, _)| ks.iter().copied().max().unwrap_or(0) == shell)
                .map(|(ks, c)| (ks.clone(), c.clone()))
                .collect(),
        }
    }

    /// Number of shells that may hold nonzero coefficients, when finite.
    pub fn support(&self) -> Option<u32> {
        match &self.coeffs {
            LinkCoeffs::Knot(k) => k.support(),
            LinkCoeffs::Whitehead => None,
            LinkCoeffs::Table(t) => Some(
                t.keys()
                    .map(|ks| ks.iter().copied().max().unwrap_or(0) + 1)
                    .max()
                    .unwrap_or(0),
            ),
        }
    }

    fn others_are_unit(&self) -> bool {
        self.framings.iter().skip(1).all(|b| b.abs() == 1)
    }
}

/// Basis of a universal series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// `ωₙ = (q^{n+1})_{n+1}/(1−q)`
    #[serde(rename = "ZHS")]
    Zhs,
    /// `(−v²;−v)_{2n}`
    #[serde(rename = "M2")]
    M2,
}

/// A truncated universal series `Σ aₙ·basisₙ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HabiroElem {
    pub basis: Basis,
    pub coeffs: Vec<LaurentPoly>,
    /// All coefficients past the stored ones are known to vanish.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub exact: bool,
}

impl HabiroElem {
    pub fn new(basis: Basis, coeffs: Vec<LaurentPoly>) -> Self {
        Self {
            basis,
            coeffs,
            exact: false,
        }
    }

    /// The constant series 1.
    pub fn one(basis: Basis) -> Self {
        Self {
            basis,
            coeffs: vec![LaurentPoly::one()],
            exact: true,
        }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn basis_element(&self, n: u32) -> LaurentPoly {
        match self.basis {
            Basis::Zhs => zhs_basis(n),
            Basis::M2 => neg_v_product(n),
        }
    }

    /// The truncated sum as a Laurent polynomial.
    pub fn partial_sum(&self) -> LaurentPoly {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a * &self.basis_element(n as u32))
            .sum()
    }
}

fn finite_support(l: &SurgeryPresentation, terms: usize) -> bool {
    l.support().is_some_and(|s| s as usize <= terms)
}

fn plus_factors(l: &SurgeryPresentation, ks: &[u32]) -> LaurentPoly {
    l.framings()
        .iter()
        .zip(ks)
        .skip(1)
        .filter(|(b, _)| **b == 1)
        .map(|(_, k)| plus_one_factor(*k))
        .product()
}

/// `aₙ = (−1)ⁿ q^{−n(n+3)/2} C_{K,n}` for framing +1 and `aₙ = C_{K,n}` for −1.
pub fn universal_zhs_knot(
    k: &CyclotomicKnot,
    sign: i64,
    terms: usize,
) -> Result<HabiroElem, InvariantError> {
    universal_zhs_link(&SurgeryPresentation::knot(k.clone(), sign), terms)
}

/// Shell coefficients `Σ_{max kᵢ = n} C_{L,𝐤} ∏_{bᵢ = +1} (−1)^{kᵢ} q^{−kᵢ(kᵢ+3)/2}`.
pub fn universal_zhs_link(
    l: &SurgeryPresentation,
    terms: usize,
) -> Result<HabiroElem, InvariantError> {
    if let Some(b) = l.framings().iter().find(|b| b.abs() != 1) {
        return Err(InvariantError::BadFraming(format!(
            "ZHS series need framings ±1, got {b}"
        )));
    }
    if l.num_components() == 0 {
        return Ok(HabiroElem::one(Basis::Zhs));
    }
    let coeffs = (0..terms as u32)
        .map(|n| {
            l.shell(n)
                .into_iter()
                .map(|(ks, c)| {
                    let plus: LaurentPoly = l
                        .framings()
                        .iter()
                        .zip(&ks)
                        .filter(|(b, _)| **b == 1)
                        .map(|(_, k)| plus_one_factor(*k))
                        .product();
                    &c * &plus
                })
                .sum()
        })
        .collect();
    Ok(HabiroElem {
        basis: Basis::Zhs,
        coeffs,
        exact: finite_support(l, terms),
    })
}

fn check_m2(l: &SurgeryPresentation) -> Result<i64, InvariantError> {
    match l.framings().first() {
        Some(2) | Some(-2) if l.others_are_unit() => Ok(l.framings()[0] / 2),
        _ => Err(InvariantError::BadFraming(format!(
            "M2 series need framings (±2, ±1, …), got {:?}",
            l.framings()
        ))),
    }
}

fn m2_series(
    l: &SurgeryPresentation,
    terms: usize,
    twist: bool,
) -> Result<HabiroElem, InvariantError> {
    let eta = check_m2(l)?;
    let coeffs = (0..terms as u32)
        .map(|n| {
            l.shell(n)
                .into_iter()
                .map(|(ks, c)| {
                    let k0 = ks[0];
                    let mut f = &plus_odd_product(k0, n) * &plus_factors(l, &ks);
                    if eta > 0 {
                        // (−v)^{−k₀}
                        f = f.shift(-(k0 as i64)).scale(&BigInt::from(sign(k0)));
                    }
                    let c = if twist {
                        c.substitute(Substitution::NegateV)
                    } else {
                        c
                    };
                    &c * &f
                })
                .sum()
        })
        .collect();
    Ok(HabiroElem {
        basis: Basis::M2,
        coeffs,
        exact: finite_support(l, terms),
    })
}

/// The M2 series of a presentation whose 0-th component is framed ±2.
pub fn universal_m2(l: &SurgeryPresentation, terms: usize) -> Result<HabiroElem, InvariantError> {
    m2_series(l, terms, false)
}

/// The universal series and its twist, from which the refined invariants are assembled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinedInvariant {
    pub base: HabiroElem,
    /// Built with `C_{L,𝐤}(−v)` in place of `C_{L,𝐤}(v)`; evaluated at −v it gives τ̃(−v).
    pub twist: HabiroElem,
    pub eta: i64,
}

pub fn refined_pair(
    l: &SurgeryPresentation,
    terms: usize,
) -> Result<RefinedInvariant, InvariantError> {
    Ok(RefinedInvariant {
        base: m2_series(l, terms, false)?,
        twist: m2_series(l, terms, true)?,
        eta: check_m2(l)?,
    })
}

fn order_of(spec: RootSpec, exp: i64) -> u32 {
    let f = spec.order() as i64;
    (f / exp.rem_euclid(f).gcd(&f)) as u32
}

fn is_exp_zero(spec: RootSpec, e: i64) -> bool {
    e.rem_euclid(spec.order() as i64) == 0
}

fn is_exp_minus_one(spec: RootSpec, e: i64) -> bool {
    let f = spec.order() as i64;
    f % 2 == 0 && e.rem_euclid(f) == f / 2
}

/// Index from which every basis element vanishes at v = xᵉ.
pub fn vanishing_index(basis: Basis, spec: RootSpec, v_exp: i64) -> Result<usize, InvariantError> {
    let n_v = order_of(spec, v_exp);
    if basis == Basis::M2 && n_v % 4 == 2 {
        return Err(InvariantError::InadmissibleOrder(n_v));
    }
    for n in 1..=(2 * n_v as i64 + 2) {
        let q_n = 2 * n * v_exp;
        let hit = match basis {
            Basis::Zhs => is_exp_minus_one(spec, q_n) || is_exp_zero(spec, 2 * (2 * n + 1) * v_exp),
            Basis::M2 => is_exp_minus_one(spec, q_n) || is_exp_zero(spec, (2 * n + 1) * v_exp),
        };
        if hit {
            return Ok(n as usize);
        }
    }
    Err(InvariantError::InadmissibleOrder(n_v))
}

fn step_value(basis: Basis, spec: RootSpec, v_exp: i64, n: i64) -> CycElt {
    let one = CycElt::one(spec);
    let pw = |e: i64| CycElt::root_power(spec, e);
    match basis {
        Basis::Zhs => &(&one + &pw(2 * n * v_exp)) * &(&one - &pw(2 * (2 * n + 1) * v_exp)),
        Basis::M2 => &(&one + &pw(2 * n * v_exp)) * &(&one - &pw((2 * n + 1) * v_exp)),
    }
}

/// Evaluates at v = xᵉ where x generates the field of `spec`.
pub fn eval_habiro_in(
    e: &HabiroElem,
    spec: RootSpec,
    v_exp: i64,
) -> Result<CycElt, InvariantError> {
    let n0 = vanishing_index(e.basis, spec, v_exp)?;
    if e.coeffs.len() < n0 && !e.exact {
        return Err(InvariantError::TruncationTooShort {
            needed: n0,
            have: e.coeffs.len(),
        });
    }
    let mut total = CycElt::zero(spec);
    let mut basis = CycElt::one(spec);
    for (n, a) in e.coeffs.iter().enumerate().take(n0) {
        if n > 0 {
            basis = &basis * &step_value(e.basis, spec, v_exp, n as i64);
        }
        if !a.is_zero() {
            total = &total + &(&eval_at(a, spec, v_exp) * &basis);
        }
    }
    Ok(total)
}

/// Value at v = the given root, in Q(ζ_N).
pub fn eval_habiro(e: &HabiroElem, root: RootSpec) -> Result<CycElt, InvariantError> {
    eval_habiro_in(e, root, 1)
}

/// Value at v = A² in the ambient field of a state sum.
pub fn eval_habiro_at(e: &HabiroElem, amb: &Ambient) -> Result<CycElt, InvariantError> {
    eval_habiro_in(e, amb.spec(), amb.v_exp())
}

/// The sign ζ of the refinement formulas at ord(v) = N, 4 | N.
pub fn refinement_zeta(spec: RootSpec, v_exp: i64) -> Result<i64, InvariantError> {
    let n = order_of(spec, v_exp);
    if !n.is_multiple_of(4) {
        return Err(InvariantError::InadmissibleOrder(n));
    }
    if n.is_multiple_of(8) {
        return Ok(if (n / 8).is_multiple_of(2) { 1 } else { -1 });
    }
    let f = spec.order() as i64;
    let p = (n / 4) as i64;
    let e = (v_exp * p * p).rem_euclid(f);
    if e == f / 4 {
        Ok(1)
    } else if e == 3 * f / 4 {
        Ok(-1)
    } else {
        Err(InvariantError::Internal(format!(
            "v^(p²) is not ±I at order {n}"
        )))
    }
}

/// `τ'_{M,σ_ε}` from the universal series and its twist.
pub fn eval_refined_in(
    r: &RefinedInvariant,
    eps: u8,
    spec: RootSpec,
    v_exp: i64,
) -> Result<CycElt, InvariantError> {
    let n = order_of(spec, v_exp);
    if !n.is_multiple_of(4) {
        return Err(InvariantError::InadmissibleOrder(n));
    }
    let f = spec.order() as i64;
    let base = eval_habiro_in(&r.base, spec, v_exp)?;
    let tw = eval_habiro_in(&r.twist, spec, v_exp + f / 2)?;
    let one = CycElt::one(spec);
    let v = CycElt::root_power(spec, v_exp);
    let ratio = (&one + &v).div(&(&one - &v))?;
    let mut t = &ratio * &tw;
    let eps_sign = if eps.is_multiple_of(2) { 1 } else { -1 };
    if n.is_multiple_of(8) {
        // ½[τ' − η(−1)^{ζ+ε}(1+v)/(1−v)·τ̃(−v)], ζ = (N/8) mod 2
        let zeta_bit = ((n / 8) % 2) as i64;
        let s = r.eta * eps_sign * if zeta_bit == 0 { 1 } else { -1 };
        if s > 0 {
            t = -t;
        }
    } else {
        // ½[τ' + (−1)^ε ζ I (1+v)/(1−v)·τ̃(−v)]
        let zeta = refinement_zeta(spec, v_exp)?;
        t = &t * &CycElt::root_power(spec, f / 4);
        if zeta * eps_sign < 0 {
            t = -t;
        }
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    Ok((&base + &t).scale(&half))
}

pub fn eval_refined(
    r: &RefinedInvariant,
    eps: u8,
    root: RootSpec,
) -> Result<CycElt, InvariantError> {
    eval_refined_in(r, eps, root, 1)
}

pub fn eval_refined_at(
    r: &RefinedInvariant,
    eps: u8,
    amb: &Ambient,
) -> Result<CycElt, InvariantError> {
    eval_refined_in(r, eps, amb.spec(), amb.v_exp())
}

/// Refined or unrefined τ' for a 0-th component framed b = 2ᵗc and the rest ±1,
/// through the parity Laplace transforms of `F_{k₀}`.
///
/// At odd r only the unrefined value exists and both numerator and normalizer
/// use the odd-color transform.
pub fn general_b_eval(
    l: &SurgeryPresentation,
    eps: Option<u8>,
    amb: &Ambient,
) -> Result<CycElt, InvariantError> {
    let b = *l
        .framings()
        .first()
        .ok_or_else(|| InvariantError::BadFraming("empty link".into()))?;
    if !l.others_are_unit() {
        return Err(InvariantError::BadFraming(format!(
            "components after the 0-th must be framed ±1, got {:?}",
            l.framings()
        )));
    }
    let r = amb.r();
    let case = LaplaceCase::new(b, r)?;
    let (num_parity, norm_parity) = if case.s == 0 {
        if eps.is_some() {
            return Err(InvariantError::Refinement("odd r has no refinement".into()));
        }
        (Parity::Odd, Parity::Odd)
    } else {
        (eps.map_or(Parity::All, Parity::from_eps), Parity::All)
    };
    let norm = laplace_eval(b, amb, &f_poly(0), norm_parity)?;
    if norm.is_zero() {
        return Err(InvariantError::ZeroNormalizer);
    }
    let kmax = 2 * r as i64 - 2;
    let k0max = (r as i64 - 2).max(0);
    let qe = amb.q_exp();
    let one = amb.one();
    let mut lap: Vec<Option<CycElt>> = vec![None; k0max as usize + 1];
    let mut total = amb.zero();
    for k0 in 0..=k0max {
        // ratio(k₀, K) = ∏_{i=k₀+1}^{K} (1 + qⁱ)(1 − q^{2i+1})
        let mut ratio = one.clone();
        for kk in k0..=kmax.max(k0) {
            if kk > k0 {
                let step = &(&one + &CycElt::root_power(amb.spec(), qe * kk))
                    * &(&one - &CycElt::root_power(amb.spec(), qe * (2 * kk + 1)));
                ratio = &ratio * &step;
                if ratio.is_zero() {
                    break;
                }
            }
            for (ks, c) in l.shell(kk as u32) {
                if ks[0] as i64 != k0 {
                    continue;
                }
                let lv = match &lap[k0 as usize] {
                    Some(x) => x.clone(),
                    None => {
                        let x = laplace_eval(b, amb, &f_poly(k0 as u32), num_parity)?;
                        lap[k0 as usize] = Some(x.clone());
                        x
                    }
                };
                let coeff = amb.eval_v(&(&c * &plus_factors(l, &ks)));
                total = &total + &(&(&coeff * &lv) * &ratio);
            }
        }
    }
    Ok(total.div(&norm)?)
}

/// Knot surgery with framing b through the Laplace transform:
/// `(γ_b/γ_{sn(b)}) Σ C_n L^π_b(F_n) / L^π_{sn(b)}(F₀)`, π = all for even r and odd for odd r.
pub fn theorem_le_eval(
    k: &CyclotomicKnot,
    b: i64,
    amb: &Ambient,
) -> Result<CycElt, InvariantError> {
    let r = amb.r();
    let parity = if r.is_multiple_of(2) {
        Parity::All
    } else {
        Parity::Odd
    };
    let sn = b.signum();
    let g = |c: i64| crate::cyclo::gauss_sum(c, amb, Parity::All, SumRange::FullPeriod);
    let mut sum = amb.zero();
    for n in 0..r.saturating_sub(1) {
        let c = k.coeff(n);
        if c.is_zero() {
            continue;
        }
        sum = &sum + &(&amb.eval_v(&c) * &laplace_eval(b, amb, &f_poly(n), parity)?);
    }
    let den = &g(sn) * &laplace_eval(sn, amb, &f_poly(0), parity)?;
    if den.is_zero() {
        return Err(InvariantError::ZeroNormalizer);
    }
    Ok((&g(b) * &sum).div(&den)?)
}

/// Expansion point of a Taylor series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Center {
    /// in h = q − 1, with v = (1+h)^{1/2}
    One,
    /// in g = q + 1, with v = I(1−g)^{1/2}
    MinusOne,
}

pub type Coeff = Complex<BigRational>;

fn czero() -> Coeff {
    Complex::new(BigRational::zero(), BigRational::zero())
}

fn ser_mul(a: &[Coeff], b: &[Coeff]) -> Vec<Coeff> {
    let m = a.len();
    let mut out = vec![czero(); m];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(m - i) {
            out[i + j] = &out[i + j] + x * y;
        }
    }
    out
}

fn ser_add(a: &[Coeff], b: &[Coeff], sign: i64) -> Vec<Coeff> {
    a.iter()
        .zip(b)
        .map(|(x, y)| if sign > 0 { x + y } else { x - y })
        .collect()
}

/// Series of vᵉ.
fn v_power_series(e: i64, center: Center, m: usize) -> Vec<Coeff> {
    // (1 + s·t)^{e/2} with s = 1 (h) or −1 (g)
    let half_e = BigRational::new(BigInt::from(e), BigInt::from(2));
    let s: i64 = match center {
        Center::One => 1,
        Center::MinusOne => -1,
    };
    let mut out = Vec::with_capacity(m);
    let mut binom = BigRational::one();
    for j in 0..m {
        if j > 0 {
            let jj = BigRational::from(BigInt::from(j as i64));
            binom = binom * (&half_e - (&jj - BigRational::one())) / jj
                * BigRational::from(BigInt::from(s));
        }
        out.push(Complex::new(binom.clone(), BigRational::zero()));
    }
    if center == Center::MinusOne {
        // times Iᵉ
        let unit = match e.rem_euclid(4) {
            0 => Complex::new(BigRational::one(), BigRational::zero()),
            1 => Complex::new(BigRational::zero(), BigRational::one()),
            2 => Complex::new(-BigRational::one(), BigRational::zero()),
            _ => Complex::new(BigRational::zero(), -BigRational::one()),
        };
        out = out.into_iter().map(|c| c * &unit).collect();
    }
    out
}

fn poly_series(p: &LaurentPoly, center: Center, m: usize) -> Vec<Coeff> {
    let mut out = vec![czero(); m];
    for (e, c) in p.terms() {
        let c = BigRational::from(c.clone());
        for (o, x) in out.iter_mut().zip(v_power_series(e, center, m)) {
            *o = &*o + x.scale(c.clone());
        }
    }
    out
}

/// First m Taylor coefficients at q = 1 (in q − 1) or q = −1 (in q + 1).
pub fn taylor(e: &HabiroElem, center: Center, m: usize) -> Result<Vec<Coeff>, InvariantError> {
    if m == 0 {
        return Ok(vec![]);
    }
    // basis element n has order ≥ n at q = 1 and ≥ ⌈n/2⌉ at q = −1
    let needed = match center {
        Center::One => m,
        Center::MinusOne => 2 * m - 1,
    };
    if e.coeffs.len() < needed && !e.exact {
        return Err(InvariantError::TruncationTooShort {
            needed,
            have: e.coeffs.len(),
        });
    }
    let one_ser = poly_series(&LaurentPoly::one(), center, m);
    let mut total = vec![czero(); m];
    let mut basis = one_ser.clone();
    for (n, a) in e.coeffs.iter().enumerate().take(needed) {
        let n = n as i64;
        if n > 0 {
            let plus = ser_add(&one_ser, &poly_series(&LaurentPoly::q_pow(n), center, m), 1);
            let minus_exp = match e.basis {
                Basis::Zhs => 2 * (2 * n + 1),
                Basis::M2 => 2 * n + 1,
            };
            let minus = ser_add(
                &one_ser,
                &poly_series(&LaurentPoly::v_pow(minus_exp), center, m),
                -1,
            );
            basis = ser_mul(&ser_mul(&basis, &plus), &minus);
        }
        if !a.is_zero() {
            total = ser_add(&total, &ser_mul(&poly_series(a, center, m), &basis), 1);
        }
    }
    Ok(total)
}

/// Checks `E(ζ_p) ≡ Σ_{k<m} aₖ(ζ_p − 1)ᵏ mod (1 − ζ_p)ᵐ` with aₖ the Taylor coefficients at q = 1,
/// at q = ζ_p and v = q^{(p+1)/2}.
pub fn ohtsuki_congruence(e: &HabiroElem, p: u32, m: usize) -> Result<bool, InvariantError> {
    let spec = RootSpec::new(p, 1)?;
    let value = eval_habiro_in(e, spec, (p as i64 + 1) / 2)?;
    let coeffs = taylor(e, Center::One, m)?;
    let x = CycElt::root_power(spec, 1);
    let one = CycElt::one(spec);
    let h = &x - &one;
    let mut approx = CycElt::zero(spec);
    let mut hp = one.clone();
    for c in &coeffs {
        if !c.im.is_zero() {
            return Err(InvariantError::Internal(
                "complex Taylor coefficient at q = 1".into(),
            ));
        }
        approx = &approx + &hp.scale(&c.re);
        hp = &hp * &h;
    }
    let diff = &value - &approx;
    let y = diff.div(&(&one - &x).pow(m as i64)?)?;
    Ok(y.is_p_integral(p))
}

/// True when every coefficient is an integer.
pub fn all_integral(c: &[Coeff]) -> bool {
    c.iter().all(|z| z.re.is_integer() && z.im.is_integer())
}

/// True when every denominator is a power of 2.
pub fn all_dyadic(c: &[Coeff]) -> bool {
    let dyadic = |x: &BigRational| {
        let mut d = x.denom().abs();
        while d.is_even() {
            d /= 2;
        }
        d.is_one()
    };
    c.iter().all(|z| dyadic(&z.re) && dyadic(&z.im))
}

/// Names of the built-in manifolds.
pub const BUILTIN_NAMES: &[&str] = &[
    "poincare",
    "fig8-zhs",
    "fig8-f2",
    "left-trefoil-m1",
    "whitehead-2-m1",
    "whitehead-m1-m4",
    "lens-2-1",
    "lens-b-1",
];

/// A built-in surgery presentation; `b` is the framing of `lens-b-1`.
pub fn builtin(name: &str, b: Option<i64>) -> Result<SurgeryPresentation, InvariantError> {
    use SurgeryPresentation as S;
    Ok(match name {
        "poincare" => S::knot(CyclotomicKnot::right_trefoil(), 1),
        "fig8-zhs" => S::knot(CyclotomicKnot::figure_eight(), 1),
        "fig8-f2" => S::knot(CyclotomicKnot::figure_eight(), 2),
        "left-trefoil-m1" => S::knot(CyclotomicKnot::left_trefoil(), -1),
        "whitehead-2-m1" => S::whitehead(2, -1),
        "whitehead-m1-m4" => S::whitehead(-4, -1),
        "lens-2-1" => S::knot(CyclotomicKnot::unknot(), 2),
        "lens-b-1" => {
            let b = b.ok_or_else(|| InvariantError::Parse("lens-b-1 needs a framing b".into()))?;
            if b == 0 {
                return Err(InvariantError::BadFraming("b must be nonzero".into()));
            }
            S::knot(CyclotomicKnot::unknot(), b)
        }
        other => return Err(InvariantError::UnknownBuiltin(other.to_string())),
    })
}

#[derive(Serialize, Deserialize)]
struct ComponentJson {
    framing: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum CoeffsJson {
    Builtin {
        name: String,
    },
    Table {
        entries: Vec<(Vec<u32>, LaurentPoly)>,
    },
}

#[derive(Serialize, Deserialize)]
struct ManifoldJson {
    components: Vec<ComponentJson>,
    coeffs: CoeffsJson,
}

/// Parses `{"components":[{"framing":…}],"coeffs":{"kind":"builtin","name":…} | {"kind":"table","entries":[…]}}`.
///
/// Builtin coefficient names: unknot, trefoil-right, trefoil-left, figure-eight (one component) and whitehead (two).
pub fn manifold_from_json(s: &str) -> Result<SurgeryPresentation, InvariantError> {
    let m: ManifoldJson =
        serde_json::from_str(s).map_err(|e| InvariantError::Parse(e.to_string()))?;
    let framings: Vec<i64> = m.components.iter().map(|c| c.framing).collect();
    if framings.contains(&0) {
        return Err(InvariantError::BadFraming(
            "framing 0 is not supported".into(),
        ));
    }
    match m.coeffs {
        CoeffsJson::Builtin { name } => {
            if name == "whitehead" {
                if framings.len() != 2 {
                    return Err(InvariantError::Parse(
                        "whitehead needs two components".into(),
                    ));
                }
                return Ok(SurgeryPresentation::whitehead(framings[0], framings[1]));
            }
            let k = CyclotomicKnot::builtin(&name).ok_or(InvariantError::UnknownBuiltin(name))?;
            if framings.len() != 1 {
                return Err(InvariantError::Parse(
                    "knot coefficients need one component".into(),
                ));
            }
            Ok(SurgeryPresentation::knot(k, framings[0]))
        }
        CoeffsJson::Table { entries } => {
            let mut table = BTreeMap::new();
            for (ks, c) in entries {
                if table.insert(ks.clone(), c).is_some() {
                    return Err(InvariantError::Parse(format!(
                        "duplicate multi-index {ks:?}"
                    )));
                }
            }
            SurgeryPresentation::from_table(framings, table)
        }
    }
}

/// Which universal construction applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManifoldKind {
    Zhs,
    M2,
    /// 0-th framing b with |b| ∉ {1, 2}
    GeneralB(i64),
}

pub fn classify(l: &SurgeryPresentation) -> Result<ManifoldKind, InvariantError> {
    let f = l.framings();
    if f.iter().all(|b| b.abs() == 1) {
        return Ok(ManifoldKind::Zhs);
    }
    if !l.others_are_unit() {
        return Err(InvariantError::BadFraming(format!(
            "components after the 0-th must be framed ±1, got {f:?}"
        )));
    }
    if f[0].abs() == 2 {
        Ok(ManifoldKind::M2)
    } else if f[0] == 0 {
        Err(InvariantError::BadFraming(
            "framing 0 is not supported".into(),
        ))
    } else {
        Ok(ManifoldKind::GeneralB(f[0]))
    }
}

/// The universal series (ZHS or M2 basis) with the given number of terms.
pub fn universal_series(
    l: &SurgeryPresentation,
    terms: usize,
) -> Result<HabiroElem, InvariantError> {
    match classify(l)? {
        ManifoldKind::Zhs => universal_zhs_link(l, terms),
        ManifoldKind::M2 => universal_m2(l, terms),
        ManifoldKind::GeneralB(b) => Err(InvariantError::BadFraming(format!(
            "no universal series for framing {b}; evaluate it at a root instead"
        ))),
    }
}

/// Default truncation for exact evaluation at v of order `n`.
pub fn default_terms(n: u32) -> usize {
    n as usize + 1
}

/// τ'_M (or τ'_{M,σ_ε}) from the universal formulas, at the ambient root of `amb`.
pub fn evaluate_at(
    l: &SurgeryPresentation,
    amb: &Ambient,
    refined: Option<u8>,
) -> Result<CycElt, InvariantError> {
    let n = amb.v_root().order();
    match classify(l)? {
        ManifoldKind::Zhs => {
            if refined.is_some() {
                return Err(InvariantError::Refinement(
                    "integral homology spheres have no refinement".into(),
                ));
            }
            eval_habiro_at(&universal_zhs_link(l, default_terms(n))?, amb)
        }
        ManifoldKind::M2 => match refined {
            None => eval_habiro_at(&universal_m2(l, default_terms(n))?, amb),
            Some(eps) => eval_refined_at(&refined_pair(l, default_terms(n))?, eps, amb),
        },
        ManifoldKind::GeneralB(_) => general_b_eval(l, refined, amb),
    }
}

/// τ'_M at v = the given root. ZHS and M2 values live in Q(ζ_N); general-b values in the ambient field.
pub fn evaluate(
    l: &SurgeryPresentation,
    root: RootSpec,
    refined: Option<u8>,
) -> Result<CycElt, InvariantError> {
    let n = root.order();
    match classify(l)? {
        ManifoldKind::Zhs if refined.is_none() => {
            eval_habiro(&universal_zhs_link(l, default_terms(n))?, root)
        }
        ManifoldKind::M2 => match refined {
            None => eval_habiro(&universal_m2(l, default_terms(n))?, root),
            Some(eps) => eval_refined(&refined_pair(l, default_terms(n))?, eps, root),
        },
        _ => evaluate_at(l, &Ambient::from_v(root)?, refined),
    }
}

/// The brute-force state sum normalized the way the universal value is.
pub fn brute_force_at(
    l: &SurgeryPresentation,
    amb: &Ambient,
    refined: Option<u8>,
) -> Result<CycElt, InvariantError> {
    let r = amb.r();
    let variant = Variant::for_r(r);
    let rho = match refined {
        None => None,
        Some(_) if r % 2 == 1 => {
            return Err(InvariantError::Refinement("odd r has no refinement".into()))
        }
        Some(eps) => Some(Refinement::standard(eps, r)),
    };
    let normalizer = match classify(l)? {
        ManifoldKind::Zhs => NormalizerKind::None,
        ManifoldKind::M2 => NormalizerKind::L21,
        ManifoldKind::GeneralB(b) => NormalizerKind::Lens(b),
    };
    Ok(wrt::normalized_wrt(
        l,
        amb,
        variant,
        rho,
        normalizer,
        SumRange::FullPeriod,
    )?)
}

/// Universal and brute-force values at v of order `n` (primitive power `j`), in the same field.
pub fn compare_at(
    l: &SurgeryPresentation,
    n: u32,
    j: i64,
    refined: Option<u8>,
) -> Result<(CycElt, CycElt), InvariantError> {
    let amb = Ambient::from_v(RootSpec::new(n, j)?)?;
    Ok((
        evaluate_at(l, &amb, refined)?,
        brute_force_at(l, &amb, refined)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_eight_coefficients() {
        let k = CyclotomicKnot::figure_eight();
        assert_eq!(k.coeff(0), LaurentPoly::one());
        assert_eq!(k.coeff(1), LaurentPoly::monomial(-2, -1));
        assert_eq!(k.coeff(2), LaurentPoly::monomial(-6, 1));
    }

    #[test]
    fn unknot_series_is_one() {
        let l = builtin("lens-2-1", None).unwrap();
        let e = universal_m2(&l, 6).unwrap();
        assert!(e.exact);
        assert_eq!(e.partial_sum(), LaurentPoly::one());
        let z = universal_zhs_knot(&CyclotomicKnot::unknot(), 1, 4).unwrap();
        assert_eq!(z.partial_sum(), LaurentPoly::one());
    }

    #[test]
    fn m2_rejects_inadmissible_orders() {
        let e = HabiroElem::one(Basis::M2);
        let err = eval_habiro(&e, RootSpec::new(2, 1).unwrap()).unwrap_err();
        assert_eq!(err, InvariantError::InadmissibleOrder(2));
        assert!(eval_habiro(&e, RootSpec::new(12, 5).unwrap())
            .unwrap()
            .is_one());
    }

    #[test]
    fn truncation_is_checked() {
        let l = builtin("fig8-f2", None).unwrap();
        let e = universal_m2(&l, 2).unwrap();
        assert!(matches!(
            eval_habiro(&e, RootSpec::new(16, 1).unwrap()),
            Err(InvariantError::TruncationTooShort { .. })
        ));
    }

    #[test]
    fn taylor_of_one() {
        let t = taylor(&HabiroElem::one(Basis::Zhs), Center::One, 4).unwrap();
        assert!(t[0].re.is_one());
        assert!(t[1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn manifold_json_round() {
        let l = manifold_from_json(
            r#"{"components":[{"framing":2},{"framing":-1}],"coeffs":{"kind":"builtin","name":"whitehead"}}"#,
        )
        .unwrap();
        assert_eq!(l, SurgeryPresentation::whitehead(2, -1));
        let t = manifold_from_json(
            r#"{"components":[{"framing":1}],"coeffs":{"kind":"table","entries":[[[0],{"var":"v","terms":[[0,"1"]]}]]}}"#,
        )
        .unwrap();
        assert_eq!(t.support(), Some(1));
    }
}
