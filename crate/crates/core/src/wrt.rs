//! Brute-force colored Jones values and WRT state sums: the reference
//! implementation every universal formula is compared with.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::binomial;
use rayon::prelude::*;
use thiserror::Error;

use crate::cyclo::{gauss_sum, Ambient, CycElt, CycloError, Parity, SumRange};
use crate::invariants::{CyclotomicKnot, SurgeryPresentation};
use crate::laplace::{laplace_eval, LaplaceError};
use crate::laurent::LaurentPoly;
use crate::qkit::{
    color_factor, f_poly, link_color_factor, one_minus_q, pochhammer, qint, zhs_basis, QkitError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WrtError {
    #[error("state-sum denominator vanishes")]
    ZeroDenominator,
    #[error("normalizer vanishes")]
    ZeroNormalizer,
    #[error("{0}")]
    Variant(String),
    #[error("colors must be positive")]
    BadColor,
    #[error("quotient is not exact (corrupt coefficient table?)")]
    NotDivisible,
    #[error("closed forms disagree: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Laplace(#[from] LaplaceError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

impl From<QkitError> for WrtError {
    fn from(_: QkitError) -> Self {
        WrtError::NotDivisible
    }
}

/// SU(2): all colors, even r. SO(3): odd colors, odd r.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Su2,
    So3,
}

impl Variant {
    /// The variant attached to the order of q.
    pub fn for_r(r: u32) -> Self {
        if r.is_multiple_of(2) {
            Variant::Su2
        } else {
            Variant::So3
        }
    }

    fn check(self, r: u32) -> Result<(), WrtError> {
        match (self, r % 2) {
            (Variant::Su2, 0) | (Variant::So3, 1) => Ok(()),
            (Variant::Su2, _) => Err(WrtError::Variant(format!(
                "SU(2) sums need even r, got {r}"
            ))),
            (Variant::So3, _) => Err(WrtError::Variant(format!("SO(3) sums need odd r, got {r}"))),
        }
    }
}

/// Parity restriction of a refined state sum: n₀ ≡ ε and the other colors restricted to `others`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Refinement {
    pub eps: u8,
    pub others: Parity,
}

impl Refinement {
    /// Other colors even when 4 | r and odd when r ≡ 2 (mod 4); at r ≡ 2 (mod 4) the
    /// even-colored inner sum vanishes identically and the odd colors carry the sum.
    pub fn standard(eps: u8, r: u32) -> Self {
        let others = if r.is_multiple_of(4) {
            Parity::Even
        } else {
            Parity::Odd
        };
        Self {
            eps: eps % 2,
            others,
        }
    }

    /// Other colors even, as in the displayed definition.
    pub fn literal(eps: u8) -> Self {
        Self {
            eps: eps % 2,
            others: Parity::Even,
        }
    }
}

/// Colors with nonzero weight for the given variant and range.
pub fn colors(r: u32, variant: Variant, range: SumRange) -> Vec<i64> {
    let parity = match variant {
        Variant::Su2 => Parity::All,
        Variant::So3 => Parity::Odd,
    };
    range
        .colors(r, parity)
        .filter(|n| n % r as i64 != 0)
        .collect()
}

/// `J'_K(n) = Σ_k C_{K,k} (q^{1+n})_k (q^{1−n})_k`, finite since terms with k ≥ n vanish.
pub fn colored_jones_knot(k: &CyclotomicKnot, n: i64) -> Result<LaurentPoly, WrtError> {
    if n < 1 {
        return Err(WrtError::BadColor);
    }
    Ok((0..n as u32)
        .map(|i| &k.coeff(i) * &color_factor(n, i))
        .sum())
}

/// `Q_L(𝐧) = J'_L(𝐧)·∏[nᵢ]²` as a Laurent polynomial.
pub fn q_link(l: &SurgeryPresentation, colors: &[i64]) -> Result<LaurentPoly, WrtError> {
    if colors.len() != l.num_components() {
        return Err(WrtError::Variant("one color per component".into()));
    }
    if colors.iter().any(|n| *n < 1) {
        return Err(WrtError::BadColor);
    }
    let kmax = colors.iter().copied().max().unwrap_or(1) as u32;
    let mut total = LaurentPoly::zero();
    let mut factors: HashMap<(i64, u32), LaurentPoly> = HashMap::new();
    for shell in 0..kmax {
        for (ks, c) in l.shell(shell) {
            if ks.iter().zip(colors).any(|(k, n)| *k as i64 >= *n) {
                continue;
            }
            let mut term = &c * &zhs_basis(shell);
            for (k, n) in ks.iter().zip(colors) {
                let f = match factors.get(&(*n, *k)) {
                    Some(f) => f.clone(),
                    None => {
                        let f = link_color_factor(*n, *k)?;
                        factors.insert((*n, *k), f.clone());
                        f
                    }
                };
                term = &term * &f;
            }
            total += &term;
        }
    }
    if l.num_components() == 0 {
        total = LaurentPoly::one();
    }
    Ok(total)
}

/// The colored Jones polynomial `J_L(𝐧) = J'_L(𝐧)·∏[nᵢ]` of the zero-framed link.
///
/// For links the reduced value J'_L itself need not be a Laurent polynomial;
/// see [`reduced_colored_jones_link`].
pub fn colored_jones_link(
    l: &SurgeryPresentation,
    colors: &[i64],
) -> Result<LaurentPoly, WrtError> {
    let q = q_link(l, colors)?;
    let qn: LaurentPoly = colors.iter().map(|n| qint(*n)).product();
    q.divide_exact(&qn).map_err(|_| WrtError::NotDivisible)
}

/// `J'_L(𝐧)` when it is a Laurent polynomial; `NotDivisible` otherwise.
pub fn reduced_colored_jones_link(
    l: &SurgeryPresentation,
    colors: &[i64],
) -> Result<LaurentPoly, WrtError> {
    let q = q_link(l, colors)?;
    let qn2: LaurentPoly = colors.iter().map(|n| &qint(*n) * &qint(*n)).product();
    q.divide_exact(&qn2).map_err(|_| WrtError::NotDivisible)
}

/// Root-of-unity values of the per-component factors
/// `H_k(n) = [n]²(1−q)(q^{1+n})_k(q^{1−n})_k/(q^{k+1})_{k+1}`, computed without division as
/// `[n]·v^{1−n}·(−1)ᵏ·q^{k(k+1)/2−nk}·(q)_k·[n+k choose 2k+1]_q` with q-Lucas for the binomial.
pub struct ColorFactors<'a> {
    amb: &'a Ambient,
    pascal: Vec<Vec<CycElt>>,
    qfact: Vec<CycElt>,
    omega: Vec<CycElt>,
}

impl<'a> ColorFactors<'a> {
    pub fn new(amb: &'a Ambient, kmax: u32) -> Self {
        let r = amb.r() as usize;
        let qe = amb.q_exp();
        let mut pascal: Vec<Vec<CycElt>> = Vec::with_capacity(r);
        for m in 0..r {
            let mut row = Vec::with_capacity(m + 1);
            for j in 0..=m {
                let x = if j == 0 || j == m {
                    amb.one()
                } else {
                    // [m, j] = [m−1, j−1] + q^j [m−1, j]
                    &pascal[m - 1][j - 1] + &pascal[m - 1][j].mul_root_power(qe * j as i64)
                };
                row.push(x);
            }
            pascal.push(row);
        }
        let mut qfact = vec![amb.one()];
        let mut omega = vec![amb.one()];
        for k in 1..=kmax as i64 {
            let f = one_minus(amb, qe * k);
            qfact.push(&qfact[k as usize - 1] * &f);
            let w = &(&amb.one() + &amb.one().mul_root_power(qe * k))
                * &one_minus(amb, qe * (2 * k + 1));
            omega.push(&omega[k as usize - 1] * &w);
        }
        Self {
            amb,
            pascal,
            qfact,
            omega,
        }
    }

    /// `[m choose j]_q` at the root, by q-Lucas.
    pub fn qbinom(&self, m: i64, j: i64) -> CycElt {
        if j < 0 || j > m {
            return self.amb.zero();
        }
        let r = self.amb.r() as i64;
        let (m1, m0) = (m / r, m % r);
        let (j1, j0) = (j / r, j % r);
        if j0 > m0 {
            return self.amb.zero();
        }
        let c: BigInt = binomial(BigInt::from(m1), BigInt::from(j1));
        self.pascal[m0 as usize][j0 as usize].scale_int(&c)
    }

    /// `ωₖ = (q^{k+1})_{k+1}/(1−q)` at the root.
    pub fn omega(&self, k: u32) -> &CycElt {
        &self.omega[k as usize]
    }

    pub fn h(&self, n: i64, k: u32) -> CycElt {
        let kk = k as i64;
        if kk >= n {
            return self.amb.zero();
        }
        let qn = self.amb.eval_v(&qint(n));
        let unit_exp = self.amb.v_exp() * (1 - n) + self.amb.q_exp() * (kk * (kk + 1) / 2 - n * kk);
        let mut x = &(&qn * &self.qfact[k as usize]) * &self.qbinom(n + kk, 2 * kk + 1);
        x = x.mul_root_power(unit_exp);
        if k % 2 == 1 {
            x = -x;
        }
        x
    }
}

fn one_minus(amb: &Ambient, e: i64) -> CycElt {
    &amb.one() - &amb.one().mul_root_power(e)
}

/// Value of Q_L at the given colors, assembled from precomputed factors.
struct QEvaluator<'a> {
    amb: &'a Ambient,
    shells: Vec<Vec<(Vec<u32>, CycElt)>>,
    h: HashMap<(i64, u32), CycElt>,
}

impl<'a> QEvaluator<'a> {
    fn new(l: &SurgeryPresentation, amb: &'a Ambient, max_color: i64) -> Self {
        let kmax = max_color.max(1) as u32;
        let cf = ColorFactors::new(amb, kmax);
        let mut shells = Vec::new();
        for shell in 0..kmax {
            let entries = l
                .shell(shell)
                .into_iter()
                .map(|(ks, c)| {
                    let val = &amb.eval_v(&c) * cf.omega(shell);
                    (ks, val)
                })
                .filter(|(_, v)| !v.is_zero())
                .collect();
            shells.push(entries);
        }
        let mut h = HashMap::new();
        for n in 1..=max_color {
            for k in 0..n.min(kmax as i64) as u32 {
                h.insert((n, k), cf.h(n, k));
            }
        }
        Self { amb, shells, h }
    }

    fn eval(&self, colors: &[i64]) -> CycElt {
        if colors.is_empty() {
            return self.amb.one();
        }
        let mut total = self.amb.zero();
        for entries in &self.shells {
            for (ks, c) in entries {
                if ks.iter().zip(colors).any(|(k, n)| *k as i64 >= *n) {
                    continue;
                }
                let mut term = c.clone();
                for (k, n) in ks.iter().zip(colors) {
                    term = &term * &self.h[&(*n, *k)];
                }
                total = &total + &term;
            }
        }
        total
    }
}

fn framing_weight(amb: &Ambient, framings: &[i64], colors: &[i64]) -> i64 {
    framings
        .iter()
        .zip(colors)
        .map(|(b, n)| amb.a_exp_of(b * (n * n - 1)))
        .sum()
}

fn cartesian(ranges: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for range in ranges {
        let mut next = Vec::with_capacity(out.len() * range.len());
        for prefix in &out {
            for n in range {
                let mut p = prefix.clone();
                p.push(*n);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Denominator `Σₙ q^{±(n²−1)/4}[n]²` over the colors of the variant.
pub fn denominator_sum(amb: &Ambient, sign: i64, variant: Variant, range: SumRange) -> CycElt {
    let mut total = amb.zero();
    for n in colors(amb.r(), variant, range) {
        let qn = qint(n);
        let w = amb
            .eval_v(&(&qn * &qn))
            .mul_root_power(amb.a_exp_of(sign * (n * n - 1)));
        total = &total + &w;
    }
    total
}

/// The state sum over colorings of the surgery link, divided by the signature normalization.
///
/// With `refined = Some(ρ)` the 0-th color runs over n₀ ≡ ε and the others over `ρ.others`.
pub fn wrt_state_sum(
    l: &SurgeryPresentation,
    amb: &Ambient,
    variant: Variant,
    refined: Option<Refinement>,
    range: SumRange,
) -> Result<CycElt, WrtError> {
    let r = amb.r();
    variant.check(r)?;
    if refined.is_some() && variant != Variant::Su2 {
        return Err(WrtError::Variant("refined sums need even r".into()));
    }
    let framings = l.framings();
    if framings.is_empty() {
        return Ok(amb.one());
    }
    let base = colors(r, variant, range);
    let ranges: Vec<Vec<i64>> = (0..framings.len())
        .map(|i| match refined {
            None => base.clone(),
            Some(rho) => {
                let parity = if i == 0 {
                    Parity::from_eps(rho.eps)
                } else {
                    rho.others
                };
                base.iter().copied().filter(|n| parity.admits(*n)).collect()
            }
        })
        .collect();
    let max_color = base.iter().copied().max().unwrap_or(1);
    let qe = QEvaluator::new(l, amb, max_color);
    let tuples = cartesian(&ranges);
    let numerator = tuples
        .par_iter()
        .map(|ns| {
            qe.eval(ns)
                .mul_root_power(framing_weight(amb, framings, ns))
        })
        .reduce(|| amb.zero(), |a, b| &a + &b);
    let (sp, sm) = (l.sigma_plus(), l.sigma_minus());
    let mut den = amb.one();
    if sp > 0 {
        den = &den * &denominator_sum(amb, 1, variant, range).pow(sp as i64)?;
    }
    if sm > 0 {
        den = &den * &denominator_sum(amb, -1, variant, range).pow(sm as i64)?;
    }
    if den.is_zero() {
        return Err(WrtError::ZeroDenominator);
    }
    Ok(numerator.div(&den)?)
}

/// Knot surgery through the F₀-weighted form
/// `Σ_λ q^{b(λ²−1)/4}(1−q^λ)(1−q^{−λ})J'_K(λ) / Σ_λ q^{sn(b)(λ²−1)/4}(1−q^λ)(1−q^{−λ})`.
pub fn wrt_knot_f0(
    k: &CyclotomicKnot,
    b: i64,
    amb: &Ambient,
    variant: Variant,
    range: SumRange,
) -> Result<CycElt, WrtError> {
    let r = amb.r();
    variant.check(r)?;
    let qe = amb.q_exp();
    let f0 = f_poly(0);
    let mut num = amb.zero();
    let mut den = amb.zero();
    let sn = b.signum();
    for lam in colors(r, variant, range) {
        let weight = amb.eval_v(&f0.color_specialize(lam));
        // J'(λ) = Σ_k C_k ∏_{i≤k} (1 − q^{λ+i})(1 − q^{i−λ})
        let mut j = amb.zero();
        let mut prod = amb.one();
        for kk in 0..lam as u32 {
            if kk > 0 {
                let i = kk as i64;
                prod = &(&prod * &one_minus(amb, qe * (lam + i))) * &one_minus(amb, qe * (i - lam));
                if prod.is_zero() {
                    break;
                }
            }
            j = &j + &(&amb.eval_v(&k.coeff(kk)) * &prod);
        }
        num = &num + &(&weight * &j).mul_root_power(amb.a_exp_of(b * (lam * lam - 1)));
        den = &den + &weight.mul_root_power(amb.a_exp_of(sn * (lam * lam - 1)));
    }
    if den.is_zero() {
        return Err(WrtError::ZeroDenominator);
    }
    Ok(num.div(&den)?)
}

/// Inner sum of Lemma wk: fixed n₀, other colors restricted by `parity`, weights of components 1..l.
pub fn inner_color_sum(
    l: &SurgeryPresentation,
    amb: &Ambient,
    n0: i64,
    parity: Parity,
    range: SumRange,
) -> Result<CycElt, WrtError> {
    let r = amb.r();
    let framings = l.framings();
    if framings.is_empty() {
        return Err(WrtError::Variant("inner sum needs a 0-th component".into()));
    }
    let base: Vec<i64> = range.colors(r, parity).filter(|n| *n != 0).collect();
    let mut ranges = vec![vec![n0]];
    for _ in 1..framings.len() {
        ranges.push(base.clone());
    }
    let max_color = base.iter().copied().chain([n0]).max().unwrap_or(1);
    let qe = QEvaluator::new(l, amb, max_color);
    let mut total = amb.zero();
    for ns in cartesian(&ranges) {
        let w = framing_weight(amb, &framings[1..], &ns[1..]);
        total = &total + &qe.eval(&ns).mul_root_power(w);
    }
    Ok(total)
}

/// Normalization applied to a state sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizerKind {
    None,
    /// τ_{L(2,1)}
    L21,
    /// τ_{L(b,1)}
    Lens(i64),
}

/// Brute-force state sum of the lens space L(b,1), i.e. the unknot framed b.
pub fn lens_state_sum(
    b: i64,
    amb: &Ambient,
    variant: Variant,
    range: SumRange,
) -> Result<CycElt, WrtError> {
    let unknot = SurgeryPresentation::knot(CyclotomicKnot::unknot(), b);
    wrt_state_sum(&unknot, amb, variant, None, range)
}

/// State sum divided by the chosen lens-space state sum.
pub fn normalized_wrt(
    l: &SurgeryPresentation,
    amb: &Ambient,
    variant: Variant,
    refined: Option<Refinement>,
    normalizer: NormalizerKind,
    range: SumRange,
) -> Result<CycElt, WrtError> {
    let value = wrt_state_sum(l, amb, variant, refined, range)?;
    let norm = match normalizer {
        NormalizerKind::None => return Ok(value),
        NormalizerKind::L21 => lens_state_sum(2, amb, variant, range)?,
        NormalizerKind::Lens(b) => lens_state_sum(b, amb, variant, range)?,
    };
    if norm.is_zero() {
        return Err(WrtError::ZeroNormalizer);
    }
    Ok(value.div(&norm)?)
}

/// Closed forms of the lens-space normalizers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LensKind {
    /// `γ_{2,r}/((1+v⁻¹)γ_{1,r}) = γ_{−2,r}/((1+v)γ_{−1,r})`, even r
    L21,
    /// the same with odd-color sums γ¹, odd r
    L21So3,
    /// `L_b(F₀)γ_{b,r}/(2(1−q^{−sn(b)})γ_{sn(b),r})`; for odd r the odd-color analogue
    Lb1(i64),
}

pub fn lens_normalizer(kind: LensKind, amb: &Ambient) -> Result<CycElt, WrtError> {
    let r = amb.r();
    let v = amb.eval_v(&LaurentPoly::v_pow(1));
    let vinv = amb.eval_v(&LaurentPoly::v_pow(-1));
    let one = amb.one();
    let two_forms = |parity: Parity| -> Result<CycElt, WrtError> {
        let g = |b: i64| gauss_sum(b, amb, parity, SumRange::FullPeriod);
        let d1 = &(&one + &vinv) * &g(1);
        let d2 = &(&one + &v) * &g(-1);
        if d1.is_zero() || d2.is_zero() {
            return Err(WrtError::ZeroNormalizer);
        }
        let a = g(2).div(&d1)?;
        let b = g(-2).div(&d2)?;
        if a != b {
            return Err(WrtError::Inconsistent(
                "the two τ_{L(2,1)} forms differ".into(),
            ));
        }
        Ok(a)
    };
    let value = match kind {
        LensKind::L21 => {
            Variant::Su2.check(r)?;
            two_forms(Parity::All)?
        }
        LensKind::L21So3 => {
            Variant::So3.check(r)?;
            two_forms(Parity::Odd)?
        }
        LensKind::Lb1(b) => {
            let sn = b.signum();
            let parity = if r.is_multiple_of(2) {
                Parity::All
            } else {
                Parity::Odd
            };
            let f0 = f_poly(0);
            let num = &gauss_sum(b, amb, Parity::All, SumRange::FullPeriod)
                * &laplace_eval(b, amb, &f0, parity)?;
            let den = &gauss_sum(sn, amb, Parity::All, SumRange::FullPeriod)
                * &laplace_eval(sn, amb, &f0, parity)?;
            if den.is_zero() {
                return Err(WrtError::ZeroNormalizer);
            }
            num.div(&den)?
        }
    };
    if value.is_zero() {
        return Err(WrtError::ZeroNormalizer);
    }
    Ok(value)
}

/// `2(1 − q^{−sn(b)})`, the value of L_{sn(b)}(F₀).
pub fn sign_normalizer(b: i64) -> LaurentPoly {
    let sn = b.signum();
    one_minus_q(-sn).scale(&BigInt::from(2))
}

/// `(q^{k+1})_{k+1}` for the record of symbolic checks.
pub fn top_pochhammer(k: u32) -> LaurentPoly {
    pochhammer(k as i64 + 1, k + 1)
}
