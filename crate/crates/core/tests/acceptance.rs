//! One PASS/FAIL line per acceptance criterion, all by exact equality.
//!
//! Two criteria contain sub-claims that exact computation contradicts (see README). Their
//! sub-checks are listed in `KNOWN_FAILURES`; the criterion still prints FAIL. The process
//! exits non-zero when any other sub-check fails or a known failure stops failing.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use qlap::cli::verify;
use qlap::cyclo::{Ambient, CycElt, Parity, RootSpec, SumRange};
use qlap::invariants::{self, Basis, SurgeryPresentation};
use qlap::laplace::laplace_eval;
use qlap::laurent::LaurentPoly;
use qlap::qkit::{f_poly, neg_v_product};
use qlap::wrt::inner_color_sum;

const KNOWN_FAILURES: &[&str] = &[
    "6: fig8-f2 (1-v)·value integral N=12",
    "6: fig8-f2 (1-v)·value integral N=20",
    "6: fig8-f2 (1-v)·value integral N=28",
    "6: whitehead-2-m1 (1-v)·value integral N=12",
    "6: whitehead-2-m1 (1-v)·value integral N=20",
    "6: whitehead-2-m1 (1-v)·value integral N=28",
    "7: refined value integral r=4",
    "7: refined value integral r=12",
];

struct Criterion {
    id: u32,
    title: &'static str,
    subs: Vec<(String, bool)>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Self {
            id,
            title,
            subs: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, pass: bool) {
        self.subs
            .push((format!("{}: {}", self.id, name.into()), pass));
    }

    fn pass(&self) -> bool {
        self.subs.iter().all(|(_, p)| *p)
    }
}

fn v_pow(e: i64) -> LaurentPoly {
    LaurentPoly::v_pow(e)
}

fn one_plus(p: LaurentPoly) -> LaurentPoly {
    &LaurentPoly::one() + &p
}

fn one_minus(p: LaurentPoly) -> LaurentPoly {
    &LaurentPoly::one() - &p
}

fn v_ambient(n: u32) -> Ambient {
    Ambient::from_v(RootSpec::new(n, 1).unwrap()).unwrap()
}

fn c1() -> Criterion {
    let mut c = Criterion::new(1, "L_{-1}, L_{+1} of F_k, k ≤ 25");
    let (minus, plus) = verify::lemma_l1(25);
    c.check("L_{-1}(F_k) = 2(q^{k+1})_{k+1}", minus);
    c.check(
        "L_{+1}(F_k) = 2(-1)^{k+1}q^{-(k+2)(k+1)/2}(q^{k+1})_{k+1}",
        plus,
    );
    c
}

fn c2() -> Criterion {
    let mut c = Criterion::new(2, "L_{-2}, L_{+2} of F_k, k ≤ 25");
    let (minus, plus) = verify::lemma_l2(25);
    c.check("L_{-2}(F_k) = 2(1-v)(-v^2;-v)_{2k}", minus);
    c.check("L_{+2}(F_k) = 2(-1)^{k+1}v^{-k-1}(1-v)(-v^2;-v)_{2k}", plus);
    c.check(
        "proof display (1-v)(-v^2;-v)_{2k} is off by exactly 2",
        verify::lemma_l2_proof_display_off_by_two(25),
    );
    c
}

fn c3() -> Criterion {
    let mut c = Criterion::new(3, "parity tables = oracle, r ≤ 32, |b| ≤ 16, |a| ≤ 20");
    let sweep = verify::sweep_tables(32, 16, 20);
    c.check(
        format!(
            "{} points over {} admissible (b, r)",
            sweep.points,
            sweep.pairs - sweep.skipped_pairs
        ),
        sweep.points > 0,
    );
    c.check(
        format!("{} mismatches", sweep.mismatches.len()),
        sweep.mismatches.is_empty(),
    );
    c
}

fn c4() -> Criterion {
    let mut c = Criterion::new(
        4,
        "ZHS universal = brute force, r odd 3..15, r = 4, 8, 12, 16",
    );
    let orders: Vec<u32> = (3..=15).step_by(2).chain([4, 8, 12, 16]).collect();
    for name in ["poincare", "fig8-zhs"] {
        let l = invariants::builtin(name, None).unwrap();
        for &r in &orders {
            let amb = Ambient::for_q_order(r, 1).unwrap();
            let u = invariants::evaluate_at(&l, &amb, None).unwrap();
            let b = invariants::brute_force_at(&l, &amb, None).unwrap();
            c.check(format!("{name} r={r}"), u == b);
        }
    }
    c
}

fn c5() -> Criterion {
    let mut c = Criterion::new(
        5,
        "M2 universal = brute force, N = 8..24 by 4 and 3, 5, 7, 9; coefficient displays",
    );
    for name in ["fig8-f2", "whitehead-2-m1"] {
        let l = invariants::builtin(name, None).unwrap();
        for n in [8, 12, 16, 20, 24, 3, 5, 7, 9] {
            let (u, b) = invariants::compare_at(&l, n, 1, None).unwrap();
            c.check(format!("{name} N={n}"), u == b);
        }
        let e = invariants::universal_series(&l, 21).unwrap();
        let displays =
            e.basis == Basis::M2 && (0..=20).all(|n| e.coeffs[n as usize] == v_pow(-n * (n + 2)));
        c.check(format!("{name} a_n = v^(-n(n+2)), n ≤ 20"), displays);
    }
    c
}

/// The Introduction series for the figure-eight knot with framing 2, refined by ε.
/// `sign_n` selects the corrected (−1)ⁿ form; without it the display is taken literally.
fn intro_series(n_v: u32, eps: u8, sign_n: bool) -> CycElt {
    let amb = v_ambient(n_v);
    let twist = if n_v.is_multiple_of(8) {
        let zeta = (n_v / 8) % 2;
        CycElt::from_int(
            amb.spec(),
            if (zeta + eps as u32).is_multiple_of(2) {
                -1
            } else {
                1
            },
        )
    } else {
        let p = (n_v / 4) as i64;
        let i = amb.imaginary_unit().unwrap();
        let vp = amb.eval_v(&v_pow(p * p));
        let zeta = if vp == i { 1 } else { -1 };
        let sign = if eps == 0 { zeta } else { -zeta };
        i.scale_int(&sign.into())
    };
    let mut total = amb.zero();
    for n in 0..n_v as i64 {
        let q_part: LaurentPoly = (1..=n).map(|i| one_plus(v_pow(2 * i))).product();
        let minus: LaurentPoly = (0..=n).map(|i| one_minus(v_pow(2 * i + 1))).product();
        let plus: LaurentPoly = (0..=n).map(|i| one_plus(v_pow(2 * i + 1))).product();
        let t = if sign_n && n % 2 == 1 {
            -&twist
        } else {
            twist.clone()
        };
        let bracket = &amb.eval_v(&minus) + &(&t * &amb.eval_v(&plus));
        total = &total + &(&amb.eval_v(&(&v_pow(-n * (n + 2)) * &q_part)) * &bracket);
    }
    let den = amb.eval_v(&one_minus(v_pow(1))).scale_int(&2.into());
    total.div(&den).unwrap()
}

fn c6() -> Criterion {
    let mut c = Criterion::new(6, "refinements at N = 8, 16, 24 and 12, 20, 28");
    let mut literal_agrees = true;
    for name in ["fig8-f2", "whitehead-2-m1"] {
        let l = invariants::builtin(name, None).unwrap();
        for n in [8, 16, 24, 12, 20, 28] {
            let amb = v_ambient(n);
            let mut sum = amb.zero();
            let mut refined_ok = true;
            let mut intro_ok = true;
            let mut integral = true;
            for eps in [0u8, 1] {
                let (u, b) = invariants::compare_at(&l, n, 1, Some(eps)).unwrap();
                refined_ok &= u == b;
                sum = &sum + &u;
                intro_ok &= u == intro_series(n, eps, true);
                literal_agrees &= u == intro_series(n, eps, false);
                integral &= (&amb.eval_v(&one_minus(v_pow(1))) * &u).is_algebraic_integer();
            }
            let plain = invariants::evaluate_at(&l, &amb, None).unwrap();
            c.check(format!("{name} refined = brute force N={n}"), refined_ok);
            c.check(format!("{name} sum over ε = τ' N={n}"), sum == plain);
            c.check(
                format!("{name} matches the example series with (-1)^n N={n}"),
                intro_ok,
            );
            c.check(format!("{name} (1-v)·value integral N={n}"), integral);
        }
    }
    c.check(
        "literal example series (no (-1)^n) disagrees",
        !literal_agrees,
    );
    c
}

fn example_52(amb: &Ambient, eps: u8) -> CycElt {
    let r = amb.r() as i64;
    let mut total = amb.zero();
    for k in 0..=(r - 2).max(0) {
        let lap = laplace_eval(-4, amb, &f_poly(k as u32), Parity::from_eps(eps)).unwrap();
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let w = amb.eval_v(&LaurentPoly::q_pow(-k * (k + 1) / 2).scale(&sign.into()));
        total = &total + &(&w * &lap);
    }
    total.scale(&num_rational::BigRational::new(1.into(), 2.into()))
}

fn c7() -> Criterion {
    let mut c = Criterion::new(
        7,
        "whitehead-m1-m4: general-b formula, example, brute force, integrality",
    );
    let l = invariants::builtin("whitehead-m1-m4", None).unwrap();
    for r in [3u32, 5, 7] {
        let amb = Ambient::for_q_order(r, 1).unwrap();
        let u = invariants::general_b_eval(&l, None, &amb).unwrap();
        let b = invariants::brute_force_at(&l, &amb, None).unwrap();
        c.check(format!("general-b = brute force r={r}"), u == b);
        c.check(format!("value integral r={r}"), u.is_algebraic_integer());
    }
    for r in [4u32, 8, 12] {
        let amb = Ambient::for_q_order(r, 1).unwrap();
        let plain = invariants::general_b_eval(&l, None, &amb).unwrap();
        let mut sum = amb.zero();
        let mut brute_ok = true;
        let mut example_ok = true;
        let mut integral = true;
        for eps in [0u8, 1] {
            let u = invariants::general_b_eval(&l, Some(eps), &amb).unwrap();
            brute_ok &= u == invariants::brute_force_at(&l, &amb, Some(eps)).unwrap();
            example_ok &= u == example_52(&amb, eps);
            integral &= u.is_algebraic_integer();
            sum = &sum + &u;
        }
        c.check(
            format!("general-b = brute force r={r}"),
            brute_ok && plain == invariants::brute_force_at(&l, &amb, None).unwrap(),
        );
        c.check(
            format!("general-b = ½Σ(-1)^k q^(-k(k+1)/2) L^ε_(-4)(F_k) r={r}"),
            example_ok,
        );
        c.check(format!("sum over ε = τ' r={r}"), sum == plain);
        c.check(
            format!("value integral r={r}"),
            plain.is_algebraic_integer(),
        );
        c.check(format!("refined value integral r={r}"), integral);
    }
    c
}

fn c8() -> Criterion {
    let mut c = Criterion::new(8, "Taylor coefficients and p-adic congruences");
    for check in verify::taylor(12, 6) {
        c.check(check.name, check.pass);
    }
    c
}

fn c9() -> Criterion {
    let mut c = Criterion::new(
        9,
        "S(n,k), basis change boundaries, alternating binomial sums",
    );
    c.check("S(n,k) closed form, n ≤ 12", verify::s_nk_identity(12));
    c.check(
        "basis change boundaries, n ≤ 12",
        verify::basis_change_boundaries(12),
    );
    c.check(
        "Σ_j (-1)^j [2k+1 choose j] = 0 at q = 1, k ≤ 12",
        verify::alternating_binomial_sum(12),
    );
    c
}

/// Three components, framings 2, 1, −1, with a small arbitrary coefficient table.
fn three_component() -> SurgeryPresentation {
    let mut table = std::collections::BTreeMap::new();
    table.insert(vec![0, 0, 0], LaurentPoly::one());
    table.insert(vec![1, 0, 1], v_pow(-3));
    table.insert(vec![1, 1, 0], &v_pow(2) - &v_pow(-1));
    table.insert(vec![2, 1, 1], neg_v_product(1));
    SurgeryPresentation::from_table(vec![2, 1, -1], table).unwrap()
}

fn c10() -> Criterion {
    let mut c = Criterion::new(10, "even colors absorb the inner sum, l ≤ 2, r = 4, 8, 12");
    let links = [
        (
            "whitehead-2-m1",
            invariants::builtin("whitehead-2-m1", None).unwrap(),
        ),
        ("three-component table", three_component()),
    ];
    for (name, l) in &links {
        for r in [4u32, 8, 12] {
            let amb = Ambient::for_q_order(r, 1).unwrap();
            let mut ok = true;
            let mut nonzero = false;
            for n0 in (1..2 * r as i64).filter(|n| n % r as i64 != 0) {
                let even =
                    inner_color_sum(l, &amb, n0, Parity::Even, SumRange::FullPeriod).unwrap();
                let all = inner_color_sum(l, &amb, n0, Parity::All, SumRange::FullPeriod).unwrap();
                ok &= even == all;
                nonzero |= !all.is_zero();
            }
            c.check(format!("{name} r={r}"), ok);
            c.check(format!("{name} r={r} has a non-zero inner sum"), nonzero);
        }
    }
    c
}

fn main() -> ExitCode {
    let known: BTreeSet<&str> = KNOWN_FAILURES.iter().copied().collect();
    let mut unexpected = Vec::new();
    let mut seen_known = BTreeSet::new();
    let criteria: [fn() -> Criterion; 10] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10];
    for f in criteria {
        let start = Instant::now();
        let c = f();
        let tag = if c.pass() { "PASS" } else { "FAIL" };
        let passed = c.subs.iter().filter(|(_, p)| *p).count();
        println!(
            "{tag} {:>2} {} [{passed}/{} sub-checks, {:.1?}]",
            c.id,
            c.title,
            c.subs.len(),
            start.elapsed()
        );
        for (name, pass) in &c.subs {
            if !pass {
                println!("       failed: {name}");
                if known.contains(name.as_str()) {
                    seen_known.insert(name.clone());
                } else {
                    unexpected.push(name.clone());
                }
            }
        }
    }
    let missing: Vec<_> = known.iter().filter(|k| !seen_known.contains(**k)).collect();
    for k in &missing {
        println!("known failure no longer fails: {k}");
    }
    if unexpected.is_empty() && missing.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
