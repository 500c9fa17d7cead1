//! Randomized property suites shared by the `properties` and `acceptance`
//! test targets. Each suite runs a fixed number of proptest cases and
//! reports the first counterexample as an error string.

#![allow(dead_code)]

use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use painleve::algebra::{AlgField, BaseField, Field, MultiPoly, QField};
use painleve::classify::{decide_pp, decide_pp_with, mobius_transform};
use painleve::parser::{parse_equation, validate, CurveEquation};
use painleve::puiseux::{places_above, Center, Curve, Place};
use painleve::series::{Laurent, EXACT};
use painleve::vectorfield::{derivation, local_vector_field, pole_order, poly_at_place, reparametrize, FunctionFieldElement};
use painleve::with_base;
use painleve::witness::lemma_series;

pub const CASES: u32 = 200;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Deterministic runner so that failures reproduce.
fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, max_global_rejects: 100_000, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn finish<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

/// Sparse polynomial in `S`, `T` from `(i, j, c)` triples.
fn poly(terms: &[(u32, u32, i64)]) -> MultiPoly {
    terms.iter().fold(MultiPoly::zero(), |acc, &(i, j, c)| acc.add(&MultiPoly::monomial(q(c), [i, j, 0])))
}

fn small_poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((0u32..3, 0u32..3, -3i64..=3), 1..4).prop_map(|t| poly(&t))
}

/// `c·S^p + b·S·T^k - P(T) - k'·z·T^i`, a random curve with a chance of
/// mixed terms and of a `z`-dependence. With `z` present the degrees stay
/// small: places over ℚ(z) of high residue degree are slow to expand.
fn random_curve(allow_z: bool) -> impl Strategy<Value = CurveEquation> {
    let shape = if allow_z { prop::bool::weighted(0.4).boxed() } else { Just(false).boxed() };
    shape
        .prop_flat_map(|with_z| {
            let (max_p, max_t) = if with_z { (3u32, 4usize) } else { (4, 6) };
            (
                Just(with_z),
                1u32..max_p,
                prop::sample::select(vec![1i64, 2, -1, 3]),
                prop::collection::vec(-3i64..=3, 2..max_t),
                (-2i64..=2, 0u32..2),
                (prop::sample::select(vec![-2i64, -1, 1, 2]), 0u32..2),
            )
        })
        .prop_filter_map("curve must validate", |(with_z, p, c, pt, (b, k), (zc, zi))| {
            let mut f = MultiPoly::monomial(q(c), [p, 0, 0]);
            for (j, a) in pt.iter().enumerate() {
                f = f.sub(&MultiPoly::monomial(q(*a), [0, j as u32, 0]));
            }
            if p > 1 {
                f = f.add(&MultiPoly::monomial(q(b), [1, k, 0]));
            }
            if with_z {
                f = f.sub(&MultiPoly::monomial(q(zc), [0, zi, 1]));
            }
            validate(&CurveEquation::new(&f)).ok()
        })
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn agrees<F: Field>(f: &F, a: &Laurent<F>, b: &Laurent<F>, min_prec: i64) -> bool {
    let d = a.sub(f, b);
    d.valuation().is_none() && d.prec() >= min_prec
}

/// `D` applied to a series at a place: `g'(u)·a(u) + ∂g(u)`.
fn local_d<B: BaseField>(p: &Place<B>, a: &Laurent<AlgField<B>>, g: &Laurent<AlgField<B>>) -> Laurent<AlgField<B>> {
    let l = &p.field;
    g.derive(l).mul(l, a).add(l, &g.derive_coeffs(l))
}

fn leibniz_in<B: BaseField>(b: B, eq: &CurveEquation, g: &MultiPoly, h: &MultiPoly, t0: i64) -> Result<(), TestCaseError> {
    let f = eq.f();
    let d = derivation(eq);
    let (dg, dh, dgh) = (d.apply(g), d.apply(h), d.apply(&g.mul(h)));
    // D(gh) = D(g)·h + g·D(h) in the function field
    let num = dg.num.mul(h).mul(&dh.den).add(&g.mul(&dh.num).mul(&dg.den));
    let rhs = FunctionFieldElement::new(num, dg.den.mul(&dh.den), f);
    check(dgh.equals_mod(&rhs, f), || format!("Leibniz fails symbolically for g = {}, h = {} on {}", g, h, f))?;
    let curve = Curve::new(b.clone(), f).map_err(|e| TestCaseError::reject(e.to_string()))?;
    let places = places_above(&curve, &Center::rational(&b, &b.from_int(t0)), 6)
        .map_err(|e| TestCaseError::reject(e.to_string()))?;
    for p in &places {
        match pole_order(p) {
            Ok(Some(k)) if k >= 0 => {}
            _ => continue,
        }
        let a = local_vector_field(p).unwrap();
        let l = &p.field;
        let gu = poly_at_place(g, p).unwrap();
        let hu = poly_at_place(h, p).unwrap();
        let lhs = local_d(p, &a, &gu.mul(l, &hu));
        let rhs = local_d(p, &a, &gu).mul(l, &hu).add(l, &gu.mul(l, &local_d(p, &a, &hu)));
        check(agrees(l, &lhs, &rhs, 2), || format!("local Leibniz fails at t = {} on {}", t0, f))?;
        let sym = dgh.at_place(p).unwrap();
        check(agrees(l, &lhs, &sym, 2), || format!("symbolic and local D differ at t = {} on {}", t0, f))?;
    }
    Ok(())
}

pub fn leibniz(cases: u32) -> Result<(), String> {
    let panel = [
        "(y')^2 = y - z^2",
        "(y')^2 = y^3 + z",
        "y' = 1 + y^2",
        "(y')^2 = y^3 - y",
        "(y')^3 = y^2 + y",
        "y*(y')^2 = 1 + z*y",
    ];
    let eqs: Vec<CurveEquation> = panel.iter().map(|t| validate(&parse_equation(t).unwrap()).unwrap()).collect();
    let strat = (0..eqs.len(), small_poly(), small_poly(), 2i64..7);
    finish(runner(cases).run(&strat, |(i, g, h, t0)| {
        let eq = &eqs[i];
        with_base!(eq, |b| leibniz_in(b, eq, &g, &h, t0))
    }))
}

fn reparam_in<B: BaseField>(b: B, eq: &CurveEquation) -> Result<(), TestCaseError> {
    let curve = Curve::new(b, eq.f()).map_err(|e| TestCaseError::reject(e.to_string()))?;
    let centers = curve.candidate_centers().map_err(|e| TestCaseError::reject(e.to_string()))?;
    for c in &centers {
        let ps = match places_above(&curve, c, 12) {
            Ok(ps) => ps,
            Err(e) => return Err(TestCaseError::reject(e.to_string())),
        };
        for p in &ps {
            let Ok(before) = pole_order(p) else { continue };
            let Some(before) = before else { continue };
            let after = pole_order(&reparametrize(p).unwrap()).unwrap();
            check(after == Some(before), || {
                format!("order {} became {:?} after u -> u(1+u) on {} at {}", before, after, eq.f(), c.render(curve.base()))
            })?;
        }
    }
    Ok(())
}

pub fn reparametrization(cases: u32) -> Result<(), String> {
    finish(runner(cases).run(&random_curve(true), |eq| with_base!(eq, |b| reparam_in(b, &eq))))
}

pub const MOBIUS_PANEL: [&str; 6] = [
    "(y')^2 = y - z^2",
    "(y')^2 = y^3 + z",
    "y' = 1 + y^2",
    "(y')^2 = y^3 - y",
    "(y')^2 = y^5 - 1",
    "(y')^3 = y^2",
];

/// Enough to certify every order on the panel; the automatic doubling
/// covers the rest. The default grows with `deg_T`, which the maps raise.
const MOBIUS_TRUNCATION: usize = 8;

/// Each panel equation gets `per_equation` random maps `y = (a·w + b)/(c·w + d)`.
pub fn mobius(per_equation: u32) -> Result<(), String> {
    for text in MOBIUS_PANEL {
        let eq = validate(&parse_equation(text).unwrap()).unwrap();
        let pp = decide_pp(&eq).unwrap().verdict.is_pp();
        let maps = (-4i64..=4, -4i64..=4, -4i64..=4, -4i64..=4).prop_filter("invertible", |(a, b, c, d)| a * d != b * c);
        finish(runner(per_equation).run(&maps, |(a, b, c, d)| {
            let g = mobius_transform(eq.f(), &q(a), &q(b), &q(c), &q(d));
            let moved = validate(&CurveEquation::new(&g))
                .map_err(|e| TestCaseError::fail(format!("{} under ({a},{b},{c},{d}): {}", text, e)))?;
            let got = decide_pp_with(&moved, MOBIUS_TRUNCATION).map_err(|e| TestCaseError::fail(e.to_string()))?.verdict.is_pp();
            check(got == pp, || format!("{} under ({a},{b},{c},{d}) -> {}: pp {} became {}", text, moved.f(), pp, got))
        }))
        .map_err(|e| format!("{}: {}", text, e))?;
    }
    Ok(())
}

pub fn lemma_stability(cases: u32) -> Result<(), String> {
    let strat = (
        2u32..5,
        prop::sample::select(vec![1i64, -1, 2, -2, 3]),
        prop::collection::vec(prop::collection::vec(-3i64..=3, 1..4), 0..3),
        prop::collection::vec(-3i64..=3, 0..3),
        4usize..9,
    );
    let f = AlgField::trivial(QField);
    finish(runner(cases).run(&strat, |(m, c1, higher, g0_tail, n)| {
        // G(ζ, w) = c1^m + ζ·(…) + Σ_k g_k(ζ) w^k, with ζ = τ^m
        let c1 = f.from_int(c1);
        let mut g0 = vec![f.pow(&c1, m as u64)];
        g0.extend(g0_tail.iter().map(|&c| f.from_int(c)));
        let mut g = vec![Laurent::from_coeffs(&f, g0, 0, EXACT)];
        for cs in &higher {
            g.push(Laurent::from_coeffs(&f, cs.iter().map(|&c| f.from_int(c)).collect(), 0, EXACT));
        }
        let g: Vec<_> = g.iter().map(|s| s.subs_monomial(&f, &f.one(), m as i64).unwrap()).collect();
        let short = lemma_series(&f, m, &g, &c1, n).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let long = lemma_series(&f, m, &g, &c1, 2 * n).map_err(|e| TestCaseError::fail(e.to_string()))?;
        for k in 1..=n as i64 {
            check(Field::eq(&f, &short.coeff(&f, k), &long.coeff(&f, k)), || format!("coefficient {} changed from N = {} to 2N", k, n))?;
        }
        Ok(())
    }))
}

fn ramification_in<B: BaseField>(b: B, eq: &CurveEquation) -> Result<(), TestCaseError> {
    let curve = Curve::new(b.clone(), eq.f()).map_err(|e| TestCaseError::reject(e.to_string()))?;
    let n = curve.deg_s() as usize;
    let mut centers = curve.candidate_centers().map_err(|e| TestCaseError::reject(e.to_string()))?;
    centers.push(Center::rational(&b, &b.from_int(7)));
    for c in &centers {
        let ps = places_above(&curve, c, 6).map_err(|e| TestCaseError::reject(e.to_string()))?;
        let sum: usize = ps.iter().map(|p| p.e as usize * p.residue_degree()).sum();
        check(sum == n * c.degree(), || {
            format!("sum e*f = {} over {} on {}, expected {}", sum, c.render(curve.base()), eq.f(), n * c.degree())
        })?;
    }
    Ok(())
}

pub fn ramification_sums(cases: u32) -> Result<(), String> {
    finish(runner(cases).run(&random_curve(true), |eq| with_base!(eq, |b| ramification_in(b, &eq))))
}
