//! The Painlevé verdict and, for equations with the property, a normal form.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::field::render_rational;
use crate::algebra::upoly::{self, Poly};
use crate::algebra::{AlgebraError, Field, MultiPoly, QField, RatFunc, RatFuncField, Var};
use crate::parser::{Certificate, CurveEquation};
use crate::puiseux::default_truncation;
use crate::vectorfield::{derivation, find_poles, genus, Derivation, PoleSummary};
use crate::witness::BranchWitness;

#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    /// `D(x) = a0 + a1·x + a2·x²` for a generator `x` of the function field.
    Riccati { a0: RatFunc, a1: RatFunc, a2: RatFunc, coordinate: String },
    /// `(y')² = scale·P(y)` with `P` a monic squarefree cubic over ℚ.
    /// `depressed` is `(a, b)` of `P(x - p2/3) = x³ + a·x + b`.
    WeierstrassType { cubic: [BigRational; 4], depressed: (BigRational, BigRational), scale: RatFunc },
    /// Genus at least two with a regular vector field.
    ConstantsCase { genus: u32 },
    GenusOnly { genus: u32 },
}

impl Classification {
    pub fn class(&self) -> &'static str {
        match self {
            Classification::Riccati { .. } => "riccati",
            Classification::WeierstrassType { .. } => "weierstrass",
            Classification::ConstantsCase { .. } => "constants",
            Classification::GenusOnly { .. } => "genus-only",
        }
    }

    /// One-line description.
    pub fn render(&self) -> String {
        match self {
            Classification::Riccati { a0, a1, a2, coordinate } => {
                let rf = RatFuncField;
                let p = upoly::trim(&rf, vec![a0.clone(), a1.clone(), a2.clone()]);
                format!("D(x) = {} with x = {}", upoly::render(&rf, &p, "x"), coordinate)
            }
            Classification::WeierstrassType { cubic, scale, .. } => {
                let q = QField;
                let p = upoly::render(&q, cubic, "y");
                if *scale == RatFunc::one() {
                    format!("(y')^2 = {}", p)
                } else {
                    format!("(y')^2 = ({}) * ({})", scale, p)
                }
            }
            Classification::ConstantsCase { genus } => format!("genus {}, regular vector field", genus),
            Classification::GenusOnly { genus } => format!("genus {}", genus),
        }
    }

    /// Labels other than the explicit normal forms hold after a finite
    /// extension of the base field.
    pub fn note(&self) -> Option<&'static str> {
        match self {
            Classification::ConstantsCase { .. } | Classification::GenusOnly { .. } => {
                Some("normal form exists after a finite extension of the base field")
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    PP { classification: Classification },
    NotPP { poles: Vec<PoleSummary>, witness: Option<BranchWitness> },
}

impl Verdict {
    pub fn is_pp(&self) -> bool {
        matches!(self, Verdict::PP { .. })
    }
}

/// Everything decided about an equation.
#[derive(Clone, Debug)]
pub struct Decision {
    pub verdict: Verdict,
    /// Set when irreducibility over the algebraic closure is heuristic.
    pub conditional: bool,
    pub genus: u32,
    pub derivation: Derivation,
    pub truncation: usize,
}

/// Poles of `D` decide the property; a pole-free equation is classified.
pub fn decide_pp(eq: &CurveEquation) -> Result<Decision, AlgebraError> {
    decide_pp_with(eq, default_truncation(eq))
}

pub fn decide_pp_with(eq: &CurveEquation, truncation: usize) -> Result<Decision, AlgebraError> {
    let poles = find_poles(eq, truncation)?;
    let g = genus(eq)?;
    let verdict = if poles.is_empty() {
        Verdict::PP { classification: classify(eq, g) }
    } else {
        Verdict::NotPP { poles, witness: None }
    };
    Ok(Decision {
        verdict,
        conditional: eq.certificate() == Some(Certificate::Heuristic),
        genus: g,
        derivation: derivation(eq),
        truncation,
    })
}

/// The most specific label found for an equation with the property.
pub fn classify(eq: &CurveEquation, genus: u32) -> Classification {
    let found = if genus == 0 {
        linear_in_s(eq).or_else(|| linear_in_t(eq)).or_else(|| monomial_curve(eq))
    } else if genus == 1 {
        weierstrass(eq)
    } else {
        None
    };
    found.unwrap_or(if genus >= 2 { Classification::ConstantsCase { genus } } else { Classification::GenusOnly { genus } })
}

fn ratfunc_of(p: &MultiPoly) -> RatFunc {
    RatFunc::poly(p.z_poly())
}

fn riccati(cs: &[RatFunc], coordinate: &str) -> Option<Classification> {
    if cs.len() > 3 || cs.iter().all(|c| c.is_zero()) {
        return None;
    }
    let get = |i: usize| cs.get(i).cloned().unwrap_or_else(RatFunc::zero);
    Some(Classification::Riccati { a0: get(0), a1: get(1), a2: get(2), coordinate: coordinate.into() })
}

/// `A(z)·S + B(T, z)`: `D(y) = -B/A`.
fn linear_in_s(eq: &CurveEquation) -> Option<Classification> {
    if eq.deg_s() != 1 {
        return None;
    }
    let cs = eq.f().coeffs_in(Var::S);
    let (b, a) = (&cs[0], &cs[1]);
    if a.has_var(Var::T) {
        return None;
    }
    let ai = ratfunc_of(a).inv()?;
    let coeffs: Vec<RatFunc> = b.coeffs_in(Var::T).iter().map(|c| ratfunc_of(c).mul(&ai).neg()).collect();
    riccati(&coeffs, "y")
}

/// `A(S, z)·T + B(S, z)`: `t = -B/A` in `K(s)`, and
/// `D(s) = (s - ∂t)/t'(s)` must be a polynomial of degree at most two.
fn linear_in_t(eq: &CurveEquation) -> Option<Classification> {
    if eq.deg_t() != 1 {
        return None;
    }
    let rf = RatFuncField;
    let cs = eq.f().coeffs_in(Var::T);
    let to_poly = |p: &MultiPoly| -> Poly<RatFuncField> {
        upoly::trim(&rf, p.coeffs_in(Var::S).iter().map(ratfunc_of).collect())
    };
    let (b, a) = (to_poly(&cs[0]), to_poly(&cs[1]));
    let s = vec![rf.zero(), rf.one()];
    // numerator s·A² + ∂B·A − B·∂A, denominator A'·B − B'·A
    let num = upoly::add(
        &rf,
        &upoly::mul(&rf, &s, &upoly::mul(&rf, &a, &a)),
        &upoly::sub(
            &rf,
            &upoly::mul(&rf, &upoly::derive_coeffs(&rf, &b), &a),
            &upoly::mul(&rf, &b, &upoly::derive_coeffs(&rf, &a)),
        ),
    );
    let den = upoly::sub(
        &rf,
        &upoly::mul(&rf, &upoly::derivative(&rf, &a), &b),
        &upoly::mul(&rf, &upoly::derivative(&rf, &b), &a),
    );
    if den.is_empty() {
        return None;
    }
    let (quo, rem) = upoly::divrem(&rf, &num, &den);
    if !rem.is_empty() {
        return None;
    }
    riccati(&quo, "y'")
}

/// `S^p - T^q` with coprime `p, q`: `s = x^q`, `t = x^p`, `D(x) = x^{q-p+1}/p`.
fn monomial_curve(eq: &CurveEquation) -> Option<Classification> {
    let f = eq.f();
    if f.num_terms() != 2 || f.has_var(Var::Z) {
        return None;
    }
    let (p, q) = (eq.deg_s(), eq.deg_t());
    let want = MultiPoly::monomial(BigRational::one(), [p, 0, 0]).sub(&MultiPoly::monomial(BigRational::one(), [0, q, 0]));
    if *f != want || p.gcd(&q) != 1 {
        return None;
    }
    let k = q as i64 - p as i64 + 1;
    if !(0..=2).contains(&k) {
        return None;
    }
    let mut cs = vec![RatFunc::zero(); 3];
    cs[k as usize] = RatFunc::constant(BigRational::new(1.into(), (p as i64).into()));
    riccati(&cs, &format!("x with y' = x^{}, y = x^{}", q, p))
}

/// `c(z)·S² - Q(T, z)` with `Q = c(z)·scale·P(T)`.
fn weierstrass(eq: &CurveEquation) -> Option<Classification> {
    let f = eq.f();
    if eq.deg_s() != 2 || eq.deg_t() != 3 {
        return None;
    }
    let cs = f.coeffs_in(Var::S);
    if !cs[1].is_zero() || cs[2].has_var(Var::T) {
        return None;
    }
    let c2 = ratfunc_of(&cs[2]);
    let q: Vec<RatFunc> = cs[0].neg().coeffs_in(Var::T).iter().map(ratfunc_of).collect();
    let lc = q[3].clone();
    let li = lc.inv()?;
    let mut cubic: [BigRational; 4] = Default::default();
    for (j, c) in q.iter().enumerate() {
        cubic[j] = c.mul(&li).as_constant()?;
    }
    let qf = QField;
    let g = upoly::gcd(&qf, &cubic, &upoly::derivative(&qf, &cubic));
    if g.len() > 1 {
        return None;
    }
    let three = BigRational::from_integer(3.into());
    let (p0, p1, p2) = (&cubic[0], &cubic[1], &cubic[2]);
    let a = p1 - p2 * p2 / &three;
    let b = p0 - p1 * p2 / &three + BigRational::new(2.into(), 27.into()) * p2 * p2 * p2;
    Some(Classification::WeierstrassType { cubic, depressed: (a, b), scale: lc.mul(&c2.inv()?) })
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("exponents {p} and {q} are not coprime")]
    NotCoprime { p: u32, q: u32 },
}

/// `S^p - T^q` has the property exactly when `q - p ∈ {-1, 0, 1}`.
pub fn monomial_family_check(p: u32, q: u32) -> Result<bool, ClassifyError> {
    if p == 0 || q == 0 || p.gcd(&q) != 1 {
        return Err(ClassifyError::NotCoprime { p, q });
    }
    Ok((q as i64 - p as i64).abs() <= 1)
}

/// `f` rewritten for `w` with `y = (a·w + b)/(c·w + d)`, denominators
/// cleared.
pub fn mobius_transform(f: &MultiPoly, a: &BigRational, b: &BigRational, c: &BigRational, d: &BigRational) -> MultiPoly {
    let det = a * d - b * c;
    assert!(!det.is_zero(), "singular transformation");
    let t = MultiPoly::var(Var::T);
    let num = t.scale(a).add(&MultiPoly::constant(b.clone()));
    let den = t.scale(c).add(&MultiPoly::constant(d.clone()));
    let top = f.terms().map(|(m, _)| 2 * m.0[0] + m.0[1]).max().unwrap_or(0);
    let mut out = MultiPoly::zero();
    for (m, coef) in f.terms() {
        let [i, j, k] = m.0;
        let term = MultiPoly::monomial(coef * num_traits::pow(det.clone(), i as usize), [i, 0, k])
            .mul(&num.pow(j))
            .mul(&den.pow(top - 2 * i - j));
        out = out.add(&term);
    }
    out
}

/// Human-readable Riccati coefficient.
pub fn render_coeff(c: &RatFunc) -> String {
    match c.as_constant() {
        Some(q) => render_rational(&q),
        None => c.to_string(),
    }
}
