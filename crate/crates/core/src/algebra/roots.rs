//! Root handles: an exact minimal polynomial plus, over ℚ, an isolating
//! disk around one complex root.

use num_complex::Complex64;

use super::factor::factor_rational;
use super::field::{format_f64, rational_to_f64, Field, QField};
use super::ratfunc::{QPoly, RatFunc, RatFuncField};
use super::upoly::{self, Poly};
use super::AlgebraError;
use super::BaseField;

/// Refinement target for isolating radii.
pub const TARGET_RADIUS: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct RootHandle {
    /// Minimal polynomial over the active field, rendered in `var`.
    pub minpoly: String,
    pub degree: usize,
    pub multiplicity: usize,
    /// Exact value for roots lying in the active field.
    pub exact: Option<String>,
    pub approx: Option<Complex64>,
    pub radius: Option<f64>,
}

impl RootHandle {
    pub fn approx_string(&self) -> Option<String> {
        self.approx.map(|c| {
            if c.im == 0.0 {
                format_f64(c.re)
            } else {
                super::field::render_complex(c)
            }
        })
    }
}

/// All complex roots of a polynomial with complex coefficients, by
/// Aberth–Ehrlich iteration with a Newton polish. Sorted by real part, then
/// imaginary part.
pub fn approx_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let radius = 1.0 + monic[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(&monic, *r);
            if dp.norm() > 0.0 {
                let step = p / dp;
                if step.is_finite() {
                    *r -= step;
                }
            }
        }
        if r.im.abs() < 1e-14 * (1.0 + r.re.abs()) {
            r.im = 0.0;
        }
    }
    z.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    z
}

pub fn eval_with_derivative(c: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

/// Radius of a disk around `x` guaranteed to contain a root of `c`:
/// `n·|p(x)/p'(x)|`, with a floor relative to `|x|`.
pub fn isolating_radius(c: &[Complex64], x: Complex64) -> f64 {
    let n = c.len().saturating_sub(1) as f64;
    let (p, dp) = eval_with_derivative(c, x);
    let newton = if dp.norm() == 0.0 { f64::INFINITY } else { n * (p / dp).norm() };
    (2.0 * newton).max(TARGET_RADIUS * x.norm().max(1.0))
}

fn to_complex(p: &QPoly) -> Vec<Complex64> {
    p.iter().map(|c| Complex64::new(rational_to_f64(c), 0.0)).collect()
}

/// Roots over ℚ: one handle per complex root, rational roots exact.
pub fn roots_rational(p: &QPoly, var: &str) -> Vec<RootHandle> {
    let q = QField;
    let mut out = Vec::new();
    for (g, mult) in factor_rational(p) {
        let minpoly = upoly::render(&q, &g, var);
        let d = g.len() - 1;
        if d == 1 {
            let v = -g[0].clone();
            out.push(RootHandle {
                minpoly,
                degree: 1,
                multiplicity: mult,
                exact: Some(q.render(&v)),
                approx: Some(Complex64::new(rational_to_f64(&v), 0.0)),
                radius: Some(0.0),
            });
            continue;
        }
        let cg = to_complex(&g);
        for r in approx_roots(&cg) {
            out.push(RootHandle {
                minpoly: minpoly.clone(),
                degree: d,
                multiplicity: mult,
                exact: None,
                approx: Some(r),
                radius: Some(isolating_radius(&cg, r)),
            });
        }
    }
    out.sort_by(|a, b| {
        let (x, y) = (a.approx.unwrap(), b.approx.unwrap());
        x.re.partial_cmp(&y.re).unwrap().then(x.im.partial_cmp(&y.im).unwrap())
    });
    out
}

/// Roots over ℚ(z): one handle per irreducible factor. Numeric data is
/// attached only when the factor is free of `z`.
pub fn roots_ratfunc(p: &Poly<RatFuncField>, var: &str) -> Result<Vec<RootHandle>, AlgebraError> {
    let rf = RatFuncField;
    let mut out = Vec::new();
    for (g, mult) in rf.factor(p) {
        let d = g.len() - 1;
        let minpoly = upoly::render(&rf, &g, var);
        if d > rf.max_extension_degree() {
            return Err(AlgebraError::unsupported(minpoly, "root field degree exceeds the limit"));
        }
        let exact = if d == 1 { Some(rf.render(&rf.neg(&g[0]))) } else { None };
        let consts: Option<QPoly> = g.iter().map(|c| c.as_constant()).collect();
        if let Some(cq) = consts {
            for mut h in roots_rational(&cq, var) {
                h.multiplicity = mult;
                out.push(h);
            }
            continue;
        }
        out.push(RootHandle { minpoly, degree: d, multiplicity: mult, exact, approx: None, radius: None });
    }
    Ok(out)
}

/// Distinct roots with multiplicities over the active field: ℚ when every
/// coefficient is constant, ℚ(z) otherwise.
pub fn univariate_roots(p: &[RatFunc], var: &str) -> Result<Vec<RootHandle>, AlgebraError> {
    if p.is_empty() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let consts: Option<QPoly> = p.iter().map(|c| c.as_constant()).collect();
    match consts {
        Some(q) => Ok(roots_rational(&q, var)),
        None => roots_ratfunc(&p.to_vec(), var),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::int;

    #[test]
    fn cubic_roots() {
        let p: QPoly = vec![int(0), int(-1), int(0), int(1)];
        let r = roots_rational(&p, "T");
        let exact: Vec<_> = r.iter().map(|h| h.exact.clone().unwrap()).collect();
        assert_eq!(exact, vec!["-1", "0", "1"]);
    }

    #[test]
    fn gaussian_units() {
        let p: QPoly = vec![int(1), int(0), int(1)];
        let r = roots_rational(&p, "T");
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|h| h.degree == 2));
        assert!((r[0].approx.unwrap().im.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quintic_radical_over_rational_functions() {
        let mut p = vec![RatFunc::zero(); 6];
        p[0] = RatFunc::z().neg();
        p[5] = RatFunc::one();
        let r = univariate_roots(&p, "T").unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].degree, 5);
        assert_eq!(r[0].minpoly, "T^5 - z");
    }
}
