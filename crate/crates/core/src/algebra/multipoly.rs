//! Sparse polynomials in `S`, `T`, `z` over ℚ.
//!
//! Terms are kept in graded lexicographic order with `S > T > z`; the
//! leading term is the greatest one. Rendering lists terms from the leading
//! one down, with `^` for powers and explicit `*`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::render_rational;
use super::ratfunc::{QPoly, RatFunc, RatFuncField};
use super::upoly::{self, Poly};
use super::AlgebraError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    S = 0,
    T = 1,
    Z = 2,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::S, Var::T, Var::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::S => "S",
            Var::T => "T",
            Var::Z => "z",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponents of `S`, `T`, `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub [u32; 3]);

impl Mono {
    pub const ONE: Mono = Mono([0, 0, 0]);

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        Mono([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    pub fn div(&self, o: &Mono) -> Option<Mono> {
        if (0..3).all(|i| self.0[i] >= o.0[i]) {
            Some(Mono([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]]))
        } else {
            None
        }
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.total().cmp(&o.total()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Mono, BigRational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 3];
        e[v.index()] = 1;
        Self::monomial(BigRational::one(), e)
    }

    pub fn monomial(c: BigRational, exps: [u32; 3]) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono(exps), c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Mono, BigRational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Mono::ONE)
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_constant() {
            Some(self.terms.get(&Mono::ONE).cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    pub fn coeff(&self, exps: [u32; 3]) -> BigRational {
        self.terms.get(&Mono(exps)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.0[v.index()]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total()).max().unwrap_or(0)
    }

    pub fn has_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.0[v.index()] > 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn mul_mono(&self, m: Mono) -> Self {
        MultiPoly { terms: self.terms.iter().map(|(k, c)| (k.mul(&m), c.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative.
    pub fn partial(&self, v: Var) -> Self {
        let i = v.index();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut nm = m.0;
                nm[i] -= 1;
                out.add_term(Mono(nm), c * BigRational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Coefficients as polynomials in the other variables, indexed by the
    /// power of `v`.
    pub fn coeffs_in(&self, v: Var) -> Vec<MultiPoly> {
        if self.is_zero() {
            return Vec::new();
        }
        let i = v.index();
        let mut out = vec![Self::zero(); self.degree(v) as usize + 1];
        for (m, c) in &self.terms {
            let mut nm = m.0;
            let e = nm[i] as usize;
            nm[i] = 0;
            out[e].add_term(Mono(nm), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: Var, cs: &[MultiPoly]) -> Self {
        let mut e = [0; 3];
        let mut out = Self::zero();
        for (k, c) in cs.iter().enumerate() {
            e[v.index()] = k as u32;
            out = out.add(&c.mul_mono(Mono(e)));
        }
        out
    }

    pub fn leading_coeff_in(&self, v: Var) -> MultiPoly {
        self.coeffs_in(v).pop().unwrap_or_default()
    }

    /// Replace `v` by `r`.
    pub fn substitute(&self, v: Var, r: &MultiPoly) -> Self {
        let cs = self.coeffs_in(v);
        let mut acc = Self::zero();
        for c in cs.iter().rev() {
            acc = acc.mul(r).add(c);
        }
        acc
    }

    pub fn eval_var(&self, v: Var, x: &BigRational) -> Self {
        self.substitute(v, &Self::constant(x.clone()))
    }

    /// Exact quotient, `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (lm, lc) = d.leading()?;
        let (lm, lc) = (*lm, lc.clone());
        if d.num_terms() == 1 {
            let mut q = Self::zero();
            for (m, c) in &self.terms {
                q.add_term(m.div(&lm)?, c / &lc);
            }
            return Some(q);
        }
        let mut q = Self::zero();
        let mut r = self.clone();
        while let Some((rm, rc)) = r.leading() {
            let m = rm.div(&lm)?;
            let c = rc / &lc;
            let t = MultiPoly::monomial(c.clone(), m.0);
            r = r.sub(&d.mul(&t));
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Integer coefficients with content 1 and a positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c * BigRational::from_integer(l.clone())).to_integer());
        }
        let mut s = BigRational::new(l, g);
        if self.leading().unwrap().1.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    /// Greatest common divisor over ℚ, normalized by [`MultiPoly::primitive`].
    pub fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.primitive();
        }
        if o.is_zero() {
            return self.primitive();
        }
        if self.is_constant() || o.is_constant() {
            return Self::one();
        }
        let v = Var::ALL.into_iter().find(|&v| self.has_var(v) || o.has_var(v)).unwrap();
        if !self.has_var(v) {
            return self.gcd(&o.content_in(v));
        }
        if !o.has_var(v) {
            return o.gcd(&self.content_in(v));
        }
        let ca = self.content_in(v);
        let cb = o.content_in(v);
        let c = ca.gcd(&cb);
        let mut r0 = self.div_exact(&ca).unwrap();
        let mut r1 = o.div_exact(&cb).unwrap();
        if r0.degree(v) < r1.degree(v) {
            std::mem::swap(&mut r0, &mut r1);
        }
        let g = loop {
            let r = r0.pseudo_rem(&r1, v);
            if r.is_zero() {
                break r1;
            }
            if !r.has_var(v) {
                break Self::one();
            }
            r0 = r1;
            r1 = r.primitive_in(v);
        };
        c.mul(&g.primitive_in(v)).primitive()
    }

    /// gcd of the coefficients in `v`.
    pub fn content_in(&self, v: Var) -> Self {
        let mut g = Self::zero();
        for c in self.coeffs_in(v) {
            if c.is_zero() {
                continue;
            }
            g = g.gcd(&c);
            if g.is_constant() {
                return Self::one();
            }
        }
        g
    }

    pub fn primitive_in(&self, v: Var) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.div_exact(&self.content_in(v)).unwrap().primitive()
    }

    fn pseudo_rem(&self, b: &Self, v: Var) -> Self {
        self.pseudo_rem_counted(b, v).0
    }

    /// `(r, k)` with `lc_v(b)^k · self ≡ r mod b` and `deg_v r < deg_v b`.
    pub fn pseudo_rem_counted(&self, b: &Self, v: Var) -> (Self, u32) {
        let db = b.degree(v);
        let lb = b.leading_coeff_in(v);
        let mut r = self.clone();
        let mut k = 0;
        while !r.is_zero() && r.has_var(v) && r.degree(v) >= db {
            let dr = r.degree(v);
            let lr = r.leading_coeff_in(v);
            let mut e = [0; 3];
            e[v.index()] = dr - db;
            r = r.mul(&lb).sub(&b.mul(&lr).mul_mono(Mono(e)));
            k += 1;
        }
        (r, k)
    }

    /// The polynomial as a univariate in `v` over ℚ(z); `None` if the third
    /// variable occurs.
    pub fn to_univariate(&self, v: Var) -> Option<Poly<RatFuncField>> {
        if v == Var::Z {
            return None;
        }
        let other = if v == Var::S { Var::T } else { Var::S };
        if self.has_var(other) {
            return None;
        }
        let rf = RatFuncField;
        Some(upoly::trim(&rf, self.coeffs_in(v).iter().map(|c| RatFunc::poly(c.z_poly())).collect()))
    }

    /// Coefficients in `S` (outer) and `T` (inner) as polynomials in `z`.
    pub fn to_st_grid(&self) -> Vec<Vec<RatFunc>> {
        self.coeffs_in(Var::S)
            .iter()
            .map(|c| c.coeffs_in(Var::T).iter().map(|d| RatFunc::poly(d.z_poly())).collect())
            .collect()
    }

    /// Coefficients in `z` of a polynomial free of `S` and `T`.
    pub fn z_poly(&self) -> QPoly {
        let mut out = vec![BigRational::zero(); self.degree(Var::Z) as usize + 1];
        for (m, c) in &self.terms {
            out[m.0[2] as usize] += c;
        }
        upoly::trim(&super::QField, out)
    }

    pub fn from_z_poly(p: &QPoly) -> Self {
        Self::from_terms(p.iter().enumerate().map(|(k, c)| (Mono([0, 0, k as u32]), c.clone())))
    }

    /// Render with custom names for `S`, `T`, `z`.
    pub fn render_with(&self, names: [&str; 3]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for i in 0..3 {
                match m.0[i] {
                    0 => {}
                    1 => factors.push(names[i].to_string()),
                    e => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            let body = factors.join("*");
            let t = if body.is_empty() {
                render_rational(c)
            } else if c.is_one() {
                body
            } else if *c == -BigRational::one() {
                format!("-{}", body)
            } else {
                format!("{}*{}", render_rational(c), body)
            };
            terms.push(t);
        }
        upoly::join_terms(&terms)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(["S", "T", "z"]))
    }
}

/// Formal partial derivative.
pub fn poly_partial(f: &MultiPoly, v: Var) -> MultiPoly {
    f.partial(v)
}

/// Determinant of the Sylvester matrix of `f` and `g` in `v`, by fraction-free
/// elimination.
pub fn resultant(f: &MultiPoly, g: &MultiPoly, v: Var) -> Result<MultiPoly, AlgebraError> {
    if f.is_zero() || g.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let a = f.coeffs_in(v);
    let b = g.coeffs_in(v);
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return Ok(MultiPoly::one());
    }
    let mut mat = vec![vec![MultiPoly::zero(); size]; size];
    for r in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            mat[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            mat[n + r][r + k] = c.clone();
        }
    }
    Ok(bareiss_det(mat))
}

fn bareiss_det(mut mat: Vec<Vec<MultiPoly>>) -> MultiPoly {
    let n = mat.len();
    let mut sign = false;
    let mut prev = MultiPoly::one();
    for k in 0..n {
        if mat[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !mat[i][k].is_zero()) else {
                return MultiPoly::zero();
            };
            mat.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = mat[i][j].mul(&mat[k][k]).sub(&mat[i][k].mul(&mat[k][j]));
                mat[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            mat[i][k] = MultiPoly::zero();
        }
        prev = mat[k][k].clone();
    }
    let d = mat[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

/// `(-1)^{n(n-1)/2} res(f, ∂f, v) / lc(f)`.
pub fn discriminant(f: &MultiPoly, v: Var) -> Result<MultiPoly, AlgebraError> {
    let n = f.degree(v) as usize;
    if n < 2 {
        return Err(AlgebraError::DegreeTooSmall { var: v.name().into(), degree: n, needed: 2 });
    }
    let r = resultant(f, &f.partial(v), v)?;
    let r = if (n * (n - 1) / 2) % 2 == 1 { r.neg() } else { r };
    Ok(r.div_exact(&f.leading_coeff_in(v)).expect("leading coefficient divides the resultant"))
}

/// gcd as a polynomial in `v` over the field of the remaining variables:
/// monic when its leading coefficient in `v` is constant, primitive otherwise.
pub fn poly_gcd(f: &MultiPoly, g: &MultiPoly, v: Var) -> MultiPoly {
    if f.is_zero() && g.is_zero() {
        return MultiPoly::zero();
    }
    let full = f.gcd(g);
    if !full.has_var(v) {
        return MultiPoly::one();
    }
    let p = full.primitive_in(v);
    let lc = p.leading_coeff_in(v);
    match lc.constant_value() {
        Some(c) => p.scale(&c.recip()),
        None => p,
    }
}

impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        MultiPoly::add(self, o)
    }
}

impl std::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        MultiPoly::sub(self, o)
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        MultiPoly::mul(self, o)
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::int;

    fn s() -> MultiPoly {
        MultiPoly::var(Var::S)
    }
    fn t() -> MultiPoly {
        MultiPoly::var(Var::T)
    }
    fn z() -> MultiPoly {
        MultiPoly::var(Var::Z)
    }
    fn c(n: i64) -> MultiPoly {
        MultiPoly::from_int(n)
    }

    /// Naive cofactor expansion, independent of the elimination code.
    fn cofactor_det(m: &[Vec<MultiPoly>]) -> MultiPoly {
        if m.len() == 1 {
            return m[0][0].clone();
        }
        let mut acc = MultiPoly::zero();
        for j in 0..m.len() {
            let minor: Vec<Vec<MultiPoly>> =
                m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect()).collect();
            let term = m[0][j].mul(&cofactor_det(&minor));
            acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    #[test]
    fn partials() {
        let f = &(&s().pow(2) - &t()) + &z().pow(2);
        assert_eq!(f.partial(Var::S), s().scale(&int(2)));
        assert_eq!(f.partial(Var::Z), z().scale(&int(2)));
        let g = &(&s().pow(2) - &t().pow(3)) - &z();
        assert_eq!(g.partial(Var::T), t().pow(2).scale(&int(-3)));
    }

    #[test]
    fn resultant_examples() {
        let f = &s().pow(2) - &t();
        assert_eq!(resultant(&f, &s().scale(&int(2)), Var::S).unwrap(), t().scale(&int(-4)));
        assert_eq!(resultant(&(&s() - &t()), &(&s() + &t()), Var::S).unwrap(), t().scale(&int(2)));
        assert!(resultant(&s().pow(2), &s(), Var::S).unwrap().is_zero());
        assert_eq!(resultant(&MultiPoly::zero(), &s(), Var::S), Err(AlgebraError::ZeroPolynomial));
    }

    #[test]
    fn resultant_agrees_with_cofactor_expansion() {
        let f = &(&s().pow(3) - &t().mul(&s())) + &z();
        let g = &s().pow(2).scale(&int(2)) - &t().pow(2);
        let m = vec![
            vec![c(1), c(0), t().neg(), z(), c(0)],
            vec![c(0), c(1), c(0), t().neg(), z()],
            vec![c(2), c(0), t().pow(2).neg(), c(0), c(0)],
            vec![c(0), c(2), c(0), t().pow(2).neg(), c(0)],
            vec![c(0), c(0), c(2), c(0), t().pow(2).neg()],
        ];
        assert_eq!(resultant(&f, &g, Var::S).unwrap(), cofactor_det(&m));
    }

    #[test]
    fn discriminants() {
        let q = &(&t().pow(3) - &t()) + &z();
        assert_eq!(discriminant(&(&s().pow(2) - &q), Var::S).unwrap(), q.scale(&int(4)));
        assert_eq!(discriminant(&(&t().pow(2) + &c(1)), Var::T).unwrap(), c(-4));
        assert!(discriminant(&s(), Var::S).is_err());
    }

    #[test]
    fn gcds() {
        let a = &s().pow(2) - &t().pow(2);
        assert_eq!(poly_gcd(&a, &(&s() - &t()), Var::S), &s() - &t());
        assert_eq!(poly_gcd(&s(), &t(), Var::S), MultiPoly::one());
        let st = &s() - &t();
        let f = st.pow(2).mul(&(&s() + &c(1)));
        let g = st.mul(&(&s() + &c(2)));
        assert_eq!(poly_gcd(&f, &g, Var::S), st);
        assert!(poly_gcd(&MultiPoly::zero(), &MultiPoly::zero(), Var::S).is_zero());
    }

    #[test]
    fn rendering() {
        let f = &(&s().pow(2) - &t()) + &z().pow(2);
        assert_eq!(f.to_string(), "S^2 + z^2 - T");
        let g = &(&s().mul(&t()).scale(&crate::algebra::field::rat(-3, 2)) + &z()) - &c(4);
        assert_eq!(g.to_string(), "-3/2*S*T + z - 4");
    }

    #[test]
    fn exact_division() {
        let a = &s() - &t();
        let b = &s() + &z();
        assert_eq!(a.mul(&b).div_exact(&b), Some(a.clone()));
        assert_eq!(a.div_exact(&b), None);
    }
}
