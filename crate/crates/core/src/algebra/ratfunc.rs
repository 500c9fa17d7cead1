//! Rational functions in `z` over ℚ: the base field of non-autonomous
//! equations. Autonomous equations use the same field restricted to
//! constants, where every operation short-circuits to rational arithmetic.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::{rational_to_f64, Field, QField};
use super::factor::bi_from_ratfunc;
use super::multipoly::{MultiPoly, Var};
use super::upoly::{self, Poly};

pub type QPoly = Poly<QField>;

/// `num / den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: Vec::new(), den: vec![BigRational::one()] }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        RatFunc { num: upoly::constant(&QField, c), den: vec![BigRational::one()] }
    }

    /// The function `z`.
    pub fn z() -> Self {
        Self::poly(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn poly(p: QPoly) -> Self {
        RatFunc { num: upoly::trim(&QField, p), den: vec![BigRational::one()] }
    }

    /// Build and normalize `num / den`. Panics if `den` is zero.
    pub fn new(num: QPoly, den: QPoly) -> Self {
        let q = QField;
        let num = upoly::trim(&q, num);
        let den = upoly::trim(&q, den);
        assert!(!den.is_empty(), "rational function with zero denominator");
        if num.is_empty() {
            return Self::zero();
        }
        let (num, den) = if den.len() == 1 {
            (num, den)
        } else {
            let g = upoly::gcd(&q, &num, &den);
            if g.len() > 1 {
                (upoly::divrem(&q, &num, &g).0, upoly::divrem(&q, &den, &g).0)
            } else {
                (num, den)
            }
        };
        let lc = den.last().unwrap().clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let li = lc.recip();
            RatFunc { num: upoly::scale(&q, &num, &li), den: upoly::scale(&q, &den, &li) }
        }
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.den.len() == 1 && self.num.len() <= 1
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.len() == 1
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_constant() {
            Some(self.num.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    /// Value at a rational point, `None` at a pole.
    pub fn eval(&self, z0: &BigRational) -> Option<BigRational> {
        let d = upoly::eval(&QField, &self.den, z0);
        if d.is_zero() {
            None
        } else {
            Some(upoly::eval(&QField, &self.num, z0) / d)
        }
    }

    /// Taylor coefficients at `z0` up to (excluding) `order`; `None` at a pole.
    pub fn taylor(&self, z0: &BigRational, order: usize) -> Option<Vec<BigRational>> {
        let q = QField;
        let n = upoly::taylor_shift(&q, &self.num, z0);
        let d = upoly::taylor_shift(&q, &self.den, z0);
        let d0 = d.first().cloned().unwrap_or_else(BigRational::zero);
        if d0.is_zero() {
            return None;
        }
        // Solve d · c = n term by term.
        let mut c: Vec<BigRational> = Vec::with_capacity(order);
        for k in 0..order {
            let mut acc = n.get(k).cloned().unwrap_or_else(BigRational::zero);
            for j in 1..=k.min(d.len().saturating_sub(1)) {
                acc -= &d[j] * &c[k - j];
            }
            c.push(acc / &d0);
        }
        Some(c)
    }

    pub fn add(&self, o: &Self) -> Self {
        let q = QField;
        if self.den.len() == 1 && o.den.len() == 1 {
            return RatFunc { num: upoly::add(&q, &self.num, &o.num), den: vec![BigRational::one()] };
        }
        if self.den == o.den {
            return Self::new(upoly::add(&q, &self.num, &o.num), self.den.clone());
        }
        Self::new(
            upoly::add(&q, &upoly::mul(&q, &self.num, &o.den), &upoly::mul(&q, &o.num, &self.den)),
            upoly::mul(&q, &self.den, &o.den),
        )
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: upoly::neg(&QField, &self.num), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let q = QField;
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.len() == 1 && o.den.len() == 1 {
            return RatFunc { num: upoly::mul(&q, &self.num, &o.num), den: vec![BigRational::one()] };
        }
        Self::new(upoly::mul(&q, &self.num, &o.num), upoly::mul(&q, &self.den, &o.den))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc { num: upoly::scale(&QField, &self.num, c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::new(self.den.clone(), self.num.clone()))
        }
    }

    /// `d/dz`
    pub fn derive(&self) -> Self {
        let q = QField;
        if self.den.len() == 1 {
            return Self::poly(upoly::derivative(&q, &self.num));
        }
        let n1 = upoly::derivative(&q, &self.num);
        let d1 = upoly::derivative(&q, &self.den);
        Self::new(
            upoly::sub(&q, &upoly::mul(&q, &n1, &self.den), &upoly::mul(&q, &self.num, &d1)),
            upoly::mul(&q, &self.den, &self.den),
        )
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = QField;
        let n = upoly::render(&q, &self.num, "z");
        if self.den.len() == 1 {
            return write!(f, "{}", n);
        }
        let d = upoly::render(&q, &self.den, "z");
        let n = if self.num.len() > 1 && upoly::render(&q, &self.num, "z").contains(' ') {
            format!("({})", n)
        } else {
            n
        };
        let d = if d.contains(' ') || d.contains('*') { format!("({})", d) } else { d };
        write!(f, "{}/{}", n, d)
    }
}

/// The field ℚ(z) with the derivation `d/dz`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RatFuncField;

impl Field for RatFuncField {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc::zero()
    }
    fn one(&self) -> RatFunc {
        RatFunc::one()
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.add(b)
    }
    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.sub(b)
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        a.neg()
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.mul(b)
    }
    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        a.inv()
    }
    fn from_rational(&self, q: &BigRational) -> RatFunc {
        RatFunc::constant(q.clone())
    }
    fn derive(&self, a: &RatFunc) -> RatFunc {
        a.derive()
    }
    fn render(&self, a: &RatFunc) -> String {
        a.to_string()
    }
    fn approx(&self, a: &RatFunc) -> Option<Complex64> {
        a.as_constant().map(|c| Complex64::new(rational_to_f64(&c), 0.0))
    }
    fn as_rational(&self, a: &RatFunc) -> Option<BigRational> {
        a.as_constant()
    }
    /// Euclid over ℚ(z) blows up; clear denominators and run a primitive
    /// remainder sequence in ℚ[z][x] instead.
    fn poly_gcd(&self, a: &[RatFunc], b: &[RatFunc]) -> Option<Vec<RatFunc>> {
        let lift = |p: &[RatFunc]| {
            let cs: Vec<MultiPoly> = bi_from_ratfunc(p).iter().map(MultiPoly::from_z_poly).collect();
            MultiPoly::from_coeffs_in(Var::T, &cs)
        };
        let (ma, mb) = (lift(a), lift(b));
        let g = ma.gcd(&mb);
        if g.is_zero() {
            return Some(Vec::new());
        }
        let g = g.to_univariate(Var::T).expect("only T and z occur");
        Some(upoly::monic(self, &g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{int, rat};

    fn zpoly(cs: &[i64]) -> QPoly {
        cs.iter().map(|&c| int(c)).collect()
    }

    #[test]
    fn normalizes_common_factors() {
        // (z^2 - 1) / (2z - 2) = (z + 1)/2
        let r = RatFunc::new(zpoly(&[-1, 0, 1]), zpoly(&[-2, 2]));
        assert_eq!(r, RatFunc::poly(vec![rat(1, 2), rat(1, 2)]));
        assert_eq!(r.to_string(), "1/2*z + 1/2");
    }

    #[test]
    fn field_inverse() {
        let a = RatFunc::new(zpoly(&[1, 0, 3]), zpoly(&[0, 1, 1]));
        assert_eq!(a.mul(&a.inv().unwrap()), RatFunc::one());
    }

    #[test]
    fn derivative_quotient_rule() {
        // d/dz (1/z) = -1/z^2
        let r = RatFunc::new(zpoly(&[1]), zpoly(&[0, 1]));
        assert_eq!(r.derive(), RatFunc::new(zpoly(&[-1]), zpoly(&[0, 0, 1])));
    }

    #[test]
    fn taylor_of_geometric() {
        let r = RatFunc::new(zpoly(&[1]), zpoly(&[1, -1]));
        let t = r.taylor(&int(0), 4).unwrap();
        assert_eq!(t, vec![int(1), int(1), int(1), int(1)]);
        assert!(r.taylor(&int(1), 2).is_none());
    }
}
