//! Coefficient fields.
//!
//! Elements do not carry their field: every operation goes through a field
//! value (`&F`). This keeps extension fields cheap to pass around and lets
//! the series and Newton–Puiseux code stay generic over the exact tower and
//! a floating-point fallback.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::upoly;
use super::AlgebraError;

/// A commutative field of characteristic zero, optionally equipped with a
/// derivation extending `d/dz`.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly when `a` is zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_rational(&self, q: &BigRational) -> Self::Elem;
    /// The derivation `d/dz` on coefficients; zero on constant fields.
    fn derive(&self, a: &Self::Elem) -> Self::Elem;
    fn render(&self, a: &Self::Elem) -> String;

    /// A complex value of `a` under the field's chosen embedding, when the
    /// field has one.
    fn approx(&self, _a: &Self::Elem) -> Option<Complex64> {
        None
    }

    /// `Some(q)` when `a` is a rational number.
    fn as_rational(&self, _a: &Self::Elem) -> Option<BigRational> {
        None
    }

    /// Whether `d/dz` vanishes identically on the field.
    fn is_constant_field(&self) -> bool {
        false
    }

    /// A faster monic gcd of univariate polynomials when the field has
    /// one; plain Euclid is used otherwise.
    fn poly_gcd(&self, _a: &[Self::Elem], _b: &[Self::Elem]) -> Option<Vec<Self::Elem>> {
        None
    }

    /// Numeric fields answer `is_zero` with a tolerance.
    fn is_exact(&self) -> bool {
        true
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, &self.one()))
    }

    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Integer power allowing negative exponents.
    fn powi(&self, a: &Self::Elem, n: i64) -> Result<Self::Elem, AlgebraError> {
        if n >= 0 {
            Ok(self.pow(a, n as u64))
        } else {
            let inv = self.inv(a).ok_or(AlgebraError::DivisionByZero)?;
            Ok(self.pow(&inv, n.unsigned_abs()))
        }
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QField;

impl Field for QField {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_rational(&self, q: &BigRational) -> BigRational {
        q.clone()
    }
    fn derive(&self, _a: &BigRational) -> BigRational {
        BigRational::zero()
    }
    fn render(&self, a: &BigRational) -> String {
        render_rational(a)
    }
    fn approx(&self, a: &BigRational) -> Option<Complex64> {
        Some(Complex64::new(rational_to_f64(a), 0.0))
    }
    fn as_rational(&self, a: &BigRational) -> Option<BigRational> {
        Some(a.clone())
    }
    fn is_constant_field(&self) -> bool {
        true
    }
    fn poly_gcd(&self, a: &[BigRational], b: &[BigRational]) -> Option<Vec<BigRational>> {
        Some(super::factor::rational_gcd(&upoly::trim(self, a.to_vec()), &upoly::trim(self, b.to_vec())))
    }
}

/// Complex floating-point numbers with an absolute zero tolerance. Used only
/// where an exact tower is not available.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexField {
    pub tolerance: f64,
}

impl Default for ComplexField {
    fn default() -> Self {
        ComplexField { tolerance: 1e-9 }
    }
}

impl Field for ComplexField {
    type Elem = Complex64;

    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn one(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self, a: &Complex64) -> bool {
        a.norm() <= self.tolerance
    }
    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a + b
    }
    fn neg(&self, a: &Complex64) -> Complex64 {
        -a
    }
    fn mul(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }
    fn inv(&self, a: &Complex64) -> Option<Complex64> {
        if a.norm() == 0.0 {
            None
        } else {
            Some(a.inv())
        }
    }
    fn from_rational(&self, q: &BigRational) -> Complex64 {
        Complex64::new(rational_to_f64(q), 0.0)
    }
    fn derive(&self, _a: &Complex64) -> Complex64 {
        self.zero()
    }
    fn render(&self, a: &Complex64) -> String {
        render_complex(*a)
    }
    fn approx(&self, a: &Complex64) -> Option<Complex64> {
        Some(*a)
    }
    fn is_constant_field(&self) -> bool {
        true
    }
    fn is_exact(&self) -> bool {
        false
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale down huge numerators/denominators before converting.
            let nb = q.numer().bits() as i64;
            let db = q.denom().bits() as i64;
            let shift = (nb.max(db) - 1000).max(0) as u64;
            let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

pub fn render_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// 15 significant digits, the precision used in every machine-readable report.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let rounded: f64 = format!("{:.14e}", x).parse().unwrap_or(x);
    format!("{}", rounded)
}

pub fn render_complex(c: Complex64) -> String {
    let re = if c.re.abs() < 1e-300 { 0.0 } else { c.re };
    let im = if c.im.abs() < 1e-300 { 0.0 } else { c.im };
    if im == 0.0 {
        format_f64(re)
    } else if re == 0.0 {
        format!("{}i", format_f64(im))
    } else if im < 0.0 {
        format!("{}-{}i", format_f64(re), format_f64(-im))
    } else {
        format!("{}+{}i", format_f64(re), format_f64(im))
    }
}

/// Exact rational `n`-th root when one exists.
pub fn rational_nth_root(q: &BigRational, n: u32) -> Option<BigRational> {
    if n == 0 {
        return None;
    }
    if q.is_zero() {
        return Some(BigRational::zero());
    }
    if q.is_negative() && n.is_multiple_of(2) {
        return None;
    }
    let root = |x: &BigInt| -> Option<BigInt> {
        let r = x.abs().nth_root(n);
        if r.pow(n) == x.abs() {
            Some(if x.is_negative() { -r } else { r })
        } else {
            None
        }
    };
    Some(BigRational::new(root(q.numer())?, root(q.denom())?))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
