//! Simple algebraic extensions `B[w]/(p)` of the base field `B` (ℚ or ℚ(z)),
//! factorization over them by norms, and adjunction of further roots through
//! a primitive element.

use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;

use super::factor::{factor_over_ratfunc, factor_rational};
use super::field::{Field, QField};
use super::ratfunc::{RatFunc, RatFuncField};
use super::roots::approx_roots;
use super::upoly::{self, Poly};
use super::AlgebraError;

/// A base field that can factor its own univariate polynomials.
pub trait BaseField: Field + Copy + Default + 'static {
    /// Monic irreducible factors with multiplicities.
    fn factor(&self, p: &Poly<Self>) -> Vec<(Poly<Self>, usize)>;
    /// Extensions of larger degree are refused.
    fn max_extension_degree(&self) -> usize;
    /// A rational function of `z` as an element, when it lies in the field.
    fn from_ratfunc(&self, r: &RatFunc) -> Option<Self::Elem>;
    /// Taylor coefficients at `z = z1` up to `(z - z1)^order` exclusive;
    /// `None` at a pole.
    fn taylor(&self, a: &Self::Elem, z1: &BigRational, order: usize) -> Option<Vec<BigRational>>;
}

impl BaseField for QField {
    fn factor(&self, p: &Poly<Self>) -> Vec<(Poly<Self>, usize)> {
        factor_rational(p)
    }
    fn max_extension_degree(&self) -> usize {
        24
    }
    fn from_ratfunc(&self, r: &RatFunc) -> Option<BigRational> {
        r.as_constant()
    }
    fn taylor(&self, a: &BigRational, _z1: &BigRational, order: usize) -> Option<Vec<BigRational>> {
        Some(if order == 0 { Vec::new() } else { vec![a.clone()] })
    }
}

impl BaseField for RatFuncField {
    fn factor(&self, p: &Poly<Self>) -> Vec<(Poly<Self>, usize)> {
        factor_over_ratfunc(p)
    }
    fn max_extension_degree(&self) -> usize {
        12
    }
    fn from_ratfunc(&self, r: &RatFunc) -> Option<RatFunc> {
        Some(r.clone())
    }
    fn taylor(&self, a: &RatFunc, z1: &BigRational, order: usize) -> Option<Vec<BigRational>> {
        a.taylor(z1, order)
    }
}

/// `B[w]/(p)` with `p` monic irreducible. Elements are reduced coefficient
/// vectors in `w`.
#[derive(Clone, Debug)]
pub struct AlgField<B: BaseField> {
    base: B,
    modulus: Arc<Poly<B>>,
    dgen: Arc<Vec<B::Elem>>,
    gen_approx: Option<Complex64>,
    symbol: Arc<str>,
}

impl<B: BaseField> PartialEq for AlgField<B> {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}

impl<B: BaseField> AlgField<B> {
    /// `B` itself, presented as a degree-one extension.
    pub fn trivial(base: B) -> Self {
        Self::new(base, vec![base.zero(), base.one()], Some(Complex64::new(0.0, 0.0)))
    }

    /// `modulus` must be monic and irreducible over `B`.
    pub fn new(base: B, modulus: Poly<B>, gen_approx: Option<Complex64>) -> Self {
        let modulus = upoly::monic(&base, &modulus);
        assert!(modulus.len() >= 2, "extension modulus must have positive degree");
        // D(w) = -p^D(w) / p'(w)
        let pd = upoly::derive_coeffs(&base, &modulus);
        let dp = upoly::derivative(&base, &modulus);
        let dgen = if pd.is_empty() {
            Vec::new()
        } else {
            let inv = upoly::inv_mod(&base, &dp, &modulus).expect("separable modulus");
            upoly::neg(&base, &upoly::rem(&base, &upoly::mul(&base, &pd, &inv), &modulus))
        };
        AlgField { base, modulus: Arc::new(modulus), dgen: Arc::new(dgen), gen_approx, symbol: Arc::from("w") }
    }

    pub fn with_symbol(mut self, symbol: &str) -> Self {
        self.symbol = Arc::from(symbol);
        self
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn modulus(&self) -> &Poly<B> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn gen_approx(&self) -> Option<Complex64> {
        self.gen_approx
    }

    pub fn gen(&self) -> Vec<B::Elem> {
        self.reduce(vec![self.base.zero(), self.base.one()])
    }

    pub fn embed(&self, b: &B::Elem) -> Vec<B::Elem> {
        upoly::constant(&self.base, b.clone())
    }

    /// The element as a base element when it lies in `B`.
    pub fn as_base(&self, a: &[B::Elem]) -> Option<B::Elem> {
        match a.len() {
            0 => Some(self.base.zero()),
            1 => Some(a[0].clone()),
            _ => None,
        }
    }

    fn reduce(&self, a: Vec<B::Elem>) -> Vec<B::Elem> {
        let a = upoly::trim(&self.base, a);
        if a.len() < self.modulus.len() {
            a
        } else {
            upoly::rem(&self.base, &a, &self.modulus)
        }
    }

    /// Minimal polynomial rendered in the field's symbol.
    pub fn render_minpoly(&self) -> String {
        upoly::render(&self.base, &self.modulus, &self.symbol)
    }

    /// Evaluate a polynomial over `B` (in the generator) at `img` in `target`.
    pub fn map_into<C: Field>(&self, a: &[B::Elem], target: &C, img: &C::Elem, emb: impl Fn(&B::Elem) -> C::Elem) -> C::Elem {
        let mut acc = target.zero();
        for c in a.iter().rev() {
            acc = target.add(&target.mul(&acc, img), &emb(c));
        }
        acc
    }

    /// `Norm(ψ)(Z) = Res_w(p(w), ψ(w, Z))`, computed by evaluation and
    /// interpolation at integer points.
    pub fn norm_poly(&self, psi: &Poly<Self>) -> Poly<B> {
        let b = &self.base;
        let n = self.degree() * (psi.len() - 1);
        let xs: Vec<BigRational> = (0..=n as i64).map(|j| BigRational::from_integer(j.into())).collect();
        let ys: Vec<B::Elem> = xs
            .iter()
            .map(|x| {
                let v = upoly::eval(self, psi, &self.from_rational(x));
                if v.is_empty() {
                    b.zero()
                } else {
                    upoly::resultant(b, &self.modulus, &v)
                }
            })
            .collect();
        upoly::interpolate(b, &xs, &ys)
    }

    fn shift_by_gen(&self, psi: &Poly<Self>, k: i64) -> Poly<Self> {
        if k == 0 {
            return psi.to_vec();
        }
        let c = self.mul(&self.from_int(-k), &self.gen());
        upoly::taylor_shift(self, psi, &c)
    }

    /// Factor into monic irreducibles over this field.
    pub fn factor(&self, phi: &Poly<Self>) -> Result<Vec<(Poly<Self>, usize)>, AlgebraError> {
        let mut out = Vec::new();
        for (sq, mult) in upoly::squarefree(self, phi) {
            for g in self.factor_squarefree(&sq)? {
                out.push((g, mult));
            }
        }
        Ok(out)
    }

    fn factor_squarefree(&self, phi: &Poly<Self>) -> Result<Vec<Poly<Self>>, AlgebraError> {
        let b = &self.base;
        if phi.len() <= 2 {
            return Ok(vec![upoly::monic(self, phi)]);
        }
        if self.degree() == 1 {
            let flat: Poly<B> = upoly::trim(b, phi.iter().map(|c| self.as_base(c).unwrap()).collect());
            return Ok(b
                .factor(&flat)
                .into_iter()
                .map(|(g, _)| upoly::trim(self, g.iter().map(|c| self.embed(c)).collect()))
                .collect());
        }
        for k in [0i64, 1, -1, 2, -2, 3, -3, 4, 5, 6, 7, 8] {
            let shifted = self.shift_by_gen(phi, k);
            let norm = self.norm_poly(&shifted);
            if upoly::gcd(b, &norm, &upoly::derivative(b, &norm)).len() != 1 {
                continue;
            }
            let mut out = Vec::new();
            let back = self.mul(&self.from_int(k), &self.gen());
            for (ni, _) in b.factor(&norm) {
                let lifted: Poly<Self> = upoly::trim(self, ni.iter().map(|c| self.embed(c)).collect());
                let lifted = upoly::taylor_shift(self, &lifted, &back);
                let g = upoly::gcd(self, phi, &lifted);
                if g.len() > 1 {
                    out.push(g);
                }
            }
            return Ok(out);
        }
        Err(AlgebraError::unsupported(
            upoly::render(self, phi, "Z"),
            "no squarefree norm found for factorization",
        ))
    }

    /// Adjoin a root `ξ` of the irreducible `psi` (degree ≥ 2). Returns the
    /// new field together with the images of the old generator and of `ξ`.
    pub fn extend(&self, psi: &Poly<Self>) -> Result<Extension<B>, AlgebraError> {
        let b = &self.base;
        let psi = upoly::monic(self, psi);
        let cap = b.max_extension_degree();
        let new_degree = self.degree() * (psi.len() - 1);
        if new_degree > cap {
            return Err(AlgebraError::unsupported(
                upoly::render(self, &psi, "Z"),
                format!("extension degree {} exceeds the limit {}", new_degree, cap),
            ));
        }
        if self.degree() == 1 {
            let flat: Poly<B> = psi.iter().map(|c| self.as_base(c).unwrap()).collect();
            let approx = self.pick_root_approx(&flat, |_| true);
            let field = AlgField::new(*b, flat, approx).with_symbol(&self.symbol);
            let old = self.as_base(&self.gen()).unwrap();
            return Ok(Extension { old_gen: field.embed(&old), new_root: field.gen(), field });
        }
        for k in [1i64, -1, 2, -2, 3, -3, 4, 5, 6, 7, 8] {
            let norm = self.norm_poly(&self.shift_by_gen(&psi, k));
            if upoly::gcd(b, &norm, &upoly::derivative(b, &norm)).len() != 1 {
                continue;
            }
            let mut field = AlgField::new(*b, norm.clone(), None).with_symbol(&self.symbol);
            let gamma = field.gen();
            // p(X) and ψ(X, γ - kX) share exactly the root X = old generator.
            let p_l: Poly<AlgField<B>> = upoly::trim(&field, self.modulus.iter().map(|c| field.embed(c)).collect());
            let lin = vec![gamma.clone(), field.from_int(-k)];
            let mut acc: Poly<AlgField<B>> = Vec::new();
            for c in psi.iter().rev() {
                let cx: Poly<AlgField<B>> = upoly::trim(&field, c.iter().map(|e| field.embed(e)).collect());
                acc = upoly::add(&field, &upoly::mul(&field, &acc, &lin), &cx);
            }
            let g = upoly::gcd(&field, &p_l, &acc);
            if g.len() != 2 {
                continue;
            }
            let old_gen = field.neg(&g[0]);
            let new_root = field.sub(&gamma, &field.mul(&field.from_int(k), &old_gen));
            if let Some(target) = self.gen_approx {
                let fref = field.clone();
                field.gen_approx = self.pick_root_approx(&norm, |r| {
                    let probe = AlgField { gen_approx: Some(r), ..fref.clone() };
                    probe.approx(&old_gen).is_some_and(|v| (v - target).norm() < 1e-6 * (1.0 + target.norm()))
                });
            }
            return Ok(Extension { field, old_gen, new_root });
        }
        Err(AlgebraError::unsupported(upoly::render(self, &psi, "Z"), "no primitive element found"))
    }

    fn pick_root_approx(&self, p: &Poly<B>, accept: impl Fn(Complex64) -> bool) -> Option<Complex64> {
        let coeffs: Option<Vec<Complex64>> = p.iter().map(|c| self.base.approx(c)).collect();
        let roots = approx_roots(&coeffs?);
        roots.iter().copied().find(|r| accept(*r)).or(roots.first().copied())
    }
}

/// Result of adjoining a root.
#[derive(Clone, Debug)]
pub struct Extension<B: BaseField> {
    pub field: AlgField<B>,
    /// Image of the previous generator.
    pub old_gen: Vec<B::Elem>,
    /// The adjoined root.
    pub new_root: Vec<B::Elem>,
}

impl<B: BaseField> Extension<B> {
    /// Map an element of the previous field into the new one.
    pub fn map(&self, from: &AlgField<B>, a: &[B::Elem]) -> Vec<B::Elem> {
        from.map_into(a, &self.field, &self.old_gen, |c| self.field.embed(c))
    }
}

impl<B: BaseField> Field for AlgField<B> {
    type Elem = Vec<B::Elem>;

    fn zero(&self) -> Self::Elem {
        Vec::new()
    }
    fn one(&self) -> Self::Elem {
        vec![self.base.one()]
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|c| self.base.is_zero(c))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        upoly::add(&self.base, a, b)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        upoly::sub(&self.base, a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        upoly::neg(&self.base, a)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        if a.len() == 1 {
            return upoly::scale(&self.base, b, &a[0]);
        }
        if b.len() == 1 {
            return upoly::scale(&self.base, a, &b[0]);
        }
        self.reduce(upoly::mul(&self.base, a, b))
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if a.is_empty() {
            return None;
        }
        if a.len() == 1 {
            return self.base.inv(&a[0]).map(|c| vec![c]);
        }
        upoly::inv_mod(&self.base, a, &self.modulus)
    }
    fn from_rational(&self, q: &BigRational) -> Self::Elem {
        upoly::constant(&self.base, self.base.from_rational(q))
    }
    fn derive(&self, a: &Self::Elem) -> Self::Elem {
        let d1 = upoly::derive_coeffs(&self.base, a);
        if self.dgen.is_empty() || a.len() < 2 {
            return d1;
        }
        let da = upoly::derivative(&self.base, a);
        self.add(&d1, &self.mul(&da, &self.dgen))
    }
    fn render(&self, a: &Self::Elem) -> String {
        match a.len() {
            0 => "0".into(),
            1 => self.base.render(&a[0]),
            _ => upoly::render(&self.base, a, &self.symbol),
        }
    }
    fn approx(&self, a: &Self::Elem) -> Option<Complex64> {
        if a.len() <= 1 {
            return a.first().map_or(Some(Complex64::new(0.0, 0.0)), |c| self.base.approx(c));
        }
        let g = self.gen_approx?;
        let mut acc = Complex64::new(0.0, 0.0);
        for c in a.iter().rev() {
            acc = acc * g + self.base.approx(c)?;
        }
        Some(acc)
    }
    fn as_rational(&self, a: &Self::Elem) -> Option<BigRational> {
        match a.len() {
            0 => Some(BigRational::default()),
            1 => self.base.as_rational(&a[0]),
            _ => None,
        }
    }
    fn is_constant_field(&self) -> bool {
        self.base.is_constant_field()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::int;
    use crate::algebra::ratfunc::RatFunc;

    fn q(cs: &[i64]) -> Poly<QField> {
        cs.iter().map(|&c| int(c)).collect()
    }

    #[test]
    fn sqrt2_arithmetic() {
        let k = AlgField::new(QField, q(&[-2, 0, 1]), Some(Complex64::new(2f64.sqrt(), 0.0)));
        let w = k.gen();
        assert_eq!(k.mul(&w, &w), k.from_int(2));
        let a = vec![int(1), int(1)];
        let ai = k.inv(&a).unwrap();
        assert_eq!(k.mul(&a, &ai), k.one());
        assert!((k.approx(&a).unwrap().re - (1.0 + 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn factors_over_quadratic_field() {
        // x^2 - 2 splits over Q(sqrt 2); x^2 - 3 does not
        let k = AlgField::new(QField, q(&[-2, 0, 1]), None);
        let lift = |p: Poly<QField>| -> Poly<AlgField<QField>> { p.iter().map(|c| k.embed(c)).collect() };
        assert_eq!(k.factor(&lift(q(&[-2, 0, 1]))).unwrap().len(), 2);
        assert_eq!(k.factor(&lift(q(&[-3, 0, 1]))).unwrap().len(), 1);
        // x^4 - 4 = (x^2 - 2)(x^2 + 2)
        assert_eq!(k.factor(&lift(q(&[-4, 0, 0, 0, 1]))).unwrap().len(), 3);
    }

    #[test]
    fn adjoin_second_root() {
        let k = AlgField::new(QField, q(&[-2, 0, 1]), Some(Complex64::new(2f64.sqrt(), 0.0)));
        let psi: Poly<AlgField<QField>> = q(&[-3, 0, 1]).iter().map(|c| k.embed(c)).collect();
        let ext = k.extend(&psi).unwrap();
        let f = &ext.field;
        assert_eq!(f.degree(), 4);
        assert_eq!(f.mul(&ext.old_gen, &ext.old_gen), f.from_int(2));
        assert_eq!(f.mul(&ext.new_root, &ext.new_root), f.from_int(3));
        let v = f.approx(&ext.old_gen).unwrap();
        assert!((v.re - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn derivation_of_cube_root_of_z() {
        // w^3 = -z  =>  3 w^2 w' = -1
        let b = RatFuncField;
        let m = vec![RatFunc::z(), RatFunc::zero(), RatFunc::zero(), RatFunc::one()];
        let k = AlgField::new(b, m, None);
        let w = k.gen();
        let lhs = k.mul(&k.mul(&k.from_int(3), &k.mul(&w, &w)), &k.derive(&w));
        assert_eq!(lhs, k.from_int(-1));
    }
}
