//! Dense univariate polynomials over a [`Field`].
//!
//! A polynomial is a `Vec` of coefficients, index = degree, with no trailing
//! zeros. The zero polynomial is the empty vector.

use num_rational::BigRational;

use super::field::Field;

pub type Poly<F> = Vec<<F as Field>::Elem>;

pub fn trim<F: Field>(f: &F, mut p: Poly<F>) -> Poly<F> {
    while p.last().is_some_and(|c| f.is_zero(c)) {
        p.pop();
    }
    p
}

/// Degree, with `None` for the zero polynomial.
pub fn degree<F: Field>(p: &[F::Elem]) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn constant<F: Field>(f: &F, c: F::Elem) -> Poly<F> {
    trim(f, vec![c])
}

pub fn monomial<F: Field>(f: &F, c: F::Elem, k: usize) -> Poly<F> {
    if f.is_zero(&c) {
        return Vec::new();
    }
    let mut p = vec![f.zero(); k + 1];
    p[k] = c;
    p
}

/// `x - a`
pub fn linear<F: Field>(f: &F, a: &F::Elem) -> Poly<F> {
    vec![f.neg(a), f.one()]
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        });
    }
    trim(f, out)
}

pub fn neg<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F> {
    a.iter().map(|c| f.neg(c)).collect()
}

pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    add(f, a, &neg(f, b))
}

pub fn scale<F: Field>(f: &F, a: &[F::Elem], c: &F::Elem) -> Poly<F> {
    if f.is_zero(c) {
        return Vec::new();
    }
    trim(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

pub fn pow<F: Field>(f: &F, a: &[F::Elem], n: usize) -> Poly<F> {
    let mut acc = vec![f.one()];
    for _ in 0..n {
        acc = mul(f, &acc, a);
    }
    acc
}

/// Multiply by `x^k`.
pub fn shift<F: Field>(f: &F, a: &[F::Elem], k: usize) -> Poly<F> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); k];
    out.extend_from_slice(a);
    out
}

/// Euclidean division. Panics on division by the zero polynomial.
pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F>, Poly<F>) {
    let db = degree::<F>(b).expect("polynomial division by zero");
    let lead_inv = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut r: Poly<F> = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = f.mul(r.last().unwrap(), &lead_inv);
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = f.sub(&r[k + j], &f.mul(&c, bj));
        }
        // Exact fields cancel the top coefficient; numeric ones may not.
        r.pop();
        q[k] = c;
        r = trim(f, r);
    }
    (trim(f, q), r)
}

pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    divrem(f, a, b).1
}

/// Exact quotient, `None` when `b` does not divide `a`.
pub fn div_exact<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Option<Poly<F>> {
    let (q, r) = divrem(f, a, b);
    if r.is_empty() {
        Some(q)
    } else {
        None
    }
}

pub fn monic<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F> {
    match a.last() {
        None => Vec::new(),
        Some(l) => {
            let li = f.inv(l).expect("nonzero leading coefficient");
            scale(f, a, &li)
        }
    }
}

pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    if let Some(g) = f.poly_gcd(a, b) {
        return g;
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// Extended Euclid: `(g, s, t)` with `s·a + t·b = g`, `g` monic.
pub fn ext_gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F>, Poly<F>, Poly<F>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1): (Poly<F>, Poly<F>) = (vec![f.one()], Vec::new());
    let (mut t0, mut t1): (Poly<F>, Poly<F>) = (Vec::new(), vec![f.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (Vec::new(), s0, t0),
        Some(l) => {
            let li = f.inv(l).unwrap();
            (scale(f, &r0, &li), scale(f, &s0, &li), scale(f, &t0, &li))
        }
    }
}

/// Inverse of `a` modulo `m`, when `gcd(a, m) = 1`.
pub fn inv_mod<F: Field>(f: &F, a: &[F::Elem], m: &[F::Elem]) -> Option<Poly<F>> {
    let (g, s, _) = ext_gcd(f, a, m);
    if g.len() == 1 {
        Some(rem(f, &s, m))
    } else {
        None
    }
}

/// `d/dx`
pub fn derivative<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F> {
    trim(
        f,
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_int(i as i64)))
            .collect(),
    )
}

/// Apply the coefficient derivation termwise.
pub fn derive_coeffs<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F> {
    trim(f, a.iter().map(|c| f.derive(c)).collect())
}

pub fn eval<F: Field>(f: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    let mut acc = f.zero();
    for c in a.iter().rev() {
        acc = f.add(&f.mul(&acc, x), c);
    }
    acc
}

/// `a(b(x))`
pub fn compose<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    let mut acc: Poly<F> = Vec::new();
    for c in a.iter().rev() {
        acc = add(f, &mul(f, &acc, b), &constant(f, c.clone()));
    }
    acc
}

/// `a(x + c)`
pub fn taylor_shift<F: Field>(f: &F, a: &[F::Elem], c: &F::Elem) -> Poly<F> {
    compose(f, a, &trim(f, vec![c.clone(), f.one()]))
}

/// Map coefficients into another field.
pub fn map<F: Field, G: Field>(g: &G, a: &[F::Elem], m: impl Fn(&F::Elem) -> G::Elem) -> Poly<G> {
    trim(g, a.iter().map(m).collect())
}

/// Resultant via the Euclidean remainder sequence.
pub fn resultant<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    let (Some(mut da), Some(mut db)) = (degree::<F>(a), degree::<F>(b)) else {
        return f.zero();
    };
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    let mut acc = f.one();
    loop {
        if db == 0 {
            return f.mul(&acc, &f.pow(&b[0], da as u64));
        }
        let r = rem(f, &a, &b);
        let Some(dr) = degree::<F>(&r) else {
            return f.zero();
        };
        // res(a, b) = (-1)^{da·db} lc(b)^{da - dr} res(b, r)
        if (da * db) % 2 == 1 {
            acc = f.neg(&acc);
        }
        acc = f.mul(&acc, &f.pow(&b[db], (da - dr) as u64));
        a = b;
        b = r;
        da = db;
        db = dr;
    }
}

/// Yun's squarefree decomposition: monic `(factor, multiplicity)` pairs with
/// pairwise coprime squarefree factors.
pub fn squarefree<F: Field>(f: &F, a: &[F::Elem]) -> Vec<(Poly<F>, usize)> {
    let mut out = Vec::new();
    if degree::<F>(a).unwrap_or(0) == 0 {
        return out;
    }
    let a = monic(f, a);
    let da = derivative(f, &a);
    let c = gcd(f, &a, &da);
    let mut w = divrem(f, &a, &c).0;
    let mut y = divrem(f, &da, &c).0;
    let mut z = sub(f, &y, &derivative(f, &w));
    let mut i = 1;
    while degree::<F>(&w).unwrap_or(0) > 0 {
        let g = gcd(f, &w, &z);
        if degree::<F>(&g).unwrap_or(0) > 0 {
            out.push((g.clone(), i));
        }
        w = divrem(f, &w, &g).0;
        y = divrem(f, &z, &g).0;
        z = sub(f, &y, &derivative(f, &w));
        i += 1;
    }
    out
}

/// Squarefree part (monic).
pub fn squarefree_part<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F> {
    let g = gcd(f, a, &derivative(f, a));
    monic(f, &divrem(f, a, &g).0)
}

/// Newton interpolation through `(xs[i], ys[i])` with distinct rational nodes.
pub fn interpolate<F: Field>(f: &F, xs: &[BigRational], ys: &[F::Elem]) -> Poly<F> {
    let n = xs.len();
    let mut coef: Vec<F::Elem> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let dx = f.from_rational(&(&xs[i] - &xs[i - j]));
            coef[i] = f.div(&f.sub(&coef[i], &coef[i - 1]), &dx).unwrap();
        }
    }
    let mut acc: Poly<F> = Vec::new();
    for i in (0..n).rev() {
        let lin = linear(f, &f.from_rational(&xs[i]));
        acc = add(f, &mul(f, &acc, &lin), &constant(f, coef[i].clone()));
    }
    acc
}

pub fn render<F: Field>(f: &F, a: &[F::Elem], var: &str) -> String {
    if a.is_empty() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, c) in a.iter().enumerate().rev() {
        if f.is_zero(c) {
            continue;
        }
        let cs = f.render(c);
        let body = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{}^{}", var, i),
        };
        let coeff_is_compound = cs.contains(['+', ' ']) || cs[1..].contains('-');
        let term = if body.is_empty() {
            if coeff_is_compound {
                format!("({})", cs)
            } else {
                cs
            }
        } else if cs == "1" {
            body
        } else if cs == "-1" {
            format!("-{}", body)
        } else if coeff_is_compound {
            format!("({})*{}", cs, body)
        } else {
            format!("{}*{}", cs, body)
        };
        terms.push(term);
    }
    join_terms(&terms)
}

/// Join rendered terms with ` + ` / ` - `.
pub fn join_terms(terms: &[String]) -> String {
    let mut out = String::new();
    for (k, t) in terms.iter().enumerate() {
        if k == 0 {
            out.push_str(t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(t);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}
