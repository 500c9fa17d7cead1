//! Truncated Laurent and Puiseux series with absolute precision tracking.
//!
//! A [`Laurent`] series `Σ_{k ≥ val} c_k x^k + O(x^prec)` records which
//! coefficients are actually known; every operation computes the precision
//! its result is guaranteed to.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::algebra::{AlgebraError, Field};

/// Precision of a series known exactly.
pub const EXACT: i64 = i64::MAX / 8;

#[derive(Clone, Debug)]
pub struct Laurent<F: Field> {
    val: i64,
    coeffs: Vec<F::Elem>,
    prec: i64,
}

/// Precisions within reach of `EXACT` stay exact under shifts.
fn cap(p: i64) -> i64 {
    if p >= EXACT / 2 {
        EXACT
    } else {
        p
    }
}

impl<F: Field> Laurent<F> {
    pub fn zero(prec: i64) -> Self {
        Laurent { val: cap(prec), coeffs: Vec::new(), prec: cap(prec) }
    }

    /// `Σ coeffs[i] x^{shift + i} + O(x^prec)`.
    pub fn from_coeffs(f: &F, coeffs: Vec<F::Elem>, shift: i64, prec: i64) -> Self {
        let mut s = Laurent { val: shift, coeffs, prec: cap(prec) };
        s.normalize(f);
        s
    }

    pub fn constant(f: &F, c: F::Elem, prec: i64) -> Self {
        Self::from_coeffs(f, vec![c], 0, prec)
    }

    pub fn monomial(f: &F, c: F::Elem, k: i64, prec: i64) -> Self {
        Self::from_coeffs(f, vec![c], k, prec)
    }

    /// The variable `x` itself, exactly.
    pub fn var(f: &F) -> Self {
        Self::monomial(f, f.one(), 1, EXACT)
    }

    fn normalize(&mut self, f: &F) {
        let keep = (self.prec - self.val).max(0) as usize;
        if self.coeffs.len() > keep {
            self.coeffs.truncate(keep);
        }
        let lead = self.coeffs.iter().position(|c| !f.is_zero(c));
        match lead {
            None => {
                self.coeffs.clear();
                self.val = self.prec;
            }
            Some(i) => {
                self.coeffs.drain(..i);
                self.val += i as i64;
                while self.coeffs.last().is_some_and(|c| f.is_zero(c)) {
                    self.coeffs.pop();
                }
            }
        }
    }

    /// Order of the first nonzero coefficient, `None` if every known
    /// coefficient vanishes.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Lower bound on the order (the valuation, or the precision for a
    /// series with no known nonzero term).
    pub fn order_bound(&self) -> i64 {
        self.val
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT / 2
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, f: &F, k: i64) -> F::Elem {
        if k < self.val {
            return f.zero();
        }
        self.coeffs.get((k - self.val) as usize).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn leading(&self) -> Option<(i64, &F::Elem)> {
        self.coeffs.first().map(|c| (self.val, c))
    }

    /// Nonzero `(exponent, coefficient)` pairs.
    pub fn terms<'a>(&'a self, f: &'a F) -> impl Iterator<Item = (i64, &'a F::Elem)> + 'a {
        self.coeffs.iter().enumerate().filter(move |(_, c)| !f.is_zero(c)).map(move |(i, c)| (self.val + i as i64, c))
    }

    pub fn truncate(&self, f: &F, prec: i64) -> Self {
        Self::from_coeffs(f, self.coeffs.clone(), self.val, self.prec.min(prec))
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        Laurent { val: self.val + k, coeffs: self.coeffs.clone(), prec: cap(self.prec.saturating_add(k)) }
    }

    pub fn map(&self, f: &F, m: impl Fn(&F::Elem) -> F::Elem) -> Self {
        Self::from_coeffs(f, self.coeffs.iter().map(m).collect(), self.val, self.prec)
    }

    /// Map into another field.
    pub fn map_field<G: Field>(&self, g: &G, m: impl Fn(&F::Elem) -> G::Elem) -> Laurent<G> {
        Laurent::from_coeffs(g, self.coeffs.iter().map(m).collect(), self.val, self.prec)
    }

    pub fn add(&self, f: &F, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        if self.is_zero() {
            return o.truncate(f, prec);
        }
        if o.is_zero() {
            return self.truncate(f, prec);
        }
        let lo = self.val.min(o.val);
        let hi = prec.min(self.val + self.coeffs.len() as i64).max(prec.min(o.val + o.coeffs.len() as i64));
        let coeffs = (lo..hi.max(lo)).map(|k| f.add(&self.coeff(f, k), &o.coeff(f, k))).collect();
        Self::from_coeffs(f, coeffs, lo, prec)
    }

    pub fn neg(&self, f: &F) -> Self {
        Laurent { val: self.val, coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(), prec: self.prec }
    }

    pub fn sub(&self, f: &F, o: &Self) -> Self {
        self.add(f, &o.neg(f))
    }

    pub fn scale(&self, f: &F, c: &F::Elem) -> Self {
        self.map(f, |x| f.mul(x, c))
    }

    pub fn mul(&self, f: &F, o: &Self) -> Self {
        let prec = cap(self.prec.saturating_add(o.val)).min(cap(o.prec.saturating_add(self.val)));
        if self.is_zero() || o.is_zero() {
            return Self::zero(prec);
        }
        let val = self.val + o.val;
        let n = ((prec - val).max(0) as usize).min(self.coeffs.len() + o.coeffs.len() - 1);
        let mut out = vec![f.zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= n {
                break;
            }
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Self::from_coeffs(f, out, val, prec)
    }

    pub fn inv(&self, f: &F) -> Result<Self, AlgebraError> {
        let (v, c0) = self.leading().ok_or(AlgebraError::DivisionByZeroSeries)?;
        let c0i = f.inv(c0).ok_or(AlgebraError::DivisionByZeroSeries)?;
        let rel = if self.is_exact() { EXACT } else { self.prec - v };
        // Length of the known part; exact inputs still need a finite cutoff.
        let n = if self.is_exact() {
            if self.coeffs.len() == 1 {
                return Ok(Self::monomial(f, c0i, -v, EXACT));
            }
            return Err(AlgebraError::TruncationTooSmall {
                needed: "finite precision".into(),
                available: "exact non-monomial series".into(),
            });
        } else {
            rel as usize
        };
        let mut out: Vec<F::Elem> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = if k == 0 { f.one() } else { f.zero() };
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                acc = f.sub(&acc, &f.mul(&self.coeffs[j], &out[k - j]));
            }
            out.push(f.mul(&acc, &c0i));
        }
        Ok(Self::from_coeffs(f, out, -v, -v + rel))
    }

    /// Inverse with an explicit relative precision for exact inputs.
    pub fn inv_to(&self, f: &F, rel: i64) -> Result<Self, AlgebraError> {
        if self.is_exact() && self.coeffs.len() > 1 {
            let v = self.val;
            self.truncate(f, v + rel).inv(f)
        } else {
            self.inv(f)
        }
    }

    pub fn div(&self, f: &F, o: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(f, &o.inv(f)?))
    }

    pub fn pow(&self, f: &F, n: i64) -> Result<Self, AlgebraError> {
        if n < 0 {
            return self.inv(f)?.pow(f, -n);
        }
        let mut acc = Self::constant(f, f.one(), EXACT);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(f, &base);
            }
        }
        Ok(acc)
    }

    /// `d/dx`
    pub fn derive(&self, f: &F) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| f.mul(c, &f.from_int(self.val + i as i64)))
            .collect();
        let prec = if self.is_exact() { EXACT } else { self.prec - 1 };
        Self::from_coeffs(f, coeffs, self.val - 1, prec)
    }

    /// Apply the coefficient derivation termwise.
    pub fn derive_coeffs(&self, f: &F) -> Self {
        self.map(f, |c| f.derive(c))
    }

    /// `self(b(x))` for `b` of positive valuation.
    pub fn compose(&self, f: &F, b: &Self) -> Result<Self, AlgebraError> {
        let vb = b.valuation().ok_or(AlgebraError::DivisionByZeroSeries)?;
        if vb < 1 {
            return Err(AlgebraError::InvalidArgument("composition needs a series of positive order".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero(cap(self.prec.saturating_mul(vb))));
        }
        let mut acc = Self::zero(EXACT);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(f, b).add(f, &Self::constant(f, c.clone(), EXACT));
        }
        if !self.is_exact() {
            let rel = self.prec - self.val;
            acc = acc.truncate(f, rel.saturating_mul(vb));
        }
        Ok(acc.mul(f, &b.pow(f, self.val)?))
    }

    /// `self(c·x^e)` for a unit `c` and `e ≥ 1`.
    pub fn subs_monomial(&self, f: &F, c: &F::Elem, e: i64) -> Result<Self, AlgebraError> {
        assert!(e >= 1);
        let mut coeffs = vec![f.zero(); ((self.coeffs.len().max(1) - 1) as i64 * e + 1) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            let k = self.val + i as i64;
            coeffs[i * e as usize] = f.mul(a, &f.powi(c, k)?);
        }
        let prec = if self.is_exact() { EXACT } else { self.prec.saturating_mul(e) };
        Ok(Self::from_coeffs(f, coeffs, self.val * e, prec))
    }

    /// Evaluate numerically when every coefficient has an approximation.
    pub fn eval_approx(&self, f: &F, x: num_complex::Complex64) -> Option<num_complex::Complex64> {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (k, c) in self.terms(f) {
            acc += f.approx(c)? * x.powi(k as i32);
        }
        Some(acc)
    }

    /// `(1 + h)^r` for `self = 1 + h`, `h` of positive order, `r` rational.
    pub fn pow_rational_unit(&self, f: &F, r: &BigRational) -> Result<Self, AlgebraError> {
        if self.val != 0 || !f.is_one(&self.coeffs[0]) {
            return Err(AlgebraError::InvalidArgument("expected a series 1 + O(x)".into()));
        }
        let n = if self.is_exact() {
            return Err(AlgebraError::TruncationTooSmall {
                needed: "finite precision".into(),
                available: "exact series".into(),
            });
        } else {
            self.prec as usize
        };
        let rr = f.from_rational(r);
        let mut g: Vec<F::Elem> = vec![f.one()];
        for k in 1..n {
            let mut acc = f.zero();
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                // ((r + 1) j - k) u_j g_{k-j}
                let w = f.sub(&f.mul(&f.add(&rr, &f.one()), &f.from_int(j as i64)), &f.from_int(k as i64));
                acc = f.add(&acc, &f.mul(&w, &f.mul(&self.coeffs[j], &g[k - j])));
            }
            g.push(f.div(&acc, &f.from_int(k as i64)).unwrap());
        }
        Ok(Self::from_coeffs(f, g, 0, self.prec))
    }

    pub fn render(&self, f: &F, var: &str) -> String {
        let mut terms: Vec<String> = self
            .terms(f)
            .map(|(k, c)| {
                let cs = f.render(c);
                let cs = if cs.contains([' ', '+']) || cs[1..].contains('-') { format!("({})", cs) } else { cs };
                match k {
                    0 => cs,
                    1 => format!("{} * {}", cs, var),
                    _ => format!("{} * {}^{}", cs, var, k),
                }
            })
            .collect();
        if !self.is_exact() {
            terms.push(if self.prec == 0 { "O(1)".into() } else { format!("O({}^{})", var, self.prec) });
        }
        crate::algebra::upoly::join_terms(&terms)
    }
}

/// `Σ c_k var^{k/ram} + O(var^{prec/ram})`, stored as a Laurent series in
/// `x = var^{1/ram}` with `ram` minimal.
#[derive(Clone, Debug)]
pub struct PuiseuxSeries<F: Field> {
    ram: u32,
    ser: Laurent<F>,
}

impl<F: Field> PuiseuxSeries<F> {
    pub fn new(f: &F, ram: u32, ser: Laurent<F>) -> Self {
        let mut s = PuiseuxSeries { ram, ser };
        s.minimize(f);
        s
    }

    pub fn from_laurent(ser: Laurent<F>) -> Self {
        PuiseuxSeries { ram: 1, ser }
    }

    fn minimize(&mut self, f: &F) {
        let mut d = self.ram as i64;
        for (k, _) in self.ser.terms(f) {
            d = d.gcd(&k);
            if d == 1 {
                return;
            }
        }
        if self.ser.is_zero() && !self.ser.is_exact() {
            d = d.gcd(&self.ser.prec);
        }
        if d <= 1 {
            return;
        }
        let coeffs: Vec<F::Elem> = (0..)
            .map(|i| self.ser.val + i * d)
            .take_while(|k| *k < self.ser.val + self.ser.coeffs.len() as i64)
            .map(|k| self.ser.coeff(f, k))
            .collect();
        let prec = if self.ser.is_exact() { EXACT } else { Integer::div_floor(&self.ser.prec, &d) };
        self.ser = Laurent::from_coeffs(f, coeffs, self.ser.val / d, prec);
        self.ram /= d as u32;
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    pub fn laurent(&self) -> &Laurent<F> {
        &self.ser
    }

    pub fn valuation(&self) -> Option<BigRational> {
        self.ser.valuation().map(|v| BigRational::new(BigInt::from(v), BigInt::from(self.ram)))
    }

    pub fn prec(&self) -> BigRational {
        BigRational::new(BigInt::from(self.ser.prec), BigInt::from(self.ram))
    }

    pub fn is_exact(&self) -> bool {
        self.ser.is_exact()
    }

    /// Order bound as a rational exponent.
    pub fn order_bound(&self) -> BigRational {
        BigRational::new(BigInt::from(self.ser.order_bound()), BigInt::from(self.ram))
    }

    pub fn terms<'a>(&'a self, f: &'a F) -> impl Iterator<Item = (BigRational, &'a F::Elem)> + 'a {
        let r = BigInt::from(self.ram);
        self.ser.terms(f).map(move |(k, c)| (BigRational::new(BigInt::from(k), r.clone()), c))
    }

    pub fn coeff(&self, f: &F, e: &BigRational) -> F::Elem {
        let k = e * BigRational::from_integer(BigInt::from(self.ram));
        if !k.is_integer() {
            return f.zero();
        }
        self.ser.coeff(f, k.to_integer().try_into().unwrap_or(i64::MAX))
    }

    /// Re-express in `x' = var^{1/(ram·k)}`.
    pub fn refine(&self, f: &F, k: u32) -> Laurent<F> {
        if k == 1 {
            return self.ser.clone();
        }
        self.ser.subs_monomial(f, &f.one(), k as i64).expect("unit substitution")
    }

    fn common(&self, f: &F, o: &Self) -> (u32, Laurent<F>, Laurent<F>) {
        let l = (self.ram as u64).lcm(&(o.ram as u64)) as u32;
        (l, self.refine(f, l / self.ram), o.refine(f, l / o.ram))
    }

    pub fn add(&self, f: &F, o: &Self) -> Self {
        let (l, a, b) = self.common(f, o);
        Self::new(f, l, a.add(f, &b))
    }

    pub fn sub(&self, f: &F, o: &Self) -> Self {
        let (l, a, b) = self.common(f, o);
        Self::new(f, l, a.sub(f, &b))
    }

    pub fn mul(&self, f: &F, o: &Self) -> Self {
        let (l, a, b) = self.common(f, o);
        Self::new(f, l, a.mul(f, &b))
    }

    pub fn scale(&self, f: &F, c: &F::Elem) -> Self {
        Self::new(f, self.ram, self.ser.scale(f, c))
    }

    pub fn inv(&self, f: &F) -> Result<Self, AlgebraError> {
        Ok(Self::new(f, self.ram, self.ser.inv(f)?))
    }

    /// `d/dvar`
    pub fn derive(&self, f: &F) -> Self {
        let m = self.ram as i64;
        let coeffs: Vec<F::Elem> = (0..self.ser.coeffs.len())
            .map(|i| {
                let k = self.ser.val + i as i64;
                f.mul(&self.ser.coeffs[i], &f.from_rational(&BigRational::new(k.into(), m.into())))
            })
            .collect();
        let prec = if self.ser.is_exact() { EXACT } else { self.ser.prec - m };
        Self::new(f, self.ram, Laurent::from_coeffs(f, coeffs, self.ser.val - m, prec))
    }

    /// Coefficient derivation (the `z`-derivative of coefficient functions).
    pub fn derive_coeffs(&self, f: &F) -> Self {
        Self::new(f, self.ram, self.ser.derive_coeffs(f))
    }

    /// `self^(p/q)` given `root`, a `q`-th root of the leading coefficient.
    pub fn pow_frac(&self, f: &F, p: i64, q: u32, root: &F::Elem) -> Result<Self, AlgebraError> {
        let (v, c0) = self.ser.leading().ok_or(AlgebraError::DivisionByZeroSeries)?;
        if !f.eq(&f.pow(root, q as u64), c0) {
            return Err(AlgebraError::InvalidArgument("root does not match the leading coefficient".into()));
        }
        // self = c0 x^v (1 + h)
        let c0i = f.inv(c0).unwrap();
        let unit = self.ser.shift(-v).scale(f, &c0i);
        let r = BigRational::new(p.into(), (q as i64).into());
        let powed = unit.pow_rational_unit(f, &r)?;
        let lead = f.powi(root, p)?;
        // exponent v·p/q in x = var^{1/ram}; pass to var^{1/(ram·q)}
        let refined = powed.subs_monomial(f, &f.one(), q as i64)?;
        let shifted = refined.shift(v * p).scale(f, &lead);
        Ok(Self::new(f, self.ram * q, shifted))
    }

    pub fn truncate(&self, f: &F, prec: &BigRational) -> Self {
        let k = (prec * BigRational::from_integer(BigInt::from(self.ram))).floor().to_integer();
        let k: i64 = k.try_into().unwrap_or(EXACT);
        Self::new(f, self.ram, self.ser.truncate(f, k))
    }

    /// Terms as `c * (var)^(p/q)` sorted by exponent.
    pub fn render(&self, f: &F, var: &str) -> String {
        let mut terms: Vec<String> = self
            .terms(f)
            .map(|(e, c)| {
                let cs = f.render(c);
                let cs = if cs.contains([' ', '+']) || cs[1..].contains('-') { format!("({})", cs) } else { cs };
                if e == BigRational::from_integer(0.into()) {
                    cs
                } else {
                    format!("{} * ({})^({})", cs, var, crate::algebra::field::render_rational(&e))
                }
            })
            .collect();
        if !self.is_exact() {
            terms.push(format!("O(({})^({}))", var, crate::algebra::field::render_rational(&self.prec())));
        }
        crate::algebra::upoly::join_terms(&terms)
    }
}
