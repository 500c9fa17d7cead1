//! Polynomial factorization over ℚ and over ℚ(z).
//!
//! Over ℚ: squarefree decomposition, factorization modulo a small prime
//! (distinct-degree then Cantor–Zassenhaus), multifactor Hensel lifting past
//! the Mignotte bound and subset recombination.
//!
//! Over ℚ(z): a polynomial in `x` with coefficients in ℚ[z] is specialized at
//! a good `z = z0`, factored over ℚ, lifted `(z - z0)`-adically and
//! recombined the same way.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::SeedableRng;

use super::field::QField;
use super::ratfunc::{QPoly, RatFunc, RatFuncField};
use super::upoly::{self, Poly};

/// Factor a nonzero polynomial over ℚ into monic irreducibles with
/// multiplicities, sorted by degree then coefficients.
pub fn factor_rational(p: &QPoly) -> Vec<(QPoly, usize)> {
    let q = QField;
    let mut out = Vec::new();
    for (sq, mult) in upoly::squarefree(&q, p) {
        for g in factor_squarefree_int(&to_primitive_int(&sq)) {
            out.push((upoly::monic(&q, &from_int(&g)), mult));
        }
    }
    sort_factors(&mut out);
    out
}

fn sort_factors(v: &mut [(QPoly, usize)]) {
    v.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
}

/// Scale a rational polynomial to a primitive integer polynomial with a
/// positive leading coefficient.
pub fn to_primitive_int(p: &QPoly) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for c in p {
        l = l.lcm(c.denom());
    }
    let mut v: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for c in &v {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return v;
    }
    if v.last().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    for c in v.iter_mut() {
        *c = &*c / &g;
    }
    v
}

pub fn from_int(p: &[BigInt]) -> QPoly {
    upoly::trim(&QField, p.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

/// Monic gcd over ℚ. A gcd of 1 modulo a prime not dividing either
/// leading coefficient settles the common coprime case; otherwise a
/// primitive remainder sequence over ℤ avoids rational coefficient growth.
pub fn rational_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let q = QField;
    if a.is_empty() || b.is_empty() {
        let c = if a.is_empty() { b } else { a };
        return if c.is_empty() { Vec::new() } else { upoly::monic(&q, c) };
    }
    if a.len() == 1 || b.len() == 1 {
        return vec![BigRational::one()];
    }
    let (mut r0, mut r1) = (to_primitive_int(a), to_primitive_int(b));
    for p in [2147483647u64, 2147483629, 2147483587] {
        let pb = BigInt::from(p);
        if (r0.last().unwrap() % &pb).is_zero() || (r1.last().unwrap() % &pb).is_zero() {
            continue;
        }
        if modp::gcd(&reduce_mod(&r0, p), &reduce_mod(&r1, p), p).len() == 1 {
            return vec![BigRational::one()];
        }
        break;
    }
    if r0.len() < r1.len() {
        std::mem::swap(&mut r0, &mut r1);
    }
    loop {
        let r = prem_int(&r0, &r1);
        if r.is_empty() {
            return upoly::monic(&q, &from_int(&r1));
        }
        if r.len() == 1 {
            return vec![BigRational::one()];
        }
        r0 = r1;
        r1 = primitive_int(r);
    }
}

fn prem_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let lb = b.last().unwrap();
    let mut r = a.to_vec();
    while r.len() >= b.len() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &lr * c;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

fn primitive_int(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for c in &v {
        g = g.gcd(c);
    }
    if !g.is_zero() && !g.is_one() {
        for c in v.iter_mut() {
            *c = &*c / &g;
        }
    }
    v
}

/// Arithmetic in `F_p[x]` for small primes.
mod modp {
    use num_bigint::BigUint;
    use rand::Rng;

    pub type P = Vec<u64>;

    pub fn trim(mut a: P) -> P {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        pow_u(a, p - 2, p)
    }

    pub fn pow_u(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1u64;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % p;
            }
            a = a * a % p;
            e >>= 1;
        }
        r
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> P {
        let n = a.len().max(b.len());
        trim((0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect())
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> P {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (P, P) {
        let db = b.len() - 1;
        let li = inv(b[db], p);
        let mut r = a.to_vec();
        if r.len() <= db {
            return (Vec::new(), r);
        }
        let mut q = vec![0u64; r.len() - db];
        while r.len() > db {
            let k = r.len() - 1 - db;
            let c = r[r.len() - 1] * li % p;
            for (j, &bj) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + p - c * bj % p) % p;
            }
            r.pop();
            q[k] = c;
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn monic(a: &[u64], p: u64) -> P {
        match a.last() {
            None => Vec::new(),
            Some(&l) => {
                let li = inv(l, p);
                a.iter().map(|c| c * li % p).collect()
            }
        }
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> P {
        let mut x = trim(a.to_vec());
        let mut y = trim(b.to_vec());
        while !y.is_empty() {
            let r = divrem(&x, &y, p).1;
            x = y;
            y = r;
        }
        monic(&x, p)
    }

    /// Inverse of `a` modulo `m` (coprime inputs).
    pub fn inv_mod(a: &[u64], m: &[u64], p: u64) -> P {
        let (mut r0, mut r1) = (trim(a.to_vec()), m.to_vec());
        let (mut s0, mut s1): (P, P) = (vec![1], Vec::new());
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let s2 = sub(&s0, &mul(&q, &s1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        let li = inv(r0[0], p);
        divrem(&s0.iter().map(|c| c * li % p).collect::<Vec<_>>(), m, p).1
    }

    pub fn derivative(a: &[u64], p: u64) -> P {
        trim(a.iter().enumerate().skip(1).map(|(i, c)| (i as u64 % p) * c % p).collect())
    }

    pub fn powmod(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> P {
        let mut acc: P = vec![1];
        let b = divrem(base, m, p).1;
        for i in (0..e.bits()).rev() {
            acc = divrem(&mul(&acc, &acc, p), m, p).1;
            if e.bit(i) {
                acc = divrem(&mul(&acc, &b, p), m, p).1;
            }
        }
        acc
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    pub fn ddf(f: &[u64], p: u64) -> Vec<(P, usize)> {
        let mut out = Vec::new();
        let mut f = f.to_vec();
        let x: P = vec![0, 1];
        let mut h = x.clone();
        let pe = BigUint::from(p);
        let mut d = 1;
        while 2 * d < f.len() {
            h = powmod(&h, &pe, &f, p);
            let g = gcd(&sub(&h, &x, p), &f, p);
            if g.len() > 1 {
                f = divrem(&f, &g, p).0;
                h = divrem(&h, &f, p).1;
                out.push((g, d));
            }
            d += 1;
        }
        if f.len() > 1 {
            let d = f.len() - 1;
            out.push((f, d));
        }
        out
    }

    /// Equal-degree splitting (odd `p`).
    pub fn edf(f: &[u64], d: usize, p: u64, rng: &mut impl Rng) -> Vec<P> {
        let n = f.len() - 1;
        if n == d {
            return vec![f.to_vec()];
        }
        let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a: P = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
            if a.len() < 2 {
                continue;
            }
            let b = sub(&powmod(&a, &e, f, p), &[1], p);
            let g = gcd(&b, f, p);
            if g.len() > 1 && g.len() < f.len() {
                let h = divrem(f, &g, p).0;
                let mut out = edf(&g, d, p, rng);
                out.extend(edf(&monic(&h, p), d, p, rng));
                return out;
            }
        }
    }
}

const PRIMES: [u64; 24] = [
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227,
];

fn reduce_mod(a: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    modp::trim(a.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn sym_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Factor a primitive squarefree integer polynomial into primitive
/// irreducible factors with positive leading coefficients.
pub fn factor_squarefree_int(a: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = a.len().saturating_sub(1);
    if n <= 1 {
        return vec![a.to_vec()];
    }
    if a[0].is_zero() {
        let mut out = vec![vec![BigInt::zero(), BigInt::one()]];
        out.extend(factor_squarefree_int(&a[1..]));
        return out;
    }
    let lc = a[n].clone();

    // Choose the prime with the fewest modular factors among a few candidates.
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for &p in PRIMES.iter() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let am = modp::monic(&reduce_mod(a, p), p);
        if modp::gcd(&am, &modp::derivative(&am, p), p).len() != 1 {
            continue;
        }
        let mut facs = Vec::new();
        for (g, d) in modp::ddf(&am, p) {
            facs.extend(modp::edf(&g, d, p, &mut rng));
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 4 || best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    let (p, facs) = best.expect("a good prime exists among the candidates");
    if facs.len() == 1 {
        return vec![a.to_vec()];
    }

    // Mignotte-style bound on factor coefficients.
    let norm2: BigInt = a.iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + 1;
    let bound = norm * (BigInt::one() << n) * lc.abs() * 2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk *= &pb;
        k += 1;
    }

    let lifted = hensel_int(a, &facs, p, k);

    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut current = a.to_vec();
    let mut out = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= remaining.len() {
        for subset in remaining.iter().copied().combinations(size) {
            let clc = current.last().unwrap().clone();
            let mut cand: Vec<BigInt> = vec![clc];
            for &i in &subset {
                cand = poly_mul_int(&cand, &lifted[i]);
                cand = cand.iter().map(|c| sym_mod(c, &pk)).collect();
            }
            let cand = to_primitive_int(&from_int(&cand));
            if let Some(quot) = upoly::div_exact(&QField, &from_int(&current), &from_int(&cand)) {
                out.push(cand);
                current = to_primitive_int(&quot);
                remaining.retain(|i| !subset.contains(i));
                continue 'outer;
            }
        }
        size += 1;
    }
    if current.len() > 1 {
        out.push(current);
    }
    out
}

fn poly_mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Lift monic factors of `a / lc(a)` modulo `p` to monic factors modulo `p^k`.
fn hensel_int(a: &[BigInt], facs: &[Vec<u64>], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    let pb = BigInt::from(p);
    let pk = pb.pow(k);
    let lc = a.last().unwrap();
    let lc_inv = {
        let e = lc.extended_gcd(&pk);
        e.x.mod_floor(&pk)
    };
    let target: Vec<BigInt> = a.iter().map(|c| (c * &lc_inv).mod_floor(&pk)).collect();
    let r = facs.len();
    // s_i = (prod_{j != i} g_j)^{-1} mod g_i
    let s: Vec<Vec<u64>> = (0..r)
        .map(|i| {
            let mut prod = vec![1u64];
            for (j, g) in facs.iter().enumerate() {
                if j != i {
                    prod = modp::mul(&prod, g, p);
                }
            }
            modp::inv_mod(&modp::divrem(&prod, &facs[i], p).1, &facs[i], p)
        })
        .collect();
    let mut gs: Vec<Vec<BigInt>> = facs.iter().map(|g| g.iter().map(|&c| BigInt::from(c)).collect()).collect();
    let mut pj = pb.clone();
    for _ in 1..k {
        let next = &pj * &pb;
        let mut prod = vec![BigInt::one()];
        for g in &gs {
            prod = poly_mul_int(&prod, g).into_iter().map(|c| c.mod_floor(&next)).collect();
        }
        let e: Vec<u64> = (0..target.len())
            .map(|i| {
                let d = (&target[i] - prod.get(i).cloned().unwrap_or_default()).mod_floor(&next);
                (d / &pj).mod_floor(&pb).to_u64().unwrap()
            })
            .collect();
        let e = modp::trim(e);
        if !e.is_empty() {
            for i in 0..r {
                let delta = modp::divrem(&modp::mul(&e, &s[i], p), &facs[i], p).1;
                for (j, c) in delta.iter().enumerate() {
                    gs[i][j] += &pj * BigInt::from(*c);
                }
            }
        }
        pj = next;
    }
    gs
}

/// A polynomial in `x` whose coefficients are polynomials in `z`.
pub type BiPoly = Vec<QPoly>;

fn bi_trim(mut p: BiPoly) -> BiPoly {
    while p.last().is_some_and(|c| c.is_empty()) {
        p.pop();
    }
    p
}

fn deg_z(p: &[QPoly]) -> usize {
    p.iter().map(|c| c.len().saturating_sub(1)).max().unwrap_or(0)
}

fn z_content(p: &[QPoly]) -> QPoly {
    let q = QField;
    let mut g: QPoly = Vec::new();
    for c in p {
        g = upoly::gcd(&q, &g, c);
        if g.len() == 1 {
            break;
        }
    }
    g
}

/// Divide out the `z`-content and normalize the leading coefficient of the
/// leading `z`-coefficient to be a positive integer with integer coefficients
/// throughout.
pub fn bi_primitive(p: &[QPoly]) -> BiPoly {
    let q = QField;
    let g = z_content(p);
    let p: BiPoly = if g.len() > 1 {
        p.iter().map(|c| upoly::divrem(&q, c, &g).0).collect()
    } else {
        p.to_vec()
    };
    // Scale to integer coefficients with content 1 and positive leading term.
    let mut l = BigInt::one();
    let mut num_g = BigInt::zero();
    for c in p.iter().flatten() {
        l = l.lcm(c.denom());
    }
    let lr = BigRational::from_integer(l);
    let scaled: BiPoly = p.iter().map(|c| c.iter().map(|x| x * &lr).collect()).collect();
    for c in scaled.iter().flatten() {
        num_g = num_g.gcd(c.numer());
    }
    if num_g.is_zero() {
        return bi_trim(scaled);
    }
    let lead_neg = scaled.last().and_then(|c| c.last()).is_some_and(|c| c.is_negative());
    let d = BigRational::from_integer(if lead_neg { -num_g } else { num_g });
    bi_trim(scaled.iter().map(|c| c.iter().map(|x| x / &d).collect()).collect())
}

pub fn bi_to_ratfunc(p: &[QPoly]) -> Poly<RatFuncField> {
    upoly::trim(&RatFuncField, p.iter().map(|c| RatFunc::poly(c.clone())).collect())
}

/// Clear denominators of a polynomial over ℚ(z) into ℚ[z][x].
pub fn bi_from_ratfunc(p: &[RatFunc]) -> BiPoly {
    let q = QField;
    let mut l: QPoly = vec![BigRational::one()];
    for c in p {
        let g = upoly::gcd(&q, &l, c.denom());
        l = upoly::mul(&q, &l, &upoly::divrem(&q, c.denom(), &g).0);
    }
    let out: BiPoly = p
        .iter()
        .map(|c| {
            let k = upoly::divrem(&q, &l, c.denom()).0;
            upoly::mul(&q, c.numer(), &k)
        })
        .collect();
    bi_primitive(&out)
}

fn bi_eval_z(p: &[QPoly], z0: &BigRational) -> QPoly {
    upoly::trim(&QField, p.iter().map(|c| upoly::eval(&QField, c, z0)).collect())
}

fn bi_shift_z(p: &[QPoly], z0: &BigRational) -> BiPoly {
    p.iter().map(|c| upoly::taylor_shift(&QField, c, z0)).collect()
}

/// Factor `p ∈ ℚ[z][x]` into factors of positive `x`-degree, each primitive
/// in ℚ[z][x]. The `z`-content is dropped.
pub fn factor_bivariate(p: &[QPoly]) -> Vec<(BiPoly, usize)> {
    let q = QField;
    let p = bi_primitive(p);
    if p.len() <= 1 {
        return Vec::new();
    }
    if deg_z(&p) == 0 {
        let flat: QPoly = upoly::trim(&q, p.iter().map(|c| c.first().cloned().unwrap_or_default()).collect());
        return factor_rational(&flat)
            .into_iter()
            .map(|(g, m)| (bi_primitive(&g.into_iter().map(|c| upoly::constant(&q, c)).collect::<Vec<_>>()), m))
            .collect();
    }
    let rf = RatFuncField;
    let mut out = Vec::new();
    for (sq, mult) in upoly::squarefree(&rf, &bi_to_ratfunc(&p)) {
        let sq = bi_from_ratfunc(&sq);
        for g in factor_bivariate_squarefree(&sq) {
            out.push((g, mult));
        }
    }
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Monic factors over ℚ(z) with multiplicities.
pub fn factor_over_ratfunc(p: &[RatFunc]) -> Vec<(Poly<RatFuncField>, usize)> {
    let rf = RatFuncField;
    factor_bivariate(&bi_from_ratfunc(p))
        .into_iter()
        .map(|(g, m)| (upoly::monic(&rf, &bi_to_ratfunc(&g)), m))
        .collect()
}

fn good_specialization(p: &[QPoly]) -> BigRational {
    let q = QField;
    let n = p.len() - 1;
    for k in 0i64.. {
        let z0 = BigRational::from_integer(BigInt::from(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 }));
        let s = bi_eval_z(p, &z0);
        if s.len() != n + 1 {
            continue;
        }
        if upoly::gcd(&q, &s, &upoly::derivative(&q, &s)).len() == 1 {
            return z0;
        }
    }
    unreachable!()
}

fn factor_bivariate_squarefree(p: &[QPoly]) -> Vec<BiPoly> {
    let q = QField;
    let n = p.len() - 1;
    if n <= 1 {
        return vec![p.to_vec()];
    }
    let z0 = good_specialization(p);
    let facs: Vec<QPoly> = factor_rational(&bi_eval_z(p, &z0)).into_iter().map(|(g, _)| g).collect();
    if facs.len() == 1 {
        return vec![p.to_vec()];
    }
    let shifted = bi_shift_z(p, &z0);
    let bound = deg_z(&shifted) + deg_z(&shifted[n..]) + 1;
    let lifted = hensel_z(&shifted, &facs, bound);

    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut current = shifted;
    let mut out = Vec::new();
    let mut size = 1;
    let back = -z0.clone();
    'outer: while 2 * size <= remaining.len() {
        for subset in remaining.iter().copied().combinations(size) {
            let lc = current.last().unwrap().clone();
            // candidate = lc(z) * prod G_i  mod z^bound, as a z-series of x-polys
            let mut cand: Vec<QPoly> = lc.iter().map(|c| upoly::constant(&q, c.clone())).collect();
            for &i in &subset {
                cand = zseries_mul(&cand, &lifted[i], bound);
            }
            let cand = bi_primitive(&transpose(&cand));
            let rcand = bi_to_ratfunc(&cand);
            if let Some(quot) = upoly::div_exact(&RatFuncField, &bi_to_ratfunc(&current), &rcand) {
                if quot.iter().all(|c| c.is_polynomial()) {
                    out.push(bi_primitive(&bi_shift_z(&cand, &back)));
                    current = bi_primitive(&quot.iter().map(|c| c.numer().clone()).collect::<Vec<_>>());
                    remaining.retain(|i| !subset.contains(i));
                    continue 'outer;
                }
            }
        }
        size += 1;
    }
    if current.len() > 1 {
        out.push(bi_primitive(&bi_shift_z(&current, &back)));
    }
    out
}

/// `[z^k] -> x-poly` to `[x^j] -> z-poly`.
fn transpose(s: &[QPoly]) -> BiPoly {
    let q = QField;
    let nx = s.iter().map(|c| c.len()).max().unwrap_or(0);
    let mut out: BiPoly = vec![Vec::new(); nx];
    for (k, c) in s.iter().enumerate() {
        for (j, a) in c.iter().enumerate() {
            if out[j].len() <= k {
                out[j].resize(k + 1, BigRational::zero());
            }
            out[j][k] = a.clone();
        }
    }
    bi_trim(out.into_iter().map(|c| upoly::trim(&q, c)).collect())
}

fn zseries_mul(a: &[QPoly], b: &[QPoly], prec: usize) -> Vec<QPoly> {
    let q = QField;
    let n = (a.len() + b.len()).saturating_sub(1).min(prec);
    let mut out: Vec<QPoly> = vec![Vec::new(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_empty() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= n {
                break;
            }
            out[i + j] = upoly::add(&q, &out[i + j], &upoly::mul(&q, x, y));
        }
    }
    out
}

/// Lift the monic factorization of `p(x, 0) / lc` to `p / lc(z)` modulo
/// `z^prec`. Each lifted factor is returned as a `z`-series of `x`-polys.
fn hensel_z(p: &[QPoly], facs: &[QPoly], prec: usize) -> Vec<Vec<QPoly>> {
    let q = QField;
    let n = p.len() - 1;
    // target = p / lc(z) as a z-series
    let lc = &p[n];
    let lc_series = series_inverse(lc, prec);
    let zs = transpose_to_series(p, prec);
    let target = zseries_mul(&zs, &lc_series.iter().map(|c| upoly::constant(&q, c.clone())).collect::<Vec<_>>(), prec);
    let r = facs.len();
    let s: Vec<QPoly> = (0..r)
        .map(|i| {
            let mut prod = vec![BigRational::one()];
            for (j, g) in facs.iter().enumerate() {
                if j != i {
                    prod = upoly::mul(&q, &prod, g);
                }
            }
            upoly::inv_mod(&q, &upoly::rem(&q, &prod, &facs[i]), &facs[i]).expect("coprime factors")
        })
        .collect();
    let mut gs: Vec<Vec<QPoly>> = facs.iter().map(|g| vec![g.clone()]).collect();
    for k in 1..prec {
        let mut prod: Vec<QPoly> = vec![vec![BigRational::one()]];
        for g in &gs {
            prod = zseries_mul(&prod, g, k + 1);
        }
        let tk = target.get(k).cloned().unwrap_or_default();
        let pk = prod.get(k).cloned().unwrap_or_default();
        let e = upoly::sub(&q, &tk, &pk);
        for i in 0..r {
            let delta = if e.is_empty() {
                Vec::new()
            } else {
                upoly::rem(&q, &upoly::mul(&q, &e, &s[i]), &facs[i])
            };
            gs[i].push(delta);
        }
    }
    gs
}

fn transpose_to_series(p: &[QPoly], prec: usize) -> Vec<QPoly> {
    let q = QField;
    (0..prec)
        .map(|k| upoly::trim(&q, p.iter().map(|c| c.get(k).cloned().unwrap_or_default()).collect()))
        .collect()
}

fn series_inverse(a: &[BigRational], prec: usize) -> Vec<BigRational> {
    let a0 = a[0].clone();
    let mut out: Vec<BigRational> = Vec::with_capacity(prec);
    for k in 0..prec {
        let mut acc = if k == 0 { BigRational::one() } else { BigRational::zero() };
        for j in 1..=k.min(a.len().saturating_sub(1)) {
            acc -= &a[j] * &out[k - j];
        }
        out.push(acc / &a0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::int;

    fn p(cs: &[i64]) -> QPoly {
        cs.iter().map(|&c| int(c)).collect()
    }

    fn expand(fs: &[(QPoly, usize)]) -> QPoly {
        let q = QField;
        let mut acc = vec![int(1)];
        for (g, m) in fs {
            acc = upoly::mul(&q, &acc, &upoly::pow(&q, g, *m));
        }
        acc
    }

    #[test]
    fn factors_cyclotomic_product() {
        // x^6 - 1 = (x-1)(x+1)(x^2+x+1)(x^2-x+1)
        let f = factor_rational(&p(&[-1, 0, 0, 0, 0, 0, 1]));
        assert_eq!(f.len(), 4);
        assert_eq!(expand(&f), p(&[-1, 0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn swinnerton_dyer_like_is_irreducible() {
        // x^4 - 10x^2 + 1 splits modulo every prime
        let f = factor_rational(&p(&[1, 0, -10, 0, 1]));
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn repeated_and_nonmonic() {
        // (2x+1)^2 (x^2+3)
        let q = QField;
        let a = upoly::mul(&q, &upoly::pow(&q, &p(&[1, 2]), 2), &p(&[3, 0, 1]));
        let f = factor_rational(&a);
        assert_eq!(f, vec![(vec![crate::algebra::field::rat(1, 2), int(1)], 2), (p(&[3, 0, 1]), 1)]);
    }

    #[test]
    fn bivariate_difference_of_squares() {
        // x^2 - z^2 over Q(z)
        let bp: BiPoly = vec![p(&[0, 0, -1]), Vec::new(), p(&[1])];
        let f = factor_bivariate(&bp);
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn bivariate_irreducible_radical() {
        // x^5 - z is irreducible over Q(z)
        let bp: BiPoly = vec![p(&[0, -1]), vec![], vec![], vec![], vec![], p(&[1])];
        assert_eq!(factor_bivariate(&bp).len(), 1);
    }

    #[test]
    fn bivariate_nonmonic_product() {
        // (z x + 1)(x^2 - z x + z + 2)
        let a: BiPoly = vec![p(&[1]), p(&[0, 1])];
        let b: BiPoly = vec![p(&[2, 1]), p(&[0, -1]), p(&[1])];
        let prod = upoly::mul(&RatFuncField, &bi_to_ratfunc(&a), &bi_to_ratfunc(&b));
        let f = factor_bivariate(&bi_from_ratfunc(&prod));
        assert_eq!(f.len(), 2);
        assert!(f.iter().any(|(g, _)| *g == a));
        assert!(f.iter().any(|(g, _)| *g == b));
    }
}
