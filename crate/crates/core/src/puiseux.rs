//! Places of the curve `f(s, t) = 0` above a point of the `t`-line, by
//! rational Newton–Puiseux (Duval): one branch per conjugacy class, with
//! coefficients in a single algebraic extension of the base field.
//!
//! A place is returned as an exact `t(u)` of the form `θ + γ·u^e` (or
//! `γ⁻¹·u^{-e}` above infinity) together with a truncated Laurent series
//! `s(u)`.

use num_complex::Complex64;
use num_integer::Integer;

use crate::algebra::multipoly::resultant;
use crate::algebra::roots::approx_roots;
use crate::algebra::upoly::{self, Poly};
use crate::algebra::{AlgField, AlgebraError, BaseField, Field, MultiPoly, QField, RatFuncField, Var};
use crate::parser::CurveEquation;
use crate::series::{Laurent, PuiseuxSeries, EXACT};

/// Default number of terms: `2·deg_S·deg_T + 6`.
pub fn default_truncation(eq: &CurveEquation) -> usize {
    (2 * eq.deg_s() * eq.deg_t() + 6) as usize
}

/// `f` as a grid of base-field coefficients, `grid[i][j]` for `S^i T^j`.
#[derive(Clone, Debug)]
pub struct Curve<B: BaseField> {
    base: B,
    f: MultiPoly,
    grid: Vec<Vec<B::Elem>>,
    deg_t: usize,
}

impl<B: BaseField> Curve<B> {
    pub fn new(base: B, f: &MultiPoly) -> Result<Self, AlgebraError> {
        let mut grid = Vec::new();
        for row in f.to_st_grid() {
            let mut out = Vec::new();
            for c in &row {
                out.push(
                    base.from_ratfunc(c)
                        .ok_or_else(|| AlgebraError::InvalidArgument(format!("coefficient {} outside the base field", c)))?,
                );
            }
            grid.push(upoly::trim(&base, out));
        }
        let deg_t = grid.iter().map(|r| r.len().saturating_sub(1)).max().unwrap_or(0);
        Ok(Curve { base, f: f.clone(), grid, deg_t })
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.f
    }

    pub fn deg_s(&self) -> usize {
        self.grid.len() - 1
    }

    pub fn deg_t(&self) -> usize {
        self.deg_t
    }

    /// Coefficient of `S^i` as a polynomial in `T`.
    pub fn s_coeff(&self, i: usize) -> &[B::Elem] {
        &self.grid[i]
    }

    /// The grid with coefficients in `target`.
    pub fn grid_in<F: Field>(&self, target: &F, emb: impl Fn(&B::Elem) -> F::Elem) -> Vec<Vec<F::Elem>> {
        let _ = target;
        self.grid.iter().map(|r| r.iter().map(&emb).collect()).collect()
    }

    /// `Res_S(f, ∂f/∂S)` as a polynomial in `T`; its roots are the finite
    /// centers where `Δ = ∂f/∂S` can vanish on the curve.
    pub fn delta_resultant(&self) -> Result<Poly<B>, AlgebraError> {
        let fs = self.f.partial(Var::S);
        let r = resultant(&self.f, &fs, Var::S)?;
        let uni = r.to_univariate(Var::T).ok_or_else(|| AlgebraError::InvalidArgument("resultant still involves S".into()))?;
        let mut out = Vec::new();
        for c in &uni {
            out.push(
                self.base
                    .from_ratfunc(c)
                    .ok_or_else(|| AlgebraError::InvalidArgument("resultant coefficient outside the base field".into()))?,
            );
        }
        Ok(upoly::trim(&self.base, out))
    }

    /// Candidate centers: the irreducible factors of the `Δ`-resultant and
    /// the point at infinity.
    pub fn candidate_centers(&self) -> Result<Vec<Center<B>>, AlgebraError> {
        let r = self.delta_resultant()?;
        if r.is_empty() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let mut out: Vec<Center<B>> = Vec::new();
        if r.len() > 1 {
            for (p, _) in self.base.factor(&r) {
                out.push(Center::Finite(p));
            }
        }
        out.push(Center::Infinity);
        Ok(out)
    }
}

/// A point of the `t`-line: the roots of a monic irreducible polynomial over
/// the base field, or infinity.
#[derive(Clone, Debug, PartialEq)]
pub enum Center<B: BaseField> {
    Finite(Poly<B>),
    Infinity,
}

impl<B: BaseField> Center<B> {
    pub fn rational(base: &B, value: &B::Elem) -> Self {
        Center::Finite(vec![base.neg(value), base.one()])
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Center::Infinity)
    }

    /// Degree of the center over the base field.
    pub fn degree(&self) -> usize {
        match self {
            Center::Finite(p) => p.len() - 1,
            Center::Infinity => 1,
        }
    }

    /// `t = value` for rational centers, `p(t) = 0` otherwise.
    pub fn render(&self, base: &B) -> String {
        match self {
            Center::Infinity => "t = oo".into(),
            Center::Finite(p) if p.len() == 2 => format!("t = {}", base.render(&base.neg(&p[0]))),
            Center::Finite(p) => format!("{} = 0", upoly::render(base, p, "t")),
        }
    }
}

/// A place of the curve with its local parametrization.
#[derive(Clone, Debug)]
pub struct Place<B: BaseField> {
    pub center: Center<B>,
    /// Coefficient field of the expansions (residue field of the place).
    pub field: AlgField<B>,
    /// Center value in `field` (finite centers).
    pub theta: Option<Vec<B::Elem>>,
    /// Ramification index over the `t`-line.
    pub e: u32,
    pub t: Laurent<AlgField<B>>,
    pub s: Laurent<AlgField<B>>,
}

impl<B: BaseField> Place<B> {
    /// A place from explicit expansions. The ramification index is read off
    /// `t`.
    pub fn from_parametrization(
        center: Center<B>,
        field: AlgField<B>,
        t: Laurent<AlgField<B>>,
        s: Laurent<AlgField<B>>,
    ) -> Self {
        let (e, theta) = match center {
            Center::Infinity => ((-t.valuation().unwrap_or(0)).max(1) as u32, None),
            Center::Finite(_) => {
                let c0 = t.coeff(&field, 0);
                let rest = t.sub(&field, &Laurent::constant(&field, c0.clone(), EXACT));
                (rest.valuation().unwrap_or(1).max(1) as u32, Some(c0))
            }
        };
        Place { center, field, theta, e, t, s }
    }

    pub fn residue_degree(&self) -> usize {
        self.field.degree()
    }

    /// Numeric value of the center, when the base field is ℚ.
    pub fn center_approx(&self) -> Option<Complex64> {
        self.theta.as_ref().and_then(|th| self.field.approx(th))
    }

    /// Value of `s` at the place, `None` at a pole of `s`.
    pub fn s_value(&self) -> Option<Vec<B::Elem>> {
        if self.s.valuation().is_some_and(|v| v < 0) {
            None
        } else {
            Some(self.s.coeff(&self.field, 0))
        }
    }

    pub fn render_t(&self) -> String {
        PuiseuxSeries::from_laurent(self.t.clone()).render(&self.field, "u")
    }

    pub fn render_s(&self) -> String {
        PuiseuxSeries::from_laurent(self.s.clone()).render(&self.field, "u")
    }

    /// `f(s(u), t(u))` with its guaranteed precision.
    pub fn residual(&self, curve: &Curve<B>) -> Laurent<AlgField<B>> {
        let l = &self.field;
        let grid: Vec<Vec<Laurent<AlgField<B>>>> = curve
            .grid
            .iter()
            .map(|r| r.iter().map(|c| Laurent::constant(l, l.embed(c), EXACT)).collect())
            .collect();
        series_substitute(l, &grid, &self.s, &self.t)
    }
}

/// `Σ grid[i][j] s^i t^j` by Horner's rule, truncated where the inputs stop
/// being known.
pub fn series_substitute<F: Field>(f: &F, grid: &[Vec<Laurent<F>>], s: &Laurent<F>, t: &Laurent<F>) -> Laurent<F> {
    let mut acc: Option<Laurent<F>> = None;
    for row in grid.iter().rev() {
        let mut r: Option<Laurent<F>> = None;
        for c in row.iter().rev() {
            r = Some(match r {
                None => c.clone(),
                Some(v) => v.mul(f, t).add(f, c),
            });
        }
        let r = r.unwrap_or_else(|| Laurent::zero(EXACT));
        acc = Some(match acc {
            None => r,
            Some(v) => v.mul(f, s).add(f, &r),
        });
    }
    acc.unwrap_or_else(|| Laurent::zero(EXACT))
}

// ---------------------------------------------------------------------------
// Duval's rational Newton–Puiseux

type Elem<B> = Vec<<B as Field>::Elem>;

/// One branch in progress: `G(X_k, Y_k) = 0` with
/// `X = γ·X_k^e` and `Y = A(X_k) + b·X_k^M·Y_k`.
#[derive(Clone)]
struct State<B: BaseField> {
    field: AlgField<B>,
    g: Vec<Poly<AlgField<B>>>,
    theta: Elem<B>,
    gamma: Elem<B>,
    e: u32,
    a: Laurent<AlgField<B>>,
    b: Elem<B>,
    m: i64,
}

impl<B: BaseField> State<B> {
    fn extend(&self, psi: &Poly<AlgField<B>>) -> Result<(State<B>, Elem<B>), AlgebraError> {
        let ext = self.field.extend(psi)?;
        let from = &self.field;
        let map = |x: &Elem<B>| ext.map(from, x);
        let nf = ext.field.clone();
        let st = State {
            g: self.g.iter().map(|p| upoly::trim(&nf, p.iter().map(map).collect())).collect(),
            theta: map(&self.theta),
            gamma: map(&self.gamma),
            e: self.e,
            a: self.a.map_field(&nf, map),
            b: map(&self.b),
            m: self.m,
            field: nf,
        };
        Ok((st, ext.new_root))
    }
}

fn center_field<B: BaseField>(base: B, c: &Center<B>) -> (AlgField<B>, Elem<B>) {
    match c {
        Center::Infinity => {
            let l = AlgField::trivial(base);
            let z = l.zero();
            (l, z)
        }
        Center::Finite(p) if p.len() == 2 => {
            let l = AlgField::trivial(base);
            let v = base.div(&base.neg(&p[0]), &p[1]).unwrap();
            let th = l.embed(&v);
            (l, th)
        }
        Center::Finite(p) => {
            let approx: Option<Vec<Complex64>> = p.iter().map(|c| base.approx(c)).collect();
            let root = approx.and_then(|cs| approx_roots(&cs).first().copied());
            let l = AlgField::new(base, p.clone(), root);
            let th = l.gen();
            (l, th)
        }
    }
}

/// All places above `center`, with `s(u)` known to `n_terms` orders past
/// its leading term.
pub fn places_above<B: BaseField>(
    curve: &Curve<B>,
    center: &Center<B>,
    n_terms: usize,
) -> Result<Vec<Place<B>>, AlgebraError> {
    let (field, theta) = center_field(curve.base, center);
    let l = &field;
    let dt = curve.deg_t;
    let mut g: Vec<Poly<AlgField<B>>> = Vec::new();
    for i in 0..=curve.deg_s() {
        let row = &curve.grid[i];
        let p = match center {
            Center::Infinity => {
                let mut out = vec![l.zero(); dt + 1];
                for (j, c) in row.iter().enumerate() {
                    out[dt - j] = l.embed(c);
                }
                upoly::trim(l, out)
            }
            Center::Finite(_) => {
                let lin = vec![theta.clone(), l.one()];
                let mut acc: Poly<AlgField<B>> = Vec::new();
                for c in row.iter().rev() {
                    acc = upoly::add(l, &upoly::mul(l, &acc, &lin), &[l.embed(c)]);
                }
                acc
            }
        };
        g.push(p);
    }
    let st = State {
        gamma: l.one(),
        b: l.one(),
        theta,
        e: 1,
        a: Laurent::zero(EXACT),
        m: 0,
        g,
        field,
    };
    let mut out = Vec::new();
    expand(center, st, None, n_terms.max(1), &mut out)?;
    Ok(out)
}

fn valuation<F: Field>(f: &F, p: &[F::Elem]) -> Option<usize> {
    p.iter().position(|c| !f.is_zero(c))
}

fn lower_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in points {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

fn expand<B: BaseField>(
    center: &Center<B>,
    mut st: State<B>,
    mult: Option<usize>,
    n_terms: usize,
    out: &mut Vec<Place<B>>,
) -> Result<(), AlgebraError> {
    let hi = match mult {
        None => st.g.len() - 1,
        Some(mut r) => {
            if st.g[0].is_empty() {
                out.push(finish(center, &st, Laurent::zero(EXACT)));
                st.g.remove(0);
                r -= 1;
                if r == 0 {
                    return Ok(());
                }
            }
            if r == 1 {
                let y = newton(&st, n_terms)?;
                out.push(finish(center, &st, y));
                return Ok(());
            }
            r
        }
    };
    let l = st.field.clone();
    let points: Vec<(i64, i64)> = (0..=hi)
        .filter_map(|i| valuation(&l, &st.g[i]).map(|v| (i as i64, v as i64)))
        .collect();
    let hull = lower_hull(&points);
    for w in hull.windows(2) {
        let ((i1, j1), (i2, j2)) = (w[0], w[1]);
        let (dj, di) = (j1 - j2, i2 - i1);
        let gg = dj.gcd(&di);
        let (m, q) = (dj / gg, di / gg);
        let lval = q * j1 + m * i1;
        let mut phi = Vec::new();
        let mut i = i1;
        while i <= i2 {
            let j = (lval - m * i) / q;
            phi.push(if j >= 0 { st.g[i as usize].get(j as usize).cloned().unwrap_or_else(|| l.zero()) } else { l.zero() });
            i += q;
        }
        for (psi, r) in l.factor(&phi)? {
            let (st2, xi) = if psi.len() == 2 {
                (st.clone(), l.neg(&psi[0]))
            } else {
                st.extend(&psi)?
            };
            let st3 = substitute(&st2, &xi, m, q, lval)?;
            expand(center, st3, Some(r), n_terms, out)?;
        }
    }
    Ok(())
}

/// `X_k = ξ^v X'^q`, `Y_k = X'^m (ξ^u + Y')` with `uq - vm = 1`, followed by
/// division by `X'^l`.
fn substitute<B: BaseField>(st: &State<B>, xi: &Elem<B>, m: i64, q: i64, lval: i64) -> Result<State<B>, AlgebraError> {
    let f = &st.field;
    let v = (0..q).find(|v| (1 + v * m).rem_euclid(q) == 0).unwrap();
    let u = (1 + v * m) / q;
    let xv = f.powi(xi, v)?;
    let xu = f.powi(xi, u)?;
    let n = st.g.len() - 1;
    let mut c: Vec<Poly<AlgField<B>>> = Vec::with_capacity(n + 1);
    for (i, gi) in st.g.iter().enumerate() {
        let mut poly: Poly<AlgField<B>> = Vec::new();
        let mut pw = f.one();
        for (j, a) in gi.iter().enumerate() {
            if !f.is_zero(a) {
                let k = q * j as i64 + m * i as i64 - lval;
                assert!(k >= 0, "point below the supporting line");
                let k = k as usize;
                if poly.len() <= k {
                    poly.resize(k + 1, f.zero());
                }
                poly[k] = f.add(&poly[k], &f.mul(a, &pw));
            }
            pw = f.mul(&pw, &xv);
        }
        c.push(upoly::trim(f, poly));
    }
    // Σ c_i (ξ^u + Y')^i by Horner in Y'.
    let mut acc: Vec<Poly<AlgField<B>>> = Vec::new();
    for ci in c.iter().rev() {
        let mut next: Vec<Poly<AlgField<B>>> = vec![Vec::new(); acc.len() + 1];
        for (k, ak) in acc.iter().enumerate() {
            next[k] = upoly::add(f, &next[k], &upoly::scale(f, ak, &xu));
            next[k + 1] = upoly::add(f, &next[k + 1], ak);
        }
        next[0] = upoly::add(f, &next[0], ci);
        acc = next;
    }
    while acc.last().is_some_and(|p| p.is_empty()) {
        acc.pop();
    }
    let e = st.e;
    let gamma = f.mul(&st.gamma, &f.powi(&xv, e as i64)?);
    let bv = f.powi(&xv, st.m)?;
    let lead = Laurent::monomial(f, f.mul(&f.mul(&st.b, &bv), &xu), q * st.m + m, EXACT);
    let a = if st.a.is_zero() { lead } else { st.a.subs_monomial(f, &xv, q)?.add(f, &lead) };
    Ok(State {
        field: st.field.clone(),
        g: acc,
        theta: st.theta.clone(),
        gamma,
        e: e * q as u32,
        a,
        b: f.mul(&st.b, &bv),
        m: q * st.m + m,
    })
}

fn mul_trunc<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem], n: usize) -> Poly<F> {
    let mut out = vec![f.zero(); n.min(a.len() + b.len())];
    for (i, x) in a.iter().enumerate().take(n) {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    upoly::trim(f, out)
}

fn eval_trunc<F: Field>(f: &F, g: &[Poly<F>], y: &[F::Elem], n: usize) -> Poly<F> {
    let mut acc: Poly<F> = Vec::new();
    for gi in g.iter().rev() {
        acc = mul_trunc(f, &acc, y, n);
        let gt: Poly<F> = gi.iter().take(n).cloned().collect();
        acc = upoly::add(f, &acc, &gt);
    }
    acc
}

/// Solve `G(X, Y) = 0`, `Y(0) = 0`, `G_Y(0, 0) ≠ 0`, by Newton iteration
/// with precision doubling.
fn newton<B: BaseField>(st: &State<B>, n_terms: usize) -> Result<Laurent<AlgField<B>>, AlgebraError> {
    let f = &st.field;
    let v0 = st.a.valuation().unwrap_or(0);
    let target = (v0 + n_terms as i64 - st.m).max(1) as usize;
    let dg: Vec<Poly<AlgField<B>>> = (1..st.g.len())
        .map(|k| upoly::scale(f, &st.g[k], &f.from_int(k as i64)))
        .collect();
    let mut y: Poly<AlgField<B>> = Vec::new();
    let mut p = 1usize;
    while p < target {
        p = (2 * p).min(target);
        let gv = eval_trunc(f, &st.g, &y, p);
        let dv = eval_trunc(f, &dg, &y, p);
        let inv = Laurent::from_coeffs(f, dv, 0, p as i64).inv(f)?;
        let corr = Laurent::from_coeffs(f, gv, 0, p as i64).mul(f, &inv);
        let cv: Poly<AlgField<B>> = (0..p as i64).map(|k| corr.coeff(f, k)).collect();
        y = upoly::trim(f, upoly::sub(f, &y, &cv).into_iter().take(p).collect());
    }
    Ok(Laurent::from_coeffs(f, y, 0, target as i64))
}

fn finish<B: BaseField>(center: &Center<B>, st: &State<B>, yk: Laurent<AlgField<B>>) -> Place<B> {
    let f = &st.field;
    let tail = yk.shift(st.m).scale(f, &st.b);
    let s = st.a.add(f, &tail);
    let e = st.e as i64;
    let (t, theta) = match center {
        Center::Infinity => (Laurent::monomial(f, f.inv(&st.gamma).unwrap(), -e, EXACT), None),
        Center::Finite(_) => {
            let mut cs = vec![f.zero(); e as usize + 1];
            cs[0] = st.theta.clone();
            cs[e as usize] = st.gamma.clone();
            (Laurent::from_coeffs(f, cs, 0, EXACT), Some(st.theta.clone()))
        }
    };
    Place { center: center.clone(), field: st.field.clone(), theta, e: st.e, t, s }
}

/// Whether the curve has a place whose residue field is the base field
/// itself, found above infinity or above `t ∈ {0, 1, -1}`. Such a place
/// certifies absolute irreducibility of an irreducible `f`.
pub fn has_rational_place(eq: &CurveEquation) -> bool {
    fn check<B: BaseField>(base: B, eq: &CurveEquation) -> bool {
        let Ok(curve) = Curve::new(base, eq.f()) else { return false };
        let mut centers = vec![Center::Infinity];
        for v in [0i64, 1, -1] {
            centers.push(Center::rational(&base, &base.from_int(v)));
        }
        centers.iter().any(|c| {
            places_above(&curve, c, 2).is_ok_and(|ps| ps.iter().any(|p| p.residue_degree() == 1))
        })
    }
    if eq.autonomous() {
        check(QField, eq)
    } else {
        check(RatFuncField, eq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_equation;

    fn curve_q(text: &str) -> Curve<QField> {
        Curve::new(QField, parse_equation(text).unwrap().f()).unwrap()
    }

    fn curve_z(text: &str) -> Curve<RatFuncField> {
        Curve::new(RatFuncField, parse_equation(text).unwrap().f()).unwrap()
    }

    fn ramification_sum<B: BaseField>(ps: &[Place<B>]) -> usize {
        ps.iter().map(|p| p.e as usize * p.residue_degree()).sum()
    }

    #[test]
    fn square_root_branch() {
        let c = curve_q("(y')^2 = y");
        let ps = places_above(&c, &Center::rational(&QField, &QField.zero()), 8).unwrap();
        assert_eq!(ps.len(), 1);
        let p = &ps[0];
        assert_eq!(p.e, 2);
        assert_eq!(p.render_t(), "1 * (u)^(2)");
        assert!(p.render_s().starts_with("1 * (u)^(1)"), "{}", p.render_s());
        assert_eq!(p.s.valuation(), Some(1));
        assert!(p.residual(&c).valuation().is_none());
    }

    #[test]
    fn elliptic_curve_at_infinity() {
        let c = curve_q("(y')^2 = y^3 - y");
        let ps = places_above(&c, &Center::Infinity, 8).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].e, 2);
        assert_eq!(ps[0].t.valuation(), Some(-2));
        assert_eq!(ps[0].s.valuation(), Some(-3));
        let res = ps[0].residual(&c);
        assert!(res.valuation().is_none());
        assert!(res.prec() >= 0);
    }

    #[test]
    fn graph_of_a_function() {
        let c = curve_q("y' = y^2");
        let ps = places_above(&c, &Center::rational(&QField, &QField.from_int(5)), 6).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].e, 1);
        let l = &ps[0].field;
        assert_eq!(l.render(&ps[0].s.coeff(l, 0)), "25");
        assert_eq!(l.render(&ps[0].s.coeff(l, 1)), "10");
        assert_eq!(l.render(&ps[0].s.coeff(l, 2)), "1");
        assert!(l.is_zero(&ps[0].s.coeff(l, 3)));
    }

    #[test]
    fn ramification_sums_match_degree() {
        for text in ["(y')^2 = y^3 - y", "(y')^3 = y^2 + y", "(y')^2*y = 1 + y^3", "(y')^4 = y^3*(y - 1)^2"] {
            let c = curve_q(text);
            let n = c.deg_s();
            for center in c.candidate_centers().unwrap() {
                let ps = places_above(&c, &center, 6).unwrap();
                // residue degrees already include the degree of the center
                assert_eq!(ramification_sum(&ps), n * center.degree(), "{} at {:?}", text, center);
                for p in &ps {
                    assert!(p.residual(&c).valuation().is_none(), "{}", text);
                }
            }
        }
    }

    #[test]
    fn cube_root_of_z_center() {
        let c = curve_z("(y')^2 = y^3 + z");
        let centers = c.candidate_centers().unwrap();
        assert_eq!(centers.len(), 2);
        let ps = places_above(&c, &centers[0], 6).unwrap();
        assert_eq!(ramification_sum(&ps), 2 * 3);
        assert_eq!(ps[0].e, 2);
        assert_eq!(ps[0].residue_degree(), 3);
        assert!(ps[0].residual(&c).valuation().is_none());
    }

    #[test]
    fn non_autonomous_places() {
        let c = curve_z("(y')^2 = y - z^2");
        let centers = c.candidate_centers().unwrap();
        assert_eq!(centers[0].render(c.base()), "t = z^2");
        let ps = places_above(&c, &centers[0], 6).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].e, 2);
        let inf = places_above(&c, &Center::Infinity, 6).unwrap();
        assert_eq!(inf.len(), 1);
        assert_eq!(inf[0].e, 2);
        assert!(inf[0].residual(&c).valuation().is_none());
    }

    #[test]
    fn poles_of_s_at_finite_centers() {
        // y·(y')^2 = 1: s → ∞ as t → 0.
        let c = curve_q("y*(y')^2 = 1");
        let ps = places_above(&c, &Center::rational(&QField, &QField.zero()), 6).unwrap();
        assert_eq!(ramification_sum(&ps), 2);
        assert_eq!(ps[0].s.valuation(), Some(-1));
        assert!(ps[0].residual(&c).valuation().is_none());
    }

    #[test]
    fn truncated_substitution_reports_precision() {
        let q = QField;
        let l = AlgField::trivial(q);
        let c = curve_q("(y')^2 = y");
        let s = Laurent::from_coeffs(&l, vec![l.one()], 1, 5);
        let t = Laurent::from_coeffs(&l, vec![l.one(), l.zero(), l.zero(), l.zero(), l.zero(), l.one()], 2, 5);
        let grid: Vec<Vec<Laurent<AlgField<QField>>>> = c
            .grid_in(&l, |x| l.embed(x))
            .into_iter()
            .map(|r| r.into_iter().map(|x| Laurent::constant(&l, x, EXACT)).collect())
            .collect();
        let r = series_substitute(&l, &grid, &s, &t);
        assert!(r.valuation().is_none());
        assert_eq!(r.prec(), 5);
    }
}
