//! Branched solutions at a pole of the vector field.
//!
//! At a place where `D(u)` has a pole of order `m - 1`, the function `u^m`
//! satisfies `D(u^m) = g(u)` with `g(0) ≠ 0`. Along a solution through the
//! place this reads `(h^m)' = G(z - z₁, h)`, whose solution
//! `h = c₁ (z - z₁)^{1/m} + …` is computed term by term. The witness is
//! `y = t(h)`, re-expanded in `(z - z₁)^{1/m}`, and is checked by
//! substituting into `f(y', y, z)`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use crate::algebra::extension::Extension;
use crate::algebra::field::render_rational;
use crate::algebra::roots::approx_roots;
use crate::algebra::upoly::{self, Poly};
use crate::algebra::{AlgField, AlgebraError, BaseField, Field, QField};
use crate::parser::CurveEquation;
use crate::puiseux::{places_above, series_substitute, Curve};
use crate::series::{Laurent, PuiseuxSeries, EXACT};
use crate::vectorfield::{find_poles_in, local_vector_field, PoleReport};

/// Coefficients of witnesses: an algebraic number field.
pub type NumberField = AlgField<QField>;

/// Default residual target, in powers of `z - z₁`.
pub const DEFAULT_TARGET: i64 = 4;

fn bad(z1: &BigRational, reason: &str) -> AlgebraError {
    AlgebraError::BadBasePoint { z1: render_rational(z1), reason: reason.into() }
}

/// Certified order of `f(y', y, z)` along a candidate solution.
#[derive(Clone, Debug, PartialEq)]
pub enum Residual {
    /// Identically zero.
    Vanishes,
    /// Every computed coefficient vanishes; the order is at least this.
    AtLeast(BigRational),
    /// A nonzero coefficient at this exponent.
    Defect(BigRational),
}

impl Residual {
    /// `None` for an identically vanishing residual.
    pub fn order(&self) -> Option<&BigRational> {
        match self {
            Residual::Vanishes => None,
            Residual::AtLeast(q) | Residual::Defect(q) => Some(q),
        }
    }

    pub fn passes(&self, target: &BigRational) -> bool {
        self.order().is_none_or(|q| q >= target)
    }

    pub fn render(&self) -> String {
        match self {
            Residual::Vanishes => "exact".into(),
            Residual::AtLeast(q) => format!(">= {}", render_rational(q)),
            Residual::Defect(q) => render_rational(q),
        }
    }
}

/// Substitute `y` (a series in `x = (z - z₁)^{1/r}`) into `f` and report the
/// order of the result in powers of `z - z₁`.
pub fn verify_solution<F: Field>(
    f: &F,
    eq: &CurveEquation,
    z1: &BigRational,
    y: &PuiseuxSeries<F>,
) -> Result<Residual, AlgebraError> {
    let r = y.ram() as i64;
    let yl = y.laurent();
    // dy/dζ = (1 / (r x^{r-1})) dy/dx
    let dy = yl.derive(f).shift(-(r - 1)).scale(f, &f.from_rational(&BigRational::new(1.into(), r.into())));
    let mut zc = vec![f.zero(); r as usize + 1];
    zc[0] = f.from_rational(z1);
    zc[r as usize] = f.one();
    let z = Laurent::from_coeffs(f, zc, 0, EXACT);
    let mut grid = Vec::new();
    for row in eq.f().to_st_grid() {
        let mut out = Vec::new();
        for c in &row {
            let mut acc = Laurent::zero(EXACT);
            for a in c.numer().iter().rev() {
                acc = acc.mul(f, &z).add(f, &Laurent::constant(f, f.from_rational(a), EXACT));
            }
            out.push(acc);
        }
        grid.push(out);
    }
    let res = series_substitute(f, &grid, &dy, yl);
    let per = |k: i64| BigRational::new(k.into(), r.into());
    Ok(match res.valuation() {
        Some(v) => Residual::Defect(per(v)),
        None if res.is_exact() => Residual::Vanishes,
        None => Residual::AtLeast(per(res.prec())),
    })
}

/// `h = Σ_{i≥1} c_i τ^i` with `c₁ = c1` solving `(h^m)' = G(τ^m, h)`,
/// differentiation in `ζ = τ^m`. `g[k]` is the coefficient of `w^k` in
/// `G`, as a series in `τ`. Returns `c₁ … c_n`.
pub fn lemma_series<F: Field>(
    f: &F,
    m: u32,
    g: &[Laurent<F>],
    c1: &F::Elem,
    n: usize,
) -> Result<Laurent<F>, AlgebraError> {
    assert!(m > 1 && n >= 1);
    let g00 = g.first().map(|s| s.coeff(f, 0)).unwrap_or_else(|| f.zero());
    if f.is_zero(&g00) {
        return Err(AlgebraError::LeadingTermVanishes);
    }
    let mi = m as i64;
    if !f.eq(&f.pow(c1, m as u64), &g00) {
        return Err(AlgebraError::InvalidArgument("c1^m differs from G(0, 0)".into()));
    }
    let lead = f.pow(c1, m as u64 - 1);
    let mut cs = vec![c1.clone()];
    for k in 2..=n as i64 {
        let h = Laurent::from_coeffs(f, cs.clone(), 1, EXACT);
        // [G(τ^m, h)]_{τ^{k-1}}
        let mut gv = Laurent::zero(EXACT);
        for gj in g.iter().rev() {
            gv = gv.mul(f, &h).add(f, gj).truncate(f, k);
        }
        if gv.prec() < k {
            return Err(AlgebraError::TruncationTooSmall {
                needed: format!("tau^{}", k),
                available: format!("tau^{}", gv.prec()),
            });
        }
        let a = k + mi - 1;
        let hm = h.pow(f, mi)?.coeff(f, a);
        let am = f.from_rational(&BigRational::new(a.into(), mi.into()));
        let num = f.sub(&gv.coeff(f, k - 1), &f.mul(&am, &hm));
        let den = f.mul(&f.from_int(a), &lead);
        cs.push(f.div(&num, &den).ok_or(AlgebraError::DivisionByZero)?);
    }
    Ok(Laurent::from_coeffs(f, cs, 1, n as i64 + 1))
}

/// Maps elements of `L = B(θ)` to power series in `ζ = z - z₁` over a
/// number field, following one branch of `θ` near `z₁`.
struct Specializer<B: BaseField> {
    source: AlgField<B>,
    field: NumberField,
    theta: Laurent<NumberField>,
    z1: BigRational,
    prec: i64,
}

impl<B: BaseField> Specializer<B> {
    fn new(source: &AlgField<B>, z1: &BigRational, prec: i64) -> Result<Self, AlgebraError> {
        let base = *source.base();
        let q = QField;
        if source.degree() == 1 {
            let field = AlgField::trivial(q);
            return Ok(Specializer { source: source.clone(), field, theta: Laurent::zero(EXACT), z1: z1.clone(), prec });
        }
        let p = source.modulus();
        let mut pc: Vec<Vec<BigRational>> = Vec::new();
        for c in p {
            pc.push(base.taylor(c, z1, prec as usize).ok_or_else(|| bad(z1, "the field generator has a pole"))?);
        }
        let p0: Poly<QField> = upoly::trim(&q, pc.iter().map(|c| c.first().cloned().unwrap_or_default()).collect());
        if p0.len() != p.len() {
            return Err(bad(z1, "the field generator has a pole"));
        }
        let factors = q.factor(&p0);
        let psi = factors.iter().map(|(g, _)| g).min_by_key(|g| g.len()).unwrap().clone();
        let (field, theta1) = if psi.len() == 2 {
            let l = AlgField::trivial(q);
            let r = l.embed(&q.neg(&psi[0]));
            (l, r)
        } else {
            let approx: Vec<Complex64> = psi.iter().map(|c| q.approx(c).unwrap()).collect();
            let l = AlgField::new(q, psi.clone(), pick_root(&approx_roots(&approx)));
            let g = l.gen();
            (l, g)
        };
        let lp: Vec<Laurent<NumberField>> = pc
            .iter()
            .map(|c| Laurent::from_coeffs(&field, c.iter().map(|x| field.embed(x)).collect(), 0, prec))
            .collect();
        let dp0 = upoly::derivative(&field, &p0.iter().map(|x| field.embed(x)).collect::<Vec<_>>());
        if field.is_zero(&upoly::eval(&field, &dp0, &theta1)) {
            return Err(bad(z1, "the field generator branches at the base point"));
        }
        // Newton iteration for the branch of θ through θ₁.
        let mut theta = Laurent::constant(&field, theta1, prec);
        for _ in 0..=(64 - (prec.max(1) as u64).leading_zeros()) + 1 {
            let mut v = Laurent::zero(EXACT);
            let mut dv = Laurent::zero(EXACT);
            for c in lp.iter().rev() {
                dv = dv.mul(&field, &theta).add(&field, &v);
                v = v.mul(&field, &theta).add(&field, c);
            }
            theta = theta.sub(&field, &v.div(&field, &dv)?).truncate(&field, prec);
        }
        Ok(Specializer { source: source.clone(), field, theta, z1: z1.clone(), prec })
    }

    fn base_elem(&self, c: &B::Elem) -> Result<Laurent<NumberField>, AlgebraError> {
        let base = *self.source.base();
        let t = base.taylor(c, &self.z1, self.prec as usize).ok_or_else(|| bad(&self.z1, "a coefficient has a pole"))?;
        let prec = if base.is_constant_field() { EXACT } else { self.prec };
        Ok(Laurent::from_coeffs(&self.field, t.iter().map(|x| self.field.embed(x)).collect(), 0, prec))
    }

    fn map(&self, a: &[B::Elem]) -> Result<Laurent<NumberField>, AlgebraError> {
        let f = &self.field;
        let mut acc = Laurent::zero(EXACT);
        for c in a.iter().rev() {
            acc = acc.mul(f, &self.theta).add(f, &self.base_elem(c)?);
            if !acc.is_exact() {
                acc = acc.truncate(f, self.prec);
            }
        }
        Ok(acc)
    }
}

fn pick_root(roots: &[Complex64]) -> Option<Complex64> {
    roots.first().copied()
}

/// A truncated branched solution `y ∈ E((z - z₁)^{1/m})`.
#[derive(Clone, Debug)]
pub struct BranchWitness {
    pub base_point: BigRational,
    pub m: u32,
    pub field: NumberField,
    pub c1: Vec<BigRational>,
    /// `h = u(z)` along the solution, in `(z - z₁)^{1/m}`.
    pub h: PuiseuxSeries<NumberField>,
    pub y: PuiseuxSeries<NumberField>,
    pub residual: Residual,
    pub target: BigRational,
    /// First term with a non-integral exponent.
    pub leading: (BigRational, Vec<BigRational>),
}

impl BranchWitness {
    pub fn leading_exponent(&self) -> &BigRational {
        &self.leading.0
    }

    pub fn leading_coefficient(&self) -> String {
        self.field.render(&self.leading.1)
    }

    pub fn leading_approx(&self) -> Option<Complex64> {
        self.field.approx(&self.leading.1)
    }

    /// Minimal polynomial of the leading coefficient over ℚ, in `c`.
    pub fn leading_minpoly(&self) -> String {
        upoly::render(&QField, &minimal_polynomial(&self.field, &self.leading.1), "c")
    }

    pub fn render_y(&self, var: &str) -> String {
        self.y.render(&self.field, var)
    }

    pub fn residual_passes(&self) -> bool {
        self.residual.passes(&self.target)
    }
}

/// Minimal polynomial over ℚ of an element of a number field.
pub fn minimal_polynomial(field: &NumberField, a: &[BigRational]) -> Poly<QField> {
    let q = QField;
    let charpoly = field.norm_poly(&vec![field.neg(&a.to_vec()), field.one()]);
    for (g, _) in q.factor(&charpoly) {
        let ge: Vec<Vec<BigRational>> = g.iter().map(|c| field.embed(c)).collect();
        if field.is_zero(&upoly::eval(field, &ge, &a.to_vec())) {
            return g;
        }
    }
    charpoly
}

#[derive(Clone, Debug)]
pub struct WitnessOptions {
    pub target: BigRational,
    /// Selects among the roots of `c^m = G(0, 0)` in the coefficient field.
    pub c_choice: usize,
    /// Which pole, in the order reported by the pole search.
    pub pole: usize,
    /// Initial truncation of the place expansion.
    pub truncation: usize,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions { target: BigRational::from_integer(DEFAULT_TARGET.into()), c_choice: 0, pole: 0, truncation: 8 }
    }
}

/// Roots of `c^m = g00` in the smallest field reached by adjoining one root:
/// returns the field, the map into it and the roots it contains, sorted
/// numerically.
fn roots_of_unit_power(
    e0: &NumberField,
    m: u32,
    g00: &[BigRational],
) -> Result<(Option<Extension<QField>>, Vec<Vec<BigRational>>), AlgebraError> {
    let mut poly = vec![e0.zero(); m as usize + 1];
    poly[0] = e0.neg(&g00.to_vec());
    poly[m as usize] = e0.one();
    let factors = e0.factor(&poly)?;
    let psi = factors.iter().map(|(g, _)| g).min_by_key(|g| g.len()).unwrap().clone();
    let (ext, field) = if psi.len() == 2 {
        (None, e0.clone())
    } else {
        let ext = e0.extend(&psi)?;
        let f = ext.field.clone();
        (Some(ext), f)
    };
    let poly_e: Poly<NumberField> = match &ext {
        Some(x) => poly.iter().map(|c| x.map(e0, c)).collect(),
        None => poly,
    };
    let mut roots: Vec<Vec<BigRational>> = field
        .factor(&poly_e)?
        .into_iter()
        .filter(|(g, _)| g.len() == 2)
        .map(|(g, _)| field.neg(&g[0]))
        .collect();
    roots.sort_by(|a, b| {
        let (x, y) = (field.approx(a).unwrap_or_default(), field.approx(b).unwrap_or_default());
        x.re.partial_cmp(&y.re).unwrap().then(x.im.partial_cmp(&y.im).unwrap())
    });
    Ok((ext, roots))
}

/// One attempt with `k` coefficients of `h`.
fn witness_from_series<B: BaseField>(
    eq: &CurveEquation,
    place_t: &Laurent<AlgField<B>>,
    local: &Laurent<AlgField<B>>,
    l: &AlgField<B>,
    m: u32,
    z1: &BigRational,
    k: usize,
    opts: &WitnessOptions,
) -> Result<BranchWitness, AlgebraError> {
    let mi = m as i64;
    // g(u) = D(u^m) = m u^{m-1} D(u)
    let g = local.shift(mi - 1).scale(l, &l.from_int(mi));
    if g.prec() < k as i64 {
        return Err(AlgebraError::TruncationTooSmall { needed: format!("u^{}", k), available: format!("u^{}", g.prec()) });
    }
    let prec_z = k as i64 / mi + 4;
    let sp = Specializer::new(l, z1, prec_z)?;
    let mut gz: Vec<Laurent<NumberField>> = (0..k as i64).map(|j| sp.map(&g.coeff(l, j))).collect::<Result<_, _>>()?;
    let g00 = gz[0].coeff(&sp.field, 0);
    if sp.field.is_zero(&g00) {
        return Err(bad(z1, "D(u^m) vanishes at the base point"));
    }
    let (ext, roots) = roots_of_unit_power(&sp.field, m, &g00)?;
    let mut field = sp.field.clone();
    let mut tz: Vec<Laurent<NumberField>> = place_t.terms(l).map(|(_, c)| sp.map(c)).collect::<Result<_, _>>()?;
    let t_exps: Vec<i64> = place_t.terms(l).map(|(e, _)| e).collect();
    if let Some(x) = &ext {
        let from = field.clone();
        gz = gz.iter().map(|s| s.map_field(&x.field, |c| x.map(&from, c))).collect();
        tz = tz.iter().map(|s| s.map_field(&x.field, |c| x.map(&from, c))).collect();
        field = x.field.clone();
    }
    let f = &field;
    let c1 = roots[opts.c_choice % roots.len()].clone();
    let g_tau: Vec<Laurent<NumberField>> =
        gz.iter().map(|s| s.subs_monomial(f, &f.one(), mi)).collect::<Result<_, _>>()?;
    let h = lemma_series(f, m, &g_tau, &c1, k)?;
    // y = Σ t_e(τ^m) h^e
    let mut y = Laurent::zero(EXACT);
    for (e, c) in t_exps.iter().zip(&tz) {
        let term = c.subs_monomial(f, &f.one(), mi)?.mul(f, &h.pow(f, *e)?);
        y = y.add(f, &term);
    }
    let y = PuiseuxSeries::new(f, m, y);
    let hs = PuiseuxSeries::new(f, m, h);
    let residual = verify_solution(f, eq, z1, &y)?;
    let leading = y
        .terms(f)
        .find(|(e, _)| !e.is_integer())
        .map(|(e, c)| (e, c.clone()))
        .ok_or_else(|| bad(z1, "the computed solution is unbranched to the computed order"))?;
    Ok(BranchWitness {
        base_point: z1.clone(),
        m,
        field: field.clone(),
        c1,
        h: hs,
        y,
        residual,
        target: opts.target.clone(),
        leading,
    })
}

/// A witness at the given pole, raising the number of coefficients until the
/// residual target is met.
pub fn branched_witness_in<B: BaseField>(
    eq: &CurveEquation,
    curve: &Curve<B>,
    report: &PoleReport<B>,
    z1: &BigRational,
    opts: &WitnessOptions,
) -> Result<BranchWitness, AlgebraError> {
    let m = report.pole_order + 1;
    let place = report.place();
    let target_tau = (opts.target.clone() * BigRational::from_integer(m.into())).ceil().to_integer();
    let target_tau: i64 = target_tau.try_into().unwrap_or(64);
    let mut k = (target_tau + 2 * m as i64 + 2) as usize;
    let mut local = report.analysis.local.clone();
    let mut pl = place.clone();
    let mut last = None;
    for _ in 0..4 {
        let g_prec = local.prec().saturating_add(m as i64 - 1);
        if g_prec < k as i64 {
            let n = report.analysis.truncation + (k as i64 - g_prec) as usize + 2;
            pl = places_above(curve, &place.center, n)?.swap_remove(report.analysis.index);
            local = local_vector_field(&pl)?;
        }
        let w = witness_from_series(eq, &pl.t, &local, &pl.field, m, z1, k, opts)?;
        if w.residual_passes() {
            return Ok(w);
        }
        last = Some(w);
        k *= 2;
    }
    let w = last.unwrap();
    Err(AlgebraError::TruncationTooSmall {
        needed: format!("residual order {}", render_rational(&opts.target)),
        available: w.residual.render(),
    })
}

/// Witness for the `opts.pole`-th pole of `D` at base point `z1`.
pub fn branched_witness(eq: &CurveEquation, z1: &BigRational, opts: &WitnessOptions) -> Result<BranchWitness, AlgebraError> {
    crate::with_base!(eq, |b| {
        let curve = Curve::new(b, eq.f())?;
        let poles = find_poles_in(&curve, opts.truncation.max(crate::puiseux::default_truncation(eq)))?;
        let report = poles
            .get(opts.pole)
            .ok_or_else(|| AlgebraError::InvalidArgument(format!("no pole with index {}", opts.pole)))?;
        branched_witness_in(eq, &curve, report, z1, opts)
    })
}

/// `y` evaluated into a number field element series, for tests and
/// callers that build candidate solutions by hand: `Σ c_i (z - z₁)^{e_i}`.
pub fn series_from_terms(
    field: &NumberField,
    terms: &[(BigRational, Vec<BigRational>)],
    prec: Option<BigRational>,
) -> PuiseuxSeries<NumberField> {
    use num_integer::Integer;
    let mut ram = BigRational::one().denom().clone();
    for (e, _) in terms {
        ram = ram.lcm(e.denom());
    }
    if let Some(p) = &prec {
        ram = ram.lcm(p.denom());
    }
    let r: i64 = ram.try_into().unwrap();
    let scale = |e: &BigRational| -> i64 { (e * BigRational::from_integer(r.into())).to_integer().try_into().unwrap() };
    let mut ser = Laurent::zero(prec.as_ref().map_or(EXACT, |p| scale(p)));
    for (e, c) in terms {
        ser = ser.add(field, &Laurent::monomial(field, c.clone(), scale(e), EXACT));
    }
    PuiseuxSeries::new(field, r as u32, ser)
}
