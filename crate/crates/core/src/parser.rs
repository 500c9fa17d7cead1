//! ODE text to curve equation: `f(y', y, z) = 0` becomes `f(S, T)` over ℚ(z)
//! with `S ↦ y'`, `T ↦ y`.
//!
//! The accepted grammar is documented in `docs/grammar.md`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::factor::{factor_bivariate, BiPoly};
use crate::algebra::field::rational_nth_root;
use crate::algebra::multipoly::Mono;
use crate::algebra::{upoly, MultiPoly, QField, QPoly, Var};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EquationError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("not polynomial in y and y' at line {line}, column {col}: {msg}")]
    NonPolynomial { line: usize, col: usize, msg: String },
    #[error("y' = 0 is the constant equation; nothing to analyze")]
    ConstantEquation,
    #[error("the equation does not involve {var}")]
    MissingVariable { var: String },
    #[error("the equation is reducible: {}", factors.join(" * "))]
    Reducible { factors: Vec<String> },
    #[error("irreducibility could not be decided")]
    IrreducibilityUnknown,
}

impl EquationError {
    pub fn code(&self) -> &'static str {
        match self {
            EquationError::Syntax { .. } => "syntax-error",
            EquationError::NonPolynomial { .. } => "non-polynomial",
            EquationError::ConstantEquation => "constant-equation",
            EquationError::MissingVariable { .. } => "missing-variable",
            EquationError::Reducible { .. } => "reducible",
            EquationError::IrreducibilityUnknown => "irreducibility-unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Irreducible over the algebraic closure of the base field.
    Proven,
    /// Irreducible over the base field; absolute irreducibility not certified.
    Heuristic,
}

impl Certificate {
    pub fn label(self) -> &'static str {
        match self {
            Certificate::Proven => "proven-irreducible",
            Certificate::Heuristic => "heuristically-irreducible",
        }
    }
}

/// `f(S, T)` with coefficients in ℚ[z], primitive over ℚ[z], with integer
/// coefficients and a positive leading coefficient in `S`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveEquation {
    f: MultiPoly,
    autonomous: bool,
    deg_s: u32,
    deg_t: u32,
    certificate: Option<Certificate>,
    warnings: Vec<String>,
}

impl CurveEquation {
    /// Canonical form of `f`: the `z`-content is removed, coefficients made
    /// coprime integers and the leading coefficient of the top power of `S`
    /// positive.
    pub fn new(f: &MultiPoly) -> Self {
        let f = normalize(f);
        CurveEquation {
            autonomous: !f.has_var(Var::Z),
            deg_s: f.degree(Var::S),
            deg_t: f.degree(Var::T),
            f,
            certificate: None,
            warnings: Vec::new(),
        }
    }

    pub fn f(&self) -> &MultiPoly {
        &self.f
    }

    pub fn autonomous(&self) -> bool {
        self.autonomous
    }

    pub fn deg_s(&self) -> u32 {
        self.deg_s
    }

    pub fn deg_t(&self) -> u32 {
        self.deg_t
    }

    pub fn certificate(&self) -> Option<Certificate> {
        self.certificate
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// The equation as ODE text, `... = 0`, re-parseable to the same curve.
    pub fn render_ode(&self) -> String {
        format!("{} = 0", self.f.render_with(["y'", "y", "z"]))
    }
}

impl fmt::Display for CurveEquation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.f)
    }
}

fn normalize(f: &MultiPoly) -> MultiPoly {
    if f.is_zero() {
        return f.clone();
    }
    let c = st_content(f);
    let f = if c.is_constant() { f.clone() } else { f.div_exact(&c).expect("content divides") };
    let f = f.primitive();
    // Sign fixed by the coefficient of the highest power of S.
    let lead = f.leading_coeff_in(Var::S);
    if lead.leading().is_some_and(|(_, c)| c.is_negative()) {
        f.neg()
    } else {
        f
    }
}

/// gcd over ℚ[z] of the coefficients of `f` as a polynomial in `S`, `T`.
fn st_content(f: &MultiPoly) -> MultiPoly {
    let mut g = MultiPoly::zero();
    for cs in f.coeffs_in(Var::S) {
        for c in cs.coeffs_in(Var::T) {
            if c.is_zero() {
                continue;
            }
            g = g.gcd(&c);
            if g.is_constant() {
                return MultiPoly::one();
            }
        }
    }
    g
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Prime,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eq,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, EquationError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' | '·' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '=' => Some(Tok::Eq),
            '\'' | '′' => Some(Tok::Prime),
            _ => None,
        };
        if let Some(t) = simple {
            out.push(Token { tok: t, line: l0, col: c0 });
            i += 1;
            col += 1;
            continue;
        }
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            let v = parse_decimal(&s).ok_or_else(|| EquationError::Syntax {
                line: l0,
                col: c0,
                msg: format!("malformed number '{}'", s),
            })?;
            out.push(Token { tok: Tok::Num(v), line: l0, col: c0 });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: l0, col: c0 });
            continue;
        }
        return Err(EquationError::Syntax { line: l0, col: c0, msg: format!("unexpected character '{}'", c) });
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let mut parts = s.split('.');
    let int_part = parts.next()?;
    let frac_part = parts.next().unwrap_or("");
    if parts.next().is_some() {
        return None;
    }
    let digits = format!("{}{}", int_part, frac_part);
    let n: BigInt = digits.parse().ok()?;
    let d = num_traits::pow(BigInt::from(10), frac_part.len());
    Some(BigRational::new(n, d))
}

// ---------------------------------------------------------------------------
// Parser

/// A value `num / den` with `den` a nonzero polynomial in `z`.
#[derive(Clone, Debug)]
struct Val {
    num: MultiPoly,
    den: QPoly,
}

impl Val {
    fn poly(p: MultiPoly) -> Self {
        Val { num: p, den: vec![BigRational::one()] }
    }

    fn has_y(&self) -> bool {
        self.num.has_var(Var::S) || self.num.has_var(Var::T)
    }

    fn den_poly(&self) -> MultiPoly {
        MultiPoly::from_z_poly(&self.den)
    }

    fn add(&self, o: &Val) -> Val {
        if self.den == o.den {
            return Val { num: self.num.add(&o.num), den: self.den.clone() };
        }
        let q = QField;
        Val {
            num: self.num.mul(&o.den_poly()).add(&o.num.mul(&self.den_poly())),
            den: upoly::mul(&q, &self.den, &o.den),
        }
        .reduce()
    }

    fn neg(&self) -> Val {
        Val { num: self.num.neg(), den: self.den.clone() }
    }

    fn mul(&self, o: &Val) -> Val {
        Val { num: self.num.mul(&o.num), den: upoly::mul(&QField, &self.den, &o.den) }.reduce()
    }

    /// Inverse of a `y`-free nonzero value.
    fn inv(&self) -> Option<Val> {
        let n = self.num.z_poly();
        if n.is_empty() {
            return None;
        }
        Some(Val { num: MultiPoly::from_z_poly(&self.den), den: n }.reduce())
    }

    fn reduce(self) -> Val {
        let q = QField;
        if self.den.len() == 1 {
            let c = self.den[0].clone();
            return Val { num: self.num.scale(&(BigRational::one() / c)), den: vec![BigRational::one()] };
        }
        let g = st_content(&self.num).z_poly();
        let g = upoly::gcd(&q, &g, &self.den);
        if g.len() <= 1 {
            return self;
        }
        let gp = MultiPoly::from_z_poly(&g);
        Val { num: self.num.div_exact(&gp).unwrap(), den: upoly::div_exact(&q, &self.den, &g).unwrap() }.reduce()
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, t: &Token, msg: impl Into<String>) -> EquationError {
        EquationError::Syntax { line: t.line, col: t.col, msg: msg.into() }
    }

    fn nonpoly(t: &Token, msg: impl Into<String>) -> EquationError {
        EquationError::NonPolynomial { line: t.line, col: t.col, msg: msg.into() }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token, EquationError> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else {
            Err(self.syntax(&t, format!("expected {}, found {}", what, describe(&t.tok))))
        }
    }

    fn equation(&mut self) -> Result<(Val, Val), EquationError> {
        let lhs = self.expr()?;
        self.expect(Tok::Eq, "'='")?;
        let rhs = self.expr()?;
        let t = self.peek().clone();
        if t.tok != Tok::End {
            return Err(self.syntax(&t, format!("unexpected {}", describe(&t.tok))));
        }
        Ok((lhs, rhs))
    }

    fn expr(&mut self) -> Result<Val, EquationError> {
        let mut acc = match self.peek().tok {
            Tok::Minus => {
                self.next();
                self.term()?.neg()
            }
            Tok::Plus => {
                self.next();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.next();
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek().tok, Tok::Num(_) | Tok::Ident(_) | Tok::LParen)
    }

    fn term(&mut self) -> Result<Val, EquationError> {
        let mut acc = self.power()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    acc = acc.mul(&self.power()?);
                }
                Tok::Slash => {
                    let op = self.next();
                    let d = self.power()?;
                    if d.has_y() {
                        return Err(Self::nonpoly(&op, "division by an expression in y or y'"));
                    }
                    let inv = d.inv().ok_or_else(|| self.syntax(&op, "division by zero"))?;
                    acc = acc.mul(&inv);
                }
                _ if self.starts_atom() => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Val, EquationError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        let op = self.next();
        let e = self.exponent()?;
        raise(&base, &e, &op)
    }

    fn exponent(&mut self) -> Result<BigRational, EquationError> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Num(v) => {
                if !v.is_integer() {
                    return Err(self.syntax(&t, "write fractional exponents in parentheses"));
                }
                Ok(v)
            }
            Tok::Minus => {
                let n = self.next();
                match n.tok.clone() {
                    Tok::Num(v) if v.is_integer() => Ok(-v),
                    _ => Err(self.syntax(&n, "expected an integer exponent")),
                }
            }
            Tok::LParen => {
                let neg = if self.peek().tok == Tok::Minus {
                    self.next();
                    true
                } else {
                    false
                };
                let n = self.next();
                let mut v = match n.tok {
                    Tok::Num(v) if v.is_integer() => v,
                    _ => return Err(self.syntax(&n, "expected an integer")),
                };
                if self.peek().tok == Tok::Slash {
                    self.next();
                    let d = self.next();
                    match d.tok {
                        Tok::Num(dv) if dv.is_integer() && !dv.is_zero() => v /= dv,
                        _ => return Err(self.syntax(&d, "expected a nonzero integer denominator")),
                    }
                }
                self.expect(Tok::RParen, "')'")?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.syntax(&t, format!("expected an exponent, found {}", describe(&t.tok)))),
        }
    }

    fn atom(&mut self) -> Result<Val, EquationError> {
        let t = self.next();
        match &t.tok {
            Tok::Num(v) => Ok(Val::poly(MultiPoly::constant(v.clone()))),
            Tok::Ident(name) => match name.as_str() {
                "y" => {
                    if self.peek().tok == Tok::Prime {
                        self.next();
                        if self.peek().tok == Tok::Prime {
                            let p = self.peek().clone();
                            return Err(self.syntax(&p, "only first-order equations are supported"));
                        }
                        Ok(Val::poly(MultiPoly::var(Var::S)))
                    } else {
                        Ok(Val::poly(MultiPoly::var(Var::T)))
                    }
                }
                "z" => Ok(Val::poly(MultiPoly::var(Var::Z))),
                other => Err(self.syntax(&t, format!("unknown identifier '{}'", other))),
            },
            Tok::LParen => {
                let v = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(v)
            }
            other => Err(self.syntax(&t, format!("expected a term, found {}", describe(other)))),
        }
    }
}

fn raise(base: &Val, e: &BigRational, op: &Token) -> Result<Val, EquationError> {
    if !e.is_integer() {
        if base.has_y() {
            return Err(Parser::nonpoly(op, "fractional power of an expression in y or y'"));
        }
        let c = base.num.constant_value().filter(|_| base.den.len() == 1);
        let root = c.and_then(|c| {
            let r = rational_nth_root(&c, e.denom().to_u32()?)?;
            Some(r)
        });
        return match root {
            Some(r) => raise(&Val::poly(MultiPoly::constant(r)), &BigRational::from_integer(e.numer().clone()), op),
            None => Err(Parser::nonpoly(op, "fractional power of a non-square coefficient")),
        };
    }
    let n = e.to_integer();
    let k = n.abs().to_u32().ok_or_else(|| Parser::nonpoly(op, "exponent too large"))?;
    if k > 64 {
        return Err(Parser::nonpoly(op, "exponent too large"));
    }
    let mut acc = Val::poly(MultiPoly::one());
    for _ in 0..k {
        acc = acc.mul(base);
    }
    if n.is_negative() {
        if base.has_y() {
            return Err(Parser::nonpoly(op, "negative power of an expression in y or y'"));
        }
        acc = acc.inv().ok_or_else(|| EquationError::Syntax { line: op.line, col: op.col, msg: "division by zero".into() })?;
    }
    Ok(acc)
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {}", v),
        Tok::Ident(s) => format!("'{}'", s),
        Tok::Prime => "'''".into(),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Eq => "'='".into(),
        Tok::End => "end of input".into(),
    }
}

/// Parse `lhs = rhs` into the canonical curve `lhs - rhs`.
pub fn parse_equation(text: &str) -> Result<CurveEquation, EquationError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let (lhs, rhs) = p.equation()?;
    let diff = lhs.add(&rhs.neg());
    Ok(CurveEquation::new(&diff.num))
}

// ---------------------------------------------------------------------------
// Validation

/// Check the standing assumptions: both `S` and `T` occur and `f` is
/// irreducible. Attaches a certificate level.
pub fn validate(eq: &CurveEquation) -> Result<CurveEquation, EquationError> {
    let f = eq.f();
    if *f == MultiPoly::var(Var::S) {
        return Err(EquationError::ConstantEquation);
    }
    if !f.has_var(Var::S) {
        return Err(EquationError::MissingVariable { var: "y'".into() });
    }
    if !f.has_var(Var::T) {
        return Err(EquationError::MissingVariable { var: "y".into() });
    }
    let mut out = eq.clone();
    out.warnings.clear();
    if eq.deg_s() == 1 || eq.deg_t() == 1 {
        // Linear in one variable with coprime coefficients (checked below).
        if let Some(factors) = factor_curve(f)? {
            return Err(reducible(&factors));
        }
        out.certificate = Some(Certificate::Proven);
        return Ok(out);
    }
    if let Some(factors) = factor_curve(f)? {
        return Err(reducible(&factors));
    }
    if crate::puiseux::has_rational_place(&out) {
        out.certificate = Some(Certificate::Proven);
    } else {
        out.certificate = Some(Certificate::Heuristic);
        out.warnings.push(
            "irreducible over the base field; no rational place found, so absolute irreducibility is not certified".into(),
        );
    }
    Ok(out)
}

fn reducible(factors: &[MultiPoly]) -> EquationError {
    EquationError::Reducible { factors: factors.iter().map(|g| format!("({})", g)).collect() }
}

/// A nontrivial factorization of `f` over ℚ(z), or `None` when `f` is
/// irreducible.
pub fn factor_curve(f: &MultiPoly) -> Result<Option<Vec<MultiPoly>>, EquationError> {
    for v in [Var::S, Var::T] {
        let c = f.content_in(v);
        if !c.is_constant() {
            return Ok(Some(vec![c.clone(), f.div_exact(&c).unwrap().primitive()]));
        }
    }
    if f.deg_total_st() <= 1 {
        return Ok(None);
    }
    if !f.has_var(Var::Z) {
        let bi = st_to_bi(f, |m| m.0[1] as usize);
        return Ok(collect_factors(factor_bivariate(&bi), |g| bi_to_st(g, |k| [0, k as u32, 0])));
    }
    // An irreducible specialization with the same bidegree proves
    // irreducibility.
    let (ds, dt, tot) = (f.degree(Var::S), f.degree(Var::T), f.deg_total_st());
    for z0 in [2i64, 3, 5, 7, -1, -2, 11, 13] {
        let z0 = BigRational::from_integer(BigInt::from(z0));
        let g = f.eval_var(Var::Z, &z0);
        if g.degree(Var::S) != ds || g.degree(Var::T) != dt || g.deg_total_st() != tot {
            continue;
        }
        let bi = st_to_bi(&g, |m| m.0[1] as usize);
        let facs = factor_bivariate(&bi);
        if facs.len() == 1 && facs[0].1 == 1 {
            return Ok(None);
        }
    }
    // Kronecker substitution T = z^b, then recombine factors of the image.
    let b = f.degree(Var::Z) as usize + 1;
    let bi = st_to_bi(f, |m| m.0[1] as usize * b + m.0[2] as usize);
    let facs = factor_bivariate(&bi);
    if facs.len() == 1 && facs[0].1 == 1 {
        return Ok(None);
    }
    let mut pieces: Vec<BiPoly> = Vec::new();
    for (g, m) in &facs {
        for _ in 0..*m {
            pieces.push(g.clone());
        }
    }
    if pieces.len() > 12 {
        return Err(EquationError::IrreducibilityUnknown);
    }
    let unkron = |g: &BiPoly| bi_to_st(g, |k| [0, (k / b) as u32, (k % b) as u32]);
    let n = pieces.len();
    for mask in 1u32..(1 << n) - 1 {
        if mask.count_ones() as usize > n / 2 {
            continue;
        }
        let mut prod = MultiPoly::one();
        for (i, p) in pieces.iter().enumerate() {
            if mask & (1 << i) != 0 {
                prod = prod.mul(&unkron(p));
            }
        }
        if prod.is_constant() {
            continue;
        }
        if let Some(q) = f.div_exact(&prod) {
            if !q.is_constant() && q.mul(&prod) == *f {
                return Ok(Some(vec![prod.primitive(), q.primitive()]));
            }
        }
    }
    Err(EquationError::IrreducibilityUnknown)
}

fn collect_factors(
    facs: Vec<(BiPoly, usize)>,
    back: impl Fn(&BiPoly) -> MultiPoly,
) -> Option<Vec<MultiPoly>> {
    if facs.len() == 1 && facs[0].1 == 1 {
        return None;
    }
    let mut out = Vec::new();
    for (g, m) in facs {
        let p = back(&g).primitive();
        for _ in 0..m {
            out.push(p.clone());
        }
    }
    Some(out)
}

/// `f` as a polynomial in `S` whose coefficients are univariate in a second
/// variable, with the exponent of that variable given by `key`.
fn st_to_bi(f: &MultiPoly, key: impl Fn(&Mono) -> usize) -> BiPoly {
    let mut out: BiPoly = vec![Vec::new(); f.degree(Var::S) as usize + 1];
    for (m, c) in f.terms() {
        let row = &mut out[m.0[0] as usize];
        let k = key(m);
        if row.len() <= k {
            row.resize(k + 1, BigRational::zero());
        }
        row[k] += c;
    }
    out.into_iter().map(|r| upoly::trim(&QField, r)).collect()
}

fn bi_to_st(g: &BiPoly, exps: impl Fn(usize) -> [u32; 3]) -> MultiPoly {
    let mut terms = Vec::new();
    for (i, row) in g.iter().enumerate() {
        for (k, c) in row.iter().enumerate() {
            let mut e = exps(k);
            e[0] = i as u32;
            terms.push((Mono(e), c.clone()));
        }
    }
    MultiPoly::from_terms(terms)
}

trait StDegree {
    fn deg_total_st(&self) -> u32;
}

impl StDegree for MultiPoly {
    fn deg_total_st(&self) -> u32 {
        self.terms().map(|(m, _)| m.0[0] + m.0[1]).max().unwrap_or(0)
    }
}
