//! Polynomial input for curve germs.
//!
//! The resolver consumes Puiseux data, but the natural way to hand it a
//! curve is an equation. This module reads a polynomial in `x` and `y`,
//! splits it into the factors written in the source, and turns every factor
//! into branches. Only shapes whose expansions stay inside the exact
//! coefficient class (rational magnitude times a root of unity) are
//! accepted: monomials, binomials `c1*x^r + c2*y^s`, and a power of such a
//! binomial perturbed by a single monomial. Anything else is reported as an
//! unsupported factor, never approximated.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::arith::{gcd_i, pow_qq, qq, qz, rational_nth_root, Coeff, QQ};
use crate::curve::{
    det_equivalent, divisors, series_cmp, Axis, CurveGerm, PuiseuxBranch, Term, Terms,
};
use crate::error::{Error, Result};
use crate::quotient::CyclicType;

/// Total degree cap for expanded input polynomials.
pub const MAX_DEGREE: u32 = 512;
/// Term-count cap for expanded input polynomials.
pub const MAX_TERMS: usize = 4096;

/// Sparse polynomial in `x` and `y` with rational coefficients, keyed by
/// exponent pair. Arithmetic enforces the degree and term caps so malicious
/// input cannot blow up the expansion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<(u32, u32), QQ>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: QQ) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert((0, 0), c);
        }
        p
    }

    pub fn monomial(c: QQ, x: u32, y: u32) -> Result<Poly> {
        check_degree(x, y)?;
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert((x, y), c);
        }
        Ok(p)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `x^i y^j`, zero when the monomial is absent.
    pub fn coeff(&self, i: u32, j: u32) -> QQ {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(QQ::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &QQ)> {
        self.terms.iter()
    }

    /// Largest total degree among the terms; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Poly {
        let terms = self.terms.iter().map(|(k, v)| (*k, -v)).collect();
        Poly { terms }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        let mut out = self.clone();
        for (&key, v) in &other.terms {
            let sum = out.coeff(key.0, key.1) + v;
            if sum.is_zero() {
                out.terms.remove(&key);
            } else {
                out.terms.insert(key, sum);
            }
        }
        check_size(&out)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        let mut out = Poly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                let (i, j) = (i1 + i2, j1 + j2);
                check_degree(i, j)?;
                let sum = out.coeff(i, j) + c1 * c2;
                if sum.is_zero() {
                    out.terms.remove(&(i, j));
                } else {
                    out.terms.insert((i, j), sum);
                }
            }
        }
        check_size(&out)?;
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Poly> {
        if !self.is_zero() && u64::from(self.degree()) * u64::from(k) > u64::from(MAX_DEGREE) {
            return Err(Error::ParseError(format!(
                "polynomial degree exceeds {MAX_DEGREE}"
            )));
        }
        let mut out = Poly::constant(qz(1));
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }
}

fn check_degree(i: u32, j: u32) -> Result<()> {
    if i + j > MAX_DEGREE {
        return Err(Error::ParseError(format!(
            "polynomial degree exceeds {MAX_DEGREE}"
        )));
    }
    Ok(())
}

fn check_size(p: &Poly) -> Result<()> {
    if p.len() > MAX_TERMS {
        return Err(Error::ParseError(format!(
            "polynomial has more than {MAX_TERMS} terms"
        )));
    }
    Ok(())
}

/// One factor of the input polynomial together with the branches it
/// contributes. Scalar factors are dropped before this point.
#[derive(Clone, Debug)]
pub struct CurveFactor {
    /// Source text of the factor, echoed in diagnostics.
    pub text: String,
    /// Fully expanded polynomial.
    pub poly: Poly,
    /// Branches through the origin, one conjugacy representative each.
    pub branches: Vec<PuiseuxBranch>,
}

/// Parse a polynomial and classify each of its written factors.
///
/// The factor split follows the source: `(x^3-y^2)*x` has two factors while
/// the expanded `x^4-x*y^2` has one (with the same branches). A sum at the
/// top level is a single factor.
pub fn parse_curve(src: &str) -> Result<Vec<CurveFactor>> {
    let toks = tokenize(src)?;
    let mut parser = Parser { src, toks, pos: 0 };
    let raw = parser.parse_top()?;
    let mut factors = Vec::new();
    for (text, poly) in raw {
        if poly.is_zero() {
            return Err(Error::DegenerateInput(format!(
                "factor '{text}' is identically zero"
            )));
        }
        if poly.degree() == 0 {
            continue;
        }
        let branches = classify_factor(&text, &poly)?;
        factors.push(CurveFactor {
            text,
            poly,
            branches,
        });
    }
    Ok(factors)
}

/// Parse a polynomial into a curve germ on the given ambient type, branches
/// listed in factor order.
pub fn parse_binomial_curve(src: &str, ambient: CyclicType) -> Result<CurveGerm> {
    let factors = parse_curve(src)?;
    let branches: Vec<PuiseuxBranch> = factors.into_iter().flat_map(|f| f.branches).collect();
    if branches.is_empty() {
        return Err(Error::DegenerateInput(
            "the curve has no branches through the origin".into(),
        ));
    }
    Ok(CurveGerm { ambient, branches })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Int(i64),
    X,
    Y,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            'x' | 'X' => Tok::X,
            'y' | 'Y' => Tok::Y,
            '0'..='9' => {
                let mut v: i64 = 0;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    v = v
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(i64::from(bytes[i] - b'0')))
                        .ok_or_else(|| Error::ParseError("number literal is too large".into()))?;
                    i += 1;
                }
                out.push((Tok::Int(v), start, i));
                continue;
            }
            other => {
                return Err(Error::ParseError(format!(
                    "unexpected character '{other}' at position {i}"
                )))
            }
        };
        i += 1;
        out.push((tok, start, i));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn starts_primary(t: Tok) -> bool {
    matches!(t, Tok::LParen | Tok::X | Tok::Y | Tok::Int(_))
}

impl Parser<'_> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|&(t, _, _)| t)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn fail(&self, what: &str) -> Error {
        match self.toks.get(self.pos) {
            Some(&(_, s, e)) => Error::ParseError(format!(
                "expected {what} at '{}' (position {s})",
                &self.src[s..e]
            )),
            None => Error::ParseError(format!("expected {what} at end of input")),
        }
    }

    /// Top level: a product is kept factor by factor, a sum collapses into
    /// one factor spanning the whole source.
    fn parse_top(&mut self) -> Result<Vec<(String, Poly)>> {
        if self.toks.is_empty() {
            return Err(Error::ParseError("empty polynomial".into()));
        }
        if self.peek() == Some(Tok::Minus) {
            let poly = self.parse_expr()?;
            self.expect_end()?;
            return Ok(vec![(self.src.trim().to_string(), poly)]);
        }
        let mut factors = Vec::new();
        loop {
            let from = self.toks[self.pos].1;
            let poly = self.parse_factor()?;
            let to = self.toks[self.pos - 1].2;
            factors.push((self.src[from..to].trim().to_string(), poly));
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                }
                Some(t) if starts_primary(t) => {}
                Some(Tok::Plus) | Some(Tok::Minus) => {
                    // The input is a sum after all: fold what we have and
                    // keep accumulating terms into a single factor.
                    let mut total = Poly::constant(qz(1));
                    for (_, p) in &factors {
                        total = total.mul(p)?;
                    }
                    while let Some(op) = self.peek() {
                        let negate = match op {
                            Tok::Plus => false,
                            Tok::Minus => true,
                            _ => return Err(self.fail("'+' or '-'")),
                        };
                        self.pos += 1;
                        let term = self.parse_term()?;
                        total = if negate {
                            total.sub(&term)?
                        } else {
                            total.add(&term)?
                        };
                    }
                    return Ok(vec![(self.src.trim().to_string(), total)]);
                }
                Some(_) => return Err(self.fail("'*', '+', '-' or end of input")),
                None => return Ok(factors),
            }
        }
    }

    fn expect_end(&self) -> Result<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.fail("end of input"))
        }
    }

    fn parse_expr(&mut self) -> Result<Poly> {
        let mut total = if self.peek() == Some(Tok::Minus) {
            self.pos += 1;
            self.parse_term()?.neg()
        } else {
            self.parse_term()?
        };
        while let Some(op) = self.peek() {
            let negate = match op {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.pos += 1;
            let term = self.parse_term()?;
            total = if negate {
                total.sub(&term)?
            } else {
                total.add(&term)?
            };
        }
        Ok(total)
    }

    fn parse_term(&mut self) -> Result<Poly> {
        let mut total = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    total = total.mul(&self.parse_factor()?)?;
                }
                Some(t) if starts_primary(t) => {
                    total = total.mul(&self.parse_factor()?)?;
                }
                _ => return Ok(total),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Poly> {
        let base = self.parse_primary()?;
        if self.peek() != Some(Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.bump() {
            Some(Tok::Int(k)) if k >= 0 && k <= i64::from(MAX_DEGREE) => base.pow(k as u32),
            Some(Tok::Int(_)) => Err(Error::ParseError(format!("exponent exceeds {MAX_DEGREE}"))),
            _ => {
                self.pos -= 1;
                Err(self.fail("a non-negative integer exponent"))
            }
        }
    }

    fn parse_primary(&mut self) -> Result<Poly> {
        match self.bump() {
            Some(Tok::LParen) => {
                let inner = self.parse_expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => {
                        self.pos -= 1;
                        Err(self.fail("')'"))
                    }
                }
            }
            Some(Tok::X) => Poly::monomial(qz(1), 1, 0),
            Some(Tok::Y) => Poly::monomial(qz(1), 0, 1),
            Some(Tok::Int(n)) => {
                if self.peek() == Some(Tok::Slash) {
                    self.pos += 1;
                    match self.bump() {
                        Some(Tok::Int(d)) if d != 0 => Ok(Poly::constant(qq(n, d))),
                        Some(Tok::Int(_)) => Err(Error::ParseError("zero denominator".into())),
                        _ => {
                            self.pos -= 1;
                            Err(self.fail("a denominator"))
                        }
                    }
                } else {
                    Ok(Poly::constant(qz(n)))
                }
            }
            _ => {
                self.pos -= 1;
                Err(self.fail("'(', 'x', 'y' or a number"))
            }
        }
    }
}

/// Branches of a single non-scalar factor.
fn classify_factor(text: &str, poly: &Poly) -> Result<Vec<PuiseuxBranch>> {
    let ax = poly.terms().map(|(&(i, _), _)| i).min().unwrap_or(0);
    let ay = poly.terms().map(|(&(_, j), _)| j).min().unwrap_or(0);
    if ax > 1 || ay > 1 {
        return Err(Error::UnsupportedFactorShape(format!(
            "factor '{text}' has a repeated axis component"
        )));
    }

    let mut branches = Vec::new();
    if ax == 1 {
        branches.push(PuiseuxBranch::axis(Axis::X));
    }
    if ay == 1 {
        branches.push(PuiseuxBranch::axis(Axis::Y));
    }

    // Strip the common monomial; what is left has a term on each axis.
    let rest: BTreeMap<(u32, u32), QQ> = poly
        .terms()
        .map(|(&(i, j), c)| ((i - ax, j - ay), c.clone()))
        .collect();
    let rest = Poly { terms: rest };

    if rest.len() >= 2 && !rest.coeff(0, 0).is_zero() {
        return Err(Error::UnsupportedFactorShape(format!(
            "factor '{text}' has a unit component at the origin"
        )));
    }

    let series = match rest.len() {
        1 => Vec::new(),
        2 => binomial_branches(text, &rest)?,
        _ => perturbed_power_branches(text, &rest)?,
    };
    branches.extend(series.into_iter().map(to_branch));
    Ok(branches)
}

fn to_branch(terms: Terms) -> PuiseuxBranch {
    PuiseuxBranch::series(
        terms
            .into_iter()
            .map(|(coeff, exp)| Term::new(coeff, exp))
            .collect(),
    )
}

/// `c1*x^r + c2*y^s`: the roots of `y^s = -(c1/c2) x^r`, one representative
/// per conjugacy class.
fn binomial_branches(text: &str, p: &Poly) -> Result<Vec<Terms>> {
    let mut pure_x = None;
    let mut pure_y = None;
    for (&(i, j), c) in p.terms() {
        if j == 0 {
            pure_x = Some((i, c.clone()));
        } else if i == 0 {
            pure_y = Some((j, c.clone()));
        }
    }
    let (Some((r, cx)), Some((s, cy))) = (pure_x, pure_y) else {
        return Err(Error::UnsupportedFactorShape(format!(
            "factor '{text}' is not a binomial in x and y"
        )));
    };
    let lead = Coeff::from_rational(&(-cx / cy)).expect("nonzero ratio");
    let root = lead.nth_root(s)?;
    let candidates: Vec<Terms> = (0..i64::from(s))
        .map(|i| {
            vec![(
                root.rotate(&qq(i, i64::from(s))),
                qq(i64::from(r), i64::from(s)),
            )]
        })
        .collect();
    representatives(candidates)
}

/// `(cA*x^a + cB*y^b)^m + c3*x^c*y^h` with the extra monomial above the
/// Newton edge. The branches carry two Puiseux terms: the edge root and the
/// first correction.
fn perturbed_power_branches(text: &str, p: &Poly) -> Result<Vec<Terms>> {
    let unsupported = || {
        Error::UnsupportedFactorShape(format!(
            "factor '{text}' is not a binomial power plus one monomial"
        ))
    };
    let big_a = p
        .terms()
        .find(|&(&(_, j), _)| j == 0)
        .map(|(&(i, _), c)| (i64::from(i), c.clone()));
    let big_b = p
        .terms()
        .find(|&(&(i, _), _)| i == 0)
        .map(|(&(_, j), c)| (i64::from(j), c.clone()));
    let (Some((deg_x, coef_x)), Some((deg_y, coef_y))) = (big_a, big_b) else {
        return Err(unsupported());
    };

    for m in divisors(gcd_i(deg_x, deg_y)).into_iter().rev() {
        let (a, b) = (deg_x / m, deg_y / m);
        if gcd_i(a, b) != 1 {
            continue;
        }
        let Some(root_x) = rational_nth_root(&coef_x, m as u32) else {
            continue;
        };
        let Some(root_y) = rational_nth_root(&coef_y, m as u32) else {
            continue;
        };
        // Even powers hide the sign of the binomial coefficients; the x side
        // can be fixed, the y side must be tried both ways.
        let y_signs: &[i64] = if m % 2 == 0 { &[1, -1] } else { &[1] };
        for &sign in y_signs {
            let ca = root_x.clone();
            let cb = &root_y * qz(sign);
            let binom = Poly::monomial(ca.clone(), a as u32, 0)?.add(&Poly::monomial(
                cb.clone(),
                0,
                b as u32,
            )?)?;
            let rem = p.sub(&binom.pow(m as u32)?)?;
            if rem.len() != 1 {
                continue;
            }
            let (&(cm, hm), c3) = rem.terms().next().expect("single term");
            let (c, h) = (i64::from(cm), i64::from(hm));
            let e2 = qq(b * c + a * (h + m - b * m), b * m);
            if e2 <= qq(a, b) {
                continue;
            }
            return power_branch_set(a, b, m, &ca, &cb, c3, h, &e2);
        }
    }
    Err(unsupported())
}

/// Expand the two-term Puiseux solutions of `(cA x^a + cB y^b)^m = -c3 x^c y^h`
/// near `y = gamma x^{a/b}` and reduce them to conjugacy representatives.
#[allow(clippy::too_many_arguments)]
fn power_branch_set(
    a: i64,
    b: i64,
    m: i64,
    ca: &QQ,
    cb: &QQ,
    c3: &QQ,
    h: i64,
    e2: &QQ,
) -> Result<Vec<Terms>> {
    let gamma = Coeff::from_rational(&(-ca / cb))
        .expect("nonzero ratio")
        .nth_root(b as u32)?;
    let scale = -c3 / (pow_qq(cb, m) * pow_qq(&qz(b), m));
    let scale = Coeff::from_rational(&scale).expect("nonzero scale");
    let mut candidates = Vec::new();
    for i in 0..b {
        let gamma_i = gamma.rotate(&qq(i, b));
        let kappa = scale.mul(&gamma_i.powi(h + m - b * m)).nth_root(m as u32)?;
        for l in 0..m {
            candidates.push(vec![
                (gamma_i.clone(), qq(a, b)),
                (kappa.rotate(&qq(l, m)), e2.clone()),
            ]);
        }
    }
    representatives(candidates)
}

/// One representative per conjugacy class, smallest first.
fn representatives(mut candidates: Vec<Terms>) -> Result<Vec<Terms>> {
    candidates.sort_by(series_cmp);
    let mut reps: Vec<Terms> = Vec::new();
    for cand in candidates {
        let mut seen = false;
        for rep in &reps {
            if det_equivalent(rep, &cand)? {
                seen = true;
                break;
            }
        }
        if !seen {
            reps.push(cand);
        }
    }
    Ok(reps)
}
