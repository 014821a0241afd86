//! Oracles shared by the integration suites. Everything here is computed
//! independently of the library routines it is used to check: resultants go
//! through a Sylvester matrix with fraction-free elimination, chain
//! determinants through the three-term recurrence.
#![allow(dead_code)]

use num_traits::Zero;
use qres_core::arith::{qz, QQ};
use qres_core::parse::Poly;

/// Dense univariate polynomial over Q, constant term first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly1(pub Vec<QQ>);

impl Poly1 {
    pub fn zero() -> Poly1 {
        Poly1(vec![])
    }

    pub fn one() -> Poly1 {
        Poly1(vec![qz(1)])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn trim(mut self) -> Poly1 {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn sub(&self, other: &Poly1) -> Poly1 {
        let n = self.0.len().max(other.0.len());
        let coeff = |p: &Poly1, i: usize| p.0.get(i).cloned().unwrap_or_else(QQ::zero);
        Poly1((0..n).map(|i| coeff(self, i) - coeff(other, i)).collect()).trim()
    }

    pub fn mul(&self, other: &Poly1) -> Poly1 {
        if self.is_zero() || other.is_zero() {
            return Poly1::zero();
        }
        let mut out = vec![QQ::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly1(out).trim()
    }

    /// Quotient by an exact divisor; panics on a nonzero remainder, which
    /// in the Bareiss elimination below would mean a bug.
    pub fn div_exact(&self, d: &Poly1) -> Poly1 {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone().trim();
        let mut quot = vec![QQ::zero(); rem.0.len().saturating_sub(d.0.len() - 1)];
        let lead = d.0.last().unwrap();
        while rem.0.len() >= d.0.len() {
            let k = rem.0.len() - d.0.len();
            let c = rem.0.last().unwrap() / lead;
            quot[k] = c.clone();
            let mut shifted = vec![QQ::zero(); k];
            shifted.extend(d.0.iter().map(|x| x * &c));
            rem = rem.sub(&Poly1(shifted));
        }
        assert!(rem.is_zero(), "inexact polynomial division");
        Poly1(quot).trim()
    }

    /// Order of vanishing at x = 0.
    pub fn ord(&self) -> usize {
        assert!(!self.is_zero(), "order of the zero polynomial");
        self.0.iter().position(|c| !c.is_zero()).unwrap()
    }
}

/// Coefficients of y^0, y^1, ... of a bivariate polynomial, each a
/// univariate polynomial in x.
fn y_coefficients(p: &Poly) -> Vec<Poly1> {
    let deg_y = p.terms().map(|(&(_, j), _)| j).max().unwrap_or(0) as usize;
    let mut out = vec![Poly1::zero(); deg_y + 1];
    for (&(i, j), c) in p.terms() {
        let row = &mut out[j as usize].0;
        if row.len() <= i as usize {
            row.resize(i as usize + 1, QQ::zero());
        }
        row[i as usize] = c.clone();
    }
    out.into_iter().map(Poly1::trim).collect()
}

/// Resultant of f and g with respect to y: the determinant of the Sylvester
/// matrix over Q[x].
pub fn resultant_y(f: &Poly, g: &Poly) -> Poly1 {
    let fc = y_coefficients(f);
    let gc = y_coefficients(g);
    let (m, n) = (fc.len() - 1, gc.len() - 1);
    if m == 0 {
        return power(&fc[0], n);
    }
    if n == 0 {
        return power(&gc[0], m);
    }
    let size = m + n;
    let mut mat = vec![vec![Poly1::zero(); size]; size];
    for row in 0..n {
        for (k, c) in fc.iter().rev().enumerate() {
            mat[row][row + k] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in gc.iter().rev().enumerate() {
            mat[n + row][row + k] = c.clone();
        }
    }
    bareiss_det(mat)
}

fn power(base: &Poly1, k: usize) -> Poly1 {
    let mut out = Poly1::one();
    for _ in 0..k {
        out = out.mul(base);
    }
    out
}

/// Fraction-free determinant; every division along the way is exact.
fn bareiss_det(mut m: Vec<Vec<Poly1>>) -> Poly1 {
    let n = m.len();
    if n == 0 {
        return Poly1::one();
    }
    let mut sign = 1i64;
    let mut prev = Poly1::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Poly1::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev);
            }
            m[i][k] = Poly1::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        det.mul(&Poly1(vec![qz(-1)]))
    } else {
        det
    }
}

/// Intersection multiplicity oracle: the order of vanishing at x = 0 of
/// Res_y(f, g). Valid whenever the two curves share no component and meet
/// the line x = 0 only at the origin, which holds for all germs it is
/// applied to.
pub fn intersection_order(f: &Poly, g: &Poly) -> usize {
    resultant_y(f, g).ord()
}

/// Determinant of the tridiagonal matrix with the given diagonal and -1 on
/// the off-diagonals is det_k = a_k det_{k-1} - det_{k-2}. With the
/// convention a_k = -q_k of Hirzebruch-Jung chains the absolute value must
/// equal the order d of the cyclic point.
pub fn tridiagonal_det(diag: &[i64]) -> i64 {
    let (mut prev2, mut prev) = (1i64, 1i64);
    for (k, &a) in diag.iter().enumerate() {
        let det = if k == 0 { a } else { a * prev - prev2 };
        prev2 = prev;
        prev = det;
    }
    prev
}

/// Value of the nested fraction q_1 - 1/(q_2 - 1/(...)), evaluated from the
/// tail.
pub fn nested_fraction(qs: &[i64]) -> QQ {
    let mut value = QQ::zero();
    for &q in qs.iter().rev() {
        value = qz(q) - value.recip_or_zero();
    }
    value
}

trait RecipOrZero {
    fn recip_or_zero(&self) -> QQ;
}

impl RecipOrZero for QQ {
    fn recip_or_zero(&self) -> QQ {
        if self.is_zero() {
            QQ::zero()
        } else {
            self.recip()
        }
    }
}
