//! Bezout numbers on quotients of weighted projective planes.
//!
//! The ambient space is P^2_w(d; a, b, c): the weighted projective plane
//! with weights w = (p, q, r), further divided by mu_d acting with weights
//! (a, b, c). The correction factor e = gcd(d, m1, m2, m3) built from the
//! 2x2 minors of (p q r; a b c) turns the classical Bezout count into
//! D1.D2 = e deg(D1) deg(D2) / (d p q r).

use crate::arith::{gcd_i, QQ};
use crate::error::{Error, Result};
use crate::quotient::{CyclicType, MAX_ORDER};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPlane", into = "RawPlane")]
pub struct WPPlane {
    p: i64,
    q: i64,
    r: i64,
    d: i64,
    a: i64,
    b: i64,
    c: i64,
    m1: i64,
    m2: i64,
    m3: i64,
    e: i64,
}

#[derive(Serialize, Deserialize)]
struct RawPlane {
    w: [i64; 3],
    action: [i64; 4],
}

impl From<WPPlane> for RawPlane {
    fn from(p: WPPlane) -> RawPlane {
        RawPlane {
            w: [p.p, p.q, p.r],
            action: [p.d, p.a, p.b, p.c],
        }
    }
}

impl TryFrom<RawPlane> for WPPlane {
    type Error = Error;
    fn try_from(raw: RawPlane) -> Result<WPPlane> {
        WPPlane::new(raw.w, raw.action)
    }
}

impl WPPlane {
    pub fn new(w: [i64; 3], action: [i64; 4]) -> Result<WPPlane> {
        let [p, q, r] = w;
        let [d, a, b, c] = action;
        if p < 1 || q < 1 || r < 1 || p > MAX_ORDER || q > MAX_ORDER || r > MAX_ORDER {
            return Err(Error::BadWeight(format!(
                "weights ({p},{q},{r}) must lie in 1..={MAX_ORDER}"
            )));
        }
        if gcd_i(gcd_i(p, q), r) != 1 {
            return Err(Error::NonCoprimeWeights(format!(
                "gcd of weights ({p},{q},{r}) exceeds 1"
            )));
        }
        if !(1..=MAX_ORDER).contains(&d) {
            return Err(Error::ParseError(format!(
                "group order {d} must lie in 1..={MAX_ORDER}"
            )));
        }
        let m =
            |x: i64, y: i64, u: i64, v: i64| (x as i128 * v as i128 - y as i128 * u as i128) as i64;
        let m1 = m(p, q, a, b);
        let m2 = m(p, r, a, c);
        let m3 = m(q, r, b, c);
        let e = gcd_i(gcd_i(gcd_i(d, m1), m2), m3);
        Ok(WPPlane {
            p,
            q,
            r,
            d,
            a,
            b,
            c,
            m1,
            m2,
            m3,
            e,
        })
    }

    pub fn weights(&self) -> [i64; 3] {
        [self.p, self.q, self.r]
    }

    pub fn action(&self) -> [i64; 4] {
        [self.d, self.a, self.b, self.c]
    }

    pub fn minors(&self) -> [i64; 3] {
        [self.m1, self.m2, self.m3]
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    /// d p q r, the denominator of every pairing on this plane.
    pub fn dpqr(&self) -> BigInt {
        BigInt::from(self.d) * BigInt::from(self.p) * BigInt::from(self.q) * BigInt::from(self.r)
    }
}

/// Reduce projective weights to their smallest isomorphic representative:
/// P(q_0,...,q_n) = P(q_0/e_0,...,q_n/e_n) with d_i the gcd of the other
/// weights and e_i the product of the other d_j. Returns the reduced
/// weights and the exponents (d_i) of the realizing monomial map.
pub fn normalize_weights(weights: &[i64]) -> Result<(Vec<i64>, Vec<i64>)> {
    if weights.is_empty() || weights.iter().any(|&q| !(1..=MAX_ORDER).contains(&q)) {
        return Err(Error::BadWeight(format!(
            "weights {weights:?} must be positive and at most {MAX_ORDER}"
        )));
    }
    let total = weights.iter().fold(0, |g, &q| gcd_i(g, q));
    if total != 1 {
        return Err(Error::NonCoprimeWeights(format!(
            "gcd of weights {weights:?} is {total}"
        )));
    }
    let n = weights.len();
    let d: Vec<i64> = (0..n)
        .map(|i| {
            weights
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(0, |g, (_, &q)| gcd_i(g, q))
        })
        .collect();
    // With a single weight the empty gcd is 0; the weight itself is 1 here.
    let d: Vec<i64> = d.into_iter().map(|x| if x == 0 { 1 } else { x }).collect();
    let reduced: Vec<i64> = (0..n)
        .map(|i| {
            let e: i64 = (0..n).filter(|&j| j != i).map(|j| d[j]).product();
            weights[i] / e
        })
        .collect();
    Ok((reduced, d))
}

/// Degree of the projection attached to a two-row action
/// ((d; a, b), (e; r, s)): d e / gcd(d gcd(e,r,s), e gcd(d,a,b), as - br).
pub fn projection_degree(row1: CyclicType, row2: CyclicType) -> i64 {
    let (d, a, b) = (row1.d() as i128, row1.a() as i128, row1.b() as i128);
    let (e, r, s) = (row2.d() as i128, row2.a() as i128, row2.b() as i128);
    fn g(x: i128, y: i128) -> i128 {
        if y == 0 {
            x.abs()
        } else {
            g(y, x % y)
        }
    }
    let k = g(g(d * g(e, g(r, s)), e * g(d, g(a, b))), a * s - b * r);
    (d * e / k) as i64
}

/// D1.D2 = e deg1 deg2 / (d p q r).
pub fn bezout(plane: &WPPlane, deg1: i64, deg2: i64) -> QQ {
    QQ::new(
        BigInt::from(plane.e) * BigInt::from(deg1) * BigInt::from(deg2),
        plane.dpqr(),
    )
}

/// Pairings of the coordinate axes: [X^2, Y^2, Z^2, X.Y, X.Z, Y.Z].
pub fn axes_table(plane: &WPPlane) -> [QQ; 6] {
    let e = BigInt::from(plane.e);
    let [p, q, r] = plane.weights().map(BigInt::from);
    let d = BigInt::from(plane.d);
    [
        QQ::new(&e * &p, &d * &q * &r),
        QQ::new(&e * &q, &d * &p * &r),
        QQ::new(&e * &r, &d * &p * &q),
        QQ::new(e.clone(), &d * &r),
        QQ::new(e.clone(), &d * &q),
        QQ::new(e, &d * &p),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qq;
    use crate::blowup::{strict_self_intersection_update, Weight};

    fn ct(d: i64, a: i64, b: i64) -> CyclicType {
        CyclicType::new(d, a, b).expect("valid type")
    }

    #[test]
    fn weight_normalization_examples() {
        assert_eq!(
            normalize_weights(&[1, 2, 3]).expect("coprime"),
            (vec![1, 2, 3], vec![1, 1, 1])
        );
        assert_eq!(
            normalize_weights(&[2, 3]).expect("coprime"),
            (vec![1, 1], vec![3, 2])
        );
        assert_eq!(
            normalize_weights(&[6, 10, 15]).expect("coprime"),
            (vec![1, 1, 1], vec![5, 3, 2])
        );
        assert!(matches!(
            normalize_weights(&[2, 4]),
            Err(Error::NonCoprimeWeights(_))
        ));
    }

    #[test]
    fn weight_normalization_bookkeeping_holds() {
        // q_i = p_i * prod_{j != i} d_j and the d_i are pairwise coprime.
        let samples: Vec<Vec<i64>> = vec![
            vec![6, 10, 15],
            vec![4, 9, 25, 7],
            vec![2, 3],
            vec![12, 35, 22],
            vec![5, 7],
        ];
        for w in samples {
            let (p, d) = normalize_weights(&w).expect("coprime");
            let n = w.len();
            for i in 0..n {
                let e: i64 = (0..n).filter(|&j| j != i).map(|j| d[j]).product();
                assert_eq!(w[i], p[i] * e, "weights {w:?}");
            }
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        assert_eq!(gcd_i(d[i], d[j]), 1, "weights {w:?}");
                    }
                }
            }
            let g = p.iter().fold(0, |g, &x| gcd_i(g, x));
            assert_eq!(g, 1, "weights {w:?}");
        }
    }

    #[test]
    fn projection_degree_examples() {
        assert_eq!(projection_degree(ct(1, 0, 0), ct(1, 0, 0)), 1);
        assert_eq!(projection_degree(ct(2, 1, 1), ct(2, 1, 1)), 2);
    }

    /// The formula equals d e / |K| where K is the kernel of
    /// mu_d x mu_e -> GL_2 acting by the two rows.
    #[test]
    fn projection_degree_counts_the_faithful_quotient() {
        for d in 1..=5i64 {
            for e in 1..=5i64 {
                for a in 0..d {
                    for b in 0..d {
                        for r in 0..e {
                            for s in 0..e {
                                let mut kernel = 0;
                                for i in 0..d {
                                    for j in 0..e {
                                        let fst = (a * i * e + r * j * d) % (d * e);
                                        let snd = (b * i * e + s * j * d) % (d * e);
                                        if fst == 0 && snd == 0 {
                                            kernel += 1;
                                        }
                                    }
                                }
                                assert_eq!(
                                    projection_degree(ct(d, a, b), ct(e, r, s)),
                                    d * e / kernel,
                                    "rows ({d};{a},{b}), ({e};{r},{s})"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn projection_degree_survives_row_moves() {
        let pairs = [
            (ct(4, 1, 2), ct(6, 2, 3)),
            (ct(5, 2, 3), ct(5, 1, 4)),
            (ct(8, 3, 5), ct(3, 1, 2)),
        ];
        for (r1, r2) in pairs {
            let base = projection_degree(r1, r2);
            // Unit scaling of a row and shifts by the order leave the
            // underlying subgroup unchanged.
            for lam in 1..r2.d() {
                if gcd_i(lam, r2.d()) != 1 {
                    continue;
                }
                let scaled = ct(r2.d(), lam * r2.a() % r2.d(), lam * r2.b() % r2.d());
                assert_eq!(projection_degree(r1, scaled), base);
            }
            let shifted = ct(r1.d(), r1.a() + r1.d(), r1.b());
            assert_eq!(projection_degree(shifted, r2), base);
        }
    }

    #[test]
    fn bezout_classical_plane() {
        let plane = WPPlane::new([1, 1, 1], [1, 0, 0, 0]).expect("valid");
        assert_eq!(bezout(&plane, 1, 1), qq(1, 1));
        assert_eq!(bezout(&plane, 3, 4), qq(12, 1));
    }

    #[test]
    fn axes_table_for_235() {
        let plane = WPPlane::new([2, 3, 5], [1, 0, 0, 0]).expect("valid");
        let t = axes_table(&plane);
        assert_eq!(
            t,
            [qq(2, 15), qq(3, 10), qq(5, 6), qq(1, 5), qq(1, 3), qq(1, 2)]
        );
        // X.Y is also bezout of the axis degrees deg X = p = 2, deg Y = 3.
        assert_eq!(bezout(&plane, 2, 3), t[3]);
    }

    #[test]
    fn fiber_class_squares_to_zero() {
        // On P^2(p,q,r), the curve x^r - z^p of degree pr passes through
        // the quotient point [0:1:0] of type (q;p,r) with multiplicity pr.
        // Its strict transform under the (p,r)-blow-up there is a fiber of
        // a Hirzebruch-like ruling, so its self-intersection drops to 0.
        for (p, q, r) in [(2, 3, 5), (1, 2, 3), (3, 4, 5), (2, 7, 9)] {
            let plane = WPPlane::new([p, q, r], [1, 0, 0, 0]).expect("valid");
            let l2 = bezout(&plane, p * r, p * r);
            assert_eq!(l2, qq(p * r, q));
            let f2 = strict_self_intersection_update(
                &l2,
                &ct(q, p, r),
                Weight::new(p, r).expect("valid"),
                p * r,
            )
            .expect("update");
            assert_eq!(f2, qq(0, 1));
        }
    }

    #[test]
    fn coprime_but_invalid_inputs_are_rejected() {
        assert!(matches!(
            WPPlane::new([2, 4, 6], [1, 0, 0, 0]),
            Err(Error::NonCoprimeWeights(_))
        ));
        assert!(matches!(
            WPPlane::new([0, 1, 1], [1, 0, 0, 0]),
            Err(Error::BadWeight(_))
        ));
        assert!(matches!(
            WPPlane::new([1, 1, 1], [0, 0, 0, 0]),
            Err(Error::ParseError(_))
        ));
    }

    #[test]
    fn plane_json_round_trip() {
        let plane = WPPlane::new([2, 3, 5], [4, 1, 2, 3]).expect("valid");
        let s = serde_json::to_string(&plane).expect("serialize");
        assert_eq!(s, r#"{"w":[2,3,5],"action":[4,1,2,3]}"#);
        let back: WPPlane = serde_json::from_str(&s).expect("parse");
        assert_eq!(back, plane);
        assert!(serde_json::from_str::<WPPlane>(r#"{"w":[2,4,6],"action":[1,0,0,0]}"#).is_err());
    }
}
