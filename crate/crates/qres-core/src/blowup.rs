//! Weighted (p, q)-blow-ups of a point of type X(d; a, b): chart origins,
//! exceptional self-intersection and the multiplicity transform formulas.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd_i, mod_inv, qz, QQ};
use crate::error::{Error, Result};
use crate::quotient::{CyclicType, MAX_ORDER};

/// Coprime positive weight pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "(i64, i64)", into = "(i64, i64)")]
pub struct Weight {
    p: i64,
    q: i64,
}

impl TryFrom<(i64, i64)> for Weight {
    type Error = Error;
    fn try_from(v: (i64, i64)) -> Result<Weight> {
        Weight::new(v.0, v.1)
    }
}

impl From<Weight> for (i64, i64) {
    fn from(w: Weight) -> (i64, i64) {
        (w.p, w.q)
    }
}

impl Weight {
    pub fn new(p: i64, q: i64) -> Result<Weight> {
        if p < 1 || q < 1 || p > MAX_ORDER || q > MAX_ORDER {
            return Err(Error::BadWeight(format!(
                "weights must be positive (and within range), got ({p},{q})"
            )));
        }
        if gcd_i(p, q) != 1 {
            return Err(Error::BadWeight(format!(
                "weights must be coprime, got ({p},{q})"
            )));
        }
        Ok(Weight { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Data of one weighted blow-up at the origin of X(d; a, b).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupResult {
    pub e: i64,
    pub chart1_origin: CyclicType,
    pub chart2_origin: CyclicType,
    #[serde(with = "crate::arith::qq_serde")]
    pub exc_self_intersection: QQ,
    pub beta: i64,
    pub mu: i64,
}

/// (num/den) mod order, for den | num. Intermediates in i128: with all
/// orders capped by MAX_ORDER the products cannot overflow.
fn exact_div_mod(num: i128, den: i64, order: i64, what: &str) -> Result<i64> {
    if num % den as i128 != 0 {
        return Err(Error::Internal(format!(
            "{what}: {num} not divisible by {den}"
        )));
    }
    Ok((num / den as i128).rem_euclid(order as i128) as i64)
}

fn dpq(d: i64, p: i64, q: i64) -> BigInt {
    BigInt::from(d) * BigInt::from(p) * BigInt::from(q)
}

/// Blow up the origin of a normalized X(d; a, b) with weight (p, q).
///
/// e = gcd(d, pb - qa); the chart origins are
/// X(pd/e; 1, (-q + beta p b)/e) and X(qd/e; (-p + mu q a)/e, 1)
/// with beta, mu inverses of a, b mod d, and E^2 = -e^2/(dpq).
/// For d = 1 this degenerates to the smooth charts X(p;-1,q), X(q;p,-1).
pub fn blowup(t: &CyclicType, w: Weight) -> Result<BlowupResult> {
    if !t.is_normalized() {
        return Err(Error::NotNormalized(format!("cannot blow up {t}")));
    }
    let (d, a, b) = (t.d(), t.a(), t.b());
    let (p, q) = (w.p, w.q);
    let e = gcd_i(d, p * b - q * a).max(1);
    let beta = mod_inv(a, d);
    let mu = mod_inv(b, d);
    let (ord1, ord2) = (p * d / e, q * d / e);
    let w1 = exact_div_mod(
        -(q as i128) + beta as i128 * p as i128 * b as i128,
        e,
        ord1,
        "chart 1 weight",
    )?;
    let w2 = exact_div_mod(
        -(p as i128) + mu as i128 * q as i128 * a as i128,
        e,
        ord2,
        "chart 2 weight",
    )?;
    let chart1 = CyclicType::new(ord1, 1, w1)?;
    let chart2 = CyclicType::new(ord2, w2, 1)?;
    debug_assert!(chart1.is_normalized() && chart2.is_normalized());
    Ok(BlowupResult {
        e,
        chart1_origin: chart1,
        chart2_origin: chart2,
        exc_self_intersection: QQ::new(BigInt::from(-e) * BigInt::from(e), dpq(d, p, q)),
        beta,
        mu,
    })
}

/// Minimum of p*i + q*j over a monomial support.
pub fn wt_order(terms: &[(i64, i64)], w: Weight) -> Result<i64> {
    terms
        .iter()
        .map(|&(i, j)| w.p * i + w.q * j)
        .min()
        .ok_or_else(|| Error::EmptySupport("wt_order of an empty support".into()))
}

/// Multiplicity of the exceptional divisor in the total transform: nu/e.
///
/// Integral whenever the blown-up function is well defined on the quotient;
/// the caller asserts integrality where that hypothesis holds (a
/// semi-invariant function legitimately yields a fraction).
pub fn total_transform(t: &CyclicType, w: Weight, nu: i64) -> Result<QQ> {
    let r = blowup(t, w)?;
    Ok(qz(nu) / qz(r.e))
}

/// E . (strict transform), for a curve of (p, q)-multiplicity nu: e*nu/(dpq).
pub fn exc_dot_strict(t: &CyclicType, w: Weight, nu: i64) -> Result<QQ> {
    let r = blowup(t, w)?;
    Ok(QQ::new(
        BigInt::from(r.e) * BigInt::from(nu),
        dpq(t.d(), w.p, w.q),
    ))
}

/// Self-intersection of the strict transform of a compact divisor of
/// (p, q)-multiplicity mu through the center: old - mu^2/(dpq).
pub fn strict_self_intersection_update(old: &QQ, t: &CyclicType, w: Weight, mu: i64) -> Result<QQ> {
    if !t.is_normalized() {
        return Err(Error::NotNormalized(format!("cannot blow up {t}")));
    }
    Ok(old - QQ::new(BigInt::from(mu) * BigInt::from(mu), dpq(t.d(), w.p, w.q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qq;

    fn ct(d: i64, a: i64, b: i64) -> CyclicType {
        CyclicType::new(d, a, b).expect("valid type")
    }

    fn wt(p: i64, q: i64) -> Weight {
        Weight::new(p, q).expect("coprime weights")
    }

    fn equiv(s: CyclicType, o: CyclicType) -> bool {
        s.equivalent(&o).expect("effective")
    }

    #[test]
    fn weight_validation() {
        assert!(Weight::new(2, 4).is_err());
        assert!(Weight::new(0, 1).is_err());
        assert!(Weight::new(-2, 3).is_err());
        assert!(Weight::new(1, 1).is_ok());
    }

    #[test]
    fn blowup_of_smooth_point() {
        let r = blowup(&CyclicType::smooth(), wt(2, 3)).expect("normalized");
        assert_eq!(r.e, 1);
        assert_eq!(r.chart1_origin, ct(2, 1, 1));
        assert_eq!(r.chart2_origin, ct(3, 1, 1));
        assert!(equiv(r.chart1_origin, ct(2, -1, 3)));
        assert!(equiv(r.chart2_origin, ct(3, 2, -1)));
        assert_eq!(r.exc_self_intersection, qq(-1, 6));
    }

    #[test]
    fn blowup_with_matching_weights() {
        // center (d; p, q), weight (p, q): e = d, charts (p;-d,q), (q;p,-d)
        for (d, p, q) in [(1i64, 2i64, 3i64), (5, 2, 3), (7, 2, 5), (3, 1, 2)] {
            let t = ct(d, p, q);
            if !t.is_normalized() {
                continue;
            }
            let r = blowup(&t, wt(p, q)).expect("normalized");
            assert_eq!(r.e, d, "e for d={d},p={p},q={q}");
            assert!(equiv(r.chart1_origin, ct(p, -d, q)));
            assert!(equiv(r.chart2_origin, ct(q, p, -d)));
            assert_eq!(r.exc_self_intersection, qq(-d, p * q));
        }
    }

    #[test]
    fn blowup_second_center_of_two_branch_family() {
        // center (q; p, q^2-p^2), weight (p, q^2-p^2)
        for (p, q) in [(2i64, 3i64), (3i64, 5i64)] {
            let s = q * q - p * p;
            let r = blowup(&ct(q, p, s), wt(p, s)).expect("normalized");
            assert_eq!(r.e, q);
            assert!(equiv(r.chart1_origin, ct(p, -1, q)));
            assert!(equiv(r.chart2_origin, ct(s, p, -q)));
            assert_eq!(r.exc_self_intersection, qq(-q, p * s));
        }
    }

    #[test]
    fn blowup_rejects_bad_inputs() {
        assert!(matches!(
            blowup(&ct(10, 2, 5), wt(1, 1)),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn wt_order_examples() {
        for (p, q) in [(2i64, 3i64), (3, 5), (2, 7)] {
            assert_eq!(
                wt_order(&[(p, 0), (0, q)], wt(q, p)).expect("nonempty"),
                p * q
            );
        }
        assert_eq!(wt_order(&[(1, 0)], wt(2, 3)).expect("nonempty"), 2);
        // (x^3 - y^2)^2 - x^4 y^3 expands over (6,0), (3,2), (0,4), (4,3)
        assert_eq!(
            wt_order(&[(6, 0), (3, 2), (0, 4), (4, 3)], wt(2, 3)).expect("nonempty"),
            12
        );
        assert!(matches!(
            wt_order(&[], wt(1, 1)),
            Err(Error::EmptySupport(_))
        ));
    }

    #[test]
    fn transform_formulas_on_known_multiplicities() {
        let smooth = CyclicType::smooth();
        assert_eq!(
            total_transform(&smooth, wt(2, 3), 29).expect("valid"),
            qz(29)
        );
        assert_eq!(
            total_transform(&smooth, wt(2, 5), 73).expect("valid"),
            qz(73)
        );
        // second center of the (2,3) two-branch family: nu = pq(p+q), e = q
        assert_eq!(
            total_transform(&ct(3, 2, 5), wt(2, 5), 30).expect("valid"),
            qz(10)
        );

        assert_eq!(
            exc_dot_strict(&smooth, wt(2, 5), 2).expect("valid"),
            qq(1, 5)
        );
        assert_eq!(exc_dot_strict(&smooth, wt(2, 5), 0).expect("valid"), qz(0));
        assert_eq!(exc_dot_strict(&smooth, wt(3, 2), 6).expect("valid"), qz(1));

        assert_eq!(
            strict_self_intersection_update(&qq(-1, 6), &smooth, wt(2, 5), 2).expect("valid"),
            qq(-17, 30)
        );
        assert_eq!(
            strict_self_intersection_update(&qq(-7, 2), &smooth, wt(2, 5), 0).expect("valid"),
            qq(-7, 2)
        );
        assert_eq!(
            strict_self_intersection_update(&qq(-1, 6), &ct(3, 2, 5), wt(2, 5), 2).expect("valid"),
            qq(-3, 10)
        );
    }

    #[test]
    fn chart_types_normalized_and_orthogonality_sweep() {
        // all normalized (d;a,b) and coprime (p,q) with d,p,q <= 12
        for d in 1..=12i64 {
            for a in 0..d.max(1) {
                for b in 0..d.max(1) {
                    let t = match CyclicType::new(d, a, b) {
                        Ok(t) if t.is_normalized() => t,
                        _ => continue,
                    };
                    for p in 1..=12i64 {
                        for q in 1..=12i64 {
                            if gcd_i(p, q) != 1 {
                                continue;
                            }
                            let w = wt(p, q);
                            let r = blowup(&t, w).expect("normalized input");
                            assert!(r.chart1_origin.is_normalized(), "{t} {w} chart1");
                            assert!(r.chart2_origin.is_normalized(), "{t} {w} chart2");
                            assert_eq!(d % r.e, 0, "e | d fails for {t} {w}");
                            // curvette identity on the 1x1 matrix
                            assert_eq!(
                                -r.exc_self_intersection.clone().recip(),
                                qq(d * p * q, r.e * r.e)
                            );
                            // E . pi*(C) = 0 for a curve of multiplicity nu
                            for nu in [0i64, 1, 7, 30] {
                                let tt = total_transform(&t, w, nu).expect("valid");
                                let dot = exc_dot_strict(&t, w, nu).expect("valid");
                                assert_eq!(
                                    tt * r.exc_self_intersection.clone() + dot,
                                    qz(0),
                                    "orthogonality fails for {t} {w} nu={nu}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}
