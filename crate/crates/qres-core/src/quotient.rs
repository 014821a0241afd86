//! Cyclic quotient surface types (d; a, b) and their normalization calculus.
//!
//! X(d; a, b) is the quotient of C^2 by mu_d acting as xi.(x, y) =
//! (xi^a x, xi^b y). Weights are stored reduced to [0, d), so structural
//! equality is equality of representatives. Two-row types (quotients by
//! mu_{d1} x mu_{d2}) reduce to cyclic form by row combination.

use serde::{Deserialize, Serialize};

use crate::arith::{ext_gcd, gcd_i, lcm_i, mod_inv, modr};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCyclic", into = "RawCyclic")]
pub struct CyclicType {
    d: i64,
    a: i64,
    b: i64,
}

#[derive(Serialize, Deserialize)]
struct RawCyclic {
    d: i64,
    a: i64,
    b: i64,
}

impl TryFrom<RawCyclic> for CyclicType {
    type Error = Error;
    fn try_from(r: RawCyclic) -> Result<CyclicType> {
        CyclicType::new(r.d, r.a, r.b)
    }
}

impl From<CyclicType> for RawCyclic {
    fn from(t: CyclicType) -> RawCyclic {
        RawCyclic {
            d: t.d,
            a: t.a,
            b: t.b,
        }
    }
}

/// Cap on group orders. Keeps every internal product inside i128 and every
/// reduced value inside i64; geometric inputs sit far below it.
pub const MAX_ORDER: i64 = 1_000_000_000;

impl CyclicType {
    /// Build a type, reducing the weights mod d. Rejects d < 1 and orders
    /// beyond `MAX_ORDER`.
    pub fn new(d: i64, a: i64, b: i64) -> Result<CyclicType> {
        if d < 1 {
            return Err(Error::ParseError(format!(
                "group order must be >= 1, got {d}"
            )));
        }
        if d > MAX_ORDER {
            return Err(Error::ParseError(format!(
                "group order {d} exceeds the supported range"
            )));
        }
        Ok(CyclicType {
            d,
            a: modr(a, d),
            b: modr(b, d),
        })
    }

    pub fn smooth() -> CyclicType {
        CyclicType { d: 1, a: 0, b: 0 }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn is_smooth(&self) -> bool {
        self.d == 1
    }

    /// (d; b, a): the same space with the coordinate roles exchanged.
    pub fn swap(&self) -> CyclicType {
        CyclicType {
            d: self.d,
            a: self.b,
            b: self.a,
        }
    }

    /// gcd(d, a, b) = 1: no subgroup acts trivially.
    pub fn is_effective(&self) -> bool {
        gcd_i(gcd_i(self.d, self.a), self.b) == 1
    }

    pub fn is_normalized(&self) -> bool {
        gcd_i(self.d, self.a) == 1 && gcd_i(self.d, self.b) == 1
    }

    fn require_effective(&self) -> Result<()> {
        if self.is_effective() {
            Ok(())
        } else {
            Err(Error::NonEffectiveAction(format!(
                "gcd(d, a, b) = {} > 1 for {self}",
                gcd_i(gcd_i(self.d, self.a), self.b)
            )))
        }
    }

    /// Normalized form plus the exponent pair of the realizing isomorphism
    /// [(x, y)] -> [(x^(d,b), y^(d,a))].
    pub fn normalize(&self) -> Result<(CyclicType, (i64, i64))> {
        self.require_effective()?;
        let ga = gcd_i(self.d, self.a);
        let gb = gcd_i(self.d, self.b);
        // gcd(ga, gb) = 1 by effectiveness, so ga*gb divides d.
        let d = self.d / (ga * gb);
        let t = CyclicType::new(d, self.a / ga, self.b / gb).expect("d >= 1");
        debug_assert!(t.is_normalized(), "normalize({self}) produced {t}");
        Ok((t, (gb, ga)))
    }

    /// The d of the normalized form.
    pub fn index(&self) -> Result<i64> {
        Ok(self.normalize()?.0.d)
    }

    /// Same normalized space up to swapping the coordinates and changing
    /// the group generator.
    pub fn equivalent(&self, other: &CyclicType) -> Result<bool> {
        let (s, _) = self.normalize()?;
        let (o, _) = other.normalize()?;
        if s.d != o.d {
            return Ok(false);
        }
        let d = s.d;
        for lambda in 1..=d.max(1) {
            if gcd_i(lambda, d) != 1 {
                continue;
            }
            let a = modr(lambda * s.a, d);
            let b = modr(lambda * s.b, d);
            if (a, b) == (o.a, o.b) || (b, a) == (o.a, o.b) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Normalized representative scaled so the x-weight is 1 (for d > 1).
    /// Keeps the coordinate roles fixed: only the group generator changes.
    pub fn unit_form(&self) -> Result<CyclicType> {
        let (t, _) = self.normalize()?;
        if t.d == 1 {
            return Ok(t);
        }
        let lambda = mod_inv(t.a, t.d);
        CyclicType::new(t.d, 1, lambda * t.b)
    }
}

impl std::fmt::Display for CyclicType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({};{},{})", self.d, self.a, self.b)
    }
}

impl std::str::FromStr for CyclicType {
    type Err = Error;

    /// Accepts "d;a,b" with optional parentheses and whitespace.
    fn from_str(s: &str) -> Result<CyclicType> {
        let t = s.trim();
        let t = t.strip_prefix('(').unwrap_or(t);
        let t = t.strip_suffix(')').unwrap_or(t);
        let bad = || Error::ParseError(format!("expected \"d;a,b\", got {s:?}"));
        let (ds, rest) = t.split_once(';').ok_or_else(bad)?;
        let (as_, bs) = rest.split_once(',').ok_or_else(bad)?;
        let parse = |x: &str| x.trim().parse::<i64>().map_err(|_| bad());
        CyclicType::new(parse(ds)?, parse(as_)?, parse(bs)?)
    }
}

/// Quotient of C^2 by mu_{d1} x mu_{d2}; row i holds the weights of the
/// i-th factor on (x, y).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTwoRow", into = "RawTwoRow")]
pub struct TwoRowType {
    d1: i64,
    d2: i64,
    rows: [[i64; 2]; 2],
}

#[derive(Serialize, Deserialize)]
struct RawTwoRow {
    d: [i64; 2],
    #[serde(rename = "A")]
    a: [[i64; 2]; 2],
}

impl TryFrom<RawTwoRow> for TwoRowType {
    type Error = Error;
    fn try_from(r: RawTwoRow) -> Result<TwoRowType> {
        TwoRowType::new(r.d[0], r.d[1], r.a)
    }
}

impl From<TwoRowType> for RawTwoRow {
    fn from(t: TwoRowType) -> RawTwoRow {
        RawTwoRow {
            d: [t.d1, t.d2],
            a: t.rows,
        }
    }
}

impl TwoRowType {
    pub fn new(d1: i64, d2: i64, rows: [[i64; 2]; 2]) -> Result<TwoRowType> {
        if d1 < 1 || d2 < 1 {
            return Err(Error::ParseError(format!(
                "group orders must be >= 1, got {d1}, {d2}"
            )));
        }
        if d1 > MAX_ORDER || d2 > MAX_ORDER || lcm_i(d1, d2) > MAX_ORDER {
            return Err(Error::ParseError(format!(
                "group orders ({d1}, {d2}) exceed the supported range"
            )));
        }
        Ok(TwoRowType { d1, d2, rows })
    }

    pub fn d1(&self) -> i64 {
        self.d1
    }

    pub fn d2(&self) -> i64 {
        self.d2
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        self.rows
    }
}

/// Cyclic form of a two-row quotient, with the monomial isomorphism
/// exponents: [(x, y)] in the input maps to [(x^ex, y^ey)] in the output.
///
/// Procedure: push both factors into mu_r, r = lcm(d1, d2); replace the
/// generators by h1 = g1^alpha g2^beta (Bezout for the x-weights) and
/// h2 = g1^(a2/m) g2^(-a1/m), which kills the x-weight of h2; h2 then only
/// rotates y and its span folds into a power substitution y -> y^(r/t).
/// Finally divide out any subgroup acting trivially.
pub(crate) fn reduce_two_row_iso(t: &TwoRowType) -> (CyclicType, (i64, i64)) {
    let r = lcm_i(t.d1, t.d2);
    let s1 = r / t.d1;
    let s2 = r / t.d2;
    let a1 = modr(t.rows[0][0] * s1, r);
    let b1 = modr(t.rows[0][1] * s1, r);
    let a2 = modr(t.rows[1][0] * s2, r);
    let b2 = modr(t.rows[1][1] * s2, r);

    let (d, a, b, ey) = if a1 == 0 && a2 == 0 {
        // pure y-rotations: the group is mu_{r/g} on y
        let g = gcd_i(gcd_i(r, b1), b2);
        (r / g, 0, 1, 1)
    } else {
        let (m, alpha, beta) = ext_gcd(a1, a2);
        let w = modr(alpha * b1 + beta * b2, r);
        let u = ((a1 as i128 * b2 as i128 - a2 as i128 * b1 as i128) / m as i128) as i64;
        let tt = gcd_i(r, u);
        (r, m, modr(w * (r / tt), r), r / tt)
    };
    let g = gcd_i(gcd_i(d, a), b);
    let out = CyclicType::new(d / g, a / g, b / g).expect("order stays >= 1");
    (out, (1, ey))
}

/// Cyclic form of a two-row quotient. The result is effective but not
/// necessarily normalized; chain with `normalize` for the small form.
pub fn reduce_two_row(t: &TwoRowType) -> CyclicType {
    reduce_two_row_iso(t).0
}
