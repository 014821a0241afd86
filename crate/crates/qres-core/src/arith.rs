//! Exact arithmetic: small integer helpers, arbitrary-precision rationals
//! and polar coefficients (rational magnitude times a root of unity angle).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The scalar field used everywhere: exact rationals.
pub type QQ = BigRational;

/// Rational from a pair of machine integers.
pub fn qq(num: i64, den: i64) -> QQ {
    QQ::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from a machine integer.
pub fn qz(n: i64) -> QQ {
    QQ::from_integer(BigInt::from(n))
}

/// Non-negative gcd, with gcd(0, 0) = 0.
pub fn gcd_i(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn lcm_i(a: i64, b: i64) -> i64 {
    let (a, b) = (a as i128, b as i128);
    let l = a.lcm(&b);
    i64::try_from(l).expect("lcm overflow")
}

/// (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

/// Representative of a mod d in [0, d). Requires d >= 1.
pub fn modr(a: i64, d: i64) -> i64 {
    debug_assert!(d >= 1);
    ((a as i128).rem_euclid(d as i128)) as i64
}

/// Inverse of a mod d, for gcd(a, d) = 1. By convention returns 0 when d = 1.
pub fn mod_inv(a: i64, d: i64) -> i64 {
    debug_assert!(d >= 1);
    if d == 1 {
        return 0;
    }
    let (g, x, _) = ext_gcd(modr(a, d), d);
    assert!(g == 1, "mod_inv of non-unit {a} mod {d}");
    modr(x, d)
}

/// q^k for integer k of either sign.
pub fn pow_qq(q: &QQ, k: i64) -> QQ {
    if k == 0 {
        return QQ::one();
    }
    let mut base = if k < 0 { q.recip() } else { q.clone() };
    let mut e = k.unsigned_abs();
    let mut acc = QQ::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            let sq = &base * &base;
            base = sq;
        }
    }
    acc
}

/// Exact n-th root of a rational, if one exists. Negative inputs are allowed
/// for odd n.
pub fn rational_nth_root(q: &QQ, n: u32) -> Option<QQ> {
    assert!(n >= 1);
    if q.is_zero() {
        return Some(QQ::zero());
    }
    if q.is_negative() && n.is_multiple_of(2) {
        return None;
    }
    let root_abs = |v: &BigInt| -> Option<BigInt> {
        let m = v.magnitude().nth_root(n);
        let r = BigInt::from(m);
        if num_traits::pow(r.clone(), n as usize) == v.abs() {
            Some(r)
        } else {
            None
        }
    };
    let rn = root_abs(q.numer())?;
    let rd = root_abs(q.denom())?;
    let signed = if q.is_negative() { -rn } else { rn };
    Some(QQ::new(signed, rd))
}

/// Fractional part in [0, 1).
fn frac_part(t: QQ) -> QQ {
    let f = t.floor();
    t - f
}

/// Nonzero complex number mag * exp(2*pi*i*turns), with mag a positive
/// rational and turns a rational in [0, 1).
///
/// This class is closed under multiplication, division, integer powers,
/// n-th roots and root-of-unity rotations, which is exactly what branch
/// bookkeeping needs. It is not closed under addition; the engine never
/// adds coefficients, it only drops or compares them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coeff {
    mag: QQ,
    turns: QQ,
}

impl Coeff {
    pub fn new(mag: QQ, turns: QQ) -> Coeff {
        assert!(mag.is_positive(), "Coeff magnitude must be positive");
        Coeff {
            mag,
            turns: frac_part(turns),
        }
    }

    /// None for the zero rational, which is not a valid coefficient.
    pub fn from_rational(q: &QQ) -> Option<Coeff> {
        if q.is_zero() {
            None
        } else if q.is_positive() {
            Some(Coeff::new(q.clone(), QQ::zero()))
        } else {
            Some(Coeff::new(-q.clone(), qq(1, 2)))
        }
    }

    pub fn one() -> Coeff {
        Coeff::new(QQ::one(), QQ::zero())
    }

    /// exp(2*pi*i*k/n).
    pub fn root_of_unity(k: i64, n: i64) -> Coeff {
        assert!(n >= 1);
        Coeff::new(QQ::one(), qq(k, n))
    }

    pub fn mag(&self) -> &QQ {
        &self.mag
    }

    pub fn turns(&self) -> &QQ {
        &self.turns
    }

    /// The rational value, when the angle is 0 or a half turn.
    pub fn as_rational(&self) -> Option<QQ> {
        if self.turns.is_zero() {
            Some(self.mag.clone())
        } else if self.turns == qq(1, 2) {
            Some(-self.mag.clone())
        } else {
            None
        }
    }

    pub fn neg(&self) -> Coeff {
        Coeff::new(self.mag.clone(), &self.turns + qq(1, 2))
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        Coeff::new(&self.mag * &other.mag, &self.turns + &other.turns)
    }

    pub fn div(&self, other: &Coeff) -> Coeff {
        Coeff::new(&self.mag / &other.mag, &self.turns - &other.turns)
    }

    pub fn powi(&self, k: i64) -> Coeff {
        Coeff::new(pow_qq(&self.mag, k), &self.turns * qz(k))
    }

    /// Rotation by a rational angle (in turns).
    pub fn rotate(&self, delta: &QQ) -> Coeff {
        Coeff::new(self.mag.clone(), &self.turns + delta)
    }

    /// Principal n-th root: exact root of the magnitude, angle divided by n.
    pub fn nth_root(&self, n: u32) -> Result<Coeff> {
        let mag = rational_nth_root(&self.mag, n).ok_or_else(|| {
            Error::UnsupportedCoefficient(format!("{} has no exact rational {n}-th root", self.mag))
        })?;
        Ok(Coeff::new(mag, &self.turns / qz(n as i64)))
    }

    /// Canonical sort key: by angle, then by magnitude.
    pub fn sort_key(&self) -> (QQ, QQ) {
        (self.turns.clone(), self.mag.clone())
    }
}

impl std::fmt::Display for Coeff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "{}*e^(2pi*i*{})", self.mag, self.turns),
        }
    }
}

impl PartialOrd for Coeff {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coeff {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.turns
            .cmp(&other.turns)
            .then_with(|| self.mag.cmp(&other.mag))
    }
}

/// True when the rational is an integer that fits in i64.
pub fn as_i64(q: &QQ) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

/// Wire format for rationals: {"num": .., "den": ..} in lowest terms with
/// positive denominator. Values are JSON numbers when they fit in i64 and
/// decimal strings otherwise; both forms are accepted on input.
pub mod qq_serde {
    use super::QQ;
    use num_bigint::BigInt;
    use num_traits::{ToPrimitive, Zero};
    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    pub(crate) enum WireInt {
        Small(i64),
        Big(String),
    }

    impl From<&BigInt> for WireInt {
        fn from(v: &BigInt) -> WireInt {
            match v.to_i64() {
                Some(n) => WireInt::Small(n),
                None => WireInt::Big(v.to_string()),
            }
        }
    }

    impl TryFrom<WireInt> for BigInt {
        type Error = String;
        fn try_from(w: WireInt) -> Result<BigInt, String> {
            match w {
                WireInt::Small(n) => Ok(BigInt::from(n)),
                WireInt::Big(s) => s
                    .trim()
                    .parse::<BigInt>()
                    .map_err(|_| format!("not an integer: {s:?}")),
            }
        }
    }

    #[derive(Serialize, Deserialize)]
    pub(crate) struct WireRat {
        num: WireInt,
        den: WireInt,
    }

    impl From<&QQ> for WireRat {
        fn from(q: &QQ) -> WireRat {
            WireRat {
                num: WireInt::from(q.numer()),
                den: WireInt::from(q.denom()),
            }
        }
    }

    impl TryFrom<WireRat> for QQ {
        type Error = String;
        fn try_from(w: WireRat) -> Result<QQ, String> {
            let num = BigInt::try_from(w.num)?;
            let den = BigInt::try_from(w.den)?;
            if den.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(QQ::new(num, den))
        }
    }

    pub fn serialize<S: Serializer>(q: &QQ, s: S) -> Result<S::Ok, S::Error> {
        WireRat::from(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<QQ, D::Error> {
        QQ::try_from(WireRat::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// Same wire format for vectors of rationals.
pub mod qq_vec_serde {
    use super::qq_serde::WireRat;
    use super::QQ;
    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[QQ], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(WireRat::from).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<QQ>, D::Error> {
        Vec::<WireRat>::deserialize(d)?
            .into_iter()
            .map(|w| QQ::try_from(w).map_err(D::Error::custom))
            .collect()
    }
}

/// Same wire format for row-major rational matrices.
pub mod qq_mat_serde {
    use super::qq_serde::WireRat;
    use super::QQ;
    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<QQ>], s: S) -> Result<S::Ok, S::Error> {
        m.iter()
            .map(|row| row.iter().map(WireRat::from).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<QQ>>, D::Error> {
        Vec::<Vec<WireRat>>::deserialize(d)?
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|w| QQ::try_from(w).map_err(D::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Same wire format for optional rationals (null encodes absence).
pub mod qq_opt_serde {
    use super::qq_serde::WireRat;
    use super::QQ;
    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<QQ>, s: S) -> Result<S::Ok, S::Error> {
        q.as_ref().map(WireRat::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<QQ>, D::Error> {
        match Option::<WireRat>::deserialize(d)? {
            None => Ok(None),
            Some(w) => QQ::try_from(w).map(Some).map_err(D::Error::custom),
        }
    }
}
