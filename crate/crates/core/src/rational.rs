//! Exact rationals and the extended rationals used for belief thresholds.
//!
//! Every probability, discount factor and payoff in the crate is a
//! [`Rational`]. Thresholds may additionally be `+inf` (never believed) or
//! `-inf` (always believed), which is what [`Extended`] adds.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("floating point JSON number `{0}` is not accepted, write it as a string")]
    Float(String),
}

/// Builds `num/den`. Panics on a zero denominator.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"-p/q"`, integers and exact decimals such as `"0.25"`.
pub fn parse(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let bad = || ParseRationalError::Invalid(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{}{}", whole_digits, frac);
        let mut n = BigInt::from_str(&digits).map_err(|_| bad())?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(n, d));
    }
    BigInt::from_str(s)
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

/// Canonical text form: `p/q` in lowest terms with `q > 0`, or `p` when `q = 1`.
pub fn format(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// A rational extended with both infinities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Extended {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Extended {
    pub fn zero() -> Self {
        Extended::Finite(Rational::zero())
    }

    pub fn one() -> Self {
        Extended::Finite(Rational::one())
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(r) => Some(r),
            _ => None,
        }
    }

    /// `value >= self`, i.e. the threshold is met by `value`.
    pub fn is_met_by(&self, value: &Rational) -> bool {
        match self {
            Extended::NegInf => true,
            Extended::PosInf => false,
            Extended::Finite(t) => value >= t,
        }
    }

    /// `value <= self`.
    pub fn bounds_above(&self, value: &Rational) -> bool {
        match self {
            Extended::NegInf => false,
            Extended::PosInf => true,
            Extended::Finite(t) => value <= t,
        }
    }

    pub fn gt_rational(&self, r: &Rational) -> bool {
        match self {
            Extended::NegInf => false,
            Extended::PosInf => true,
            Extended::Finite(t) => t > r,
        }
    }

    pub fn le_rational(&self, r: &Rational) -> bool {
        !self.gt_rational(r)
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Extended::NegInf => false,
            Extended::PosInf => true,
            Extended::Finite(t) => t.is_positive(),
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::NegInf => f64::NEG_INFINITY,
            Extended::PosInf => f64::INFINITY,
            Extended::Finite(r) => to_f64(r),
        }
    }
}

impl From<Rational> for Extended {
    fn from(r: Rational) -> Self {
        Extended::Finite(r)
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        use Extended::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => f.write_str("-inf"),
            Extended::PosInf => f.write_str("inf"),
            Extended::Finite(r) => write!(f, "{}", r),
        }
    }
}

impl FromStr for Extended {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" => Ok(Extended::PosInf),
            "-inf" => Ok(Extended::NegInf),
            other => parse(other).map(Extended::Finite),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Reads a rational out of a JSON value: a `"p/q"` or decimal string, an
/// integer, or a `[num, den]` pair of integers. Floats are rejected.
pub fn from_json(v: &serde_json::Value) -> Result<Rational, ParseRationalError> {
    use serde_json::Value;
    match v {
        Value::String(s) => parse(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(int(i))
            } else {
                Err(ParseRationalError::Float(n.to_string()))
            }
        }
        Value::Array(pair) if pair.len() == 2 => {
            let num = pair[0].as_i64();
            let den = pair[1].as_i64();
            match (num, den) {
                (Some(_), Some(0)) => Err(ParseRationalError::ZeroDenominator(v.to_string())),
                (Some(n), Some(d)) => Ok(q(n, d)),
                _ => Err(ParseRationalError::Invalid(v.to_string())),
            }
        }
        other => Err(ParseRationalError::Invalid(other.to_string())),
    }
}

/// `#[serde(with = "crate::rational::text")]` for `Rational` fields.
pub mod text {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(de::Error::custom)
    }
}

/// `Option<Rational>` counterpart of [`text`].
pub mod text_opt {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse(&s).map_err(de::Error::custom)).transpose()
    }
}

/// `Vec<Rational>` counterpart of [`text`].
pub mod text_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse(s).map_err(de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse("3/4").unwrap(), q(3, 4));
        assert_eq!(parse("6/8").unwrap(), q(3, 4));
        assert_eq!(parse("0.75").unwrap(), q(3, 4));
        assert_eq!(parse("-0.05").unwrap(), q(-1, 20));
        assert_eq!(parse("2").unwrap(), int(2));
        assert_eq!(parse("1/-2").unwrap(), q(-1, 2));
        assert!(matches!(parse("1/0"), Err(ParseRationalError::ZeroDenominator(_))));
        assert!(parse("0.").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("1e3").is_err());
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format(&q(2, -4)), "-1/2");
        assert_eq!(format(&q(4, 2)), "2");
    }

    #[test]
    fn json_rejects_floats() {
        let v: serde_json::Value = serde_json::from_str("0.5").unwrap();
        assert!(matches!(from_json(&v), Err(ParseRationalError::Float(_))));
        let v: serde_json::Value = serde_json::from_str("[1, 3]").unwrap();
        assert_eq!(from_json(&v).unwrap(), q(1, 3));
        let v: serde_json::Value = serde_json::from_str("\"0.25\"").unwrap();
        assert_eq!(from_json(&v).unwrap(), q(1, 4));
    }

    #[test]
    fn extended_order() {
        let a = Extended::Finite(q(1, 2));
        assert!(Extended::NegInf < a);
        assert!(a < Extended::PosInf);
        assert!(Extended::PosInf.gt_rational(&int(1_000_000)));
        assert!(!Extended::PosInf.is_met_by(&int(1)));
        assert!(Extended::NegInf.is_met_by(&int(-5)));
        assert_eq!("inf".parse::<Extended>().unwrap(), Extended::PosInf);
        assert_eq!(Extended::Finite(q(1, 6)).to_string(), "1/6");
    }
}
