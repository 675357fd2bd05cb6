//! Exact rational numbers and their `"num/den"` text encoding.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserializer, Serializer};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Always emits `num/den`, with `den = 1` for integers.
pub fn format(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `num/den` and plain integers. The denominator must be positive.
pub fn parse(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if !den.is_positive() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

pub fn ceil_to_usize(q: &Rational) -> usize {
    let c = q.ceil().to_integer();
    let c: u64 = c.try_into().expect("ceiling out of range");
    c as usize
}

pub fn floor_to_i64(q: &Rational) -> i64 {
    q.floor().to_integer().try_into().expect("floor out of range")
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn is_nonnegative(q: &Rational) -> bool {
    !q.is_negative()
}

pub fn zero() -> Rational {
    Rational::zero()
}

/// Display adapter for `num/den` output.
pub struct Show<'a>(pub &'a Rational);

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format(self.0))
    }
}

/// serde `with` module encoding a rational as a `"num/den"` string.
pub mod serde_str {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s: String = de::Deserialize::deserialize(d)?;
        parse(&s).map_err(de::Error::custom)
    }
}

/// serde `with` module for `Vec<Rational>`.
pub mod serde_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&format(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v: Vec<String> = de::Deserialize::deserialize(d)?;
        v.iter()
            .map(|s| parse(s).map_err(de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse() {
        assert_eq!(format(&ratio(6, 4)), "3/2");
        assert_eq!(format(&int(5)), "5/1");
        assert_eq!(format(&ratio(-1, 3)), "-1/3");
        assert_eq!(parse("3/2").unwrap(), ratio(3, 2));
        assert_eq!(parse("7").unwrap(), int(7));
        assert_eq!(parse(" 10/4 ").unwrap(), ratio(5, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("1/-2").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn ceil_and_lcm() {
        assert_eq!(ceil_to_usize(&ratio(13, 2)), 7);
        assert_eq!(ceil_to_usize(&int(3)), 3);
        let vals = [ratio(1, 4), ratio(1, 6), int(2)];
        assert_eq!(common_denominator(vals.iter()), BigInt::from(12));
    }
}
