//! Exact rational numbers and their string form (`"p/q"`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`. Denominator must be nonzero.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Canonical string: integers print without a denominator.
pub fn format_rational(x: &Q) -> String {
    x.to_string()
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Generalised binomial coefficient `C(e, k)` for rational `e`.
pub fn binomial(e: &Q, k: usize) -> Q {
    let mut acc = one();
    for i in 0..k {
        acc = acc * (e - qi(i as i64)) / qi(i as i64 + 1);
    }
    acc
}

/// Serde adapter storing a rational as its canonical string.
pub mod serde_q {
    use super::{format_rational, parse_rational, Q};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-857250").unwrap(), qi(-857250));
        assert_eq!(format_rational(&q(-1, 32)), "-1/32");
        assert_eq!(format_rational(&q(4, 2)), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn generalised_binomial() {
        // (1+x)^{1/2} = 1 + x/2 - x^2/8 + x^3/16
        assert_eq!(binomial(&q(1, 2), 0), qi(1));
        assert_eq!(binomial(&q(1, 2), 1), q(1, 2));
        assert_eq!(binomial(&q(1, 2), 2), q(-1, 8));
        assert_eq!(binomial(&q(1, 2), 3), q(1, 16));
        assert_eq!(binomial(&qi(5), 2), qi(10));
        assert_eq!(binomial(&qi(2), 3), qi(0));
    }
}
