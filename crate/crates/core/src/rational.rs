//! Exact rational helpers and the `"p/q"` string encoding used in JSON.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn half() -> Rat {
    rat(1, 2)
}

pub fn floor_int(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn abs(x: &Rat) -> Rat {
    x.abs()
}

/// `"p/q"` or `"p"`.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Domain(format!("cannot parse rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn serialize_rat<S: Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rat(x))
}

pub fn deserialize_rat<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
    let s = String::deserialize(d)?;
    parse_rat(&s).map_err(serde::de::Error::custom)
}

/// Serde adapter for `[Rat; N]` as an array of strings.
pub mod rat_array {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer, const N: usize>(
        xs: &[Rat; N],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(N))?;
        for x in xs {
            seq.serialize_element(&format_rat(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>, const N: usize>(
        d: D,
    ) -> std::result::Result<[Rat; N], D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let parsed: Vec<Rat> = v
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<_>>()
            .map_err(serde::de::Error::custom)?;
        parsed
            .try_into()
            .map_err(|_| serde::de::Error::custom(format!("expected {N} rationals")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-4").unwrap(), int(-4));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(format_rat(&rat(-2, 4)), "-1/2");
        assert_eq!(format_rat(&int(7)), "7");
    }
}
