//! Exact rationals and their canonical text form.
//!
//! Values are [`num::BigRational`], which is always kept in lowest terms with
//! a positive denominator. The canonical rendering is `"p/q"`, or just `"p"`
//! when the denominator is one.

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn render(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        None => Ok(Rational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// `|q|` as a plain integer if `q` is integral.
pub fn as_integer(q: &Rational) -> Option<BigInt> {
    q.is_integer().then(|| q.numer().clone())
}

pub fn is_reduced(q: &Rational) -> bool {
    use num::Integer;
    q.denom().is_positive() && q.numer().gcd(q.denom()).is_one()
}

/// Serde adapter storing a [`Rational`] as its canonical string.
pub mod serde_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::render(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_and_parse() {
        assert_eq!(render(&frac(2, 4)), "1/2");
        assert_eq!(render(&frac(-6, 3)), "-2");
        assert_eq!(render(&frac(3, -9)), "-1/3");
        assert_eq!(parse("-5/10").unwrap(), frac(-1, 2));
        assert_eq!(parse(" 8 ").unwrap(), int(8));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn always_reduced() {
        assert!(is_reduced(&frac(12, -18)));
        assert!(is_reduced(&(frac(1, 6) + frac(1, 3))));
    }
}
