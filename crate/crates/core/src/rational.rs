//! Exact rational scalars.
//!
//! Every coefficient in this crate is an arbitrary-precision rational. The
//! text form is `"p/q"` with a positive denominator, or just `"p"` when the
//! denominator is one; parsing is strict (it rejects `"2/4"`, `"1/0"` and
//! `"1/-2"`) so that emitted documents round-trip byte-for-byte.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use thiserror::Error;

/// A reduced rational number with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

/// Rejected rational text.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer in rational literal: {0:?}")]
    BadInteger(String),
    #[error("zero denominator in rational literal: {0:?}")]
    ZeroDenominator(String),
    #[error("denominator must be positive: {0:?}")]
    NegativeDenominator(String),
    #[error("rational literal is not reduced: {0:?}")]
    NotReduced(String),
}

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(value: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn from_bigint(value: BigInt) -> Self {
        Rat(BigRational::from_integer(value))
    }

    /// Builds `numer/denom`, reducing and normalizing the sign.
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self, RationalError> {
        if denom.is_zero() {
            return Err(RationalError::ZeroDenominator(format!(
                "{}/{}",
                numer, denom
            )));
        }
        Ok(Rat(BigRational::new(numer, denom)))
    }

    /// Convenience for small literals in tests and fixtures.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// True when the denominator is one.
    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn invert(&self) -> Option<Rat> {
        if self.is_zero() {
            None
        } else {
            Some(Rat(self.0.recip()))
        }
    }

    pub fn pow(&self, exp: u32) -> Rat {
        let mut acc = Rat::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Strict parser for the wire form: rejects non-reduced fractions,
    /// zero or negative denominators, and anything but base-10 integers.
    pub fn parse_strict(text: &str) -> Result<Self, RationalError> {
        if text.is_empty() {
            return Err(RationalError::Empty);
        }
        let parse_int = |part: &str| -> Result<BigInt, RationalError> {
            if part.is_empty()
                || part == "-"
                || !part
                    .strip_prefix('-')
                    .unwrap_or(part)
                    .bytes()
                    .all(|b| b.is_ascii_digit())
            {
                return Err(RationalError::BadInteger(text.to_string()));
            }
            part.parse::<BigInt>()
                .map_err(|_| RationalError::BadInteger(text.to_string()))
        };
        match text.split_once('/') {
            None => Ok(Rat(BigRational::from_integer(parse_int(text)?))),
            Some((num_part, den_part)) => {
                let numer = parse_int(num_part)?;
                let denom = parse_int(den_part)?;
                if denom.is_zero() {
                    return Err(RationalError::ZeroDenominator(text.to_string()));
                }
                if denom.is_negative() {
                    return Err(RationalError::NegativeDenominator(text.to_string()));
                }
                if numer.gcd(&denom) != BigInt::one() {
                    return Err(RationalError::NotReduced(text.to_string()));
                }
                Ok(Rat(BigRational::new(numer, denom)))
            }
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rat {
    type Err = RationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rat::parse_strict(s)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                (&self).$method(&rhs)
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_uses_integer_form_for_unit_denominator() {
        assert_eq!(Rat::from_int(7).to_string(), "7");
        assert_eq!(Rat::from_int(-3).to_string(), "-3");
        assert_eq!(Rat::zero().to_string(), "0");
        assert_eq!(Rat::ratio(1, 2).to_string(), "1/2");
        assert_eq!(Rat::ratio(-2, 4).to_string(), "-1/2");
    }

    #[test]
    fn parse_accepts_reduced_forms() {
        assert_eq!(Rat::parse_strict("5").unwrap(), Rat::from_int(5));
        assert_eq!(Rat::parse_strict("-5").unwrap(), Rat::from_int(-5));
        assert_eq!(Rat::parse_strict("1/2").unwrap(), Rat::ratio(1, 2));
        assert_eq!(Rat::parse_strict("-3/7").unwrap(), Rat::ratio(-3, 7));
        assert_eq!(Rat::parse_strict("0").unwrap(), Rat::zero());
    }

    #[test]
    fn parse_rejects_zero_denominator() {
        assert_eq!(
            Rat::parse_strict("1/0"),
            Err(RationalError::ZeroDenominator("1/0".to_string()))
        );
    }

    #[test]
    fn parse_rejects_non_reduced_and_bad_signs() {
        assert!(matches!(
            Rat::parse_strict("2/4"),
            Err(RationalError::NotReduced(_))
        ));
        assert!(matches!(
            Rat::parse_strict("0/5"),
            Err(RationalError::NotReduced(_))
        ));
        assert!(matches!(
            Rat::parse_strict("1/-2"),
            Err(RationalError::NegativeDenominator(_))
        ));
        assert!(matches!(
            Rat::parse_strict("1.5"),
            Err(RationalError::BadInteger(_))
        ));
        assert!(matches!(
            Rat::parse_strict(" 1"),
            Err(RationalError::BadInteger(_))
        ));
        assert!(matches!(Rat::parse_strict(""), Err(RationalError::Empty)));
    }

    #[test]
    fn arithmetic_reduces() {
        let half = Rat::ratio(1, 2);
        let third = Rat::ratio(1, 3);
        assert_eq!((&half + &third).to_string(), "5/6");
        assert_eq!((&half - &half).to_string(), "0");
        assert_eq!((&half * &third).to_string(), "1/6");
        assert_eq!(half.invert().unwrap().to_string(), "2");
        assert!(Rat::zero().invert().is_none());
        assert_eq!(Rat::ratio(-2, 3).pow(3).to_string(), "-8/27");
    }
}
