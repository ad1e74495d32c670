use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational number, always in lowest terms with a positive denominator.
///
/// Serializes as `"p/q"`, or `"p"` when the denominator is one.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRatError(pub String);

impl Rat {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        let denom = denom.into();
        assert!(!denom.is_zero(), "rational with zero denominator");
        Rat(BigRational::new(numer.into(), denom))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rat(self.0.recip())
    }

    /// Integer power, negative exponents allowed for nonzero values.
    pub fn pow(&self, exp: i64) -> Self {
        if exp >= 0 {
            let e = u32::try_from(exp).expect("exponent out of range");
            Rat(num_traits::Pow::pow(&self.0, e))
        } else {
            self.recip().pow(-exp)
        }
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn from_big(r: BigRational) -> Self {
        Rat(r)
    }

    /// Generalized binomial coefficient `binom(n, k)` for integer `n` and `k >= 0`;
    /// zero for negative `k`.
    pub fn binom(n: i64, k: i64) -> Self {
        if k < 0 {
            return Rat::zero();
        }
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for i in 0..k {
            num *= BigInt::from(n - i);
            den *= BigInt::from(i + 1);
        }
        Rat::new(num, den)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRatError(s.to_string());
        let t = s.trim().replace('\u{2212}', "-");
        let parse_int = |x: &str| -> Result<BigInt, ParseRatError> {
            if x.is_empty() || x.starts_with('+') {
                return Err(err());
            }
            x.parse::<BigInt>().map_err(|_| err())
        };
        match t.split_once('/') {
            None => Ok(Rat::from_int(parse_int(&t)?)),
            Some((p, q)) => {
                let q = parse_int(q)?;
                if q.is_zero() || q.is_negative() {
                    return Err(err());
                }
                Ok(Rat::new(parse_int(p)?, q))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Self {
        Rat::from_int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat((self.0).$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &'a Rat) -> Rat {
                Rat((self.0).$m(&rhs.0))
            }
        }
        impl<'a> $tr<Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat((&self.0).$m(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, rhs: &'b Rat) -> Rat {
                Rat((&self.0).$m(&rhs.0))
            }
        }
        impl $atr<Rat> for Rat {
            fn $am(&mut self, rhs: Rat) {
                (self.0).$am(rhs.0)
            }
        }
        impl<'a> $atr<&'a Rat> for Rat {
            fn $am(&mut self, rhs: &'a Rat) {
                (self.0).$am(&rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);
forward_binop!(Div, div, DivAssign, div_assign);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl<'a> Neg for &'a Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

impl Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |a, b| a * b)
    }
}

/// Least common multiple of the denominators of `values`.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = Rat::new(6, -8);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(4));
        assert_eq!(r.to_string(), "-3/4");
    }

    #[test]
    fn serializes_as_string() {
        assert_eq!(Rat::new(-1, 16).to_string(), "-1/16");
        assert_eq!(Rat::from(5).to_string(), "5");
        assert_eq!(serde_json::to_string(&Rat::new(1, 4)).unwrap(), "\"1/4\"");
        let back: Rat = serde_json::from_str("\"-1/8\"").unwrap();
        assert_eq!(back, Rat::new(-1, 8));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("1/0".parse::<Rat>().is_err());
        assert!("abc".parse::<Rat>().is_err());
        assert!("1/-2".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
        assert_eq!("\u{2212}2".parse::<Rat>().unwrap(), Rat::from(-2));
        assert_eq!(" 4/6 ".parse::<Rat>().unwrap(), Rat::new(2, 3));
    }

    #[test]
    fn binomials() {
        assert_eq!(Rat::binom(5, 2), Rat::from(10));
        assert_eq!(Rat::binom(-1, 3), Rat::from(-1));
        assert_eq!(Rat::binom(-2, 2), Rat::from(3));
        assert_eq!(Rat::binom(2, 5), Rat::zero());
        assert_eq!(Rat::binom(7, -1), Rat::zero());
    }

    #[test]
    fn powers() {
        let w = Rat::from(2);
        assert_eq!(w.pow(-3), Rat::new(1, 8));
        assert_eq!(Rat::new(-1, 2).pow(3), Rat::new(-1, 8));
        assert_eq!(Rat::zero().pow(0), Rat::one());
    }
}
