//! Exact scalar field abstraction.
//!
//! Everything in the engine is generic over [`Scalar`], an exact field. The
//! canonical instance is [`Rational`](crate::Rational) (arbitrary precision);
//! `Ratio<i64>` also satisfies the bound and is handy in small tests. Floating
//! point types are deliberately not given an alias: every verdict the engine
//! produces is an exact equality test.

use std::fmt::{Debug, Display};
use std::ops::Neg;
use std::str::FromStr;

use num_traits::{FromPrimitive, Num, Signed};

use crate::error::{Error, Result};

/// An exact field element.
pub trait Scalar:
    Clone + PartialEq + Debug + Display + Num + Signed + Neg<Output = Self> + FromPrimitive + Send + Sync + 'static
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every exact field contains the integers")
    }

    /// Division that reports a zero divisor instead of panicking.
    fn checked_quotient(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.clone() / rhs.clone())
    }
}

impl<T> Scalar for T where
    T: Clone + PartialEq + Debug + Display + Num + Signed + Neg<Output = T> + FromPrimitive + Send + Sync + 'static
{
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn rational_arith<T: Scalar>(a: &T, b: &T, op: ArithOp) -> Result<T> {
    match op {
        ArithOp::Add => Ok(a.clone() + b.clone()),
        ArithOp::Sub => Ok(a.clone() - b.clone()),
        ArithOp::Mul => Ok(a.clone() * b.clone()),
        ArithOp::Div => a.checked_quotient(b),
    }
}

/// Parses an exact rational written as an integer (`"-6"`) or a fraction
/// (`"3/4"`). Decimal points and exponents are rejected.
pub fn parse_exact<T>(text: &str) -> Result<T>
where
    T: Scalar + FromStr,
{
    let trimmed = text.trim();
    let malformed = || Error::MalformedRational(text.to_string());
    if trimmed.is_empty() || trimmed.contains(['.', 'e', 'E', ' ']) {
        return Err(malformed());
    }
    if let Some((_, den)) = trimmed.split_once('/') {
        if den.trim_start_matches('+').chars().all(|c| c == '0') {
            return Err(malformed());
        }
    }
    trimmed.parse::<T>().map_err(|_| malformed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_rational::Ratio;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn adds_fractions_exactly() {
        assert_eq!(rational_arith(&q(1, 2), &q(1, 3), ArithOp::Add).unwrap(), q(5, 6));
    }

    #[test]
    fn zero_annihilates() {
        for x in [q(7, 3), q(-5, 2), q(0, 1)] {
            assert_eq!(rational_arith(&x, &q(0, 1), ArithOp::Mul).unwrap(), q(0, 1));
        }
    }

    #[test]
    fn divides_negative_integers() {
        assert_eq!(rational_arith(&q(-6, 1), &q(-2, 1), ArithOp::Div).unwrap(), q(3, 1));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let err = rational_arith(&q(1, 1), &q(0, 1), ArithOp::Div).unwrap_err();
        assert!(matches!(err, Error::DivisionByZero));
    }

    #[test]
    fn canonical_form() {
        let x = q(6, -4);
        assert_eq!(x.numer(), &(-3).into());
        assert_eq!(x.denom(), &2.into());
        assert_eq!(x.to_string(), "-3/2");
    }

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_exact::<Rational>("-6").unwrap(), q(-6, 1));
        assert_eq!(parse_exact::<Rational>(" 4/6 ").unwrap(), q(2, 3));
        assert_eq!(parse_exact::<Ratio<i64>>("-1/2").unwrap(), Ratio::new(-1, 2));
    }

    #[test]
    fn rejects_inexact_or_broken_text() {
        for bad in ["0.5", "1e3", "", "1/0", "a/b", "1/2/3", "1 /2"] {
            assert!(parse_exact::<Rational>(bad).is_err(), "{bad:?} should be rejected");
        }
    }
}
