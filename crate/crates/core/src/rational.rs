//! Exact rationals and certified intervals.

use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Arbitrary precision rational number.
pub type Rational = num_rational::BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Prints `p/q`, or `p` for integers.
pub fn format(value: &Rational) -> alloc::string::String {
    alloc::format!("{}", value)
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let numer: BigInt = numer.parse().ok()?;
    let denom: BigInt = denom.parse().ok()?;
    if denom.is_zero() {
        return None;
    }
    Some(Rational::new(numer, denom))
}

/// A value with a certified error radius. `radius == None` means the radius
/// could not be certified (for example, the defect is unknown).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub center: Rational,
    pub radius: Option<Rational>,
}

impl Interval {
    pub fn exact(center: Rational) -> Self {
        Interval {
            center,
            radius: Some(Rational::zero()),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.radius.as_ref().is_some_and(Zero::is_zero)
    }

    /// Whether `value` lies in the closed interval. Uncertified intervals
    /// contain nothing.
    pub fn contains(&self, value: &Rational) -> bool {
        match &self.radius {
            Some(r) => (&self.center - value).abs() <= *r,
            None => false,
        }
    }

    pub fn lower(&self) -> Option<Rational> {
        self.radius.as_ref().map(|r| &self.center - r)
    }

    pub fn upper(&self) -> Option<Rational> {
        self.radius.as_ref().map(|r| &self.center + r)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.radius {
            Some(r) if r.is_zero() => write!(f, "{}", self.center),
            Some(r) => write!(f, "{} +/- {}", self.center, r),
            None => write!(f, "{} +/- unknown", self.center),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("1/64"), Some(ratio(1, 64)));
        assert_eq!(parse(" -3 "), Some(int(-3)));
        assert_eq!(parse("2/4"), Some(ratio(1, 2)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
        assert_eq!(format(&ratio(1, 12)), "1/12");
        assert_eq!(format(&int(5)), "5");
    }

    #[test]
    fn interval_containment() {
        let iv = Interval {
            center: ratio(1, 2),
            radius: Some(ratio(1, 4)),
        };
        assert!(iv.contains(&ratio(3, 4)));
        assert!(!iv.contains(&ratio(4, 5)));
        let unknown = Interval {
            center: int(0),
            radius: None,
        };
        assert!(!unknown.contains(&int(0)));
    }
}
