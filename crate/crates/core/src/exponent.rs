//! Positive rational exponents for scale changes.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// `p/q` with `p, q >= 1`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalExponent {
    p: u64,
    q: u64,
}

impl RationalExponent {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidExponent(format!("{p}/{q} is not positive")));
        }
        let g = gcd(p, q);
        Ok(Self { p: p / g, q: q / g })
    }

    pub const ONE: Self = Self { p: 1, q: 1 };

    /// Accepts `"p/q"` or a bare integer `"p"`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidExponent(format!("cannot parse {text:?}"));
        let (p, q) = match text.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (text.trim(), "1"),
        };
        Self::new(p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?)
    }

    pub fn numer(self) -> u64 {
        self.p
    }

    pub fn denom(self) -> u64 {
        self.q
    }

    pub fn value(self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

impl fmt::Display for RationalExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl Serialize for RationalExponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let k = RationalExponent::new(4, 6).unwrap();
        assert_eq!((k.numer(), k.denom()), (2, 3));
        assert_eq!(k.to_string(), "2/3");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(
            RationalExponent::parse("2").unwrap(),
            RationalExponent::new(2, 1).unwrap()
        );
        assert_eq!(RationalExponent::parse(" 3/9").unwrap().to_string(), "1/3");
        assert!(RationalExponent::parse("0/1").is_err());
        assert!(RationalExponent::parse("-1/2").is_err());
        assert!(RationalExponent::parse("x").is_err());
    }
}
