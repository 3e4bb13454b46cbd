//! Numeric abstraction shared by the exact (rational) and floating paths.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{FromPrimitive, Signed, ToPrimitive};
use std::fmt::Debug;

pub trait Scalar: Clone + Debug + PartialOrd + Signed + Send + Sync {
    fn from_i64(v: i64) -> Self;
    fn ratio(n: i64, d: i64) -> Self {
        Self::from_i64(n) / Self::from_i64(d)
    }
    fn to_f64(&self) -> f64;
    fn to_exact(&self) -> Option<BigRational>;
    /// Exact zero for rationals, a small absolute floor for floats.
    fn is_negligible(&self) -> bool;
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_exact(&self) -> Option<BigRational> {
        None
    }
    fn is_negligible(&self) -> bool {
        self.abs() <= 1e-12
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn to_exact(&self) -> Option<BigRational> {
        Some(self.clone())
    }
    fn is_negligible(&self) -> bool {
        num::Zero::is_zero(self)
    }
}

/// "p/q" rendering, always with an explicit denominator.
pub fn exact_repr(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses decimals ("0.25", "-1.5e-1"), integers and "p/q" into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let neg = mantissa.starts_with('-');
    let body = mantissa.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = BigRational::from_integer(digits);
    if scale >= 0 {
        q *= BigRational::from_integer(num::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num::pow(ten, (-scale) as usize));
    }
    Some(if neg { -q } else { q })
}

pub fn rational_from_f64(v: f64) -> Option<BigRational> {
    BigRational::from_f64(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(parse_rational("0.25").unwrap(), BigRational::ratio(1, 4));
        assert_eq!(parse_rational("-3/6").unwrap(), BigRational::ratio(-1, 2));
        assert_eq!(parse_rational("1.5e-1").unwrap(), BigRational::ratio(3, 20));
        assert_eq!(parse_rational("4").unwrap(), BigRational::ratio(4, 1));
        assert!(parse_rational("abc").is_none());
        assert!(parse_rational("1/0").is_none());
    }

    #[test]
    fn repr_keeps_denominator() {
        assert_eq!(exact_repr(&BigRational::ratio(6, 2)), "3/1");
        assert_eq!(exact_repr(&BigRational::ratio(-25, 36)), "-25/36");
    }
}
