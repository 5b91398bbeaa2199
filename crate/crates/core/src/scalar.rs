//! The integer scalar abstraction shared by every module.
//!
//! All arithmetic is exact. Algorithms are written once against [`Int`] and
//! instantiated with `i64` for bounded enumeration or `BigInt` when inputs may
//! be arbitrarily large.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num::rational::Ratio;
use num::{FromPrimitive, Integer, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// An exact signed integer type usable as the scalar ring of the library.
pub trait Int:
    Integer
    + Signed
    + Clone
    + Hash
    + Debug
    + Display
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> Int for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Converts a machine integer into the scalar type.
pub fn int<T: Int>(v: i64) -> T {
    T::from_i64(v).expect("scalar type must represent small integers")
}

/// Fractional part `{x} = x - floor(x)`, always in `[0, 1)`.
pub fn frac<T: Int>(x: &Ratio<T>) -> Ratio<T> {
    x - x.floor()
}

pub fn is_integral<T: Int>(x: &Ratio<T>) -> bool {
    x.denom().is_one()
}

/// Least common multiple of the denominators of `xs` (1 for an empty slice).
pub fn common_denominator<T: Int>(xs: &[Ratio<T>]) -> T {
    xs.iter().fold(T::one(), |acc, x| acc.lcm(x.denom()))
}

/// Greatest common divisor of all entries, 0 for an empty or all-zero slice.
pub fn gcd_all<T: Int>(xs: &[T]) -> T {
    xs.iter().fold(T::zero(), |acc, x| acc.gcd(x))
}

/// Parses a decimal integer with an optional leading minus sign. Anything
/// else (plus signs, whitespace, decimal points, exponents) is rejected.
pub fn parse_int<T: Int>(s: &str) -> Result<T> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not an integer: {s:?}")));
    }
    T::from_str_radix(s, 10).map_err(|_| Error::Parse(format!("integer out of range: {s:?}")))
}

/// Parses an exact rational `p` or `p/q`; floating-point literals are refused.
pub fn parse_rational<T: Int>(s: &str) -> Result<Ratio<T>> {
    if s.contains(['.', 'e', 'E']) {
        return Err(Error::Parse(format!(
            "floating-point literal {s:?} is not allowed; write an exact fraction p/q"
        )));
    }
    match s.split_once('/') {
        None => Ok(Ratio::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let q: T = parse_int(q)?;
            if !q.is_positive() {
                return Err(Error::Parse(format!(
                    "denominator must be positive in {s:?}"
                )));
            }
            Ok(Ratio::new(parse_int(p)?, q))
        }
    }
}

/// Iterator over `from, from+1, ..., to-1` in the scalar type.
pub fn range<T: Int>(from: T, to: T) -> impl Iterator<Item = T> {
    let mut cur = from;
    std::iter::from_fn(move || {
        if cur < to {
            let out = cur.clone();
            cur = cur.clone() + T::one();
            Some(out)
        } else {
            None
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::{BigInt, Zero};

    #[test]
    fn parses_exact_rationals() {
        let r: Ratio<i64> = parse_rational("-6/4").unwrap();
        assert_eq!(r, Ratio::new(-3, 2));
        let r: Ratio<BigInt> = parse_rational("7").unwrap();
        assert_eq!(r, Ratio::from_integer(BigInt::from(7)));
    }

    #[test]
    fn refuses_floats_and_junk() {
        for bad in [
            "0.5", "1e3", "1/0", "1/-2", "+1", " 1", "", "-", "1/", "a/b",
        ] {
            assert!(parse_rational::<i64>(bad).is_err(), "{bad} accepted");
        }
    }

    #[test]
    fn fractional_part_of_negatives() {
        assert_eq!(frac(&Ratio::new(-1i64, 3)), Ratio::new(2, 3));
        assert_eq!(frac(&Ratio::new(7i64, 3)), Ratio::new(1, 3));
        assert_eq!(frac(&Ratio::from_integer(-2i64)), Ratio::zero());
    }

    #[test]
    fn range_is_half_open() {
        let v: Vec<i64> = range(1, 4).collect();
        assert_eq!(v, vec![1, 2, 3]);
        assert_eq!(range(3i64, 3).count(), 0);
    }
}
