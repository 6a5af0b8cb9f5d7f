//! Exact rational scalars.
//!
//! `BigRational` already keeps values reduced with a positive denominator,
//! so it is used directly. The helpers here cover the textual form used by
//! tuple documents: integers are written bare, other values as `"p/q"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Parses `"7"`, `"-3"` or `"p/q"`; the sign may sit on either side of the slash.
pub fn parse(text: &str) -> Result<Scalar> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not an exact rational: {text:?}"));
    match text.split_once('/') {
        None => text
            .parse::<BigInt>()
            .map(Scalar::from_integer)
            .map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Scalar::new(n, d))
        }
    }
}

/// Canonical text: lowest terms, bare integer when the denominator is 1.
pub fn format(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn is_integer(x: &Scalar) -> bool {
    x.is_integer()
}

pub fn abs(x: &Scalar) -> Scalar {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("4/6").unwrap(), frac(2, 3));
        assert_eq!(parse("-4/6").unwrap(), frac(-2, 3));
        assert_eq!(parse("4/-6").unwrap(), frac(-2, 3));
        assert_eq!(parse(" 12 ").unwrap(), int(12));
        assert_eq!(format(&frac(6, 3)), "2");
        assert_eq!(format(&frac(-1, 2)), "-1/2");
        assert!(parse("1/0").is_err());
        assert!(parse("1.5").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn lowest_terms_positive_denominator() {
        let x = frac(10, -4);
        assert_eq!(x.numer(), &BigInt::from(-5));
        assert_eq!(x.denom(), &BigInt::from(2));
    }
}
