//! Exact rational helpers: `"p/q"` text form and small constructors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Integers print bare, everything else as `p/q` in lowest terms.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // numerator or denominator too large for a direct conversion
        let n = x.numer().bits() as i64;
        let d = x.denom().bits() as i64;
        let shift = (n.max(d) - 60).max(0) as usize;
        let nn = (x.numer() >> shift).to_f64().unwrap_or(0.0);
        let dd = (x.denom() >> shift).to_f64().unwrap_or(1.0);
        nn / dd
    })
}

/// `log2` of a positive big integer, accurate to double precision.
pub fn log2_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 60 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 60;
    (x >> shift).to_f64().unwrap().log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_forms() {
        assert_eq!(format_rational(&ratio(6, 4)), "3/2");
        assert_eq!(format_rational(&int(-5)), "-5");
        assert_eq!(parse_rational(" 3 / 2 ").unwrap(), ratio(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn huge_log() {
        let big = BigInt::from(1u8) << 200usize;
        assert!((log2_bigint(&big) - 200.0).abs() < 1e-9);
        assert!((to_f64(&BigRational::new(big.clone() * 3, big)) - 3.0).abs() < 1e-12);
    }
}
