//! Exact scalar fields: the rationals and prime fields GF(p).
//!
//! Prime fields are parameterised by a const generic modulus so that the
//! hot elimination loops stay on plain `u64` arithmetic. The default prime
//! used throughout the crate is the Mersenne prime 2^61 - 1.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// An exact field usable by the linear algebra and geometry layers.
pub trait Field:
    Clone
    + Eq
    + Hash
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;

    /// Draw from the sampling set used by randomized genericity checks.
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Size of the set [`Field::random`] samples from; drives the
    /// Schwartz-Zippel false-negative bound.
    fn sample_set_size() -> f64;

    /// Number of field elements, `None` for infinite fields.
    fn order() -> Option<u64>;

    fn name() -> &'static str;

    fn to_text(&self) -> String;
    fn from_text(s: &str) -> Result<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|inv| self.clone() * inv)
    }
}

/// The prime field GF(P). `P` must be prime and below 2^63.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf<const P: u64>(u64);

/// 2^61 - 1.
pub const MERSENNE_61: u64 = (1u64 << 61) - 1;

pub type Gf61 = Gf<MERSENNE_61>;

impl<const P: u64> Gf<P> {
    pub fn new(v: u64) -> Self {
        Gf(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Gf(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> Debug for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Display for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Gf<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Gf(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Gf<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Gf(if self.0 >= rhs.0 { self.0 - rhs.0 } else { self.0 + P - rhs.0 })
    }
}

impl<const P: u64> Mul for Gf<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Gf(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Neg for Gf<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Gf(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> Field for Gf<P> {
    fn zero() -> Self {
        Gf(0)
    }
    fn one() -> Self {
        Gf(1 % P)
    }
    fn from_i64(v: i64) -> Self {
        Gf(v.rem_euclid(P as i64) as u64)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Gf(rng.gen_range(0..P))
    }
    fn sample_set_size() -> f64 {
        P as f64
    }
    fn order() -> Option<u64> {
        Some(P)
    }
    fn name() -> &'static str {
        if P == MERSENNE_61 {
            "gf61"
        } else {
            "gf"
        }
    }
    fn to_text(&self) -> String {
        self.0.to_string()
    }
    fn from_text(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('-') {
            let v: u64 = rest.parse().map_err(|_| Error::Parse(format!("bad field element {s:?}")))?;
            return Ok(-Gf::new(v));
        }
        let v: u64 = s.parse().map_err(|_| Error::Parse(format!("bad field element {s:?}")))?;
        Ok(Gf::new(v))
    }
}

/// Rational sampling draws integers from `[-RATIONAL_SAMPLE_RADIUS, RATIONAL_SAMPLE_RADIUS]`.
pub const RATIONAL_SAMPLE_RADIUS: i64 = 1 << 20;

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::from_i64(rng.gen_range(-RATIONAL_SAMPLE_RADIUS..=RATIONAL_SAMPLE_RADIUS))
    }
    fn sample_set_size() -> f64 {
        (2 * RATIONAL_SAMPLE_RADIUS + 1) as f64
    }
    fn order() -> Option<u64> {
        None
    }
    fn name() -> &'static str {
        "rational"
    }
    fn to_text(&self) -> String {
        crate::rational::format_rational(self)
    }
    fn from_text(s: &str) -> Result<Self> {
        crate::rational::parse_rational(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    type F7 = Gf<7>;

    #[test]
    fn small_prime_arithmetic() {
        let a = F7::from_i64(3);
        let b = F7::from_i64(5);
        assert_eq!((a + b).value(), 1);
        assert_eq!((a - b).value(), 5);
        assert_eq!((a * b).value(), 1);
        assert_eq!((-a).value(), 4);
        assert_eq!(F7::from_i64(-1).value(), 6);
        for v in 1..7 {
            let x = F7::from_i64(v);
            assert_eq!(x * x.inv().unwrap(), F7::one());
        }
        assert!(F7::zero().inv().is_none());
    }

    #[test]
    fn mersenne_inverse_and_text() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let x = Gf61::random(&mut rng);
            if !x.is_zero() {
                assert_eq!(x * x.inv().unwrap(), Gf61::one());
            }
            assert_eq!(Gf61::from_text(&x.to_text()).unwrap(), x);
        }
        assert_eq!(Gf61::from_text("-1").unwrap(), -Gf61::one());
    }

    #[test]
    fn rational_field_roundtrip() {
        let x = BigRational::new(BigInt::from(-3), BigInt::from(4));
        assert_eq!(x.to_text(), "-3/4");
        assert_eq!(BigRational::from_text("-3/4").unwrap(), x);
        assert_eq!(Field::inv(&x).unwrap() * x, <BigRational as Field>::one());
    }
}
