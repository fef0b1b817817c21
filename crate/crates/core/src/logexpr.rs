//! Exact logarithmic expressions `Σ q_j · log2(m_j)` with rational `q_j`
//! and integer `m_j ≥ 2`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{format_rational, log2_bigint, to_f64, Rational};

/// Exact products larger than this many bits fall back to floating point.
const EXACT_BIT_LIMIT: u64 = 1 << 22;

/// Guard band for the floating point fallback.
pub const LOG_GUARD: f64 = 1e-9;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LogExpr {
    terms: BTreeMap<BigInt, Rational>,
}

impl LogExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `log2(m)` for a positive integer.
    pub fn log_of_int(m: &BigInt) -> Self {
        assert!(m.is_positive(), "log of a non-positive integer");
        let mut e = Self::zero();
        if !m.is_one() {
            e.terms.insert(m.clone(), Rational::one());
        }
        e
    }

    pub fn log_of_u64(m: u64) -> Self {
        Self::log_of_int(&BigInt::from(m))
    }

    /// `log2(x)` for a positive rational.
    pub fn log_of_rational(x: &Rational) -> Self {
        assert!(x.is_positive(), "log of a non-positive rational");
        Self::log_of_int(x.numer()).sub(&Self::log_of_int(x.denom()))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let v = terms.entry(m.clone()).or_insert_with(Rational::zero);
            *v += c;
            if v.is_zero() {
                terms.remove(m);
            }
        }
        Self { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigInt, &Rational)> {
        self.terms.iter()
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(m, q)| to_f64(q) * log2_bigint(m)).sum()
    }

    /// Sign of the expression. Decided exactly by comparing integer products
    /// when they are of manageable size, otherwise in floating point with a
    /// [`LOG_GUARD`] band that reports `Equal`.
    pub fn sign(&self) -> Ordering {
        if self.terms.is_empty() {
            return Ordering::Equal;
        }
        let den = self.terms.values().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let mut bits: u64 = 0;
        let mut exps = Vec::with_capacity(self.terms.len());
        for (m, q) in &self.terms {
            let e = (q * Rational::from_integer(den.clone())).to_integer();
            let ea = e.abs().to_u64();
            match ea.and_then(|ea| ea.checked_mul(m.bits())) {
                Some(b) => bits = bits.saturating_add(b),
                None => bits = u64::MAX,
            }
            exps.push((m, e));
        }
        if bits <= EXACT_BIT_LIMIT {
            let mut pos = BigInt::one();
            let mut neg = BigInt::one();
            for (m, e) in exps {
                let k = e.abs().to_u32().expect("bounded by bit limit");
                if e.is_positive() {
                    pos *= m.pow(k);
                } else {
                    neg *= m.pow(k);
                }
            }
            return pos.cmp(&neg);
        }
        let v = self.to_f64();
        if v > LOG_GUARD {
            Ordering::Greater
        } else if v < -LOG_GUARD {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }

    /// Compare `self` with `other` as real numbers.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        self.sub(other).sign()
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, q)| format!("{}*log2({m})", format_rational(q)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Serializable form: list of `[q, m]` string pairs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LogTerm {
    pub coeff: String,
    pub base: String,
}

impl From<&LogExpr> for Vec<LogTerm> {
    fn from(e: &LogExpr) -> Self {
        e.terms()
            .map(|(m, q)| LogTerm { coeff: format_rational(q), base: m.to_string() })
            .collect()
    }
}
