use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::{stats, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn mul(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

/// A signed rational stored as `sign * prod p^e` with primes ascending.
///
/// Zero has no factors. No stored exponent is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredInteger {
    sign: Sign,
    factors: Vec<(u64, i64)>,
}

impl Default for FactoredInteger {
    fn default() -> Self {
        Self::one()
    }
}

impl FactoredInteger {
    pub fn one() -> Self {
        FactoredInteger {
            sign: Sign::Positive,
            factors: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        FactoredInteger {
            sign: Sign::Zero,
            factors: Vec::new(),
        }
    }

    /// Builds a value from `(prime, exponent)` pairs in any order. Repeated
    /// primes are merged and zero exponents dropped. The caller guarantees
    /// that every base is prime.
    pub fn from_factors(sign: Sign, factors: impl IntoIterator<Item = (u64, i64)>) -> Self {
        if sign == Sign::Zero {
            return Self::zero();
        }
        let mut factors: Vec<(u64, i64)> = factors.into_iter().collect();
        factors.sort_unstable_by_key(|&(p, _)| p);
        let mut merged: Vec<(u64, i64)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            match merged.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => merged.push((p, e)),
            }
        }
        merged.retain(|&(_, e)| e != 0);
        FactoredInteger {
            sign,
            factors: merged,
        }
    }

    /// Wraps factors already sorted by prime with no zero exponents.
    pub(crate) fn from_sorted(factors: Vec<(u64, i64)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(factors.iter().all(|&(_, e)| e != 0));
        FactoredInteger {
            sign: Sign::Positive,
            factors,
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn factors(&self) -> &[(u64, i64)] {
        &self.factors
    }

    pub fn exponent(&self, prime: u64) -> i64 {
        self.factors
            .binary_search_by_key(&prime, |&(p, _)| p)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    pub fn is_one(&self) -> bool {
        self.sign == Sign::Positive && self.factors.is_empty()
    }

    /// True iff the value is an integer, i.e. no exponent is negative.
    pub fn is_integral(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e >= 0)
    }

    pub fn negate(mut self) -> Self {
        self.sign = match self.sign {
            Sign::Negative => Sign::Positive,
            Sign::Positive => Sign::Negative,
            Sign::Zero => Sign::Zero,
        };
        self
    }

    pub fn mul(&self, other: &Self) -> Self {
        let sign = self.sign.mul(other.sign);
        if sign == Sign::Zero {
            return Self::zero();
        }
        FactoredInteger {
            sign,
            factors: merge(&self.factors, &other.factors, 1),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let sign = self.sign.mul(other.sign);
        if sign == Sign::Zero {
            return Ok(Self::zero());
        }
        Ok(FactoredInteger {
            sign,
            factors: merge(&self.factors, &other.factors, -1),
        })
    }

    pub fn pow(&self, exp: u32) -> Self {
        if exp == 0 {
            return Self::one();
        }
        let sign = if self.sign == Sign::Negative && exp.is_multiple_of(2) {
            Sign::Positive
        } else {
            self.sign
        };
        FactoredInteger {
            sign,
            factors: self
                .factors
                .iter()
                .map(|&(p, e)| (p, e * i64::from(exp)))
                .collect(),
        }
    }

    /// Componentwise minimum of exponents (the gcd for integral positive values).
    pub fn min_exponents(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.factors, &other.factors);
        while i < a.len() || j < b.len() {
            let (p, e) = match (a.get(i), b.get(j)) {
                (Some(&(p, e)), Some(&(q, f))) => match p.cmp(&q) {
                    Ordering::Less => {
                        i += 1;
                        (p, e.min(0))
                    }
                    Ordering::Greater => {
                        j += 1;
                        (q, f.min(0))
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (p, e.min(f))
                    }
                },
                (Some(&(p, e)), None) => {
                    i += 1;
                    (p, e.min(0))
                }
                (None, Some(&(q, f))) => {
                    j += 1;
                    (q, f.min(0))
                }
                (None, None) => unreachable!(),
            };
            if e != 0 {
                out.push((p, e));
            }
        }
        FactoredInteger {
            sign: Sign::Positive,
            factors: out,
        }
    }

    /// Reconstructs the exact integer. Fails if any exponent is negative.
    pub fn to_integer(&self) -> Result<BigInt> {
        if let Some(&(prime, exponent)) = self.factors.iter().find(|&&(_, e)| e < 0) {
            return Err(Error::NegativeExponent { prime, exponent });
        }
        let magnitude = power_product(self.factors.iter().copied());
        Ok(match self.sign {
            Sign::Zero => BigInt::default(),
            Sign::Positive => BigInt::from(magnitude),
            Sign::Negative => -BigInt::from(magnitude),
        })
    }

    /// Unsigned magnitude of an integral value.
    pub fn to_biguint(&self) -> Result<BigUint> {
        self.to_integer().map(|v| v.magnitude().clone())
    }

    /// Numerator and denominator magnitudes (coprime by construction).
    pub fn numer_denom(&self) -> (BigUint, BigUint) {
        if self.is_zero() {
            return (BigUint::default(), BigUint::one());
        }
        let numer = power_product(self.factors.iter().filter(|f| f.1 > 0).copied());
        let denom = power_product(
            self.factors
                .iter()
                .filter(|f| f.1 < 0)
                .map(|&(p, e)| (p, -e)),
        );
        (numer, denom)
    }

    pub fn to_rational(&self) -> BigRational {
        let (n, d) = self.numer_denom();
        let n = match self.sign {
            Sign::Negative => -BigInt::from(n),
            _ => BigInt::from(n),
        };
        BigRational::new_raw(n, BigInt::from(d))
    }

    /// Natural logarithm of a positive value, `sum e_p ln p` with Neumaier
    /// compensated summation. Relative error is a small multiple of machine
    /// epsilon times the number of factors.
    pub fn ln(&self) -> Result<f64> {
        if self.sign != Sign::Positive {
            return Err(Error::NonPositive);
        }
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for &(p, e) in &self.factors {
            let term = e as f64 * (p as f64).ln();
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
        }
        Ok(sum + comp)
    }
}

fn merge(a: &[(u64, i64)], b: &[(u64, i64)], b_scale: i64) -> Vec<(u64, i64)> {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (p, e) = a[i];
        let (q, f) = b[j];
        match p.cmp(&q) {
            Ordering::Less => {
                out.push((p, e));
                i += 1;
            }
            Ordering::Greater => {
                out.push((q, b_scale * f));
                j += 1;
            }
            Ordering::Equal => {
                let s = e + b_scale * f;
                if s != 0 {
                    out.push((p, s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|&(q, f)| (q, b_scale * f)));
    out
}

/// `prod p^e` over nonnegative exponents: binary powers, then a balanced product.
fn power_product(factors: impl Iterator<Item = (u64, i64)>) -> BigUint {
    let powers: Vec<BigUint> = factors
        .map(|(p, e)| {
            debug_assert!(e >= 0);
            if e == 1 {
                BigUint::from(p)
            } else {
                stats::record(1);
                BigUint::from(p).pow(e as u32)
            }
        })
        .collect();
    product_tree(powers)
}

/// Multiplies values pairwise, level by level, so operands stay balanced.
pub(crate) fn product_tree(mut level: Vec<BigUint>) -> BigUint {
    if level.is_empty() {
        return BigUint::one();
    }
    while level.len() > 1 {
        stats::record(level.len() as u64 / 2);
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut iter = level.into_iter();
        while let Some(a) = iter.next() {
            match iter.next() {
                Some(b) => next.push(a * b),
                None => next.push(a),
            }
        }
        level = next;
    }
    level.pop().unwrap()
}

impl Mul for &FactoredInteger {
    type Output = FactoredInteger;

    fn mul(self, rhs: &FactoredInteger) -> FactoredInteger {
        FactoredInteger::mul(self, rhs)
    }
}

/// Canonical text form: `+2^2 * 3^1 * 7^1`, `-1`, `+1`, `0`.
impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.sign {
            Sign::Zero => return write!(f, "0"),
            Sign::Positive => '+',
            Sign::Negative => '-',
        };
        if self.factors.is_empty() {
            return write!(f, "{sign}1");
        }
        write!(f, "{sign}")?;
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "{p}^{e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed factored integer: {0}")]
pub struct ParseFactoredError(String);

impl FromStr for FactoredInteger {
    type Err = ParseFactoredError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let bad = || ParseFactoredError(s.to_string());
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let (sign, body) = match s.split_at_checked(1) {
            Some(("+", rest)) => (Sign::Positive, rest),
            Some(("-", rest)) => (Sign::Negative, rest),
            _ => return Err(bad()),
        };
        if body == "1" {
            return Ok(FactoredInteger {
                sign,
                factors: Vec::new(),
            });
        }
        let mut factors = Vec::new();
        for term in body.split(" * ") {
            let (p, e) = term.split_once('^').ok_or_else(bad)?;
            let p: u64 = p.parse().map_err(|_| bad())?;
            let e: i64 = e.parse().map_err(|_| bad())?;
            if e == 0 || factors.last().is_some_and(|&(q, _)| q >= p) {
                return Err(bad());
            }
            factors.push((p, e));
        }
        Ok(FactoredInteger { sign, factors })
    }
}
