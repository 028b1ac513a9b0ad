use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::exact_arith::Engine;
use crate::sequences::{s_in, summand_factored_in, SequenceValue};
use crate::{Error, Result};

/// `A(n,k)/A(n,k+1) - 1` evaluated two ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioWitness {
    pub n: u64,
    pub k: u64,
    /// From the exact summand values.
    pub lhs: BigRational,
    /// `(36nk+31n-36k^2-36k-5)(n-2k-1) / ((6k+5)(6k+1)(n-k)^2)`.
    pub rhs: BigRational,
}

impl RatioWitness {
    pub fn is_nonnegative(&self) -> bool {
        !self.lhs.is_negative()
    }
}

fn ratio_rhs(n: u64, k: u64) -> BigRational {
    let (n, k) = (BigInt::from(n), BigInt::from(k));
    let poly = BigInt::from(36) * &n * &k + BigInt::from(31) * &n
        - BigInt::from(36) * &k * &k
        - BigInt::from(36) * &k
        - 5;
    let numer = poly * (&n - BigInt::from(2) * &k - 1);
    let nk = &n - &k;
    let denom = (BigInt::from(6) * &k + 5) * (BigInt::from(6) * &k + 1) * &nk * &nk;
    BigRational::new(numer, denom)
}

pub fn ratio_identity_in(engine: &Engine, n: u64, k: u64) -> Result<RatioWitness> {
    if n < 2 || 2 * k >= n {
        return Err(Error::out_of_range(format!(
            "ratio identity needs n >= 2 and 0 <= k < n/2 (n = {n}, k = {k})"
        )));
    }
    let a0 = BigInt::from(summand_factored_in(engine, n, k)?.to_biguint()?);
    let a1 = BigInt::from(summand_factored_in(engine, n, k + 1)?.to_biguint()?);
    let lhs = BigRational::new(a0, a1) - BigRational::one();
    let rhs = ratio_rhs(n, k);
    if lhs != rhs {
        return Err(Error::falsified(
            "ratio_identity",
            &[("n", n), ("k", k)],
            format!("A(n,k)/A(n,k+1) - 1 = {lhs} but the closed form gives {rhs}"),
        ));
    }
    Ok(RatioWitness { n, k, lhs, rhs })
}

pub fn ratio_identity(n: u64, k: u64) -> Result<RatioWitness> {
    ratio_identity_in(&Engine::for_index(n), n, k)
}

/// `A(n,0) >= A(n,1) >= ... >= A(n, ceil(n/2))`.
pub fn check_monotone_in(engine: &Engine, n: u64) -> Result<bool> {
    if n < 2 {
        return Err(Error::out_of_range(format!(
            "monotone chain needs n >= 2 (n = {n})"
        )));
    }
    let mut prev: Option<BigUint> = None;
    for k in 0..=n.div_ceil(2) {
        let a = summand_factored_in(engine, n, k)?.to_biguint()?;
        if prev.as_ref().is_some_and(|p| *p < a) {
            return Ok(false);
        }
        prev = Some(a);
    }
    Ok(true)
}

pub fn check_monotone(n: u64) -> Result<bool> {
    check_monotone_in(&Engine::for_index(n), n)
}

/// `A(n,0)` is the largest summand and `2 A(n,0) <= sum_k A(n,k) <= (n+1) A(n,0)`.
pub fn check_sum_sandwich_in(engine: &Engine, n: u64) -> Result<bool> {
    let summands: Vec<BigUint> = (0..=n)
        .map(|k| summand_factored_in(engine, n, k)?.to_biguint())
        .collect::<Result<_>>()?;
    let a0 = &summands[0];
    let largest = summands.iter().max().expect("n + 1 summands");
    let sum: BigUint = summands.iter().sum();
    let lower = if n >= 1 { a0 * 2u32 } else { a0.clone() };
    Ok(largest == a0 && lower <= sum && sum <= a0 * (n + 1))
}

/// Ratio identity for all `k < n/2`, the monotone chain and the sum sandwich,
/// for every `n` in range (`n >= 2`).
pub fn theorem2_range(ns: RangeInclusive<u64>) -> Result<usize> {
    let engine = Engine::for_index(*ns.end());
    let ns: Vec<u64> = ns.collect();
    let counts: Vec<usize> = ns
        .par_iter()
        .map(|&n| {
            let mut count = 0;
            for k in 0..n.div_ceil(2) {
                let w = ratio_identity_in(&engine, n, k)?;
                if !w.is_nonnegative() {
                    return Err(Error::falsified(
                        "ratio_identity",
                        &[("n", n), ("k", k)],
                        format!("negative ratio {}", w.lhs),
                    ));
                }
                count += 1;
            }
            if !check_monotone_in(&engine, n)? {
                return Err(Error::falsified(
                    "check_monotone",
                    &[("n", n)],
                    "summands not decreasing",
                ));
            }
            if !check_sum_sandwich_in(&engine, n)? {
                return Err(Error::falsified(
                    "check_sum_sandwich",
                    &[("n", n)],
                    "2 A(n,0) <= sum <= (n+1) A(n,0) fails",
                ));
            }
            Ok(count + 2)
        })
        .collect::<Result<_>>()?;
    Ok(counts.into_iter().sum())
}

/// `2 C(6n,3n)/(2n-1) <= s_n <= (n+1) C(6n,3n)/(2n-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsReport {
    pub n: u64,
    pub lower: BigRational,
    pub upper: BigRational,
    pub s: BigInt,
}

impl BoundsReport {
    pub fn lower_tight(&self) -> bool {
        self.lower == BigRational::from_integer(self.s.clone())
    }

    pub fn upper_tight(&self) -> bool {
        self.upper == BigRational::from_integer(self.s.clone())
    }
}

/// Bounds check against an already computed `s_n`.
pub fn bounds_for(engine: &Engine, value: &SequenceValue) -> Result<BoundsReport> {
    let n = value.n;
    if n == 0 {
        return Err(Error::out_of_range("bounds need n >= 1"));
    }
    let central = BigInt::from(engine.binomial(6 * n, 3 * n)?.to_biguint()?);
    let lower = BigRational::new(&central * 2, BigInt::from(2 * n - 1));
    let upper = BigRational::new(&central * (n + 1), BigInt::from(2 * n - 1));
    let s = BigRational::from_integer(value.s.clone());
    if s < lower || s > upper {
        return Err(Error::falsified(
            "check_bounds",
            &[("n", n)],
            format!("s_n = {} outside [{lower}, {upper}]", value.s),
        ));
    }
    Ok(BoundsReport {
        n,
        lower,
        upper,
        s: value.s.clone(),
    })
}

pub fn check_bounds(n: u64) -> Result<BoundsReport> {
    let engine = Engine::for_index(n);
    bounds_for(&engine, &s_in(&engine, n)?)
}

/// Bounds reports for every `n` in range, in order.
pub fn bounds_range(ns: RangeInclusive<u64>) -> Result<Vec<BoundsReport>> {
    let engine = Engine::for_index(*ns.end());
    let ns: Vec<u64> = ns.collect();
    ns.par_iter()
        .map(|&n| bounds_for(&engine, &s_in(&engine, n)?))
        .collect()
}
