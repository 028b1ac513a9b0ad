//! Exact values of the summands `A(n,k)`, the sums `s_n`, the quotients
//! `t(n,k)` and the super Catalan numbers.
//!
//! Functions suffixed `_in` take a prebuilt [`Engine`] so that sweeps share
//! one sieve and one set of valuation tables; the unsuffixed forms build an
//! engine sized for their arguments.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::exact_arith::{Engine, FactoredInteger};
use crate::{stats, Error, Result};

/// `A(n,k) = C(6k,3k) C(3k,k) C(6(n-k),3(n-k)) C(3(n-k),n-k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub n: u64,
    pub k: u64,
    pub value: BigUint,
    pub factored: FactoredInteger,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceValue {
    pub n: u64,
    /// `s_n`; negative only at `n = 0`.
    pub s: BigInt,
    /// `sum_k A(n,k)`.
    pub sum: BigUint,
    /// `(2n-1) C(3n,n)`.
    pub divisor: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperCatalanValue {
    pub a: u64,
    pub b: u64,
    pub value: BigUint,
}

fn check_k(n: u64, k: u64) -> Result<()> {
    if k > n {
        return Err(Error::out_of_range(format!("k = {k} exceeds n = {n}")));
    }
    Ok(())
}

/// `(2a)! (2b)! / (a! b! (a+b)!)`.
pub fn super_catalan(a: u64, b: u64) -> Result<SuperCatalanValue> {
    let engine = Engine::new(2 * a.max(b));
    let ratio = engine.factorial_ratio(&[2 * a, 2 * b], &[a, b, a + b])?;
    if !ratio.is_integral() {
        return Err(Error::falsified(
            "super_catalan",
            &[("a", a), ("b", b)],
            format!("not an integer: {ratio}"),
        ));
    }
    Ok(SuperCatalanValue {
        a,
        b,
        value: ratio.to_biguint()?,
    })
}

/// `C(6j,3j) C(3j,j) = (6j)! / ((3j)! j! (2j)!)` contributes these arguments.
pub fn summand_factored_in(engine: &Engine, n: u64, k: u64) -> Result<FactoredInteger> {
    check_k(n, k)?;
    let j = n - k;
    engine.factorial_ratio(&[6 * k, 6 * j], &[3 * k, k, 2 * k, 3 * j, j, 2 * j])
}

pub fn summand_in(engine: &Engine, n: u64, k: u64) -> Result<Summand> {
    let factored = summand_factored_in(engine, n, k)?;
    Ok(Summand {
        n,
        k,
        value: factored.to_biguint()?,
        factored,
    })
}

pub fn summand(n: u64, k: u64) -> Result<Summand> {
    summand_in(&Engine::for_index(n), n, k)
}

pub fn inner_sum_in(engine: &Engine, n: u64) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for k in 0..=n {
        total += summand_factored_in(engine, n, k)?.to_biguint()?;
    }
    Ok(total)
}

pub fn inner_sum(n: u64) -> Result<BigUint> {
    inner_sum_in(&Engine::for_index(n), n)
}

/// `(2n-1) C(3n,n)` as a factored value; negative at `n = 0`.
pub fn divisor_factored_in(engine: &Engine, n: u64) -> Result<FactoredInteger> {
    let binom = engine.binomial(3 * n, n)?;
    if n == 0 {
        return Ok(binom.negate());
    }
    Ok(engine.factor(2 * n - 1)?.mul(&binom))
}

/// Divides `sum` by `divisor`, failing loudly on a nonzero remainder.
pub fn s_from_sum(n: u64, sum: BigUint, divisor: BigInt) -> Result<SequenceValue> {
    if divisor.is_zero() {
        return Err(Error::DivisionByZero);
    }
    stats::record(1);
    let (s, rem) = BigInt::from(sum.clone()).div_rem(&divisor);
    if !rem.is_zero() {
        return Err(Error::falsified(
            "s",
            &[("n", n)],
            format!("integrality violated: remainder {rem}"),
        ));
    }
    Ok(SequenceValue { n, s, sum, divisor })
}

pub fn s_in(engine: &Engine, n: u64) -> Result<SequenceValue> {
    let sum = inner_sum_in(engine, n)?;
    let divisor = divisor_factored_in(engine, n)?.to_integer()?;
    s_from_sum(n, sum, divisor)
}

pub fn s(n: u64) -> Result<SequenceValue> {
    s_in(&Engine::for_index(n), n)
}

/// `s_n` for every `n` in `ns`, evaluated in parallel and returned in input order.
pub fn s_many(ns: &[u64]) -> Result<Vec<SequenceValue>> {
    let top = ns.iter().copied().max().unwrap_or(0);
    let engine = Engine::for_index(top);
    ns.par_iter().map(|&n| s_in(&engine, n)).collect()
}

/// `A(n,k) / ((2n-1) C(3n,n))` in factored form, checked to be integral.
pub fn t_factored_in(engine: &Engine, n: u64, k: u64) -> Result<FactoredInteger> {
    if n == 0 {
        return Err(Error::out_of_range("t(n,k) requires n >= 1"));
    }
    let quotient = summand_factored_in(engine, n, k)?.div(&divisor_factored_in(engine, n)?)?;
    if let Some(&(p, e)) = quotient.factors().iter().find(|f| f.1 < 0) {
        return Err(Error::falsified(
            "t",
            &[("n", n), ("k", k)],
            format!("Theorem 1 violated at ({n},{k}): prime {p} has exponent {e}"),
        ));
    }
    Ok(quotient)
}

pub fn t_in(engine: &Engine, n: u64, k: u64) -> Result<BigUint> {
    t_factored_in(engine, n, k)?.to_biguint()
}

pub fn t(n: u64, k: u64) -> Result<BigUint> {
    t_in(&Engine::for_index(n), n, k)
}

/// `C(2mk,mk) C(mk,k) C(2m(n-k),m(n-k)) C(m(n-k),n-k)` in factored form.
pub fn general_product_in(engine: &Engine, m: u64, n: u64, k: u64) -> Result<FactoredInteger> {
    if m == 0 || n == 0 {
        return Err(Error::out_of_range(format!(
            "general_product needs m, n >= 1 (m = {m}, n = {n})"
        )));
    }
    check_k(n, k)?;
    let j = n - k;
    engine.factorial_ratio(
        &[2 * m * k, 2 * m * j],
        &[m * k, k, (m - 1) * k, m * j, j, (m - 1) * j],
    )
}

pub fn general_product(m: u64, n: u64, k: u64) -> Result<FactoredInteger> {
    general_product_in(&Engine::new(2 * m * n), m, n, k)
}

/// Result of the direct factorial evaluation of `s_n`.
#[derive(Clone, Debug)]
pub struct NaiveEvaluation {
    pub value: SequenceValue,
    /// Bit length of the largest intermediate integer.
    pub peak_bits: u64,
}

/// `s_n` from big-integer factorials and exact divisions, without any
/// factorization. Serves as the baseline and as an independent oracle.
pub fn s_naive(n: u64) -> Result<NaiveEvaluation> {
    let mut needed: BTreeMap<u64, BigUint> = BTreeMap::new();
    for j in 0..=n {
        for a in [j, 2 * j, 3 * j, 6 * j] {
            needed.insert(a, BigUint::zero());
        }
    }
    let mut acc = BigUint::one();
    let mut next = 1;
    for (&a, slot) in needed.iter_mut() {
        while next <= a {
            acc *= next;
            next += 1;
        }
        *slot = acc.clone();
    }
    stats::record(6 * n);
    let peak_bits = acc.bits();
    let fact = |a: u64| &needed[&a];
    let binom = |a: u64, b: u64| -> BigUint {
        stats::record(2);
        fact(a) / (fact(b) * fact(a - b))
    };
    let mut sum = BigUint::zero();
    for k in 0..=n {
        let j = n - k;
        stats::record(3);
        sum += binom(6 * k, 3 * k) * binom(3 * k, k) * binom(6 * j, 3 * j) * binom(3 * j, j);
    }
    let c3n = binom(3 * n, n);
    let divisor = if n == 0 {
        -BigInt::from(c3n)
    } else {
        BigInt::from(c3n) * (2 * n - 1)
    };
    Ok(NaiveEvaluation {
        value: s_from_sum(n, sum, divisor)?,
        peak_bits,
    })
}

/// Largest bit length among the reconstructed summands of `s_n`.
pub fn factored_peak_bits(engine: &Engine, n: u64) -> Result<u64> {
    let mut peak = 0f64;
    for k in 0..=n {
        let ln = summand_factored_in(engine, n, k)?.ln()?;
        peak = peak.max(ln / std::f64::consts::LN_2);
    }
    Ok(peak.floor() as u64 + 1)
}
