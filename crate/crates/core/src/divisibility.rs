//! Certificate-producing checks for the integrality of `t(n,k)` and the
//! lemmas behind it: the general-`m` product divisibility, its factorial
//! rewriting, the `(2n-1)` divisibility of the factorial ratio, the floor
//! inequality with its exception set, and the reduction at `p = 3`.
//!
//! Boolean checks return `Ok(false)` on a failed claim; the `*_range` batch
//! drivers turn the first failure into [`Error::Falsified`].

use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::exact_arith::{binomial, Engine, FactoredInteger};
use crate::sequences::{divisor_factored_in, general_product_in, summand_factored_in};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeMargin {
    pub prime: u64,
    /// Valuation of the summand `A(n,k)`.
    pub numerator: u64,
    /// Valuation of `(2n-1) C(3n,n)`.
    pub denominator: u64,
}

impl PrimeMargin {
    pub fn margin(&self) -> i64 {
        self.numerator as i64 - self.denominator as i64
    }
}

/// Witness that `(2n-1) C(3n,n)` divides `A(n,k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityCertificate {
    pub n: u64,
    pub k: u64,
    pub quotient: BigUint,
    /// Primes with a nonzero valuation on either side, ascending.
    pub margins: Vec<PrimeMargin>,
    /// Whether `C(n,k)` divides the quotient.
    pub cnk_divides: bool,
}

fn check_nk(n: u64, k: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::out_of_range("n must be at least 1"));
    }
    if k > n {
        return Err(Error::out_of_range(format!("k = {k} exceeds n = {n}")));
    }
    Ok(())
}

fn exponent_or_zero(x: &FactoredInteger, p: u64) -> u64 {
    x.exponent(p).max(0) as u64
}

pub fn certify_theorem1_in(engine: &Engine, n: u64, k: u64) -> Result<DivisibilityCertificate> {
    check_nk(n, k)?;
    let params = [("n", n), ("k", k)];
    let numer = summand_factored_in(engine, n, k)?;
    let denom = divisor_factored_in(engine, n)?;

    let mut primes: Vec<u64> = numer
        .factors()
        .iter()
        .chain(denom.factors())
        .map(|&(p, _)| p)
        .collect();
    primes.sort_unstable();
    primes.dedup();
    let margins: Vec<PrimeMargin> = primes
        .into_iter()
        .map(|p| PrimeMargin {
            prime: p,
            numerator: exponent_or_zero(&numer, p),
            denominator: exponent_or_zero(&denom, p),
        })
        .collect();
    if let Some(bad) = margins.iter().find(|m| m.margin() < 0) {
        return Err(Error::falsified(
            "certify_theorem1",
            &params,
            format!(
                "negative margin at prime {}: {} < {}",
                bad.prime, bad.numerator, bad.denominator
            ),
        ));
    }
    let quotient = numer.div(&denom)?.to_biguint()?;

    // (1/(2n-1)) * (6k)!(6n-6k)!/((3k)!(3n-3k)!(3n)!) * C(2n,2k) * C(n,k)
    let bracket = engine
        .factorial_ratio(&[6 * k, 6 * (n - k)], &[3 * k, 3 * (n - k), 3 * n])?
        .to_rational();
    let cnk = binomial(n, k)?;
    let rewritten = bracket
        * BigRational::new(
            BigInt::from(binomial(2 * n, 2 * k)?) * BigInt::from(cnk.clone()),
            BigInt::from(2 * n - 1),
        );
    if rewritten != BigRational::from_integer(BigInt::from(quotient.clone())) {
        return Err(Error::falsified(
            "certify_theorem1",
            &params,
            format!("rewritten form {rewritten} differs from quotient {quotient}"),
        ));
    }

    let cnk_divides = quotient.is_multiple_of(&cnk);
    Ok(DivisibilityCertificate {
        n,
        k,
        quotient,
        margins,
        cnk_divides,
    })
}

pub fn certify_theorem1(n: u64, k: u64) -> Result<DivisibilityCertificate> {
    certify_theorem1_in(&Engine::for_index(n), n, k)
}

/// Certifies every `(n, k)` with `n` in `ns`, `0 <= k <= n`. A certificate
/// whose quotient is not divisible by `C(n,k)` is a falsification.
pub fn certify_range(ns: RangeInclusive<u64>) -> Result<usize> {
    let engine = Engine::for_index(*ns.end());
    let pairs: Vec<(u64, u64)> = ns.flat_map(|n| (0..=n).map(move |k| (n, k))).collect();
    pairs.par_iter().try_for_each(|&(n, k)| {
        let cert = certify_theorem1_in(&engine, n, k)?;
        if !cert.cnk_divides {
            return Err(Error::falsified(
                "certify_theorem1",
                &[("n", n), ("k", k)],
                "C(n,k) does not divide the quotient",
            ));
        }
        Ok(())
    })?;
    Ok(pairs.len())
}

fn check_mnk(m: u64, n: u64, k: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::out_of_range("m must be at least 1"));
    }
    check_nk(n, k)
}

/// `C(mn,n)` divides the general-`m` product.
pub fn check_lemma1_in(engine: &Engine, m: u64, n: u64, k: u64) -> Result<bool> {
    check_mnk(m, n, k)?;
    let product = general_product_in(engine, m, n, k)?;
    Ok(product.div(&engine.binomial(m * n, n)?)?.is_integral())
}

pub fn check_lemma1(m: u64, n: u64, k: u64) -> Result<bool> {
    check_lemma1_in(&Engine::new(2 * m * n), m, n, k)
}

/// The general-`m` product over `C(mn,n)` equals
/// `(2mk)!(2mn-2mk)!/((mk)!(mn-mk)!(mn)!) * C((m-1)n,(m-1)k) * C(n,k)`.
pub fn check_eq_mkmk_in(engine: &Engine, m: u64, n: u64, k: u64) -> Result<bool> {
    check_mnk(m, n, k)?;
    let lhs = general_product_in(engine, m, n, k)?
        .div(&engine.binomial(m * n, n)?)?
        .to_rational();
    let (mk, mn) = (m * k, m * n);
    let catalan_part = engine
        .factorial_ratio(&[2 * mk, 2 * (mn - mk)], &[mk, mn - mk, mn])?
        .to_rational();
    let binomials =
        BigInt::from(binomial((m - 1) * n, (m - 1) * k)?) * BigInt::from(binomial(n, k)?);
    let rhs = catalan_part * BigRational::from_integer(binomials);
    Ok(lhs == rhs)
}

pub fn check_eq_mkmk(m: u64, n: u64, k: u64) -> Result<bool> {
    check_eq_mkmk_in(&Engine::new(2 * m * n), m, n, k)
}

/// Runs [`check_lemma1_in`] and [`check_eq_mkmk_in`] over `1..=m_max`,
/// `1..=n_max` and all `k`.
pub fn lemma1_range(m_max: u64, n_max: u64) -> Result<usize> {
    let engine = Engine::new(2 * m_max * n_max);
    let triples: Vec<(u64, u64, u64)> = (1..=m_max)
        .flat_map(|m| (1..=n_max).flat_map(move |n| (0..=n).map(move |k| (m, n, k))))
        .collect();
    triples.par_iter().try_for_each(|&(m, n, k)| {
        let params = [("m", m), ("n", n), ("k", k)];
        if !check_lemma1_in(&engine, m, n, k)? {
            return Err(Error::falsified(
                "check_lemma1",
                &params,
                "C(mn,n) does not divide the product",
            ));
        }
        if !check_eq_mkmk_in(&engine, m, n, k)? {
            return Err(Error::falsified(
                "check_eq_mkmk",
                &params,
                "factorial rewriting differs",
            ));
        }
        Ok(())
    })?;
    Ok(triples.len())
}

/// `(6k)!(6n-6k)!(2n)!(2n-2)! / [(3k)!(3n-3k)!(3n)!(2k)!(2n-2k)!(2n-1)!]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma2Witness {
    pub n: u64,
    pub k: u64,
    pub factored_ratio: FactoredInteger,
    pub integral: bool,
}

pub fn check_lemma2_in(engine: &Engine, n: u64, k: u64) -> Result<Lemma2Witness> {
    check_nk(n, k)?;
    let j = n - k;
    let factored_ratio = engine.factorial_ratio(
        &[6 * k, 6 * j, 2 * n, 2 * n - 2],
        &[3 * k, 3 * j, 3 * n, 2 * k, 2 * j, 2 * n - 1],
    )?;
    let integral = factored_ratio.is_integral();
    Ok(Lemma2Witness {
        n,
        k,
        factored_ratio,
        integral,
    })
}

pub fn check_lemma2(n: u64, k: u64) -> Result<Lemma2Witness> {
    check_lemma2_in(&Engine::for_index(n), n, k)
}

pub fn lemma2_range(ns: RangeInclusive<u64>) -> Result<usize> {
    let engine = Engine::for_index(*ns.end());
    let pairs: Vec<(u64, u64)> = ns.flat_map(|n| (0..=n).map(move |k| (n, k))).collect();
    pairs.par_iter().try_for_each(|&(n, k)| {
        let w = check_lemma2_in(&engine, n, k)?;
        if !w.integral {
            return Err(Error::falsified(
                "check_lemma2",
                &[("n", n), ("k", k)],
                format!("ratio is not integral: {}", w.factored_ratio),
            ));
        }
        Ok(())
    })?;
    Ok(pairs.len())
}

/// `(2n-1)` divides `C(6n,3n)`, by big-integer remainder.
pub fn check_corollary(n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::out_of_range("n must be at least 1"));
    }
    Ok((binomial(6 * n, 3 * n)? % (2 * n - 1)).is_zero())
}

pub fn corollary_range(ns: RangeInclusive<u64>) -> Result<usize> {
    let count = ns.clone().count();
    ns.into_par_iter().try_for_each(|n| {
        if !check_corollary(n)? {
            return Err(Error::falsified(
                "check_corollary",
                &[("n", n)],
                "2n-1 does not divide C(6n,3n)",
            ));
        }
        Ok(())
    })?;
    Ok(count)
}

/// Both sides of the floor inequality
/// `[6k/m] + [(6n-6k)/m] + [2n/m] + [(2n-2)/m]
///   >= [3k/m] + [(3n-3k)/m] + [3n/m] + [2k/m] + [(2n-2k)/m] + [(2n-1)/m]`.
pub fn floor_lhs_rhs(m: u64, n: u64, k: u64) -> Result<(u64, u64)> {
    if m < 2 {
        return Err(Error::out_of_range(format!("m = {m} must be at least 2")));
    }
    check_nk(n, k)?;
    let f = |x: u64| x / m;
    let lhs = f(6 * k) + f(6 * (n - k)) + f(2 * n) + f(2 * n - 2);
    let rhs = f(3 * k) + f(3 * (n - k)) + f(3 * n) + f(2 * k) + f(2 * (n - k)) + f(2 * n - 1);
    Ok((lhs, rhs))
}

/// `m = 3`, `n = 2 (mod 3)` and `k = 0 or 2 (mod 3)`.
pub fn in_exception_set(m: u64, n: u64, k: u64) -> bool {
    m == 3 && n % 3 == 2 && k % 3 != 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FloorViolation {
    pub m: u64,
    pub n: u64,
    pub k: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloorScanReport {
    pub m_range: (u64, u64),
    pub n_range: (u64, u64),
    /// Ordered by `(m, n, k)`.
    pub violations: Vec<FloorViolation>,
    pub all_in_exception_set: bool,
    /// Every exception-set triple in the box is itself a violation, so the
    /// exception set is exact rather than merely permitted.
    pub exception_set_exhausted: bool,
}

pub fn scan_floor_inequality(m_max: u64, n_max: u64) -> Result<FloorScanReport> {
    if m_max < 2 || n_max < 1 {
        return Err(Error::out_of_range(format!(
            "scan needs m_max >= 2 and n_max >= 1 (got {m_max}, {n_max})"
        )));
    }
    let per_m: Vec<(Vec<FloorViolation>, bool)> = (2..=m_max)
        .into_par_iter()
        .map(|m| {
            let mut found = Vec::new();
            let mut exhausted = true;
            for n in 1..=n_max {
                for k in 0..=n {
                    let (lhs, rhs) = floor_lhs_rhs(m, n, k).expect("valid range");
                    if lhs < rhs {
                        found.push(FloorViolation { m, n, k });
                    } else if in_exception_set(m, n, k) {
                        exhausted = false;
                    }
                }
            }
            (found, exhausted)
        })
        .collect();
    let exception_set_exhausted = per_m.iter().all(|(_, e)| *e);
    let violations: Vec<FloorViolation> = per_m.into_iter().flat_map(|(v, _)| v).collect();
    let all_in_exception_set = violations.iter().all(|v| in_exception_set(v.m, v.n, v.k));
    Ok(FloorScanReport {
        m_range: (2, m_max),
        n_range: (1, n_max),
        violations,
        all_in_exception_set,
        exception_set_exhausted,
    })
}

/// Checks
/// `(2n)!(2n-2)!/(k!(n-k)!n!(2n-1)!) = C(2n,n)C(n,k)/(2n-1) = (4C(2n-2,n-1) - C(2n,n))C(n,k)`,
/// that the 3-adic valuation of that ratio is nonnegative, and that it equals
/// the 3-adic valuation of the [`Lemma2Witness`] ratio.
pub fn check_p3_reduction_in(engine: &Engine, n: u64, k: u64) -> Result<bool> {
    check_nk(n, k)?;
    let ratio = engine.factorial_ratio(&[2 * n, 2 * n - 2], &[k, n - k, n, 2 * n - 1])?;
    let cnk = BigInt::from(binomial(n, k)?);
    let c2n = BigInt::from(binomial(2 * n, n)?);
    let middle = BigRational::new(&c2n * &cnk, BigInt::from(2 * n - 1));
    let right = (BigInt::from(binomial(2 * n - 2, n - 1)?) * 4 - &c2n) * &cnk;
    let exact = ratio.to_rational() == middle && middle == BigRational::from_integer(right);

    let ord3 = |a: u64| engine.factorial_valuation(a, 3);
    let up = ord3(2 * n)? + ord3(2 * n - 2)?;
    let down = ord3(k)? + ord3(n - k)? + ord3(n)? + ord3(2 * n - 1)?;
    let lemma2 = check_lemma2_in(engine, n, k)?;
    let reduces = lemma2.factored_ratio.exponent(3) == up as i64 - down as i64;
    Ok(exact && up >= down && reduces)
}

pub fn check_p3_reduction(n: u64, k: u64) -> Result<bool> {
    check_p3_reduction_in(&Engine::for_index(n), n, k)
}

pub fn p3_range(ns: RangeInclusive<u64>) -> Result<usize> {
    let engine = Engine::for_index(*ns.end());
    let pairs: Vec<(u64, u64)> = ns.flat_map(|n| (0..=n).map(move |k| (n, k))).collect();
    pairs.par_iter().try_for_each(|&(n, k)| {
        if !check_p3_reduction_in(&engine, n, k)? {
            return Err(Error::falsified(
                "check_p3_reduction",
                &[("n", n), ("k", k)],
                "3-adic reduction identity fails",
            ));
        }
        Ok(())
    })?;
    Ok(pairs.len())
}
