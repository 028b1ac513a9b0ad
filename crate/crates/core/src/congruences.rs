//! Congruences for `s_n` and for the weighted sum `sum n A_n / 864^n`.
//!
//! Summands are computed exactly and then reduced; there is no modular
//! binomial fast path.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::exact_arith::{is_prime, Engine};
use crate::sequences::{inner_sum_in, s_many, SequenceValue};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Claim {
    /// `s_n = 0 (mod 8)` for `n >= 1`.
    Mod8,
    /// `s_{p-1} = floor((p-1)/6) (mod p)`.
    FermatQuotient,
    /// `sum_{n<p} n A_n / 864^n = 0 (mod p^2)` for primes `p > 3`.
    ModPSquared,
}

impl Claim {
    pub fn as_str(self) -> &'static str {
        match self {
            Claim::Mod8 => "mod8",
            Claim::FermatQuotient => "fermat_quotient",
            Claim::ModPSquared => "mod_p_squared",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceResult {
    pub claim: Claim,
    /// `n` for [`Claim::Mod8`], `p` otherwise.
    pub parameter: u64,
    pub lhs_residue: u64,
    pub expected_residue: u64,
    pub holds: bool,
}

impl CongruenceResult {
    fn new(claim: Claim, parameter: u64, lhs_residue: u64, expected_residue: u64) -> Self {
        CongruenceResult {
            claim,
            parameter,
            lhs_residue,
            expected_residue,
            holds: lhs_residue == expected_residue,
        }
    }

    pub fn modulus(&self) -> u64 {
        match self.claim {
            Claim::Mod8 => 8,
            Claim::FermatQuotient => self.parameter,
            Claim::ModPSquared => self.parameter * self.parameter,
        }
    }

    fn into_checked(self) -> Result<Self> {
        if self.holds {
            return Ok(self);
        }
        let name = match self.claim {
            Claim::Mod8 => "n",
            _ => "p",
        };
        Err(Error::falsified(
            self.claim.as_str(),
            &[(name, self.parameter)],
            format!(
                "residue {} but expected {} (mod {})",
                self.lhs_residue,
                self.expected_residue,
                self.modulus()
            ),
        ))
    }
}

/// Canonical residue in `[0, modulus)`.
fn residue(x: &BigInt, modulus: u64) -> u64 {
    x.mod_floor(&BigInt::from(modulus))
        .to_u64()
        .expect("residue below modulus")
}

fn mod8_of(value: &SequenceValue) -> CongruenceResult {
    CongruenceResult::new(Claim::Mod8, value.n, residue(&value.s, 8), 0)
}

pub fn check_mod8(n: u64) -> Result<CongruenceResult> {
    if n == 0 {
        return Err(Error::out_of_range("the mod 8 claim needs n >= 1"));
    }
    Ok(mod8_of(&crate::sequences::s(n)?))
}

fn fermat_of(p: u64, value: &SequenceValue) -> CongruenceResult {
    CongruenceResult::new(
        Claim::FermatQuotient,
        p,
        residue(&value.s, p),
        ((p - 1) / 6) % p,
    )
}

pub fn check_fermat_like(p: u64) -> Result<CongruenceResult> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    Ok(fermat_of(p, &crate::sequences::s(p - 1)?))
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let egcd = (a as i128).extended_gcd(&(m as i128));
    if egcd.gcd != 1 {
        return None;
    }
    Some(egcd.x.rem_euclid(m as i128) as u64)
}

fn check_p_gt_3(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if p <= 3 {
        return Err(Error::HypothesisViolated(p));
    }
    Ok(())
}

/// `sum_{n=0}^{p-1} n 864^{-n} inner_sum(n) mod p^2`, each inner sum reduced
/// before multiplication.
pub fn check_mod_p_squared(p: u64) -> Result<CongruenceResult> {
    check_p_gt_3(p)?;
    let modulus = p * p;
    let inv = mod_inverse(864 % modulus, modulus).expect("864 is a unit mod p^2 for p > 3");
    let engine = Engine::for_index(p - 1);
    let mut acc: u128 = 0;
    let mut inv_pow: u128 = 1;
    let m = u128::from(modulus);
    for n in 0..p {
        let a = u128::from(residue(&BigInt::from(inner_sum_in(&engine, n)?), modulus));
        acc = (acc + u128::from(n) * inv_pow % m * a) % m;
        inv_pow = inv_pow * u128::from(inv) % m;
    }
    Ok(CongruenceResult::new(Claim::ModPSquared, p, acc as u64, 0))
}

/// The same weighted sum evaluated as an exact rational first, then reduced
/// modulo `p^2`.
pub fn weighted_sum_mod_p_squared_exact(p: u64) -> Result<u64> {
    check_p_gt_3(p)?;
    let modulus = p * p;
    let engine = Engine::for_index(p - 1);
    let mut sum = BigRational::zero();
    for n in 1..p {
        let term = BigInt::from(inner_sum_in(&engine, n)?) * n;
        sum += BigRational::new(term, BigInt::from(864u32).pow(n as u32));
    }
    let numer = residue(sum.numer(), modulus);
    let denom = residue(sum.denom(), modulus);
    let inv = mod_inverse(denom, modulus)
        .ok_or_else(|| Error::out_of_range(format!("denominator not invertible mod {modulus}")))?;
    Ok((u128::from(numer) * u128::from(inv) % u128::from(modulus)) as u64)
}

/// `s_n mod 8` for each `n` in `1..=n_max`; fails on the first violation.
pub fn mod8_range(n_max: u64) -> Result<Vec<CongruenceResult>> {
    let ns: Vec<u64> = (1..=n_max).collect();
    s_many(&ns)?
        .iter()
        .map(|v| mod8_of(v).into_checked())
        .collect()
}

pub fn fermat_range(p_max: u64) -> Result<Vec<CongruenceResult>> {
    let primes: Vec<u64> = (2..=p_max).filter(|&p| is_prime(p)).collect();
    let ns: Vec<u64> = primes.iter().map(|p| p - 1).collect();
    s_many(&ns)?
        .iter()
        .zip(&primes)
        .map(|(v, &p)| fermat_of(p, v).into_checked())
        .collect()
}

pub fn mod_p_squared_range(p_min: u64, p_max: u64) -> Result<Vec<CongruenceResult>> {
    let primes: Vec<u64> = (p_min.max(5)..=p_max).filter(|&p| is_prime(p)).collect();
    primes
        .par_iter()
        .map(|&p| check_mod_p_squared(p)?.into_checked())
        .collect()
}
