use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::exact_arith::Engine;
use crate::sequences::inner_sum_in;
use crate::{Error, Result};

/// `1/pi` truncated to 50 decimal digits (OEIS A049541). The true value lies
/// in `(INV_PI_50, INV_PI_50 + 1e-50)`.
pub const INV_PI_50: &str = "0.31830988618379067153776752674502872406891929148091";

/// Tail terms beyond the partial sum must shrink by at least this factor
/// per step over the checked window.
pub const TAIL_RATIO_LIMIT: (u64, u64) = (3, 5);
/// Number of consecutive tail ratios checked before the bound is issued.
pub const TAIL_WINDOW: u64 = 64;

pub fn inv_pi_reference() -> BigRational {
    decimal_to_rational(INV_PI_50)
}

fn decimal_to_rational(s: &str) -> BigRational {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int}{frac}").parse().expect("decimal literal");
    BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32))
}

/// `sum_{n=1}^{N} n * inner_sum(n) / 864^n` with a certified tail bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiPartialSum {
    pub terms: u64,
    pub value: BigRational,
    /// Upper bound on the omitted tail `sum_{n>N}`.
    pub remainder_bound: BigRational,
    /// Largest term ratio seen in the checked tail window.
    pub max_tail_ratio: BigRational,
}

impl PiPartialSum {
    /// `value < 1/pi <= value + remainder_bound`, allowing for the
    /// truncation of the reference.
    pub fn brackets_reference(&self) -> bool {
        let reference = inv_pi_reference();
        let ulp = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(50u32));
        self.value <= reference && reference + ulp <= &self.value + &self.remainder_bound
    }

    /// `|value - 1/pi| / (1/pi)` against the 50-digit reference.
    pub fn relative_error(&self) -> f64 {
        let reference = inv_pi_reference();
        let diff = (&self.value - &reference) / &reference;
        diff.to_f64().unwrap_or(f64::INFINITY).abs()
    }

    /// Relative size of the certified tail.
    pub fn relative_remainder(&self) -> f64 {
        (&self.remainder_bound / &self.value)
            .to_f64()
            .unwrap_or(f64::INFINITY)
    }

    /// Count of correct significant digits, `-log10` of the relative error.
    pub fn significant_digits(&self) -> f64 {
        -self.relative_error().log10()
    }
}

pub fn pi_partial_sum(terms: u64) -> Result<PiPartialSum> {
    if terms == 0 {
        return Err(Error::out_of_range("the partial sum needs N >= 1"));
    }
    let last = terms + 1 + TAIL_WINDOW;
    let engine = Engine::for_index(last);
    let inner: Vec<BigInt> = (0..=last)
        .into_par_iter()
        .map(|n| inner_sum_in(&engine, n).map(BigInt::from))
        .collect::<Result<_>>()?;

    // Horner over the common denominator 864^N.
    let mut numer = BigInt::zero();
    for n in 1..=terms {
        numer = numer * 864 + &inner[n as usize] * n;
    }
    let value = BigRational::new(numer, BigInt::from(864u32).pow(terms as u32));

    // term(n+1)/term(n) = (n+1) inner(n+1) / (864 n inner(n))
    let limit = BigRational::new(
        BigInt::from(TAIL_RATIO_LIMIT.0),
        BigInt::from(TAIL_RATIO_LIMIT.1),
    );
    let mut max_tail_ratio = BigRational::zero();
    for n in terms + 1..=terms + TAIL_WINDOW {
        let ratio = BigRational::new(
            &inner[n as usize + 1] * (n + 1),
            &inner[n as usize] * n * 864,
        );
        if ratio > limit {
            return Err(Error::falsified(
                "pi_partial_sum",
                &[("N", terms), ("n", n)],
                format!("tail ratio {ratio} exceeds {limit}; remainder bound invalid"),
            ));
        }
        max_tail_ratio = max_tail_ratio.max(ratio);
    }
    let first_tail = BigRational::new(
        &inner[terms as usize + 1] * (terms + 1),
        BigInt::from(864u32).pow(terms as u32 + 1),
    );
    let remainder_bound = first_tail / (BigRational::one() - limit);
    Ok(PiPartialSum {
        terms,
        value,
        remainder_bound,
        max_tail_ratio,
    })
}
