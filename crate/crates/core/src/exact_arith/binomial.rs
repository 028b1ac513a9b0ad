use num_bigint::BigUint;
use num_traits::One;

use crate::{stats, Error, Result};

/// Exact `C(n, k)` by multiplicative accumulation. `k > n` is an error.
pub fn binomial(n: u64, k: u64) -> Result<BigUint> {
    if k > n {
        return Err(Error::out_of_range(format!("binomial({n}, {k}) has k > n")));
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        // acc holds C(n-k+i-1, i-1); the product is divisible by i.
        acc *= n - k + i;
        acc /= i;
    }
    stats::record(2 * k);
    Ok(acc)
}

/// `n!` by iterated multiplication.
pub fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= i;
    }
    stats::record(n.saturating_sub(1));
    acc
}
