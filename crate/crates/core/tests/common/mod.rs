//! Brute-force oracles that share no code with the library's factored path.
#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::One;

pub fn trial_division_primes(limit: u64) -> Vec<u64> {
    (2..=limit)
        .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
        .collect()
}

/// Counts factors of `p` in `1 * 2 * ... * n` one term at a time.
pub fn brute_valuation(n: u64, p: u64) -> u64 {
    (1..=n)
        .map(|mut i| {
            let mut c = 0;
            while i % p == 0 {
                i /= p;
                c += 1;
            }
            c
        })
        .sum()
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Rows `0..=n_max` of Pascal's triangle.
pub fn pascal(n_max: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for n in 1..=n_max {
        let prev = &rows[n - 1];
        let mut row = vec![BigUint::one(); n + 1];
        for k in 1..n {
            row[k] = &prev[k - 1] + &prev[k];
        }
        rows.push(row);
    }
    rows
}

/// `A(n,k)` from four factorial-quotient binomials.
pub fn summand_by_factorials(n: u64, k: u64) -> BigUint {
    let c = |a: u64, b: u64| factorial(a) / (factorial(b) * factorial(a - b));
    let j = n - k;
    c(6 * k, 3 * k) * c(3 * k, k) * c(6 * j, 3 * j) * c(3 * j, j)
}
