//! Exact arithmetic and mechanical verification for the binomial sums
//!
//! ```text
//! s_n = 1 / ((2n-1) C(3n,n)) * sum_{k=0}^{n} C(6k,3k) C(3k,k) C(6(n-k),3(n-k)) C(3(n-k),n-k)
//! ```
//!
//! Huge factorial products are carried as prime-exponent vectors
//! ([`FactoredInteger`]), so divisibility claims reduce to per-prime
//! valuation comparisons and big integers are only materialized at the end.
//!
//! Module map:
//!
//! - [`exact_arith`]: prime sieve, Legendre valuations, factored integers, binomials.
//! - [`sequences`]: super Catalan numbers, summands `A(n,k)`, `s_n`, the quotient `t(n,k)`.
//! - [`divisibility`]: integrality certificates and the supporting lemma checks.
//! - [`asymptotics`]: the summand ratio identity, monotonicity, bounds on `s_n`,
//!   the growth rate of `s_n`, Stirling's formula and the `1/pi` series.
//! - [`congruences`]: `s_n mod 8`, `s_{p-1} mod p` and the weighted sum mod `p^2`.
//!
//! Every check that could falsify a claimed identity returns
//! [`Error::Falsified`] with a [`Counterexample`] instead of panicking.

pub mod asymptotics;
pub mod congruences;
pub mod divisibility;
mod error;
pub mod exact_arith;
pub mod sequences;
pub mod stats;

pub use error::{Counterexample, Error, Result};
pub use exact_arith::{
    binomial, legendre_valuation, sieve_primes, Engine, FactoredInteger, PrimeSieve, Sign,
    ValuationTable,
};
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
