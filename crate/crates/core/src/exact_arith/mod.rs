//! Prime sieve, Legendre valuations and the factored-integer engine.

mod binomial;
mod engine;
mod factored;
mod sieve;
mod valuation;

pub use binomial::{binomial, factorial};
pub use engine::Engine;
pub use factored::{FactoredInteger, ParseFactoredError, Sign};
pub use sieve::{is_prime, sieve_primes, PrimeSieve};
pub use valuation::{legendre_valuation, ValuationTable};
