use super::factored::FactoredInteger;
use super::sieve::{sieve_primes, PrimeSieve};
use super::valuation::ValuationTable;
use crate::{Error, Result};

/// A prime sieve plus one filled [`ValuationTable`] per prime.
///
/// Every factorial argument up to [`Engine::limit`] can be factored from
/// cached valuations. The engine grows on demand via [`Engine::ensure`] and
/// never shrinks; lookups take `&self`, so a filled engine can be shared
/// across threads.
#[derive(Clone, Debug)]
pub struct Engine {
    sieve: PrimeSieve,
    tables: Vec<ValuationTable>,
}

impl Engine {
    pub fn new(limit: u64) -> Self {
        let sieve = sieve_primes(limit.max(2)).expect("limit >= 2");
        let tables = sieve
            .primes()
            .iter()
            .map(|&p| {
                let mut t = ValuationTable::new_unchecked(p);
                t.extend_to(sieve.limit());
                t
            })
            .collect();
        Engine { sieve, tables }
    }

    /// Engine sized for index `n`: the largest factorial argument in `A(n,k)` is `6n`.
    pub fn for_index(n: u64) -> Self {
        Self::new(6 * n)
    }

    pub fn limit(&self) -> u64 {
        self.sieve.limit()
    }

    pub fn sieve(&self) -> &PrimeSieve {
        &self.sieve
    }

    pub fn tables(&self) -> &[ValuationTable] {
        &self.tables
    }

    pub fn ensure(&mut self, limit: u64) {
        if limit <= self.limit() {
            return;
        }
        let grown = Engine::new(limit.max(2 * self.limit()));
        // Keep existing tables (append-only); only add the new primes.
        let old = self.tables.len();
        for (table, new) in self.tables.iter_mut().zip(&grown.tables) {
            table.extend_to(new.covered());
        }
        self.tables.extend(grown.tables.into_iter().skip(old));
        self.sieve = grown.sieve;
    }

    fn check(&self, n: u64) -> Result<()> {
        if n > self.limit() {
            return Err(Error::SieveTooSmall {
                needed: n,
                have: self.limit(),
            });
        }
        Ok(())
    }

    /// `ord_p(n!)` from the cached table.
    pub fn factorial_valuation(&self, n: u64, p: u64) -> Result<u64> {
        self.check(n.max(p))?;
        if self.sieve.contains(p) != Some(true) {
            return Err(Error::NonPrime(p));
        }
        let idx = self.sieve.count_up_to(p) - 1;
        Ok(self.tables[idx].get(n).expect("tables filled to limit"))
    }

    pub fn factorial(&self, n: u64) -> Result<FactoredInteger> {
        self.factorial_ratio(&[n], &[])
    }

    /// `prod numer[i]! / prod denom[j]!` as a factored rational.
    pub fn factorial_ratio(&self, numer: &[u64], denom: &[u64]) -> Result<FactoredInteger> {
        let top = numer.iter().chain(denom).copied().max().unwrap_or(0);
        self.check(top)?;
        let count = self.sieve.count_up_to(top);
        let mut factors = Vec::new();
        for table in &self.tables[..count] {
            let up: u64 = numer.iter().map(|&a| table.get(a).unwrap()).sum();
            let down: u64 = denom.iter().map(|&a| table.get(a).unwrap()).sum();
            let e = up as i64 - down as i64;
            if e != 0 {
                factors.push((table.prime(), e));
            }
        }
        Ok(FactoredInteger::from_sorted(factors))
    }

    pub fn binomial(&self, n: u64, k: u64) -> Result<FactoredInteger> {
        if k > n {
            return Err(Error::out_of_range(format!("binomial({n}, {k}) has k > n")));
        }
        self.factorial_ratio(&[n], &[k, n - k])
    }

    /// Factors a positive integer by trial division over the sieve; needs
    /// `sqrt(m) <= limit`.
    pub fn factor(&self, m: u64) -> Result<FactoredInteger> {
        if m == 0 {
            return Ok(FactoredInteger::zero());
        }
        let root = m.isqrt();
        self.check(root)?;
        let mut rest = m;
        let mut factors = Vec::new();
        for &p in self.sieve.primes() {
            if p * p > rest {
                break;
            }
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            if e > 0 {
                factors.push((p, e));
            }
        }
        if rest > 1 {
            factors.push((rest, 1));
        }
        Ok(FactoredInteger::from_sorted(factors))
    }
}
