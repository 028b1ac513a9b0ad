use super::sieve::is_prime;
use crate::{Error, Result};

/// `ord_p(n!)`, the exponent of `p` in `n!`, by Legendre's formula.
pub fn legendre_valuation(n: u64, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    Ok(legendre_unchecked(n, p))
}

pub(crate) fn legendre_unchecked(mut n: u64, p: u64) -> u64 {
    let mut total = 0;
    while n >= p {
        n /= p;
        total += n;
    }
    total
}

/// Memoized `ord_p(n!)` for a single prime.
///
/// `ord_p(n!)` is constant on each block `[q*p, (q+1)*p)`, so the cache is
/// keyed by `q = n / p` and stores `ord_p((q*p)!) = q + ord_p(q!)`. Entries
/// are only ever appended.
#[derive(Clone, Debug)]
pub struct ValuationTable {
    prime: u64,
    blocks: Vec<u64>,
}

impl ValuationTable {
    pub fn new(prime: u64) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NonPrime(prime));
        }
        Ok(Self::new_unchecked(prime))
    }

    pub(crate) fn new_unchecked(prime: u64) -> Self {
        ValuationTable {
            prime,
            blocks: vec![0],
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Largest `n` whose valuation is cached.
    pub fn covered(&self) -> u64 {
        self.blocks.len() as u64 * self.prime - 1
    }

    pub fn extend_to(&mut self, n: u64) {
        let target = (n / self.prime) as usize;
        while self.blocks.len() <= target {
            let q = self.blocks.len();
            let v = q as u64 + self.blocks[q / self.prime as usize];
            self.blocks.push(v);
        }
    }

    /// Cached `ord_p(n!)`, or `None` if `n` is beyond the filled range.
    #[inline]
    pub fn get(&self, n: u64) -> Option<u64> {
        self.blocks.get((n / self.prime) as usize).copied()
    }

    pub fn valuation(&mut self, n: u64) -> u64 {
        self.extend_to(n);
        self.blocks[(n / self.prime) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_valuations() {
        assert_eq!(legendre_valuation(10, 2).unwrap(), 8);
        assert_eq!(legendre_valuation(0, 7).unwrap(), 0);
        assert_eq!(legendre_valuation(9, 3).unwrap(), 4);
        assert_eq!(
            legendre_valuation(9, 3).unwrap(),
            3 + legendre_valuation(3, 3).unwrap()
        );
    }

    #[test]
    fn rejects_composite_base() {
        assert!(matches!(legendre_valuation(10, 4), Err(Error::NonPrime(4))));
        assert!(matches!(legendre_valuation(10, 1), Err(Error::NonPrime(1))));
        assert!(ValuationTable::new(9).is_err());
    }

    #[test]
    fn table_matches_formula() {
        for p in [2, 3, 5, 7, 97] {
            let mut table = ValuationTable::new(p).unwrap();
            for n in (0..2000).rev() {
                assert_eq!(table.valuation(n), legendre_unchecked(n, p), "p={p} n={n}");
            }
            assert!(table.covered() >= 1999);
        }
    }

    #[test]
    fn table_get_is_bounded() {
        let mut table = ValuationTable::new(5).unwrap();
        assert_eq!(table.get(4), Some(0));
        assert_eq!(table.get(5), None);
        table.extend_to(26);
        assert_eq!(table.get(25), Some(6));
        assert_eq!(table.get(29), Some(6));
        assert_eq!(table.get(30), None);
    }
}
