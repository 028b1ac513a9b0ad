use crate::{Error, Result};

/// All primes up to `limit`, with O(1) membership.
#[derive(Clone, Debug)]
pub struct PrimeSieve {
    limit: u64,
    primes: Vec<u64>,
    composite: Vec<bool>,
}

pub fn sieve_primes(limit: u64) -> Result<PrimeSieve> {
    if limit < 2 {
        return Err(Error::SieveLimitTooSmall(limit));
    }
    let size = limit as usize + 1;
    let mut composite = vec![false; size];
    composite[0] = true;
    composite[1] = true;
    let mut i = 2;
    while i * i < size {
        if !composite[i] {
            for j in (i * i..size).step_by(i) {
                composite[j] = true;
            }
        }
        i += 1;
    }
    let primes = (2..size)
        .filter(|&i| !composite[i])
        .map(|i| i as u64)
        .collect();
    Ok(PrimeSieve {
        limit,
        primes,
        composite,
    })
}

impl PrimeSieve {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Primes in increasing order.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Membership for `n <= limit`; `None` beyond the sieved range.
    pub fn contains(&self, n: u64) -> Option<bool> {
        (n <= self.limit).then(|| !self.composite[n as usize])
    }

    /// Number of primes `<= bound`.
    pub fn count_up_to(&self, bound: u64) -> usize {
        self.primes.partition_point(|&p| p <= bound)
    }
}

/// Trial-division primality test for small bases.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_primes() {
        assert_eq!(sieve_primes(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(sieve_primes(2).unwrap().primes(), &[2]);
        assert_eq!(sieve_primes(11).unwrap().primes(), &[2, 3, 5, 7, 11]);
    }

    #[test]
    fn limit_too_small() {
        assert!(matches!(sieve_primes(1), Err(Error::SieveLimitTooSmall(1))));
        assert!(matches!(sieve_primes(0), Err(Error::SieveLimitTooSmall(0))));
    }

    #[test]
    fn membership() {
        let sieve = sieve_primes(30).unwrap();
        assert_eq!(sieve.contains(29), Some(true));
        assert_eq!(sieve.contains(27), Some(false));
        assert_eq!(sieve.contains(1), Some(false));
        assert_eq!(sieve.contains(31), None);
        assert_eq!(sieve.count_up_to(10), 4);
    }
}
