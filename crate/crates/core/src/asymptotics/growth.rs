use std::f64::consts::{LN_2, PI};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::exact_arith::Engine;
use crate::sequences::s_in;
use crate::{Error, Result};

/// One row of the growth table for `s_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticsSample {
    pub n: u64,
    pub log_s: f64,
    /// `exp(log_s / n)`.
    pub nth_root: f64,
    /// `s_{n+1} / s_n`.
    pub step_ratio: f64,
    /// Logs of `2 C(6n,3n)/(2n-1)` and `(n+1) C(6n,3n)/(2n-1)`.
    pub lower_log: f64,
    pub upper_log: f64,
    pub lower_root: f64,
    pub upper_root: f64,
}

impl AsymptoticsSample {
    /// `lower_log <= log_s <= upper_log`, each edge widened by `tol` relative.
    pub fn within_envelope(&self, tol: f64) -> bool {
        self.log_s >= self.lower_log - tol * self.lower_log.abs()
            && self.log_s <= self.upper_log + tol * self.upper_log.abs()
    }
}

/// `ln x` from the bit length and the leading 64 bits, so no float overflow
/// is possible for any size.
pub fn ln_biguint(x: &BigUint) -> Result<f64> {
    let bits = x.bits();
    if bits == 0 {
        return Err(Error::NonPositive);
    }
    if bits <= 64 {
        let v = x.iter_u64_digits().next().unwrap_or(0);
        return Ok((v as f64).ln());
    }
    let shift = bits - 64;
    let top = (x >> shift).iter_u64_digits().next().unwrap_or(0);
    Ok((top as f64).ln() + shift as f64 * LN_2)
}

/// `(ln lower, ln upper)` for the bounds on `s_n`, via factored logarithms.
pub fn envelope_logs_in(engine: &Engine, n: u64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::out_of_range("envelope needs n >= 1"));
    }
    let core = engine
        .binomial(6 * n, 3 * n)?
        .div(&engine.factor(2 * n - 1)?)?;
    let lower = core.mul(&engine.factor(2)?).ln()?;
    let upper = core.mul(&engine.factor(n + 1)?).ln()?;
    Ok((lower, upper))
}

pub fn sample_at(engine: &Engine, n: u64) -> Result<AsymptoticsSample> {
    if n == 0 {
        return Err(Error::out_of_range("samples need n >= 1"));
    }
    let s = s_in(engine, n)?;
    let next = s_in(engine, n + 1)?;
    let log_s = ln_biguint(s.s.magnitude())?;
    let log_next = ln_biguint(next.s.magnitude())?;
    let (lower_log, upper_log) = envelope_logs_in(engine, n)?;
    let nf = n as f64;
    Ok(AsymptoticsSample {
        n,
        log_s,
        nth_root: (log_s / nf).exp(),
        step_ratio: (log_next - log_s).exp(),
        lower_log,
        upper_log,
        lower_root: (lower_log / nf).exp(),
        upper_root: (upper_log / nf).exp(),
    })
}

/// Samples at `n = stride, 2 stride, ... <= n_max`, in increasing `n`.
pub fn sample_asymptotics(n_max: u64, stride: u64) -> Result<Vec<AsymptoticsSample>> {
    if n_max < 2 || stride == 0 {
        return Err(Error::out_of_range(format!(
            "sampling needs n_max >= 2 and stride >= 1 (got {n_max}, {stride})"
        )));
    }
    let engine = Engine::for_index(n_max + 1);
    let ns: Vec<u64> = (1..)
        .map(|i| i * stride)
        .take_while(|&n| n <= n_max)
        .collect();
    ns.par_iter().map(|&n| sample_at(&engine, n)).collect()
}

/// `|n! / (sqrt(2 pi n) (n/e)^n) - 1|`, with `ln n!` taken from the factored
/// factorial.
pub fn stirling_check(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::out_of_range("Stirling check needs n >= 1"));
    }
    let ln_fact = Engine::new(n).factorial(n)?.ln()?;
    let nf = n as f64;
    let ln_approx = 0.5 * (2.0 * PI * nf).ln() + nf * (nf.ln() - 1.0);
    Ok((ln_fact - ln_approx).exp_m1().abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_extraction() {
        assert!(ln_biguint(&BigUint::default()).is_err());
        assert_eq!(ln_biguint(&BigUint::from(1u32)).unwrap(), 0.0);
        let x = BigUint::from(696u32);
        assert!((ln_biguint(&x).unwrap() - 696f64.ln()).abs() < 1e-15);
        let big = BigUint::from(3u32).pow(5000);
        let expect = 5000.0 * 3f64.ln();
        assert!((ln_biguint(&big).unwrap() - expect).abs() / expect < 1e-14);
    }

    #[test]
    fn sample_two() {
        let e = Engine::for_index(3);
        let s = sample_at(&e, 2).unwrap();
        assert!((s.nth_root - 696f64.sqrt()).abs() < 1e-12);
        assert!((s.step_ratio - 23408.0 / 696.0).abs() < 1e-10);
        assert!(s.within_envelope(1e-9));
    }

    #[test]
    fn sampling_grid() {
        let rows = sample_asymptotics(30, 7).unwrap();
        let ns: Vec<u64> = rows.iter().map(|r| r.n).collect();
        assert_eq!(ns, vec![7, 14, 21, 28]);
        assert!(rows.iter().all(|r| r.within_envelope(1e-9)));
        assert!(rows.iter().all(|r| r.nth_root > 0.0 && r.nth_root < 432.0));
        assert!(sample_asymptotics(1, 1).is_err());
        assert!(sample_asymptotics(10, 0).is_err());
    }

    #[test]
    fn stirling() {
        // e / sqrt(2 pi) - 1
        let one = stirling_check(1).unwrap();
        assert!((one - 0.084_437_551_419_227_55).abs() < 1e-12, "{one}");
        let mut prev = one;
        for n in [2, 5, 10, 50, 100] {
            let e = stirling_check(n).unwrap();
            assert!(e < prev);
            prev = e;
        }
        assert!(stirling_check(0).is_err());
    }
}
