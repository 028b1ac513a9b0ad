mod common;

use binsum::divisibility::{
    certify_theorem1_in, check_p3_reduction_in, floor_lhs_rhs, in_exception_set, lemma1_range,
    lemma2_range, scan_floor_inequality,
};
use binsum::{BigRational, Engine};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

#[test]
fn certificate_quotient_matches_naive_factorials() {
    let engine = Engine::for_index(60);
    for n in 1..=60u64 {
        let c3n = common::factorial(3 * n) / (common::factorial(n) * common::factorial(2 * n));
        let divisor = c3n * (2 * n - 1);
        for k in 0..=n {
            let a = common::summand_by_factorials(n, k);
            let (q, r) = a.div_rem(&divisor);
            assert!(r == 0u32.into());
            let cert = certify_theorem1_in(&engine, n, k).unwrap();
            assert_eq!(cert.quotient, q, "({n},{k})");
            assert!(cert.margins.iter().all(|m| m.margin() >= 0));
            assert!(cert.margins.iter().all(|m| m.prime <= 6 * n));
            assert!(cert.cnk_divides);
        }
    }
}

#[test]
fn mirrored_certificates_agree() {
    let engine = Engine::for_index(40);
    for n in 1..=40 {
        for k in 0..=n {
            let a = certify_theorem1_in(&engine, n, k).unwrap();
            let b = certify_theorem1_in(&engine, n, n - k).unwrap();
            assert_eq!((a.quotient, a.margins), (b.quotient, b.margins));
        }
    }
}

#[test]
fn lemma_sweeps_small() {
    assert_eq!(lemma1_range(8, 25).unwrap(), 8 * (2..=26).sum::<usize>());
    assert!(lemma2_range(1..=120).unwrap() > 0);
}

#[test]
fn p3_reduction_sweep() {
    let engine = Engine::for_index(80);
    for n in 1..=80 {
        for k in 0..=n {
            assert!(check_p3_reduction_in(&engine, n, k).unwrap(), "({n},{k})");
        }
    }
}

#[test]
fn floor_scan_characterizes_exceptions() {
    let report = scan_floor_inequality(50, 200).unwrap();
    assert!(report.all_in_exception_set);
    assert!(report.exception_set_exhausted);
    assert!(report.violations.iter().all(|v| v.m == 3));
    assert!(report
        .violations
        .iter()
        .all(|v| v.n % 3 == 2 && v.k % 3 != 1));
    assert_eq!(report.violations.len(), 4556);
    assert!(report.violations.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn floor_values_by_hand() {
    // m = 3, n = 5, k = 3: LHS = 6 + 4 + 3 + 2, RHS = 3 + 2 + 5 + 2 + 1 + 3
    assert_eq!(floor_lhs_rhs(3, 5, 3).unwrap(), (15, 16));
    assert!(in_exception_set(3, 5, 3));
    assert!(!in_exception_set(3, 5, 4));
    assert!(!in_exception_set(9, 5, 3));
}

fn floor(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-10_000i64..10_000, 1i64..500)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

proptest! {
    #[test]
    fn doubled_floor_inequality(x in rational(), y in rational()) {
        let two = BigRational::from_integer(BigInt::from(2));
        let lhs = floor(&(&x * &two)) + floor(&(&y * &two));
        let rhs = floor(&x) + floor(&y) + floor(&(&x + &y));
        prop_assert!(lhs >= rhs);
    }

    #[test]
    fn floor_superadditive(x in rational(), y in rational()) {
        prop_assert!(floor(&(&x + &y)) >= floor(&x) + floor(&y));
    }
}
