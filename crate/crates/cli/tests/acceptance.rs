//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use binsum::asymptotics::{
    bounds_range, check_monotone_in, pi_partial_sum, ratio_identity_in, sample_at,
};
use binsum::congruences::{fermat_range, mod8_range, mod_p_squared_range};
use binsum::divisibility::{
    certify_range, corollary_range, lemma1_range, lemma2_range, scan_floor_inequality,
};
use binsum::sequences::{s_many, s_naive};
use binsum::{BigInt, Engine};
use binsum_cli::runner::bench_one;

type Checks = Vec<(String, Result<(), String>)>;
/// `(id, name, time budget in seconds, body)`.
type Criterion = (u32, &'static str, Option<u64>, fn() -> Checks);

fn check(checks: &mut Checks, name: &str, outcome: Result<(), String>) {
    checks.push((name.to_string(), outcome));
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: binsum::Error) -> String {
    e.to_string()
}

fn integrality() -> Checks {
    let mut c = Checks::new();
    let ns: Vec<u64> = (0..=500).collect();
    check(
        &mut c,
        "s_n exact for n <= 500",
        s_many(&ns).map(|_| ()).map_err(err),
    );
    check(
        &mut c,
        "C(n,k) | t(n,k) for n <= 300",
        certify_range(1..=300).map(|_| ()).map_err(err),
    );
    let spot = (|| {
        for (n, want) in [(1u64, 40u64), (2, 696)] {
            let naive = s_naive(n).map_err(err)?.value.s;
            let fast = s_many(&[n]).map_err(err)?.remove(0).s;
            ensure(naive == BigInt::from(want) && fast == naive, || {
                format!("s_{n}: naive {naive}, factored {fast}, expected {want}")
            })?;
        }
        Ok(())
    })();
    check(&mut c, "s_1 = 40, s_2 = 696", spot);
    c
}

fn lemmas() -> Checks {
    let mut c = Checks::new();
    check(
        &mut c,
        "lemma 1 and the mkmk identity, m <= 8, n <= 100",
        lemma1_range(8, 100).map(|_| ()).map_err(err),
    );
    check(
        &mut c,
        "lemma 2, n <= 300",
        lemma2_range(1..=300).map(|_| ()).map_err(err),
    );
    check(
        &mut c,
        "(2n-1) | C(6n,3n), n <= 2000",
        corollary_range(1..=2000).map(|_| ()).map_err(err),
    );
    c
}

fn floor_scan() -> Checks {
    let mut c = Checks::new();
    let scan = match scan_floor_inequality(50, 200) {
        Ok(scan) => scan,
        Err(e) => {
            check(&mut c, "scan", Err(err(e)));
            return c;
        }
    };
    let outside_m3 = scan.violations.iter().filter(|v| v.m != 3).count();
    check(
        &mut c,
        "no violations for m != 3",
        ensure(outside_m3 == 0, || format!("{outside_m3} violations")),
    );
    let stray = scan
        .violations
        .iter()
        .find(|v| !(v.n % 3 == 2 && (v.k % 3 == 0 || v.k % 3 == 2)));
    check(
        &mut c,
        "violations have n = 2, k = 0 or 2 (mod 3)",
        ensure(stray.is_none(), || format!("{stray:?}")),
    );
    // Count from an independent brute-force enumeration.
    check(
        &mut c,
        "4556 violations",
        ensure(scan.violations.len() == 4556, || {
            format!("{} violations", scan.violations.len())
        }),
    );
    c
}

fn theorem2() -> Checks {
    let mut c = Checks::new();
    let engine = Engine::for_index(300);
    let ratio = (|| {
        for n in 2..=200u64 {
            for k in 0..n.div_ceil(2) {
                let w = ratio_identity_in(&engine, n, k).map_err(err)?;
                ensure(w.lhs == w.rhs && w.is_nonnegative(), || {
                    format!("n = {n}, k = {k}: {} vs {}", w.lhs, w.rhs)
                })?;
            }
        }
        Ok(())
    })();
    check(&mut c, "ratio identity, 2 <= n <= 200", ratio);
    let monotone = (2..=300u64).try_for_each(|n| match check_monotone_in(&engine, n) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("chain breaks at n = {n}")),
        Err(e) => Err(err(e)),
    });
    check(&mut c, "monotone chain, n <= 300", monotone);
    let bounds = bounds_range(1..=1000).map_err(err).and_then(|reports| {
        let first = &reports[0];
        ensure(
            first.n == 1 && first.lower_tight() && first.upper_tight(),
            || "n = 1 bounds not tight".to_string(),
        )?;
        let tight_elsewhere = reports[1..]
            .iter()
            .find(|r| r.lower_tight() || r.upper_tight());
        ensure(tight_elsewhere.is_none(), || {
            format!("unexpected equality at n = {}", tight_elsewhere.unwrap().n)
        })
    });
    check(
        &mut c,
        "bounds for 1 <= n <= 1000, equality at n = 1",
        bounds,
    );
    c
}

/// Envelope edge n-th roots from an independent high-precision log evaluation.
const EDGE_ORACLE: [(u64, f64, f64); 4] = [
    (100, 59.0648, 61.4273),
    (500, 62.6772, 63.3734),
    (1000, 63.2693, 63.6638),
    (2000, 63.60052249, 63.82058666),
];

fn envelope() -> Checks {
    let mut c = Checks::new();
    let engine = Engine::for_index(2001);
    for (n, lower, upper) in EDGE_ORACLE {
        let outcome = sample_at(&engine, n).map_err(err).and_then(|s| {
            ensure(s.within_envelope(1e-9), || {
                format!(
                    "log s = {} not in [{}, {}]",
                    s.log_s, s.lower_log, s.upper_log
                )
            })?;
            ensure(
                s.lower_root <= s.nth_root && s.nth_root <= s.upper_root,
                || "root outside edges".to_string(),
            )?;
            let digits = if n == 2000 { 1e-9 } else { 1e-4 };
            ensure(
                (s.lower_root - lower).abs() < digits * 64.0
                    && (s.upper_root - upper).abs() < digits * 64.0,
                || {
                    format!(
                        "edges {} {} vs oracle {lower} {upper}",
                        s.lower_root, s.upper_root
                    )
                },
            )?;
            if n == 2000 {
                let off = |x: f64| (x / 64.0 - 1.0).abs();
                ensure(off(s.lower_root) < 0.03 && off(s.upper_root) < 0.03, || {
                    "edges not within 3% of 64".to_string()
                })?;
            }
            Ok(())
        });
        check(&mut c, &format!("n = {n}"), outcome);
    }
    c
}

fn congruences() -> Checks {
    let mut c = Checks::new();
    check(
        &mut c,
        "s_n = 0 (mod 8), n <= 500",
        mod8_range(500).map(|_| ()).map_err(err),
    );
    check(
        &mut c,
        "s_(p-1) = floor((p-1)/6) (mod p), p <= 200",
        fermat_range(200).map(|_| ()).map_err(err),
    );
    check(
        &mut c,
        "weighted sum = 0 (mod p^2), 5 <= p <= 100",
        mod_p_squared_range(5, 100).map(|_| ()).map_err(err),
    );
    c
}

fn pi_series() -> Checks {
    let mut c = Checks::new();
    let outcome = pi_partial_sum(100).map_err(err).and_then(|sum| {
        ensure(sum.relative_error() < 1e-12, || {
            format!("relative error {:e}", sum.relative_error())
        })?;
        ensure(sum.brackets_reference(), || {
            "remainder bound does not bracket 1/pi".to_string()
        })?;
        ensure(sum.relative_remainder() < 1e-12, || {
            format!("remainder {:e}", sum.relative_remainder())
        })
    });
    check(&mut c, "N = 100, 12 digits, certified", outcome);
    c
}

fn run_cli(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_binsum"))
        .args(args)
        .env_remove("BINSUM_CACHE_DIR")
        .output()
        .map_err(|e| e.to_string())
}

fn plumbing() -> Checks {
    let mut c = Checks::new();
    let determinism = (|| {
        for args in [
            &["certify", "--n-max", "40"][..],
            &["verify-all", "--n-max", "40", "--format", "csv"],
        ] {
            let one = run_cli(&[args, &["--parallelism", "1"]].concat())?;
            let four = run_cli(&[args, &["--parallelism", "4"]].concat())?;
            ensure(one.stdout == four.stdout && !one.stdout.is_empty(), || {
                format!("{args:?} differs")
            })?;
        }
        Ok(())
    })();
    check(&mut c, "byte-identical across parallelism", determinism);
    let fault = run_cli(&["compute", "--n-max", "20", "--inject-fault"]).and_then(|out| {
        let text = String::from_utf8_lossy(&out.stdout).into_owned();
        ensure(out.status.code() == Some(2), || {
            format!("exit {:?}", out.status.code())
        })?;
        ensure(
            text.contains("\"kind\":\"counterexample\"")
                && text.contains("\"operation\":\"s\"")
                && text.contains("\"parameters\":{\"n\":1}"),
            || text.clone(),
        )
    });
    check(&mut c, "injected fault exits 2 with counterexample", fault);
    c
}

fn performance() -> Checks {
    let mut c = Checks::new();
    let outcome = bench_one(2000).map_err(err).and_then(|row| {
        println!(
            "    s_2000: factored {:.3}s, naive {:.3}s, speedup {:.2}x",
            row.factored_secs,
            row.naive_secs,
            row.speedup()
        );
        ensure(row.agree, || "values differ".to_string())?;
        ensure(row.speedup() >= 3.0, || {
            format!("speedup {:.2}", row.speedup())
        })
    });
    check(&mut c, "factored >= 3x naive at n = 2000", outcome);
    c
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "integrality", Some(120), integrality),
        (2, "lemma scans", Some(180), lemmas),
        (3, "floor inequality characterization", Some(60), floor_scan),
        (
            4,
            "ratio identity, monotonicity, bounds",
            Some(120),
            theorem2,
        ),
        (5, "growth envelope", Some(120), envelope),
        (6, "congruences", Some(180), congruences),
        (7, "1/pi series", Some(30), pi_series),
        (8, "determinism and falsification plumbing", None, plumbing),
        (9, "factored engine performance", None, performance),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let checks = run();
        let elapsed = start.elapsed();
        let mut problems: Vec<String> = checks
            .iter()
            .filter_map(|(what, r)| r.as_ref().err().map(|e| format!("{what}: {e}")))
            .collect();
        if let Some(secs) = budget {
            if elapsed > Duration::from_secs(secs) {
                problems.push(format!("took longer than {secs}s"));
            }
        }
        let status = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {id} {name} ... {status} ({:.1}s)",
            elapsed.as_secs_f64()
        );
        for p in &problems {
            println!("    {p}");
        }
        if !problems.is_empty() {
            failed += 1;
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
