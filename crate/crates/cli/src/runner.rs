//! Executes one command and turns its results into a [`Report`].

use std::ops::RangeInclusive;
use std::time::Instant;

use binsum::asymptotics::{bounds_for, pi_partial_sum, sample_asymptotics, theorem2_range};
use binsum::congruences::{
    check_fermat_like, check_mod8, check_mod_p_squared, fermat_range, mod8_range,
    mod_p_squared_range, CongruenceResult,
};
use binsum::divisibility::{
    certify_range, certify_theorem1_in, corollary_range, lemma1_range, lemma2_range, p3_range,
    scan_floor_inequality, DivisibilityCertificate,
};
use binsum::exact_arith::is_prime;
use binsum::sequences::{
    divisor_factored_in, factored_peak_bits, inner_sum_in, s_from_sum, s_in, s_naive, summand_in,
    t_in, SequenceValue,
};
use binsum::{BigRational, Counterexample, Engine, Error};
use rayon::prelude::*;
use serde_json::Value;

use crate::config::{ClaimArg, Command, NRange, ValueKind, COMPUTE_CEILING, SWEEP_CEILING};
use crate::report::{counterexample_record, Record, Report, COUNTEREXAMPLE_COLUMNS};

/// Relative tolerance for the log-domain envelope check.
pub const ENVELOPE_TOL: f64 = 1e-9;
/// Required agreement of the 1/pi partial sum with the reference.
pub const PI_REL_TOL: f64 = 1e-12;

/// Why a command stopped early.
#[derive(Debug)]
pub enum Failure {
    /// A mathematical check failed; maps to exit status 2.
    Falsified(Counterexample),
    /// Bad arguments or an internal error; maps to exit status 1.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Falsified(c) => Failure::Falsified(*c),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Run<T> = Result<T, Failure>;

#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    /// Every counterexample found; nonempty means exit status 2.
    pub counterexamples: Vec<Counterexample>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome {
            report,
            counterexamples: Vec::new(),
        }
    }

    fn falsified(c: Counterexample) -> Self {
        Outcome {
            report: Report::single(counterexample_record(&c), COUNTEREXAMPLE_COLUMNS),
            counterexamples: vec![c],
        }
    }
}

pub struct Options {
    pub unsafe_large: bool,
    pub inject_fault: bool,
}

pub fn execute(command: &Command, opts: &Options) -> Result<Outcome, String> {
    check_ceilings(command, opts.unsafe_large)?;
    let result = match command {
        Command::Compute { range, kind, k } => compute(range, *kind, *k, opts.inject_fault),
        Command::Certify { range, k } => certify(range, *k),
        Command::ScanFloor { m_max, n_max } => scan_floor(*m_max, *n_max),
        Command::Bounds { range } => bounds(range),
        Command::Asymptote { n_max, stride } => asymptote(*n_max, *stride),
        Command::PiSeries { terms } => pi_series(*terms),
        Command::Congruence { claim, max, min } => congruence(*claim, min.unwrap_or(1), *max),
        Command::VerifyAll { n_max } => return Ok(verify_all(*n_max, opts.inject_fault)),
        Command::Bench { range } => bench(range),
    };
    match result {
        Ok(report) => Ok(Outcome::ok(report)),
        Err(Failure::Falsified(c)) => Ok(Outcome::falsified(c)),
        Err(Failure::Usage(msg)) => Err(msg),
    }
}

fn top_n(range: &NRange) -> u64 {
    range.n.or(range.n_max).unwrap_or(0)
}

fn check_ceilings(command: &Command, unsafe_large: bool) -> Result<(), String> {
    if unsafe_large {
        return Ok(());
    }
    let (value, ceiling) = match command {
        Command::VerifyAll { n_max } => (*n_max, SWEEP_CEILING),
        Command::Compute { range, .. } | Command::Bounds { range } | Command::Bench { range } => {
            (top_n(range), COMPUTE_CEILING)
        }
        Command::Certify { range, k: None } => (top_n(range), SWEEP_CEILING),
        Command::Certify { range, k: Some(_) } => (top_n(range), COMPUTE_CEILING),
        Command::ScanFloor { m_max, n_max } => ((*m_max).max(*n_max), COMPUTE_CEILING),
        Command::Asymptote { n_max, .. } => (*n_max, COMPUTE_CEILING),
        Command::PiSeries { terms } => (*terms, COMPUTE_CEILING),
        Command::Congruence { max, .. } => (*max, COMPUTE_CEILING),
    };
    if value > ceiling {
        return Err(format!(
            "{} limited to n <= {ceiling} (got {value}); pass --unsafe-large to override",
            command.name()
        ));
    }
    Ok(())
}

/// Maps every item, then keeps the first failure in input order so the
/// reported counterexample does not depend on scheduling.
fn ordered<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> Run<U> + Sync + Send) -> Run<Vec<U>> {
    let results: Vec<Run<U>> = items.par_iter().map(f).collect();
    results.into_iter().collect()
}

fn rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// `s_n`, optionally with the inner sum corrupted by one to exercise the
/// integrality check.
fn s_value(engine: &Engine, n: u64, fault: bool) -> Run<SequenceValue> {
    if !fault {
        return Ok(s_in(engine, n)?);
    }
    let sum = inner_sum_in(engine, n)? + 1u32;
    let divisor = divisor_factored_in(engine, n)?.to_integer()?;
    Ok(s_from_sum(n, sum, divisor)?)
}

const VALUE_COLUMNS: &[&str] = &["kind", "n", "k", "value"];

fn compute(range: &NRange, kind: ValueKind, k: Option<u64>, fault: bool) -> Run<Report> {
    let min = match kind {
        ValueKind::T => 1,
        _ => k.unwrap_or(0),
    };
    let (lo, hi, single) = range.resolve(min).map_err(Failure::Usage)?;
    let engine = Engine::for_index(hi + 1);
    let ns: Vec<u64> = (lo..=hi).collect();
    let needs_k = || k.ok_or_else(|| Failure::Usage("--k is required for this kind".to_string()));
    let records = match kind {
        ValueKind::S => ordered(&ns, |&n| {
            let v = s_value(&engine, n, fault)?;
            Ok(Record::new()
                .str("kind", "s_n")
                .uint("n", n)
                .big("value", &v.s)
                .build())
        })?,
        ValueKind::InnerSum => ordered(&ns, |&n| {
            let v = inner_sum_in(&engine, n)?;
            Ok(Record::new()
                .str("kind", "inner_sum")
                .uint("n", n)
                .big("value", v)
                .build())
        })?,
        ValueKind::Summand => {
            let k = needs_k()?;
            ordered(&ns, |&n| {
                let v = summand_in(&engine, n, k)?;
                Ok(Record::new()
                    .str("kind", "summand")
                    .uint("n", n)
                    .uint("k", k)
                    .big("value", v.value)
                    .build())
            })?
        }
        ValueKind::T => {
            let k = needs_k()?;
            ordered(&ns, |&n| {
                let v = t_in(&engine, n, k)?;
                Ok(Record::new()
                    .str("kind", "t")
                    .uint("n", n)
                    .uint("k", k)
                    .big("value", v)
                    .build())
            })?
        }
    };
    Ok(if single {
        Report::single(
            records.into_iter().next().expect("one record"),
            VALUE_COLUMNS,
        )
    } else {
        Report::rows(records, VALUE_COLUMNS)
    })
}

pub fn certificate_record(c: &DivisibilityCertificate) -> Value {
    let margins: Vec<Value> = c
        .margins
        .iter()
        .map(|m| {
            Record::new()
                .uint("p", m.prime)
                .uint("num", m.numerator)
                .uint("den", m.denominator)
                .build()
        })
        .collect();
    Record::new()
        .uint("n", c.n)
        .uint("k", c.k)
        .big("quotient", &c.quotient)
        .value("margins", Value::Array(margins))
        .bool("cnk_divides", c.cnk_divides)
        .build()
}

const CERTIFICATE_COLUMNS: &[&str] = &["n", "k", "quotient", "cnk_divides", "margins"];

fn certify(range: &NRange, k: Option<u64>) -> Run<Report> {
    let (lo, hi, single) = range
        .resolve(k.unwrap_or(1).max(1))
        .map_err(Failure::Usage)?;
    let engine = Engine::for_index(hi);
    let pairs: Vec<(u64, u64)> = match k {
        Some(k) => (lo..=hi).map(|n| (n, k)).collect(),
        None => (lo..=hi)
            .flat_map(|n| (0..=n).map(move |k| (n, k)))
            .collect(),
    };
    let records = ordered(&pairs, |&(n, k)| {
        let cert = certify_theorem1_in(&engine, n, k)?;
        if !cert.cnk_divides {
            return Err(Failure::Falsified(Counterexample::new(
                "certify_theorem1",
                &[("n", n), ("k", k)],
                "C(n,k) does not divide the quotient",
            )));
        }
        Ok(certificate_record(&cert))
    })?;
    Ok(if single && records.len() == 1 {
        Report::single(
            records.into_iter().next().expect("one record"),
            CERTIFICATE_COLUMNS,
        )
    } else {
        Report::rows(records, CERTIFICATE_COLUMNS)
    })
}

fn scan_floor(m_max: u64, n_max: u64) -> Run<Report> {
    let scan = scan_floor_inequality(m_max, n_max)?;
    if let Some(v) = scan
        .violations
        .iter()
        .find(|v| !binsum::divisibility::in_exception_set(v.m, v.n, v.k))
    {
        return Err(Failure::Falsified(Counterexample::new(
            "scan_floor_inequality",
            &[("m", v.m), ("n", v.n), ("k", v.k)],
            "floor inequality fails outside the exception set",
        )));
    }
    let rows: Vec<Value> = scan
        .violations
        .iter()
        .map(|v| {
            Record::new()
                .uint("m", v.m)
                .uint("n", v.n)
                .uint("k", v.k)
                .build()
        })
        .collect();
    let pair = |(a, b): (u64, u64)| Value::Array(vec![Value::from(a), Value::from(b)]);
    let record = Record::new()
        .value("m_range", pair(scan.m_range))
        .value("n_range", pair(scan.n_range))
        .value("violations", Value::Array(rows.clone()))
        .bool("all_in_exception_set", scan.all_in_exception_set)
        .bool("exception_set_exhausted", scan.exception_set_exhausted)
        .build();
    Ok(Report::nested(record, rows, &["m", "n", "k"]))
}

const BOUNDS_COLUMNS: &[&str] = &["n", "s", "lower", "upper", "lower_tight", "upper_tight"];

fn bounds(range: &NRange) -> Run<Report> {
    let (lo, hi, single) = range.resolve(1).map_err(Failure::Usage)?;
    if lo == 0 {
        return Err(Failure::Usage("bounds need n >= 1".to_string()));
    }
    let engine = Engine::for_index(hi);
    let ns: Vec<u64> = (lo..=hi).collect();
    let records = ordered(&ns, |&n| {
        let b = bounds_for(&engine, &s_in(&engine, n)?)?;
        Ok(Record::new()
            .uint("n", n)
            .big("s", &b.s)
            .str("lower", &rational(&b.lower))
            .str("upper", &rational(&b.upper))
            .bool("lower_tight", b.lower_tight())
            .bool("upper_tight", b.upper_tight())
            .build())
    })?;
    Ok(if single {
        Report::single(
            records.into_iter().next().expect("one record"),
            BOUNDS_COLUMNS,
        )
    } else {
        Report::rows(records, BOUNDS_COLUMNS)
    })
}

fn asymptote(n_max: u64, stride: u64) -> Run<Report> {
    let samples = sample_asymptotics(n_max, stride)?;
    if let Some(s) = samples.iter().find(|s| !s.within_envelope(ENVELOPE_TOL)) {
        return Err(Failure::Falsified(Counterexample::new(
            "sample_asymptotics",
            &[("n", s.n)],
            format!(
                "log s_n = {} outside [{}, {}]",
                s.log_s, s.lower_log, s.upper_log
            ),
        )));
    }
    let rows = samples
        .iter()
        .map(|s| {
            Record::new()
                .uint("n", s.n)
                .float("log_s", s.log_s)
                .float("nth_root", s.nth_root)
                .float("step_ratio", s.step_ratio)
                .float("lower_log", s.lower_log)
                .float("upper_log", s.upper_log)
                .float("lower_root", s.lower_root)
                .float("upper_root", s.upper_root)
                .build()
        })
        .collect();
    Ok(Report::rows(
        rows,
        &[
            "n",
            "log_s",
            "nth_root",
            "step_ratio",
            "lower_root",
            "upper_root",
        ],
    ))
}

fn pi_series(terms: u64) -> Run<Report> {
    let sum = pi_partial_sum(terms)?;
    let brackets = sum.brackets_reference();
    if terms >= 40 && !brackets {
        return Err(Failure::Falsified(Counterexample::new(
            "pi_partial_sum",
            &[("N", terms)],
            "value + remainder bound does not bracket 1/pi",
        )));
    }
    let record = Record::new()
        .uint("terms", terms)
        .big("numerator", sum.value.numer())
        .big("denominator", sum.value.denom())
        .big("remainder_numerator", sum.remainder_bound.numer())
        .big("remainder_denominator", sum.remainder_bound.denom())
        .float("relative_error", sum.relative_error())
        .float("relative_remainder", sum.relative_remainder())
        .float("significant_digits", sum.significant_digits())
        .bool("brackets_reference", brackets)
        .build();
    Ok(Report::single(
        record,
        &[
            "terms",
            "numerator",
            "denominator",
            "remainder_numerator",
            "remainder_denominator",
            "relative_error",
            "relative_remainder",
            "significant_digits",
            "brackets_reference",
        ],
    ))
}

pub fn congruence_record(r: &CongruenceResult) -> Value {
    Record::new()
        .str("claim", r.claim.as_str())
        .uint("parameter", r.parameter)
        .uint("lhs_residue", r.lhs_residue)
        .uint("expected_residue", r.expected_residue)
        .bool("holds", r.holds)
        .build()
}

fn congruence(claim: ClaimArg, min: u64, max: u64) -> Run<Report> {
    let params: Vec<u64> = match claim {
        ClaimArg::Mod8 => (min.max(1)..=max).collect(),
        ClaimArg::Fermat => (min..=max).filter(|&p| is_prime(p)).collect(),
        ClaimArg::ModP2 => (min.max(5)..=max).filter(|&p| is_prime(p)).collect(),
    };
    let results = ordered(&params, |&x| {
        Ok(match claim {
            ClaimArg::Mod8 => check_mod8(x)?,
            ClaimArg::Fermat => check_fermat_like(x)?,
            ClaimArg::ModP2 => check_mod_p_squared(x)?,
        })
    })?;
    if let Some(bad) = results.iter().find(|r| !r.holds) {
        let name = if claim == ClaimArg::Mod8 { "n" } else { "p" };
        return Err(Failure::Falsified(Counterexample::new(
            bad.claim.as_str(),
            &[(name, bad.parameter)],
            format!(
                "residue {} but expected {} (mod {})",
                bad.lhs_residue,
                bad.expected_residue,
                bad.modulus()
            ),
        )));
    }
    Ok(Report::rows(
        results.iter().map(congruence_record).collect(),
        &[
            "claim",
            "parameter",
            "lhs_residue",
            "expected_residue",
            "holds",
        ],
    ))
}

/// One named check of the full suite.
struct Check {
    name: &'static str,
    run: Box<dyn Fn() -> Run<usize>>,
}

fn nonempty(range: RangeInclusive<u64>) -> Option<RangeInclusive<u64>> {
    (!range.is_empty()).then_some(range)
}

fn suite(n_max: u64, fault: bool) -> Vec<Check> {
    let n = n_max;
    let mut checks: Vec<Check> = Vec::new();
    let mut add =
        |name: &'static str, run: Box<dyn Fn() -> Run<usize>>| checks.push(Check { name, run });
    add(
        "integrality",
        Box::new(move || {
            let engine = Engine::for_index(n);
            let ns: Vec<u64> = (0..=n).collect();
            Ok(ordered(&ns, |&m| s_value(&engine, m, fault && m >= 1))?.len())
        }),
    );
    add(
        "certify",
        Box::new(move || {
            Ok(nonempty(1..=n.min(300))
                .map(certify_range)
                .transpose()?
                .unwrap_or(0))
        }),
    );
    add(
        "lemma1",
        Box::new(move || {
            Ok(if n >= 1 {
                lemma1_range(8, n.min(100))?
            } else {
                0
            })
        }),
    );
    add(
        "lemma2",
        Box::new(move || {
            Ok(nonempty(1..=n.min(300))
                .map(lemma2_range)
                .transpose()?
                .unwrap_or(0))
        }),
    );
    add(
        "corollary",
        Box::new(move || {
            Ok(nonempty(1..=n)
                .map(corollary_range)
                .transpose()?
                .unwrap_or(0))
        }),
    );
    add(
        "p3_reduction",
        Box::new(move || {
            Ok(nonempty(1..=n.min(100))
                .map(p3_range)
                .transpose()?
                .unwrap_or(0))
        }),
    );
    add(
        "floor_scan",
        Box::new(move || {
            if n == 0 {
                return Ok(0);
            }
            let n_top = n.min(200);
            scan_floor(50, n_top)?;
            Ok(49 * (n_top * (n_top + 3) / 2) as usize)
        }),
    );
    add(
        "ratio_monotone",
        Box::new(move || {
            Ok(nonempty(2..=n.min(300))
                .map(theorem2_range)
                .transpose()?
                .unwrap_or(0))
        }),
    );
    add(
        "bounds",
        Box::new(move || {
            Ok(nonempty(1..=n)
                .map(binsum::asymptotics::bounds_range)
                .transpose()?
                .map_or(0, |v| v.len()))
        }),
    );
    add(
        "envelope",
        Box::new(move || {
            if n < 2 {
                return Ok(0);
            }
            let stride = (n / 4).max(1);
            match asymptote(n, stride)? {
                Report::Rows { rows, .. } => Ok(rows.len()),
                _ => unreachable!("samples are rows"),
            }
        }),
    );
    add(
        "pi_series",
        Box::new(|| {
            let sum = pi_partial_sum(100)?;
            if !sum.brackets_reference()
                || sum.relative_error() >= PI_REL_TOL
                || sum.relative_remainder() >= PI_REL_TOL
            {
                return Err(Failure::Falsified(Counterexample::new(
                    "pi_partial_sum",
                    &[("N", 100)],
                    format!(
                        "relative error {:e}, remainder {:e}, brackets {}",
                        sum.relative_error(),
                        sum.relative_remainder(),
                        sum.brackets_reference()
                    ),
                )));
            }
            Ok(1)
        }),
    );
    add("mod8", Box::new(move || Ok(mod8_range(n)?.len())));
    add(
        "fermat_quotient",
        Box::new(move || Ok(fermat_range(n + 1)?.len())),
    );
    add(
        "mod_p_squared",
        Box::new(move || Ok(mod_p_squared_range(5, n.min(100))?.len())),
    );
    checks
}

pub const VERIFY_COLUMNS: &[&str] = &["check", "holds", "checked", "counterexample"];

/// Runs every check; a failed check records its counterexample and the suite
/// moves on to the next one.
fn verify_all(n_max: u64, fault: bool) -> Outcome {
    let mut rows = Vec::new();
    let mut counterexamples = Vec::new();
    for check in suite(n_max, fault) {
        let row = Record::new().str("check", check.name);
        let row = match (check.run)() {
            Ok(count) => row
                .bool("holds", true)
                .uint("checked", count as u64)
                .value("counterexample", Value::Null),
            Err(Failure::Falsified(c)) => {
                let row = row
                    .bool("holds", false)
                    .value("checked", Value::Null)
                    .value("counterexample", counterexample_record(&c));
                counterexamples.push(c);
                row
            }
            Err(Failure::Usage(msg)) => {
                let c =
                    Counterexample::new(check.name, &[("n_max", n_max)], format!("error: {msg}"));
                let row = row
                    .bool("holds", false)
                    .value("checked", Value::Null)
                    .value("counterexample", counterexample_record(&c));
                counterexamples.push(c);
                row
            }
        };
        rows.push(row.build());
    }
    Outcome {
        report: Report::rows(rows, VERIFY_COLUMNS),
        counterexamples,
    }
}

/// Timing of the factored engine against plain factorial arithmetic for one `n`.
#[derive(Clone, Debug)]
pub struct BenchRow {
    pub n: u64,
    pub factored_secs: f64,
    pub naive_secs: f64,
    pub factored_peak_bits: u64,
    pub naive_peak_bits: u64,
    pub agree: bool,
}

impl BenchRow {
    pub fn speedup(&self) -> f64 {
        self.naive_secs / self.factored_secs
    }
}

pub fn bench_one(n: u64) -> binsum::Result<BenchRow> {
    let start = Instant::now();
    let engine = Engine::for_index(n);
    let factored = s_in(&engine, n)?;
    let factored_secs = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let naive = s_naive(n)?;
    let naive_secs = start.elapsed().as_secs_f64();

    Ok(BenchRow {
        n,
        factored_secs,
        naive_secs,
        factored_peak_bits: factored_peak_bits(&engine, n)?,
        naive_peak_bits: naive.peak_bits,
        agree: naive.value.s == factored.s,
    })
}

fn bench(range: &NRange) -> Run<Report> {
    let range = if range.n.is_none() && range.n_max.is_none() {
        NRange {
            n: Some(2000),
            ..NRange::default()
        }
    } else {
        range.clone()
    };
    let (lo, hi, single) = range.resolve(1).map_err(Failure::Usage)?;
    let mut rows = Vec::new();
    // Sequential on purpose: concurrent runs would distort the timings.
    for n in lo..=hi {
        let row = bench_one(n)?;
        if !row.agree {
            return Err(Failure::Falsified(Counterexample::new(
                "bench",
                &[("n", n)],
                "factored and naive values differ",
            )));
        }
        rows.push(
            Record::new()
                .uint("n", n)
                .float("factored_ms", row.factored_secs * 1e3)
                .float("naive_ms", row.naive_secs * 1e3)
                .float("speedup", row.speedup())
                .uint("factored_peak_bits", row.factored_peak_bits)
                .uint("naive_peak_bits", row.naive_peak_bits)
                .bool("agree", row.agree)
                .build(),
        );
    }
    let columns = &[
        "n",
        "factored_ms",
        "naive_ms",
        "speedup",
        "factored_peak_bits",
        "naive_peak_bits",
        "agree",
    ];
    Ok(if single {
        Report::single(rows.pop().expect("one row"), columns)
    } else {
        Report::rows(rows, columns)
    })
}
