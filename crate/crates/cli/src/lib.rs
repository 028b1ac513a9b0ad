//! Command-line front end for `binsum`: argument parsing, deterministic
//! JSON/CSV reports, a result cache and the verification suite.
//!
//! Exit status is 0 when every check holds, 2 when a check is falsified (the
//! report then carries a counterexample record) and 1 for usage or I/O errors.

pub mod cache;
pub mod config;
pub mod report;
pub mod runner;

use std::io::Write;

use config::{Command, RunConfig};
use runner::{execute, Options, Outcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FALSIFIED: i32 = 2;

fn cacheable(config: &RunConfig) -> bool {
    !config.inject_fault && !matches!(config.command, Command::Bench { .. })
}

fn cache_key(config: &RunConfig) -> String {
    format!(
        "{}|{:?}|unsafe_large={}",
        config.command.cache_key(),
        config.format,
        config.unsafe_large
    )
}

fn write_output(config: &RunConfig, bytes: &[u8]) -> Result<(), String> {
    match &config.output {
        Some(path) => {
            std::fs::write(path, bytes).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| format!("cannot write stdout: {e}"))
        }
    }
}

/// Serialized report bytes and whether any check failed.
fn produce(config: &RunConfig) -> Result<(Vec<u8>, bool), String> {
    let mut cache = config.cache.as_deref().map(|path| {
        let (cache, warning) = cache::ResultCache::open(path);
        if let Some(w) = warning {
            eprintln!("warning: {w}");
        }
        cache
    });
    let key = cache_key(config);
    if cacheable(config) {
        if let Some(hit) = cache.as_ref().and_then(|c| c.get(&key)) {
            return Ok((hit.as_bytes().to_vec(), false));
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| format!("cannot start worker pool: {e}"))?;
    let opts = Options {
        unsafe_large: config.unsafe_large,
        inject_fault: config.inject_fault,
    };
    let Outcome {
        report,
        counterexamples,
    } = pool.install(|| execute(&config.command, &opts))?;
    for c in &counterexamples {
        eprintln!("falsified: {c}");
    }
    let bytes = report::emit(&report, config.format)?;
    let falsified = !counterexamples.is_empty();

    if let Some(cache) = cache.as_mut().filter(|_| cacheable(config) && !falsified) {
        let text = String::from_utf8(bytes.clone()).map_err(|e| e.to_string())?;
        cache.insert(key, text);
        if let Err(e) = cache.save() {
            eprintln!("warning: cache not saved: {e}");
        }
    }
    Ok((bytes, falsified))
}

/// Runs one configured command and returns the process exit status.
pub fn run(config: &RunConfig) -> i32 {
    let status = match produce(config) {
        Ok((bytes, falsified)) => match write_output(config, &bytes) {
            Ok(()) if falsified => EXIT_FALSIFIED,
            Ok(()) => EXIT_OK,
            Err(msg) => {
                eprintln!("error: {msg}");
                EXIT_ERROR
            }
        },
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_ERROR
        }
    };
    if config.stats {
        eprintln!("bigint_ops={}", binsum::stats::bigint_ops());
    }
    status
}
