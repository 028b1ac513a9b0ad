//! Process-wide counter of big-integer operations.
//!
//! Incremented by every multiplication or division on arbitrary-precision
//! values performed by this crate. Used to observe cache effectiveness.

use std::sync::atomic::{AtomicU64, Ordering};

static BIGINT_OPS: AtomicU64 = AtomicU64::new(0);

pub fn bigint_ops() -> u64 {
    BIGINT_OPS.load(Ordering::Relaxed)
}

pub(crate) fn record(count: u64) {
    BIGINT_OPS.fetch_add(count, Ordering::Relaxed);
}
