//! Global search-node counter, logged at debug level every million nodes.

use std::sync::atomic::{AtomicU64, Ordering};

static NODES: AtomicU64 = AtomicU64::new(0);
const STEP: u64 = 1_000_000;

pub(crate) fn add(nodes: u64) {
    let before = NODES.fetch_add(nodes, Ordering::Relaxed);
    let after = before + nodes;
    if before / STEP != after / STEP {
        log::debug!("{} search nodes", after / STEP * STEP);
    }
}

/// Nodes visited so far in this process.
pub fn nodes() -> u64 {
    NODES.load(Ordering::Relaxed)
}
