//! Memory and enumeration limits shared by all table-building routines.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Environment variable capping table sizes, in megabytes.
pub const MEM_LIMIT_ENV: &str = "SSLAB_MEM_LIMIT_MB";

const DEFAULT_MEM_LIMIT_MB: u64 = 2048;

/// Largest coordinate set the brute-force oracle will enumerate.
pub const ENUMERATION_LIMIT: usize = 30;

/// Subsets are stored as 64-bit masks.
pub const MAX_ITEMS: usize = 64;

pub fn memory_limit_bytes() -> u128 {
    static LIMIT: OnceLock<u128> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        let mb = std::env::var(MEM_LIMIT_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .unwrap_or(DEFAULT_MEM_LIMIT_MB);
        mb as u128 * 1024 * 1024
    })
}

/// Fails when `entries` items of `entry_bytes` each would not fit in the memory cap.
pub fn check_table(what: &'static str, entries: u128, entry_bytes: u128) -> Result<()> {
    let limit = memory_limit_bytes();
    let requested = entries.saturating_mul(entry_bytes);
    if requested > limit {
        return Err(Error::capacity(what, requested, limit));
    }
    Ok(())
}

pub fn check_items(n: usize) -> Result<()> {
    if n > MAX_ITEMS {
        return Err(Error::capacity("items per instance", n as u128, MAX_ITEMS as u128));
    }
    Ok(())
}

pub fn check_enumeration(k: usize) -> Result<()> {
    if k > ENUMERATION_LIMIT {
        return Err(Error::capacity(
            "brute-force enumeration width",
            k as u128,
            ENUMERATION_LIMIT as u128,
        ));
    }
    Ok(())
}
