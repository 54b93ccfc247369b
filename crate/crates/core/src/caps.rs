//! Enumeration and materialization caps.
//!
//! Exhaustive scans refuse (with `CapExceeded`) instead of sampling silently
//! once an instance outgrows these bounds. Defaults can be raised through
//! `MUKIT_ENUM_CAP` / `MUKIT_OBJ_CAP`.

use crate::{Error, Result};

/// Default bound on poset size for exhaustive subset enumeration (2^n scans).
pub const DEFAULT_ENUM_CAP: usize = 12;

/// Default bound on the cardinality of a materialized functor application.
pub const DEFAULT_OBJ_CAP: u128 = 1_000_000;

/// Default bound on |T| for the monoid engine (|T|^|T| maps enumerated).
pub const DEFAULT_MONOID_CAP: usize = 5;

/// Default bound on the hom-set size for monotone-map enumeration.
pub const DEFAULT_HOM_CAP: u128 = 200_000;

fn env_usize(var: &str, default: usize) -> usize {
    std::env::var(var)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(default)
}

fn env_u128(var: &str, default: u128) -> u128 {
    std::env::var(var)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(default)
}

/// Cap on poset size for 2^n subset scans.
pub fn enum_cap() -> usize {
    env_usize("MUKIT_ENUM_CAP", DEFAULT_ENUM_CAP)
}

/// Cap on materialized object cardinality.
pub fn obj_cap() -> u128 {
    env_u128("MUKIT_OBJ_CAP", DEFAULT_OBJ_CAP)
}

/// Cap on hom-set enumerations.
pub fn hom_cap() -> u128 {
    env_u128("MUKIT_HOM_CAP", DEFAULT_HOM_CAP)
}

/// Guard helper: refuse when `needed` exceeds `cap`.
pub fn require(what: &str, needed: u128, cap: u128) -> Result<()> {
    if needed > cap {
        Err(Error::CapExceeded {
            what: what.to_string(),
            needed,
            cap,
        })
    } else {
        Ok(())
    }
}
