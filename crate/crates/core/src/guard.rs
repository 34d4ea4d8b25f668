//! Size guards for the exponential enumerations.
//!
//! Every guard is expressed as a *ground size*: the number of vertices of a
//! vertex-induced family, the number of edges of an edge-subset family, or the
//! bit length of the element count of an explicit family.

use crate::error::{Error, Result};

/// Name of the environment variable that raises every guard.
pub const GUARD_ENV: &str = "WEIGHTLAT_GUARD";

/// Ground size beyond which nothing is materialized, override or not.
pub const HARD_LIMIT: usize = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    /// Family construction.
    pub family: usize,
    /// Comparable-pair scans and superset minima (3^n work).
    pub pairs: usize,
    /// Cover closure and all-pairs join scans (4^n work).
    pub covers: usize,
    /// Triple scans and the convex iteration.
    pub triples: usize,
    /// Maximal chain enumeration (n! chains on a Boolean lattice).
    pub chains: usize,
    /// Exact NP-hard graph parameters (clique, independence, chromatic).
    pub params: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            family: 14,
            pairs: 14,
            covers: 10,
            triples: 12,
            chains: 8,
            params: 16,
        }
    }
}

impl Guards {
    /// Every guard at [`HARD_LIMIT`].
    pub fn unlimited() -> Self {
        Self::raised_to(HARD_LIMIT)
    }

    /// Defaults, with every guard raised to at least `n`.
    pub fn raised_to(n: usize) -> Self {
        let d = Guards::default();
        Guards {
            family: d.family.max(n),
            pairs: d.pairs.max(n),
            covers: d.covers.max(n),
            triples: d.triples.max(n),
            chains: d.chains.max(n),
            params: d.params.max(n),
        }
    }

    /// Interprets a `WEIGHTLAT_GUARD` value. A number raises every guard to
    /// that size; any other non-empty value lifts the guards entirely.
    pub fn from_env_value(value: &str) -> Option<Self> {
        let value = value.trim();
        if value.is_empty() {
            return None;
        }
        match value.parse::<usize>() {
            Ok(n) => Some(Self::raised_to(n)),
            Err(_) => Some(Self::unlimited()),
        }
    }

    pub fn from_env() -> Option<Self> {
        std::env::var(GUARD_ENV)
            .ok()
            .and_then(|v| Self::from_env_value(&v))
    }

    pub(crate) fn check(operation: &'static str, size: usize, limit: usize) -> Result<()> {
        let limit = limit.min(HARD_LIMIT);
        if size > limit {
            Err(Error::GuardExceeded {
                operation,
                size,
                limit,
            })
        } else {
            Ok(())
        }
    }
}
