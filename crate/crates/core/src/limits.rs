//! Depth caps guarding against runaway enumeration.

use crate::error::{Error, Result};

pub const DEPTH_CAP_ENV: &str = "APOLLONIAN_DEPTH_CAP";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Longest normal-form word listed by enumeration (9·5⁷ - 1 ≈ 703k at 8).
    pub word_length: usize,
    /// Deepest packing orbit (about 1.06M circles at 12).
    pub packing_depth: usize,
    /// Longest Schottky word used for limit-set samples.
    pub limit_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            word_length: 8,
            packing_depth: 12,
            limit_depth: 10,
        }
    }
}

impl Limits {
    /// Defaults, with every cap replaced by `APOLLONIAN_DEPTH_CAP` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(DEPTH_CAP_ENV) {
            Ok(v) => {
                let cap: usize = v.trim().parse().map_err(|_| {
                    Error::Parse(format!("{DEPTH_CAP_ENV} must be a nonnegative integer, got {v:?}"))
                })?;
                Ok(Limits::uniform(cap))
            }
            Err(_) => Ok(Limits::default()),
        }
    }

    pub fn uniform(cap: usize) -> Self {
        Limits {
            word_length: cap,
            packing_depth: cap,
            limit_depth: cap,
        }
    }

    pub fn check_word_length(&self, n: usize) -> Result<()> {
        check(n, self.word_length)
    }

    pub fn check_packing_depth(&self, n: usize) -> Result<()> {
        check(n, self.packing_depth)
    }

    pub fn check_limit_depth(&self, n: usize) -> Result<()> {
        check(n, self.limit_depth)
    }
}

fn check(requested: usize, cap: usize) -> Result<()> {
    if requested > cap {
        Err(Error::DepthCapExceeded { requested, cap })
    } else {
        Ok(())
    }
}
