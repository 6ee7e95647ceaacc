//! Size limits for dense state vectors.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::necklace::MIN_SITES;

/// Default largest site count for dense vectors (65,536 amplitudes).
pub const DEFAULT_DENSE_CAP: u32 = 16;
/// Hard ceiling the override may raise the cap to.
pub const MAX_DENSE_CAP: u32 = 22;
/// Environment variable overriding [`DEFAULT_DENSE_CAP`].
pub const DENSE_CAP_ENV: &str = "TISTATES_DENSE_CAP";

/// The dense cap in effect, read once from the environment. Values that do
/// not parse fall back to the default; values above [`MAX_DENSE_CAP`] are
/// clamped.
pub fn dense_cap() -> u32 {
    static CAP: OnceLock<u32> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(DENSE_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .map(|v| v.clamp(MIN_SITES, MAX_DENSE_CAP))
            .unwrap_or(DEFAULT_DENSE_CAP)
    })
}

pub(crate) fn check_dense(n: u32) -> Result<()> {
    check_range(n, dense_cap())
}

pub(crate) fn check_range(n: u32, max: u32) -> Result<()> {
    if (MIN_SITES..=max).contains(&n) {
        Ok(())
    } else {
        Err(Error::Size { n, min: MIN_SITES, max })
    }
}
