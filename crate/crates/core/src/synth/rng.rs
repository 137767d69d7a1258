//! Seeded uniform sampling.
//!
//! The generator is xoshiro256** whose 256-bit state is filled from the seed
//! by SplitMix64. A draw in `[0, 1)` takes the top 53 bits of the next output
//! and multiplies by 2^-53; a draw in `[lo, hi)` is `lo + (hi - lo) * u`,
//! pulled back below `hi` if rounding lands on it.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::error::{Error, Result};

const UNIT_SCALE: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Debug, Clone)]
pub struct UniformRng {
    inner: Xoshiro256StarStar,
}

impl UniformRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * UNIT_SCALE
    }

    /// Uniform in `[lo, hi)`. Callers check the range with [`check_range`].
    pub fn next_in(&mut self, lo: f64, hi: f64) -> f64 {
        let v = lo + (hi - lo) * self.next_unit();
        if v >= hi {
            hi.next_down()
        } else {
            v
        }
    }
}

pub fn check_range(lo: f64, hi: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "range bounds must be finite, got [{lo}, {hi})"
        )));
    }
    if lo >= hi || !(hi - lo).is_finite() {
        return Err(Error::InvalidArgument(format!(
            "empty or unrepresentable range [{lo}, {hi})"
        )));
    }
    Ok(())
}
