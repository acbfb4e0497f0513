//! Deterministic derivation of independent random streams.
//!
//! Every randomized component takes a 64-bit seed. Sub-streams (one per
//! encoded column, one per trial, one for decoder tie-breaking) are derived
//! by mixing the parent seed with a tag through the SplitMix64 finalizer,
//! then used to seed a ChaCha8 generator. Both steps are stable across
//! platforms and releases, which is what lets a packet header carry a bare
//! `u64` instead of an explicit index list.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer: a bijective avalanche mix on 64 bits.
#[inline]
#[must_use]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Combines a parent seed with a tag into a child seed.
///
/// Distinct tags give decorrelated children; the same pair always gives the
/// same child.
#[inline]
#[must_use]
pub fn derive(seed: u64, tag: u64) -> u64 {
    splitmix64(seed ^ splitmix64(tag))
}

/// A ChaCha8 stream for the given (seed, tag) pair.
#[must_use]
pub fn stream(seed: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(seed, tag))
}

/// A ChaCha8 stream seeded directly, for when the seed is already derived
/// (e.g. taken verbatim from a packet header).
#[must_use]
pub fn stream_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn derive_is_deterministic_and_tag_sensitive() {
        assert_eq!(derive(7, 1), derive(7, 1));
        assert_ne!(derive(7, 1), derive(7, 2));
        assert_ne!(derive(7, 1), derive(8, 1));
    }

    #[test]
    fn streams_reproduce() {
        let mut a = stream(42, 3);
        let mut b = stream(42, 3);
        for _ in 0..16 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn splitmix64_known_vector() {
        // First output of the reference SplitMix64 sequence seeded with 0.
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
    }
}
