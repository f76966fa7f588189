//! Reproducible random streams.
//!
//! Every run owns a single 64-bit seed. Independent sub-streams are carved
//! out of it with ChaCha's stream counter, keyed by a fixed label per
//! purpose, so that e.g. switching the projection on or off never shifts
//! the sequence of candidate points.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used for every random draw in the crate.
pub type RunRng = ChaCha8Rng;

/// Purpose of a sub-stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stream {
    /// Uniform candidate points (all optimizers).
    Candidates,
    /// Gaussian entries of the projection matrix.
    Projection,
    /// AdaLIPO exploration coin flips.
    Exploration,
    /// Auxiliary draws made by studies and sweeps.
    Study,
}

impl Stream {
    /// Stream label fed to ChaCha. Fixed forever: changing one breaks trace
    /// reproducibility across versions.
    pub const fn label(self) -> u64 {
        match self {
            Stream::Candidates => 0x6361_6e64, // "cand"
            Stream::Projection => 0x7072_6f6a, // "proj"
            Stream::Exploration => 0x6578_706c, // "expl"
            Stream::Study => 0x7374_6479,      // "stdy"
        }
    }
}

/// Opens sub-stream `stream` of the run seeded with `seed`.
pub fn stream(seed: u64, stream: Stream) -> RunRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.label());
    rng
}

/// SplitMix64 finalizer.
pub const fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a hash of a byte string.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Folds `parts` into `base`: `h = splitmix64(h ^ part)` for each part in
/// order, starting from `h = splitmix64(base)`.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(base), |h, &p| splitmix64(h ^ p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let mut a = stream(7, Stream::Candidates);
        let mut b = stream(7, Stream::Projection);
        let mut a2 = stream(7, Stream::Candidates);
        let xa: u64 = a.random();
        let xb: u64 = b.random();
        assert_ne!(xa, xb);
        assert_eq!(xa, a2.random::<u64>());
    }

    #[test]
    fn known_hash_values() {
        // Reference values of the published FNV-1a and SplitMix64 constants.
        assert_eq!(fnv1a64(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a64(b"a"), 0xaf63_dc4c_8601_ec8c);
        assert_eq!(splitmix64(0), 0xe220_a839_7b1d_cdaf);
    }

    #[test]
    fn derive_seed_depends_on_every_part() {
        let s = derive_seed(1, &[2, 3, 4]);
        assert_ne!(s, derive_seed(1, &[2, 3, 5]));
        assert_ne!(s, derive_seed(2, &[2, 3, 4]));
        assert_ne!(s, derive_seed(1, &[3, 2, 4]));
        assert_eq!(s, derive_seed(1, &[2, 3, 4]));
    }
}
