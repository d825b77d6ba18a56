//! Deterministic, portable random streams.
//!
//! Every draw in the generator flows through [`Rng`], a ChaCha8 stream keyed
//! by a 64-bit seed. The distribution layers (unit floats, uniform ranges,
//! normals) are implemented here on top of the raw `u64` stream rather than
//! borrowed from `rand`, so the sample sequence is pinned by this crate alone:
//!
//! * seed expansion: four rounds of splitmix64 fill the 32-byte ChaCha key;
//! * `unit_f64`: top 53 bits of `next_u64`, scaled to `[0, 1)`;
//! * `uniform`: `lo + unit * (hi - lo)`;
//! * `normal`: Marsaglia polar method (rejection on the unit disc, first
//!   component of each accepted pair).
//!
//! The same seed therefore yields the same sequence on every platform, up to
//! last-ulp differences in `ln` between libm implementations for normal
//! draws; the integer and uniform layers are bit-exact everywhere.
//!
//! Child streams ([`Rng::substream`]) are keyed by a hash of the *root* seed
//! and a stage tag, never by stream position. Adding draws to one stage can
//! therefore never perturb another stage, and per-image streams derived via
//! [`derive_seed`] are independent of generation order and worker count.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// One splitmix64 step: advances `state` and returns the mixed output.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a over a byte string.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// Derives the seed for image `index` of a run keyed by `master`, for the
/// stage named `tag`. Stages draw from disjoint streams, so placement draws
/// never shift when the texture stage grows an extra sample.
pub fn derive_seed(master: u64, index: u64, tag: &str) -> u64 {
    let mut s = master
        ^ fnv1a(tag.as_bytes()).rotate_left(17)
        ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    splitmix64(&mut s)
}

/// Deterministic pseudo-random stream. Cheap to create; single-owner by
/// design — clone or fork substreams instead of sharing.
#[derive(Debug, Clone)]
pub struct Rng {
    stream: ChaCha8Rng,
    root: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        let mut state = seed;
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        Rng {
            stream: ChaCha8Rng::from_seed(key),
            root: seed,
        }
    }

    /// The seed this stream was created from.
    pub fn root_seed(&self) -> u64 {
        self.root
    }

    /// A new independent stream keyed by `(root seed, tag)`. Depends only on
    /// the root seed, not on how many draws this stream has produced.
    pub fn substream(&self, tag: &str) -> Rng {
        Rng::new(derive_seed(self.root, 0, tag))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.stream.next_u64()
    }

    /// Uniform draw in `[0, 1)` with 53-bit resolution.
    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in `[lo, hi)`. `lo == hi` returns `lo`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.unit_f64() * (hi - lo)
    }

    /// Uniform integer in `lo..=hi` via widening multiply.
    pub fn uniform_u32(&mut self, lo: u32, hi: u32) -> u32 {
        debug_assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + ((self.next_u64() as u128 * span as u128) >> 64) as u32
    }

    /// Uniform index in `0..len`. `len` must be non-zero.
    pub fn index(&mut self, len: usize) -> usize {
        debug_assert!(len > 0);
        ((self.next_u64() as u128 * len as u128) >> 64) as usize
    }

    /// Standard normal draw (mean 0, variance 1), Marsaglia polar method.
    /// Consumes two uniforms per rejection round; the second component of
    /// each accepted pair is discarded to keep the draw count per sample
    /// structure-independent.
    pub fn normal(&mut self) -> f64 {
        loop {
            let x = 2.0 * self.unit_f64() - 1.0;
            let y = 2.0 * self.unit_f64() - 1.0;
            let s = x * x + y * y;
            if s > 0.0 && s < 1.0 {
                return x * (-2.0 * s.ln() / s).sqrt();
            }
        }
    }

    /// Index drawn according to `weights` (need not be normalized; all
    /// weights must be non-negative with a positive sum).
    pub fn weighted_index(&mut self, weights: &[f64]) -> usize {
        debug_assert!(!weights.is_empty());
        let total: f64 = weights.iter().sum();
        let mut target = self.unit_f64() * total;
        for (i, &w) in weights.iter().enumerate() {
            if target < w {
                return i;
            }
            target -= w;
        }
        weights.len() - 1
    }
}
