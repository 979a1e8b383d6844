//! Reproducible random streams.
//!
//! Every random quantity in the crate is drawn from a [`StreamKey`]: a
//! 256-bit ChaCha12 key obtained by absorbing a root seed, a purpose tag and
//! any number of integer labels (replication, shard, bootstrap index, ...)
//! through SplitMix64. The same label path always yields the same bytes, and
//! streams never depend on which thread consumes them.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

/// Version of the label-to-key derivation. Bump when the derivation changes.
pub const STREAM_DERIVATION_VERSION: u64 = 1;

/// What a stream is used for. Distinct purposes never share a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Purpose {
    ThetaStar = 1,
    Data = 2,
    OracleData = 3,
    Multipliers = 4,
    Blb = 5,
    Sdb = 6,
    OracleMultipliers = 7,
    Bench = 8,
}

/// Root of a family of streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub root_seed: u64,
}

impl SeedSpec {
    pub fn new(root_seed: u64) -> Self {
        Self { root_seed }
    }

    pub fn stream(&self, purpose: Purpose) -> StreamKey {
        StreamKey::root(self.root_seed).child(purpose as u64)
    }
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A position in the stream tree. Cheap to copy and to extend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    words: [u64; 4],
}

impl StreamKey {
    fn root(seed: u64) -> Self {
        let mut words = [0u64; 4];
        let mut s = splitmix64(seed ^ STREAM_DERIVATION_VERSION.rotate_left(32));
        for w in words.iter_mut() {
            s = splitmix64(s);
            *w = s;
        }
        Self { words }
    }

    /// Derive the sub-stream identified by `label`.
    pub fn child(&self, label: u64) -> Self {
        let mut words = self.words;
        let mut carry = splitmix64(label ^ 0x6a09_e667_f3bc_c909);
        for (i, w) in words.iter_mut().enumerate() {
            carry = splitmix64(*w ^ carry.rotate_left(17 * i as u32 + 1));
            *w = carry;
        }
        Self { words }
    }

    /// Derive along a path of labels.
    pub fn path(&self, labels: &[u64]) -> Self {
        labels.iter().fold(*self, |key, &l| key.child(l))
    }

    pub fn rng(&self) -> ChaCha12Rng {
        let mut seed = [0u8; 32];
        for (chunk, w) in seed.chunks_exact_mut(8).zip(self.words.iter()) {
            chunk.copy_from_slice(&w.to_le_bytes());
        }
        ChaCha12Rng::from_seed(seed)
    }
}
