//! Per-trial random streams for reproducible parallel Monte-Carlo runs.
//!
//! A trial's stream is fully determined by (seed, scenario label, trial
//! index): the seed and a hash of the label fix a 256-bit ChaCha12 key,
//! and the trial index selects the ChaCha stream counter. Workers can
//! therefore process any partition of the trial range and still produce
//! the draws a single worker would have produced. Two scenarios sharing
//! (seed, label) see identical channel randomness, which is what paired
//! comparisons (same fading, different strategy or scheme) rely on.

use rand_chacha::ChaCha12Rng;
use rand_core::SeedableRng;

/// Factory for per-trial ChaCha12 streams.
#[derive(Debug, Clone)]
pub struct TrialRng {
    key: [u8; 32],
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// SplitMix64 step: advances the state and returns the mixed output.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl TrialRng {
    /// Derive the stream key from the scenario seed and label.
    pub fn new(seed: u64, label: &str) -> Self {
        let mut a = seed;
        let mut b = Self::label_hash(label);
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            let word = splitmix64(&mut a) ^ splitmix64(&mut b);
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        Self { key }
    }

    /// FNV-1a over the label bytes.
    pub fn label_hash(label: &str) -> u64 {
        let mut h = FNV_OFFSET;
        for &byte in label.as_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(FNV_PRIME);
        }
        h
    }

    /// The independent stream for one trial; fresh position every call.
    pub fn trial_stream(&self, trial_index: u64) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::from_seed(self.key);
        rng.set_stream(trial_index);
        rng
    }
}
