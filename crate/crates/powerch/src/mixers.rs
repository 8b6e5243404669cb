//! Deterministic pseudo-random primitives shared by every algorithm in the
//! crate: a 64-bit avalanche finalizer, a keyed per-bit-index random word,
//! and a per-key stream of uniform reals in (0, 1].
//!
//! All constants and update rules are fixed bit-exactly so that independent
//! implementations (in any language) reproduce identical outputs. Everything
//! here is a pure function of its inputs; [`UniformStream`] is a plain value
//! owned by its caller.

/// Additive constant of the splitmix64 sequence (the 64-bit golden ratio).
pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Salt that separates [`UniformStream`] seeding from other uses of a key.
pub const STREAM_SALT: u64 = 0xD1B5_4A32_D192_ED03;

/// splitmix64 finalizer: a bijective avalanche mix of the 64-bit input.
///
/// Every output bit depends on every input bit with near-ideal diffusion,
/// and the map is invertible, so distinct inputs never collide.
#[inline]
pub const fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^= x >> 31;
    x
}

/// A 64-bit hash key.
///
/// The core algorithms consume the key's bits directly, so they assume the
/// low bits are already well mixed. Construct with [`Key::premixed`] when the
/// raw values are structured (sequential ids, timestamps, pointers); use
/// [`Key::raw`] only when the input is already the output of a good hash.
/// Pre-mixing is a fixed bijection independent of the bucket count, so it
/// preserves every consistency property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Key(u64);

impl Key {
    /// Uses `value` bit-for-bit as the hash key.
    #[inline]
    pub const fn raw(value: u64) -> Self {
        Key(value)
    }

    /// Mixes `value` through [`mix64`] first.
    #[inline]
    pub const fn premixed(value: u64) -> Self {
        Key(mix64(value))
    }

    #[inline]
    pub const fn value(self) -> u64 {
        self.0
    }
}

/// Pseudo-random word derived deterministically from `(key, bit_index)`.
///
/// Outputs for distinct `(key, bit_index)` pairs are empirically independent;
/// `bit_index` must be in `0..=63`.
#[inline]
pub fn keyed_rand(key: Key, bit_index: u32) -> u64 {
    debug_assert!(bit_index < 64);
    mix64(key.value() ^ (bit_index as u64 + 1).wrapping_mul(GOLDEN_GAMMA))
}

const UNIT_53: f64 = 1.0 / ((1u64 << 53) as f64);

/// Deterministic per-key stream of uniform reals in (0, 1].
///
/// Two streams for the same key produce identical sequences, and each draw is
/// independent of how many draws follow (prefix property). The mapping
/// `((out >> 11) + 1) * 2^-53` keeps every value strictly positive, so
/// dividing by a draw is always safe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformStream {
    state: u64,
    draws: u64,
}

impl UniformStream {
    /// Seeds a stream from `key` alone.
    #[inline]
    pub fn for_key(key: Key) -> Self {
        UniformStream {
            state: mix64(key.value() ^ STREAM_SALT),
            draws: 0,
        }
    }

    /// Next uniform real in (0, 1].
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let out = mix64(self.state);
        self.draws += 1;
        ((out >> 11) + 1) as f64 * UNIT_53
    }

    /// Number of values produced so far.
    #[inline]
    pub fn draws(&self) -> u64 {
        self.draws
    }
}
