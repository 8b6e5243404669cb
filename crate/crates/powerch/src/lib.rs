//! Consistent hashing that maps a 64-bit key to one of `n` buckets in O(1)
//! space and O(1) expected time, computed on the fly with no search
//! structure, while remapping only a minimal set of keys when `n` changes.
//!
//! The lookup composes two auxiliary hashes: a uniform hash over the smallest
//! power of two covering `n`, and a weighted hash that redistributes the
//! overflow into the valid range. Both are exact under range changes, which
//! gives the whole map its consistency guarantee:
//!
//! - __balanced__: keys land on each of the `n` buckets with probability
//!   `1/n`,
//! - __monotone__: growing `n` to `n+1` moves keys only onto the new bucket,
//!   and shrinking moves only the keys whose bucket disappeared,
//! - __fast__: lookup cost is independent of `n`, unlike jump-style hashing
//!   whose cost grows with `ln n`.
//!
//! # Usage
//!
//! ```
//! use powerch::{power_hash, BucketCount, Key};
//!
//! let buckets = BucketCount::new(12)?;
//! let bucket = power_hash(Key::premixed(10427592028180905159), buckets);
//! assert!(bucket < 12);
//! # Ok::<(), powerch::Error>(())
//! ```
//!
//! # Balance
//!
//! ```
//! use powerch::{power_hash, BucketCount, Key};
//!
//! let buckets = BucketCount::new(18).unwrap();
//! let mut counts = [0u64; 18];
//! for raw in 0..200_000u64 {
//!     counts[power_hash(Key::premixed(raw), buckets) as usize] += 1;
//! }
//! let (min, max) = (
//!     *counts.iter().min().unwrap() as f64,
//!     *counts.iter().max().unwrap() as f64,
//! );
//! assert!((max - min) / min < 0.05);
//! ```
//!
//! # Monotonicity
//!
//! ```
//! use powerch::{power_hash, BucketCount, Key};
//!
//! let key = Key::premixed(15960427081186311679);
//! let mut previous = 0;
//! for n in 1..500u64 {
//!     let bucket = power_hash(key, BucketCount::new(n).unwrap());
//!     assert!(n == 1 || bucket == previous || bucket == n - 1);
//!     previous = bucket;
//! }
//! ```
//!
//! Raw keys are consumed bit-for-bit; construct them with [`Key::premixed`]
//! unless they are already outputs of a good hash (see [`Key`]).
//!
//! The [`verify`] module contains the statistical and exact oracles (built to
//! be reproducible: fixed seeds, integer accumulators, deterministic merges),
//! [`rehash`] routes keys off unavailable or overloaded buckets with bounded
//! probing, and [`baselines`] holds the comparison algorithms.

pub mod baselines;
mod error;
pub mod mixers;
pub mod power;
pub mod rehash;
pub mod verify;

pub use baselines::{jump_hash, mod_hash};
pub use error::{Error, Result};
pub use mixers::{keyed_rand, mix64, Key, UniformStream, GOLDEN_GAMMA, STREAM_SALT};
pub use power::{
    highest_set_bit, pow2_hash, power_hash, power_hash_traced, weighted_hash, BucketCount,
    LookupTrace, PowerOfTwo, WeightedTrace, ITERATION_CAP,
};
pub use rehash::{
    lookup_available, lookup_available_with, shed_load, shed_load_with, AvailabilityView,
    RehashOutcome, DEFAULT_MAX_PROBES, SHED_SALT,
};
