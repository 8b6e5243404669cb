//! Availability-aware lookup: route keys off unavailable or overloaded
//! buckets by bounded iterative re-probing, with a reserved fallback set
//! guaranteeing termination. Each probe re-hashes a derived key through the
//! same lookup, so the whole path stays stateless and O(1) per key.

use crate::error::{Error, Result};
use crate::mixers::{mix64, Key, GOLDEN_GAMMA};
use crate::power::{power_hash, BucketCount};

/// Default probe budget. With unavailable fraction `q`, the chance of
/// exhausting `t` probes decays like `q^t`, so 8 probes make fallback
/// vanishingly rare for realistic `q` while keeping worst-case work constant.
pub const DEFAULT_MAX_PROBES: u32 = 8;

/// Salt separating shedding decisions from routing randomness.
pub const SHED_SALT: u64 = 0xA24B_AED4_963E_E407;

/// Immutable snapshot of bucket availability plus the reserved fallback set.
///
/// Fallback buckets are regular bucket ids that are always available; they
/// absorb the keys whose probe budget runs out. Constructors enforce that a
/// non-empty fallback set exists whenever any bucket is unavailable, that
/// every fallback id is in range, and that no fallback id is itself marked
/// unavailable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvailabilityView {
    n: BucketCount,
    words: Vec<u64>,
    fallback: Vec<u64>,
    unavailable: u64,
}

impl AvailabilityView {
    /// View with every bucket available and no fallback reservation.
    pub fn all_available(n: BucketCount) -> Self {
        let words = vec![u64::MAX; (n.get() as usize).div_ceil(64)];
        AvailabilityView {
            n,
            words,
            fallback: Vec::new(),
            unavailable: 0,
        }
    }

    /// View with the listed buckets unavailable and `fallback` reserved.
    pub fn with_unavailable(
        n: BucketCount,
        unavailable: impl IntoIterator<Item = u64>,
        fallback: Vec<u64>,
    ) -> Result<Self> {
        let mut view = Self::all_available(n);
        for bucket in unavailable {
            if bucket >= n.get() {
                return Err(Error::BucketOutOfRange {
                    bucket,
                    buckets: n.get(),
                });
            }
            if view.is_available(bucket) {
                view.words[(bucket / 64) as usize] &= !(1u64 << (bucket % 64));
                view.unavailable += 1;
            }
        }
        view.install_fallback(fallback)?;
        Ok(view)
    }

    /// View from an explicit availability bitmap (`true` = available).
    pub fn from_bitmap(n: BucketCount, available: &[bool], fallback: Vec<u64>) -> Result<Self> {
        if available.len() as u64 != n.get() {
            return Err(Error::BucketOutOfRange {
                bucket: available.len() as u64,
                buckets: n.get(),
            });
        }
        let unavailable = available
            .iter()
            .enumerate()
            .filter(|(_, &a)| !a)
            .map(|(b, _)| b as u64);
        Self::with_unavailable(n, unavailable, fallback)
    }

    /// View with exactly `unavailable_count` buckets unavailable, sampled
    /// deterministically from `seed`, and the `fallback_size` highest bucket
    /// ids reserved as always-available fallback.
    pub fn sampled(
        n: BucketCount,
        unavailable_count: u64,
        fallback_size: u64,
        seed: u64,
    ) -> Result<Self> {
        let total = n.get();
        if fallback_size > total {
            return Err(Error::BucketOutOfRange {
                bucket: fallback_size,
                buckets: total,
            });
        }
        let population = total - fallback_size;
        if unavailable_count > population {
            return Err(Error::BucketOutOfRange {
                bucket: unavailable_count,
                buckets: population,
            });
        }
        // Selection sampling: walk the non-reserved ids once, keeping each
        // with probability (still needed) / (still unseen).
        let mut remaining = unavailable_count;
        let mut unavailable = Vec::with_capacity(unavailable_count as usize);
        for bucket in 0..population {
            if remaining == 0 {
                break;
            }
            let left = population - bucket;
            let draw = mix64(seed ^ SHED_SALT.wrapping_add(bucket)) % left;
            if draw < remaining {
                unavailable.push(bucket);
                remaining -= 1;
            }
        }
        let fallback: Vec<u64> = (population..total).collect();
        Self::with_unavailable(n, unavailable, fallback)
    }

    fn install_fallback(&mut self, mut fallback: Vec<u64>) -> Result<()> {
        fallback.sort_unstable();
        fallback.dedup();
        for &bucket in &fallback {
            if bucket >= self.n.get() {
                return Err(Error::BucketOutOfRange {
                    bucket,
                    buckets: self.n.get(),
                });
            }
            if !self.is_available(bucket) {
                return Err(Error::UnavailableFallback(bucket));
            }
        }
        if self.unavailable > 0 && fallback.is_empty() {
            return Err(Error::MissingFallback);
        }
        self.fallback = fallback;
        Ok(())
    }

    #[inline]
    pub fn bucket_count(&self) -> BucketCount {
        self.n
    }

    #[inline]
    pub fn is_available(&self, bucket: u64) -> bool {
        debug_assert!(bucket < self.n.get());
        self.words[(bucket / 64) as usize] >> (bucket % 64) & 1 == 1
    }

    pub fn fallback(&self) -> &[u64] {
        &self.fallback
    }

    pub fn unavailable_count(&self) -> u64 {
        self.unavailable
    }

    pub fn is_fallback(&self, bucket: u64) -> bool {
        self.fallback.binary_search(&bucket).is_ok()
    }
}

/// Where a key ended up after availability-aware routing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RehashOutcome {
    pub bucket: u64,
    /// Rehash attempts consumed after the home lookup (0 = home bucket won).
    pub probes: u32,
    pub fell_back: bool,
}

/// [`lookup_available`] with an explicit probe budget.
pub fn lookup_available_with(key: Key, view: &AvailabilityView, max_probes: u32) -> RehashOutcome {
    let home = power_hash(key, view.bucket_count());
    if view.is_available(home) {
        return RehashOutcome {
            bucket: home,
            probes: 0,
            fell_back: false,
        };
    }
    match probe(key, view, max_probes, None) {
        Some(outcome) => outcome,
        // Unreachable by construction: an unavailable home bucket implies a
        // non-empty fallback set (enforced by every constructor).
        None => unreachable!("availability view invariant: fallback must exist"),
    }
}

/// Routes `key` to an available bucket, probing at most
/// [`DEFAULT_MAX_PROBES`] times before falling back.
///
/// Keys whose home bucket is available never move. Unavailable homes are
/// re-probed with derived keys through the same hash, so each probe is an
/// independent uniform draw over all buckets; keys that exhaust the budget
/// land deterministically on a fallback bucket.
pub fn lookup_available(key: Key, view: &AvailabilityView) -> RehashOutcome {
    lookup_available_with(key, view, DEFAULT_MAX_PROBES)
}

/// [`shed_load`] with an explicit probe budget.
pub fn shed_load_with(
    key: Key,
    view: &AvailabilityView,
    shed_fraction: f64,
    overloaded: u64,
    max_probes: u32,
) -> Result<RehashOutcome> {
    if !(0.0..1.0).contains(&shed_fraction) {
        return Err(Error::InvalidShedFraction(shed_fraction));
    }
    if overloaded >= view.bucket_count().get() {
        return Err(Error::BucketOutOfRange {
            bucket: overloaded,
            buckets: view.bucket_count().get(),
        });
    }
    let home = power_hash(key, view.bucket_count());
    let keep = RehashOutcome {
        bucket: home,
        probes: 0,
        fell_back: false,
    };
    if home != overloaded {
        return Ok(keep);
    }
    // Fixed per-key coin: the shed set at fraction p is a subset of the shed
    // set at any p' > p.
    let coin = mix64(key.value() ^ SHED_SALT) as f64 * (1.0 / 18_446_744_073_709_551_616.0);
    if coin >= shed_fraction {
        return Ok(keep);
    }
    probe(key, view, max_probes, Some(overloaded)).ok_or(Error::NoFallback)
}

/// Sheds a deterministic `shed_fraction` of the keys homed on `overloaded`,
/// re-routing them as if that bucket were unavailable. All other keys keep
/// their bucket.
pub fn shed_load(
    key: Key,
    view: &AvailabilityView,
    shed_fraction: f64,
    overloaded: u64,
) -> Result<RehashOutcome> {
    shed_load_with(key, view, shed_fraction, overloaded, DEFAULT_MAX_PROBES)
}

fn probe(
    key: Key,
    view: &AvailabilityView,
    max_probes: u32,
    exclude: Option<u64>,
) -> Option<RehashOutcome> {
    let n = view.bucket_count();
    for attempt in 1..=max_probes {
        let derived = Key::raw(mix64(
            key.value() ^ (attempt as u64).wrapping_mul(GOLDEN_GAMMA),
        ));
        let bucket = power_hash(derived, n);
        if view.is_available(bucket) && Some(bucket) != exclude {
            return Some(RehashOutcome {
                bucket,
                probes: attempt,
                fell_back: false,
            });
        }
    }
    if view.fallback.is_empty() {
        return None;
    }
    let pick = mix64(key.value()) % view.fallback.len() as u64;
    Some(RehashOutcome {
        bucket: view.fallback[pick as usize],
        probes: max_probes,
        fell_back: true,
    })
}
