//! The core lookup: a uniform hash over a power-of-two range, a weighted
//! hash over an arbitrary trailing range, and the two-stage combination that
//! maps a key to one of `n` buckets in O(1) space and O(1) expected time
//! while remapping only a minimal set of keys when `n` changes.

use crate::error::{Error, Result};
use crate::mixers::{keyed_rand, Key, UniformStream};

/// Upper bound on the weighted-stage loop. The stage's expected pass count is
/// below 1.7 with variance below ln 2, so the cap is unreachable in practice;
/// it guarantees O(1) worst-case time. On the capping pass the current value
/// is returned and the fresh candidate is discarded.
pub const ITERATION_CAP: u32 = 64;

/// A validated bucket count `n` in `1..=2^32`.
///
/// The upper limit keeps `(x + 1) / u` arithmetic exact in 64-bit floats
/// inside the weighted stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BucketCount(u64);

impl BucketCount {
    /// Largest admissible bucket count.
    pub const MAX: u64 = 1 << 32;

    pub fn new(n: u64) -> Result<Self> {
        if n == 0 || n > Self::MAX {
            return Err(Error::BucketCountOutOfRange(n));
        }
        Ok(BucketCount(n))
    }

    #[inline]
    pub const fn get(self) -> u64 {
        self.0
    }
}

/// A validated power of two `m` in `1..=2^32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PowerOfTwo(u64);

impl PowerOfTwo {
    pub fn new(m: u64) -> Result<Self> {
        if m == 0 || m > BucketCount::MAX || !m.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(m));
        }
        Ok(PowerOfTwo(m))
    }

    /// The smallest power of two `m` with `m >= n`; satisfies `m/2 < n <= m`.
    #[inline]
    pub fn smallest_geq(n: BucketCount) -> Self {
        PowerOfTwo(n.get().next_power_of_two())
    }

    #[inline]
    pub const fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn log2(self) -> u32 {
        self.0.trailing_zeros()
    }
}

/// Bit index of the most significant set bit: `2^j <= bits < 2^(j+1)`.
///
/// Constant time via the hardware leading-zero count. Calling this with 0 is
/// a programming error and panics.
#[inline]
pub fn highest_set_bit(bits: u64) -> u32 {
    assert!(bits != 0, "highest_set_bit requires a nonzero argument");
    63 - bits.leading_zeros()
}

/// Uniform hash of `key` over `[0, m-1]` for a power-of-two `m`.
///
/// Returns 0 when the key's low `log2(m)` bits are all zero; otherwise picks
/// a deterministic pseudo-random value in `[h, 2h-1]` where `h` isolates the
/// highest set bit of those low bits. Distinct powers of two agree wherever
/// the result fits in the smaller range, so the map is consistent under
/// range changes.
#[inline]
pub fn pow2_hash(key: Key, m: PowerOfTwo) -> u64 {
    pow2_hash_raw(key, m.get())
}

#[inline]
fn pow2_hash_raw(key: Key, m: u64) -> u64 {
    debug_assert!(m.is_power_of_two());
    let k_bits = key.value() & (m - 1);
    if k_bits == 0 {
        return 0;
    }
    let j = 63 - k_bits.leading_zeros();
    let h = 1u64 << j;
    h + (keyed_rand(key, j) & (h - 1))
}

/// Outcome of one weighted-stage evaluation: the bucket plus the number of
/// loop passes it took, for telemetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightedTrace {
    pub bucket: u64,
    pub iterations: u32,
}

/// Weighted hash of `key` over `[start, n-1]`: mass `(start+1)/n` at `start`
/// and `1/n` at each larger value.
///
/// Generates an increasing jump process driven by the key's uniform stream
/// and returns its last value below `n`. The stream is seeded by the key
/// alone, so shrinking `n` truncates the same process: results agree exactly
/// whenever they fit in the smaller range.
pub fn weighted_hash(key: Key, n: BucketCount, start: u64) -> Result<WeightedTrace> {
    if start >= n.get() {
        return Err(Error::StartBucketOutOfRange {
            start,
            buckets: n.get(),
        });
    }
    Ok(weighted_hash_raw(key, n.get(), start))
}

#[inline]
fn weighted_hash_raw(key: Key, n: u64, start: u64) -> WeightedTrace {
    debug_assert!(start < n);
    let n_f = n as f64;
    let mut stream = UniformStream::for_key(key);
    let mut x = start;
    let mut iterations = 0u32;
    loop {
        let u = stream.next_unit();
        iterations += 1;
        // u in (0, 1] and x + 1 <= 2^32, so the quotient is exact enough for
        // an integer floor; candidates are strictly increasing.
        let candidate = ((x + 1) as f64 / u).floor();
        if candidate < n_f && iterations < ITERATION_CAP {
            x = candidate as u64;
        } else {
            return WeightedTrace {
                bucket: x,
                iterations,
            };
        }
    }
}

/// Telemetry from [`power_hash_traced`]: the final bucket and, when the
/// weighted stage ran, its trace. `weighted` is `None` exactly when the
/// first-stage result already fit below `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LookupTrace {
    pub bucket: u64,
    pub weighted: Option<WeightedTrace>,
}

/// Maps `key` to a bucket in `[0, n-1]` with uniform probability.
///
/// Stage 1 hashes uniformly over the smallest power of two `m >= n` and
/// returns directly when the result lands below `n` (probability `n/m`).
/// Otherwise the weighted stage redistributes over `[m/2 - 1, n - 1]`, and a
/// final uniform hash over `[0, m/2 - 1]` resolves the boundary mass. Every
/// stage is consistent under changes of `n`, so growing `n` to `n+1` moves
/// keys only onto the new bucket `n`.
///
/// ```
/// use powerch::{power_hash, BucketCount, Key};
///
/// let key = Key::premixed(10427592028180905159);
/// let mut previous = power_hash(key, BucketCount::new(1).unwrap());
/// for n in 2..1000 {
///     let bucket = power_hash(key, BucketCount::new(n).unwrap());
///     assert!(bucket == previous || bucket == n - 1);
///     previous = bucket;
/// }
/// ```
#[inline]
pub fn power_hash(key: Key, n: BucketCount) -> u64 {
    power_hash_traced(key, n).bucket
}

/// [`power_hash`] with weighted-stage telemetry attached.
#[inline]
pub fn power_hash_traced(key: Key, n: BucketCount) -> LookupTrace {
    let n = n.get();
    let m = n.next_power_of_two();
    let first = pow2_hash_raw(key, m);
    if first < n {
        return LookupTrace {
            bucket: first,
            weighted: None,
        };
    }
    // first >= n implies n < m, hence m >= 2 and the stage bounds are valid.
    let start = m / 2 - 1;
    let trace = weighted_hash_raw(key, n, start);
    let bucket = if trace.bucket > start {
        trace.bucket
    } else {
        pow2_hash_raw(key, m / 2)
    };
    LookupTrace {
        bucket,
        weighted: Some(trace),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bc(n: u64) -> BucketCount {
        BucketCount::new(n).unwrap()
    }

    #[test]
    fn bucket_count_rejects_zero_and_oversize() {
        assert_eq!(BucketCount::new(0), Err(Error::BucketCountOutOfRange(0)));
        assert!(BucketCount::new(1 << 32).is_ok());
        assert_eq!(
            BucketCount::new((1 << 32) + 1),
            Err(Error::BucketCountOutOfRange((1 << 32) + 1))
        );
    }

    #[test]
    fn smallest_power_of_two_covers_the_count() {
        assert_eq!(PowerOfTwo::smallest_geq(bc(11)).get(), 16);
        assert_eq!(PowerOfTwo::smallest_geq(bc(1)).get(), 1);
        assert_eq!(PowerOfTwo::smallest_geq(bc(16)).get(), 16);
        assert_eq!(PowerOfTwo::smallest_geq(bc(1 << 32)).get(), 1 << 32);
        let m = PowerOfTwo::smallest_geq(bc(1000));
        assert!(m.get() / 2 < 1000 && 1000 <= m.get());
        assert_eq!(m.log2(), 10);
    }

    #[test]
    fn power_of_two_rejects_non_powers() {
        assert_eq!(PowerOfTwo::new(0), Err(Error::NotPowerOfTwo(0)));
        assert_eq!(PowerOfTwo::new(3), Err(Error::NotPowerOfTwo(3)));
        assert_eq!(PowerOfTwo::new(1 << 33), Err(Error::NotPowerOfTwo(1 << 33)));
        assert!(PowerOfTwo::new(1).is_ok());
    }

    #[test]
    fn highest_set_bit_matches_binary_positions() {
        assert_eq!(highest_set_bit(0b1100), 3);
        assert_eq!(highest_set_bit(0b0001), 0);
        assert_eq!(highest_set_bit(0b0101), 2);
        assert_eq!(highest_set_bit(u64::MAX), 63);
    }

    #[test]
    #[should_panic(expected = "nonzero")]
    fn highest_set_bit_panics_on_zero() {
        highest_set_bit(0);
    }

    #[test]
    fn pow2_hash_returns_zero_when_low_bits_are_zero() {
        let m = PowerOfTwo::new(16).unwrap();
        for t in 0..100u64 {
            assert_eq!(pow2_hash(Key::raw(t << 4), m), 0);
        }
    }

    #[test]
    fn pow2_hash_lands_in_the_top_bit_range() {
        let m = PowerOfTwo::new(16).unwrap();
        // Low bits 0010 -> j=1, h=2, result in {2, 3}.
        for t in 0..100u64 {
            let key = Key::raw((t << 4) | 0b0010);
            let x = pow2_hash(key, m);
            assert!(x == 2 || x == 3, "got {x}");
        }
        // Low bits 0101 -> j=2, h=4, result in 4..=7.
        for t in 0..100u64 {
            let key = Key::raw((t << 4) | 0b0101);
            let x = pow2_hash(key, m);
            assert!((4..=7).contains(&x), "got {x}");
        }
    }

    #[test]
    fn pow2_hash_of_odd_key_with_two_buckets_is_one() {
        assert_eq!(pow2_hash(Key::raw(1), PowerOfTwo::new(2).unwrap()), 1);
    }

    #[test]
    fn weighted_hash_with_single_slot_returns_start() {
        for k in 0..200u64 {
            let t = weighted_hash(Key::premixed(k), bc(8), 7).unwrap();
            assert_eq!(t.bucket, 7);
            assert_eq!(t.iterations, 1);
        }
    }

    #[test]
    fn weighted_hash_rejects_start_at_or_past_n() {
        assert!(matches!(
            weighted_hash(Key::raw(1), bc(8), 8),
            Err(Error::StartBucketOutOfRange { .. })
        ));
    }

    #[test]
    fn weighted_hash_stays_in_range_with_bounded_iterations() {
        for k in 0..5000u64 {
            let t = weighted_hash(Key::premixed(k), bc(15), 7).unwrap();
            assert!((7..15).contains(&t.bucket));
            assert!(t.iterations >= 1 && t.iterations <= ITERATION_CAP);
        }
    }

    #[test]
    fn weighted_hash_truncates_consistently_when_n_shrinks() {
        // Whenever the wide result fits the narrow range, they agree.
        let mut seen_nine = false;
        for k in 0..20_000u64 {
            let key = Key::premixed(k);
            let wide = weighted_hash(key, bc(15), 7).unwrap().bucket;
            if wide < 12 {
                let narrow = weighted_hash(key, bc(12), 7).unwrap().bucket;
                assert_eq!(narrow, wide, "key {k}");
                seen_nine |= wide == 9;
            }
        }
        assert!(seen_nine, "sample never produced the value 9");
    }

    #[test]
    fn weighted_hash_start_mass_matches_weighted_target() {
        // P(start) = (start+1)/n for (n, start) = (11, 7), i.e. 8/11.
        const SAMPLES: u64 = 200_000;
        let mut at_start = 0u64;
        for i in 0..SAMPLES {
            let t = weighted_hash(Key::premixed(0xABCD ^ i), bc(11), 7).unwrap();
            if t.bucket == 7 {
                at_start += 1;
            }
        }
        let p = at_start as f64 / SAMPLES as f64;
        assert!((p - 8.0 / 11.0).abs() < 0.005, "P(7) = {p:.4}");
    }

    #[test]
    fn power_hash_single_bucket_is_always_zero() {
        for k in 0..1000u64 {
            assert_eq!(power_hash(Key::premixed(k), bc(1)), 0);
        }
    }

    #[test]
    fn power_hash_equals_pow2_hash_when_n_is_a_power_of_two() {
        let m = PowerOfTwo::new(16).unwrap();
        for k in 0..5000u64 {
            let key = Key::premixed(k);
            let traced = power_hash_traced(key, bc(16));
            assert_eq!(traced.bucket, pow2_hash(key, m));
            assert!(traced.weighted.is_none());
        }
    }

    #[test]
    fn power_hash_stays_in_range() {
        for n in [1u64, 2, 3, 11, 16, 100, 257, 1000, (1 << 20) + 1] {
            for k in 0..2000u64 {
                let x = power_hash(Key::premixed(k.wrapping_mul(0x1234_5678) ^ n), bc(n));
                assert!(x < n, "n = {n}, bucket = {x}");
            }
        }
    }

    #[test]
    fn traced_bucket_matches_untraced() {
        for k in 0..2000u64 {
            let key = Key::premixed(k);
            for n in [3u64, 11, 64, 100] {
                assert_eq!(power_hash(key, bc(n)), power_hash_traced(key, bc(n)).bucket);
            }
        }
    }

    #[test]
    fn weighted_stage_runs_exactly_for_first_stage_overflow() {
        // trace.weighted is Some iff the first stage landed at or above n.
        let n = bc(11);
        let m = PowerOfTwo::new(16).unwrap();
        for k in 0..5000u64 {
            let key = Key::premixed(k);
            let first = pow2_hash(key, m);
            let traced = power_hash_traced(key, n);
            assert_eq!(traced.weighted.is_some(), first >= 11);
            if first < 11 {
                assert_eq!(traced.bucket, first);
            }
        }
    }
}
