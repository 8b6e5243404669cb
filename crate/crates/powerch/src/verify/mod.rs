//! Statistical and exact verification engine: chi-square uniformity and
//! weighted-distribution checks, exact mapping-consistency oracles,
//! remap-fraction measurement, and weighted-stage iteration telemetry.
//!
//! Every report is a pure function of `(algorithm, parameters, seed)`:
//! sample keys are pre-mixed sequential integers derived from the seed, so
//! reruns are bit-identical. Sampling loops are partitioned across workers by
//! key-index range and merged through integer accumulators, so parallel and
//! sequential runs agree exactly.

mod exec;
mod report;
pub mod stats;

pub use report::{
    fmt_real, iteration_reports_to_csv, ConsistencyReport, DistributionReport, IterationReport,
    RemapReport, Violation, ITERATION_MEAN_BOUND, ITERATION_VARIANCE_BOUND,
};

use crate::error::{Error, Result};
use crate::mixers::{mix64, Key, GOLDEN_GAMMA};
use crate::power::{pow2_hash, power_hash_traced, weighted_hash, BucketCount, PowerOfTwo};
use crate::power::ITERATION_CAP;

/// Key fed to sample index `i`: a pre-mixed sequential integer, reproducible
/// and exercising the same pre-mix path real callers use.
#[inline]
fn sample_key(seed: u64, index: u64) -> Key {
    Key::premixed(seed.wrapping_add(index))
}

/// Index-addressable random word for auxiliary draws (pair sampling etc.);
/// `lane` separates independent uses of the same index.
#[inline]
fn draw(seed: u64, lane: u64, index: u64) -> u64 {
    mix64(seed ^ lane.wrapping_mul(0xA076_1D64_78BD_642F) ^ index.wrapping_mul(GOLDEN_GAMMA))
}

fn merge_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    debug_assert_eq!(a.len(), b.len());
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

fn distribution_report(
    n: u64,
    offset: u64,
    samples: u64,
    histogram: Vec<u64>,
    expected: Vec<f64>,
    alpha: f64,
) -> DistributionReport {
    let degrees_of_freedom = histogram.len() as u64 - 1;
    let chi_square = stats::pearson_statistic(&histogram, &expected);
    let critical = stats::chi_square_critical(degrees_of_freedom, alpha);
    let pass = degrees_of_freedom == 0 || chi_square < critical;
    DistributionReport {
        n,
        offset,
        samples,
        histogram,
        expected,
        chi_square,
        degrees_of_freedom,
        alpha,
        critical,
        pass,
    }
}

/// Histograms `hash` over `n` buckets for `samples` pre-mixed sequential keys
/// and tests the counts against the uniform target with a Pearson chi-square
/// at significance `alpha`.
///
/// Requires `samples >= 100 * n` so expected cell counts support the test.
pub fn check_uniformity<F>(
    hash: F,
    n: BucketCount,
    samples: u64,
    seed: u64,
    alpha: f64,
) -> Result<DistributionReport>
where
    F: Fn(Key, BucketCount) -> u64 + Sync,
{
    let cells = n.get();
    let required = cells.saturating_mul(100);
    if samples < required {
        return Err(Error::TooFewSamples {
            got: samples,
            required,
            cells,
        });
    }
    let histogram = exec::fold_chunks(
        samples,
        1 << 16,
        || vec![0u64; cells as usize],
        |mut hist, range| {
            for i in range {
                hist[hash(sample_key(seed, i), n) as usize] += 1;
            }
            hist
        },
        merge_counts,
    );
    let expected = vec![samples as f64 / cells as f64; cells as usize];
    Ok(distribution_report(cells, 0, samples, histogram, expected, alpha))
}

/// Histograms the weighted stage over `[start, n-1]` and tests against its
/// target distribution: mass `(start+1)/n` at `start`, `1/n` elsewhere.
pub fn check_weighted_g(
    n: BucketCount,
    start: u64,
    samples: u64,
    seed: u64,
    alpha: f64,
) -> Result<DistributionReport> {
    if start >= n.get() {
        return Err(Error::StartBucketOutOfRange {
            start,
            buckets: n.get(),
        });
    }
    let cells = n.get() - start;
    let required = cells.saturating_mul(100);
    if samples < required {
        return Err(Error::TooFewSamples {
            got: samples,
            required,
            cells,
        });
    }
    let histogram = exec::fold_chunks(
        samples,
        1 << 16,
        || vec![0u64; cells as usize],
        |mut hist, range| {
            for i in range {
                let trace = weighted_hash(sample_key(seed, i), n, start)
                    .expect("start < n was validated");
                hist[(trace.bucket - start) as usize] += 1;
            }
            hist
        },
        merge_counts,
    );
    let per_cell = samples as f64 / n.get() as f64;
    let mut expected = vec![per_cell; cells as usize];
    expected[0] = per_cell * (start + 1) as f64;
    Ok(distribution_report(n.get(), start, samples, histogram, expected, alpha))
}

#[derive(Clone, Copy, Default)]
struct ConsistencyAcc {
    pairs: u64,
    violations: u64,
    first: Option<(u64, Violation)>,
}

impl ConsistencyAcc {
    fn record(&mut self, order: u64, violation: Violation) {
        self.violations += 1;
        if self.first.is_none_or(|(o, _)| order < o) {
            self.first = Some((order, violation));
        }
    }

    fn merge(mut a: Self, b: Self) -> Self {
        a.pairs += b.pairs;
        a.violations += b.violations;
        a.first = match (a.first, b.first) {
            (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
            (x, None) => x,
            (None, y) => y,
        };
        a
    }

    fn into_report(self, keys_tested: u64) -> ConsistencyReport {
        ConsistencyReport {
            keys_tested,
            pairs_tested: self.pairs,
            violations: self.violations,
            first_violation: self.first.map(|(_, v)| v),
        }
    }
}

/// Exact mapping-consistency oracle for a full hash.
///
/// Phase one walks every transition `n -> n+1` for `n` in `[1, n_max-1]`
/// over `keys` pre-mixed sequential keys: a changed value must equal the id
/// of the bucket that was added. Phase two samples `pairs` random
/// `(key, n_large, n_small)` triples with `n_large <= pair_limit` and asserts
/// the full property: a value that fits the smaller space is unchanged.
pub fn check_monotonicity<F>(
    hash: F,
    n_max: u64,
    keys: u64,
    pairs: u64,
    pair_limit: u64,
    seed: u64,
) -> Result<ConsistencyReport>
where
    F: Fn(Key, BucketCount) -> u64 + Sync,
{
    if n_max < 2 {
        return Err(Error::BucketCountOutOfRange(n_max));
    }
    BucketCount::new(n_max)?;
    if pairs > 0 {
        if pair_limit < 2 {
            return Err(Error::BucketCountOutOfRange(pair_limit));
        }
        BucketCount::new(pair_limit)?;
    }

    let chunk = (1u64 << 18).div_ceil(n_max).clamp(16, 1 << 16);
    let transitions = exec::fold_chunks(
        keys,
        chunk,
        ConsistencyAcc::default,
        |mut acc, range| {
            for i in range {
                let key = sample_key(seed, i);
                let mut prev = hash(key, BucketCount::new(1).unwrap());
                for n in 2..=n_max {
                    let cur = hash(key, BucketCount::new(n).unwrap());
                    acc.pairs += 1;
                    if cur != prev && cur != n - 1 {
                        acc.record(
                            i.saturating_mul(n_max).saturating_add(n),
                            Violation {
                                key: key.value(),
                                n_large: n,
                                n_small: n - 1,
                                at_large: cur,
                                at_small: prev,
                            },
                        );
                    }
                    prev = cur;
                }
            }
            acc
        },
        ConsistencyAcc::merge,
    );

    let pair_base = keys.saturating_mul(n_max);
    let sampled = exec::fold_chunks(
        pairs,
        1 << 13,
        ConsistencyAcc::default,
        |mut acc, range| {
            for p in range {
                let n_large = 2 + draw(seed, 1, p) % (pair_limit - 1);
                let n_small = 1 + draw(seed, 2, p) % (n_large - 1);
                let key = Key::raw(draw(seed, 3, p));
                let at_large = hash(key, BucketCount::new(n_large).unwrap());
                acc.pairs += 1;
                if at_large < n_small {
                    let at_small = hash(key, BucketCount::new(n_small).unwrap());
                    if at_small != at_large {
                        acc.record(
                            pair_base.saturating_add(p),
                            Violation {
                                key: key.value(),
                                n_large,
                                n_small,
                                at_large,
                                at_small,
                            },
                        );
                    }
                }
            }
            acc
        },
        ConsistencyAcc::merge,
    );

    Ok(ConsistencyAcc::merge(transitions, sampled).into_report(keys + pairs))
}

/// Exact consistency oracle for the power-of-two stage across every pair of
/// ranges `2^0 ..= 2^max_log2m`: a value that fits the smaller power of two
/// must be identical there.
pub fn check_monotonicity_pow2(max_log2m: u32, keys: u64, seed: u64) -> Result<ConsistencyReport> {
    if max_log2m > 32 {
        return Err(Error::NotPowerOfTwo(
            1u64.checked_shl(max_log2m).unwrap_or(u64::MAX),
        ));
    }
    let powers: Vec<PowerOfTwo> = (0..=max_log2m)
        .map(|e| PowerOfTwo::new(1u64 << e).unwrap())
        .collect();
    let acc = exec::fold_chunks(
        keys,
        1 << 12,
        ConsistencyAcc::default,
        |mut acc, range| {
            let mut values = [0u64; 33];
            for i in range {
                let key = sample_key(seed, i);
                for (e, &m) in powers.iter().enumerate() {
                    values[e] = pow2_hash(key, m);
                }
                for large in 1..powers.len() {
                    for small in 0..large {
                        let m_small = 1u64 << small;
                        acc.pairs += 1;
                        if values[large] < m_small && values[small] != values[large] {
                            acc.record(
                                i.saturating_mul(1089)
                                    .saturating_add((large * 33 + small) as u64),
                                Violation {
                                    key: key.value(),
                                    n_large: 1u64 << large,
                                    n_small: m_small,
                                    at_large: values[large],
                                    at_small: values[small],
                                },
                            );
                        }
                    }
                }
            }
            acc
        },
        ConsistencyAcc::merge,
    );
    Ok(acc.into_report(keys))
}

/// Exact consistency oracle for the weighted stage over sampled
/// `(key, n_large, n_small, start)` tuples with `start < n_small < n_large
/// <= n_limit`: a result below `n_small` must be unchanged when the range
/// shrinks.
pub fn check_monotonicity_weighted(
    n_limit: u64,
    samples: u64,
    seed: u64,
) -> Result<ConsistencyReport> {
    if n_limit < 3 {
        return Err(Error::BucketCountOutOfRange(n_limit));
    }
    BucketCount::new(n_limit)?;
    let acc = exec::fold_chunks(
        samples,
        1 << 13,
        ConsistencyAcc::default,
        |mut acc, range| {
            for p in range {
                let n_large = 2 + draw(seed, 11, p) % (n_limit - 1);
                let start = draw(seed, 12, p) % (n_large - 1);
                let n_small = start + 1 + draw(seed, 13, p) % (n_large - 1 - start);
                let key = Key::raw(draw(seed, 14, p));
                let wide = weighted_hash(key, BucketCount::new(n_large).unwrap(), start)
                    .expect("start < n_large by construction");
                acc.pairs += 1;
                if wide.bucket < n_small {
                    let narrow = weighted_hash(key, BucketCount::new(n_small).unwrap(), start)
                        .expect("start < n_small by construction");
                    if narrow.bucket != wide.bucket {
                        acc.record(
                            p,
                            Violation {
                                key: key.value(),
                                n_large,
                                n_small,
                                at_large: wide.bucket,
                                at_small: narrow.bucket,
                            },
                        );
                    }
                }
            }
            acc
        },
        ConsistencyAcc::merge,
    );
    Ok(acc.into_report(samples))
}

/// Counts keys whose bucket changes between two bucket counts, and how many
/// of those moves violate minimality (leaving a bucket that exists in both
/// spaces, or landing anywhere but a new bucket when growing).
pub fn measure_remap<F>(
    hash: F,
    n_from: BucketCount,
    n_to: BucketCount,
    keys: u64,
    seed: u64,
) -> RemapReport
where
    F: Fn(Key, BucketCount) -> u64 + Sync,
{
    let from = n_from.get();
    let to = n_to.get();
    let (moved, illegal_moves) = exec::fold_chunks(
        keys,
        1 << 15,
        || (0u64, 0u64),
        |(mut moved, mut illegal), range| {
            for i in range {
                let key = sample_key(seed, i);
                let old = hash(key, n_from);
                let new = hash(key, n_to);
                if old != new {
                    moved += 1;
                    let bad = if to < from {
                        old < to
                    } else if to > from {
                        new < from
                    } else {
                        true
                    };
                    if bad {
                        illegal += 1;
                    }
                }
            }
            (moved, illegal)
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    );
    RemapReport {
        n_from: from,
        n_to: to,
        keys,
        moved,
        moved_fraction: if keys == 0 {
            0.0
        } else {
            moved as f64 / keys as f64
        },
        illegal_moves,
    }
}

#[derive(Clone)]
struct IterationAcc {
    invocations: u64,
    sum: u64,
    sum_sq: u64,
    max: u32,
    histogram: Vec<u64>,
}

impl IterationAcc {
    fn new() -> Self {
        IterationAcc {
            invocations: 0,
            sum: 0,
            sum_sq: 0,
            max: 0,
            histogram: vec![0; ITERATION_CAP as usize + 1],
        }
    }

    fn merge(mut a: Self, b: Self) -> Self {
        a.invocations += b.invocations;
        a.sum += b.sum;
        a.sum_sq += b.sum_sq;
        a.max = a.max.max(b.max);
        a.histogram = merge_counts(a.histogram, b.histogram);
        a
    }
}

/// Runs full lookups over `keys` pre-mixed sequential keys for each listed
/// bucket count, recording weighted-stage telemetry. Rejects powers of two,
/// where the weighted stage is unreachable.
pub fn measure_g_iterations(ns: &[u64], keys: u64, seed: u64) -> Result<Vec<IterationReport>> {
    let mut reports = Vec::with_capacity(ns.len());
    for &n in ns {
        let bucket_count = BucketCount::new(n)?;
        if n.is_power_of_two() {
            return Err(Error::WeightedStageUnreachable(n));
        }
        let acc = exec::fold_chunks(
            keys,
            1 << 15,
            IterationAcc::new,
            |mut acc, range| {
                for i in range {
                    let trace = power_hash_traced(sample_key(seed, i), bucket_count);
                    if let Some(w) = trace.weighted {
                        let passes = w.iterations as u64;
                        acc.invocations += 1;
                        acc.sum += passes;
                        acc.sum_sq += passes * passes;
                        acc.max = acc.max.max(w.iterations);
                        acc.histogram[w.iterations as usize] += 1;
                    }
                }
                acc
            },
            IterationAcc::merge,
        );
        // Counters are exact integers, so the moments are reproducible
        // regardless of how chunks were merged.
        let inv = acc.invocations as f64;
        let mean = if acc.invocations == 0 {
            0.0
        } else {
            acc.sum as f64 / inv
        };
        let variance = if acc.invocations < 2 {
            0.0
        } else {
            (acc.sum_sq as f64 - (acc.sum as f64) * (acc.sum as f64) / inv) / (inv - 1.0)
        };
        reports.push(IterationReport {
            n,
            keys,
            invocations: acc.invocations,
            step1_exit_fraction: if keys == 0 {
                0.0
            } else {
                1.0 - acc.invocations as f64 / keys as f64
            },
            mean,
            variance,
            max: acc.max,
            histogram: acc.histogram,
        });
    }
    Ok(reports)
}
