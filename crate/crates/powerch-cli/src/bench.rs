//! Wall-clock benchmark of per-lookup latency. Each point times a batch of
//! `keys` lookups with a monotonic clock and divides by the count, repeated
//! `reps` times; keys are derived per iteration from a counter so no fixed
//! key set can be learned, and results fold into an accumulator that is
//! black-boxed afterwards so the loop cannot be optimized away.

use std::hint::black_box;
use std::time::Instant;

use clap::Args;

use powerch::verify::fmt_real;
use powerch::{BucketCount, Key};

use crate::{bucket_count, emit, Algorithm, OutputArgs};

#[derive(Args)]
pub struct BenchArgs {
    /// Algorithms to time (comma separated)
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Algorithm::Power, Algorithm::Jump, Algorithm::Mod])]
    algorithms: Vec<Algorithm>,
    /// Bucket counts to sweep (comma separated)
    #[arg(long, value_delimiter = ',', default_values_t = [16u64, 256, 4096, 65_536, 1_048_576, 16_777_216])]
    buckets: Vec<u64>,
    /// Lookups per timed batch (at least 100000)
    #[arg(long, default_value_t = 1_000_000)]
    keys: u64,
    /// Untimed warmup batches per point
    #[arg(long, default_value_t = 1)]
    warmup: u32,
    /// Timed batches per point (at least 5)
    #[arg(long, default_value_t = 5)]
    reps: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

struct BenchPoint {
    algorithm: &'static str,
    n: u64,
    mean_ns: f64,
    stddev_ns: f64,
    reps: u32,
}

fn time_point(
    hash: fn(Key, BucketCount) -> u64,
    n: BucketCount,
    keys: u64,
    warmup: u32,
    reps: u32,
    counter: &mut u64,
) -> (f64, f64) {
    let mut acc = 0u64;
    let mut batch = |counter: &mut u64| {
        let start = Instant::now();
        for _ in 0..keys {
            *counter = counter.wrapping_add(1);
            acc ^= hash(Key::premixed(*counter), n);
        }
        start.elapsed().as_nanos() as f64 / keys as f64
    };
    for _ in 0..warmup {
        batch(counter);
    }
    let samples: Vec<f64> = (0..reps).map(|_| batch(counter)).collect();
    black_box(acc);
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let variance = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>()
        / (samples.len() - 1) as f64;
    (mean, variance.sqrt())
}

pub fn run(args: &BenchArgs) -> Result<bool, String> {
    if args.keys < 100_000 {
        return Err(format!("--keys must be at least 100000, got {}", args.keys));
    }
    if args.reps < 5 {
        return Err(format!("--reps must be at least 5, got {}", args.reps));
    }
    let mut counter = args.seed;
    let mut points = Vec::new();
    for &algorithm in &args.algorithms {
        for &buckets in &args.buckets {
            let n = bucket_count(buckets)?;
            let (mean_ns, stddev_ns) = time_point(
                algorithm.hash_fn(),
                n,
                args.keys,
                args.warmup,
                args.reps,
                &mut counter,
            );
            points.push(BenchPoint {
                algorithm: algorithm.name(),
                n: buckets,
                mean_ns,
                stddev_ns,
                reps: args.reps,
            });
        }
    }

    let mut csv = String::from("algorithm,n,mean_ns,stddev_ns,reps\n");
    for p in &points {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            p.algorithm,
            p.n,
            fmt_real(p.mean_ns),
            fmt_real(p.stddev_ns),
            p.reps
        ));
    }

    let mut table = format!(
        "bench: keys={} warmup={} reps={} seed={} (per-lookup wall time)\n\
         algorithm         n    mean_ns  stddev_ns\n",
        args.keys, args.warmup, args.reps, args.seed
    );
    for p in &points {
        table.push_str(&format!(
            "{:<9} {:>9}  {:>9}  {:>9}\n",
            p.algorithm,
            p.n,
            fmt_real(p.mean_ns),
            fmt_real(p.stddev_ns)
        ));
    }

    emit(&csv, &table, &args.output)?;
    Ok(true)
}
