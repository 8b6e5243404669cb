//! The `verify` subcommands: thin parameter plumbing around the library's
//! verification engine. Exit status reflects the suite verdict.

use clap::{Args, Subcommand, ValueEnum};

use powerch::verify::{
    check_monotonicity, check_monotonicity_pow2, check_monotonicity_weighted, check_uniformity,
    check_weighted_g, iteration_reports_to_csv, measure_g_iterations, measure_remap,
};

use crate::{bucket_count, emit, Algorithm, OutputArgs};

#[derive(Subcommand)]
pub enum Suite {
    /// Chi-square uniformity of a hash over n buckets
    Uniformity(UniformityArgs),
    /// Distribution of the weighted trailing-range stage
    Weighted(WeightedArgs),
    /// Exact mapping-consistency oracles (zero violations to pass)
    Monotonicity(MonotonicityArgs),
    /// Key movement between two bucket counts
    Remap(RemapArgs),
    /// Weighted-stage iteration telemetry
    Iterations(IterationsArgs),
}

#[derive(Args)]
pub struct UniformityArgs {
    #[arg(long)]
    buckets: u64,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, value_enum, default_value_t = Algorithm::Power)]
    algorithm: Algorithm,
    /// Chi-square significance level
    #[arg(long, default_value_t = 0.001)]
    alpha: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
pub struct WeightedArgs {
    #[arg(long)]
    buckets: u64,
    /// Lower edge of the weighted range (default: the one full lookups use)
    #[arg(long)]
    start: Option<u64>,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0.001)]
    alpha: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MonotonicityFunction {
    Power,
    Jump,
    Pow2,
    Weighted,
}

#[derive(Args)]
pub struct MonotonicityArgs {
    /// Which map to check
    #[arg(long, value_enum, default_value_t = MonotonicityFunction::Power)]
    function: MonotonicityFunction,
    /// Walk every transition n -> n+1 below this count (power/jump), or the
    /// range limit for sampled weighted-stage tuples
    #[arg(long, default_value_t = 64)]
    max_buckets: u64,
    #[arg(long, default_value_t = 100_000)]
    keys: u64,
    /// Extra random (n_large, n_small) pairs for the full property
    #[arg(long, default_value_t = 1_000)]
    pairs: u64,
    /// Largest n_large used for the random pairs
    #[arg(long)]
    pair_max: Option<u64>,
    /// Largest power-of-two exponent for the pow2 stage check
    #[arg(long, default_value_t = 16)]
    max_log2m: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
pub struct RemapArgs {
    #[arg(long)]
    from: u64,
    #[arg(long)]
    to: u64,
    #[arg(long, default_value_t = 1_000_000)]
    keys: u64,
    #[arg(long, value_enum, default_value_t = Algorithm::Power)]
    algorithm: Algorithm,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
pub struct IterationsArgs {
    /// Bucket counts to profile (comma separated, none a power of two)
    #[arg(long, value_delimiter = ',', default_value = "11")]
    buckets: Vec<u64>,
    #[arg(long, default_value_t = 1_000_000)]
    keys: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

pub fn run(suite: Suite) -> Result<bool, String> {
    match suite {
        Suite::Uniformity(args) => {
            let n = bucket_count(args.buckets)?;
            let report =
                check_uniformity(args.algorithm.hash_fn(), n, args.samples, args.seed, args.alpha)
                    .map_err(|e| e.to_string())?;
            let table = format!(
                "uniformity: algorithm={} buckets={} samples={} seed={} premix=on\n{}",
                args.algorithm.name(),
                args.buckets,
                args.samples,
                args.seed,
                report.render_table()
            );
            emit(&report.to_csv(), &table, &args.output)?;
            Ok(report.pass)
        }
        Suite::Weighted(args) => {
            let n = bucket_count(args.buckets)?;
            let start = args
                .start
                .unwrap_or_else(|| (args.buckets.next_power_of_two() / 2).saturating_sub(1));
            let report = check_weighted_g(n, start, args.samples, args.seed, args.alpha)
                .map_err(|e| e.to_string())?;
            let table = format!(
                "weighted: buckets={} start={start} samples={} seed={}\n{}",
                args.buckets,
                args.samples,
                args.seed,
                report.render_table()
            );
            emit(&report.to_csv(), &table, &args.output)?;
            Ok(report.pass)
        }
        Suite::Monotonicity(args) => {
            let pair_max = args.pair_max.unwrap_or(args.max_buckets);
            let (label, report) = match args.function {
                MonotonicityFunction::Power => (
                    "power",
                    check_monotonicity(
                        powerch::power_hash,
                        args.max_buckets,
                        args.keys,
                        args.pairs,
                        pair_max,
                        args.seed,
                    ),
                ),
                MonotonicityFunction::Jump => (
                    "jump",
                    check_monotonicity(
                        powerch::jump_hash,
                        args.max_buckets,
                        args.keys,
                        args.pairs,
                        pair_max,
                        args.seed,
                    ),
                ),
                MonotonicityFunction::Pow2 => (
                    "pow2",
                    check_monotonicity_pow2(args.max_log2m, args.keys, args.seed),
                ),
                MonotonicityFunction::Weighted => (
                    "weighted",
                    check_monotonicity_weighted(args.max_buckets, args.keys, args.seed),
                ),
            };
            let report = report.map_err(|e| e.to_string())?;
            let table = format!(
                "monotonicity: function={label} max_buckets={} keys={} seed={}\n{}",
                args.max_buckets,
                args.keys,
                args.seed,
                report.render_table()
            );
            emit(&report.to_csv(), &table, &args.output)?;
            Ok(report.pass())
        }
        Suite::Remap(args) => {
            let from = bucket_count(args.from)?;
            let to = bucket_count(args.to)?;
            let report =
                measure_remap(args.algorithm.hash_fn(), from, to, args.keys, args.seed);
            let table = format!(
                "remap: algorithm={} seed={}\n{}",
                args.algorithm.name(),
                args.seed,
                report.render_table()
            );
            emit(&report.to_csv(), &table, &args.output)?;
            Ok(report.pass())
        }
        Suite::Iterations(args) => {
            let reports = measure_g_iterations(&args.buckets, args.keys, args.seed)
                .map_err(|e| e.to_string())?;
            let mut table = format!(
                "iterations: buckets={:?} keys={} seed={}\n",
                args.buckets, args.keys, args.seed
            );
            for report in &reports {
                table.push_str(&report.render_table());
            }
            emit(&iteration_reports_to_csv(&reports), &table, &args.output)?;
            Ok(reports.iter().all(|r| r.within_bounds()))
        }
    }
}
