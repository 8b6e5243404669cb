//! Failure-injection routing simulation: mark buckets unavailable (by
//! fraction or explicit bitmap file), route a stream of keys, and report how
//! many moved, the probe-count histogram, and the fallback fraction.

use std::path::PathBuf;

use clap::Args;

use powerch::verify::fmt_real;
use powerch::{lookup_available_with, power_hash, AvailabilityView, Key};

use crate::{bucket_count, emit, OutputArgs};

#[derive(Args)]
pub struct SimArgs {
    #[arg(long)]
    buckets: u64,
    /// Fraction of buckets to mark unavailable (sampled from the seed)
    #[arg(long, conflicts_with = "bitmap_file")]
    unavailable_fraction: Option<f64>,
    /// Availability bitmap file: one '0' (unavailable) or '1' (available)
    /// per bucket, whitespace ignored
    #[arg(long)]
    bitmap_file: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    max_probes: u32,
    /// Reserved always-available fallback buckets (default: 1% of n, min 1)
    #[arg(long)]
    fallback_size: Option<u64>,
    #[arg(long, default_value_t = 1_000_000)]
    keys: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

fn build_view(args: &SimArgs) -> Result<AvailabilityView, String> {
    let n = bucket_count(args.buckets)?;
    let fallback_size = args
        .fallback_size
        .unwrap_or_else(|| (args.buckets / 100).max(1));
    if let Some(path) = &args.bitmap_file {
        let text =
            std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
        let mut bits = Vec::with_capacity(args.buckets as usize);
        for c in text.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() => {}
                c => return Err(format!("bitmap file: unexpected character {c:?}")),
            }
        }
        if bits.len() as u64 != args.buckets {
            return Err(format!(
                "bitmap file holds {} buckets, expected {}",
                bits.len(),
                args.buckets
            ));
        }
        // Reserve the highest available ids as fallback.
        let fallback: Vec<u64> = (0..args.buckets)
            .rev()
            .filter(|&b| bits[b as usize])
            .take(fallback_size as usize)
            .collect();
        AvailabilityView::from_bitmap(n, &bits, fallback).map_err(|e| e.to_string())
    } else {
        let fraction = args.unavailable_fraction.unwrap_or(0.0);
        if !(0.0..=1.0).contains(&fraction) {
            return Err(format!("--unavailable-fraction {fraction} not in [0, 1]"));
        }
        let unavailable = (fraction * args.buckets as f64).round() as u64;
        if unavailable + fallback_size > args.buckets {
            return Err(format!(
                "cannot mark {unavailable} of {} buckets unavailable with {fallback_size} reserved as fallback",
                args.buckets
            ));
        }
        AvailabilityView::sampled(n, unavailable, fallback_size, args.seed)
            .map_err(|e| e.to_string())
    }
}

pub fn run(args: &SimArgs) -> Result<bool, String> {
    let view = build_view(args)?;
    let n = view.bucket_count();
    let mut probe_histogram = vec![0u64; args.max_probes as usize + 1];
    let mut fallback_histogram = vec![0u64; args.max_probes as usize + 1];
    let mut moved = 0u64;
    let mut fell_back = 0u64;
    let mut stranded = 0u64;
    for i in 0..args.keys {
        let key = Key::premixed(args.seed.wrapping_add(i));
        let out = lookup_available_with(key, &view, args.max_probes);
        if out.fell_back {
            fell_back += 1;
            fallback_histogram[out.probes as usize] += 1;
        } else {
            probe_histogram[out.probes as usize] += 1;
        }
        if out.bucket != power_hash(key, n) {
            moved += 1;
        }
        if !(view.is_available(out.bucket) || view.is_fallback(out.bucket)) {
            stranded += 1;
        }
    }
    let safe = stranded == 0;

    let mut csv = String::from("probes,resolved,fell_back\n");
    for p in 0..=args.max_probes as usize {
        csv.push_str(&format!(
            "{p},{},{}\n",
            probe_histogram[p], fallback_histogram[p]
        ));
    }

    let mut attempts = 0u64;
    for p in 0..=args.max_probes as usize {
        attempts += (p as u64 + 1) * (probe_histogram[p] + fallback_histogram[p]);
    }
    let mut table = format!(
        "rehash-sim: buckets={} unavailable={} fallback_reserved={} max_probes={} keys={} seed={}\n\
         moved={} ({}) fell_back={} ({}) mean_attempts={} all_landed_safe={}\n\
         probes   resolved  fell_back\n",
        args.buckets,
        view.unavailable_count(),
        view.fallback().len(),
        args.max_probes,
        args.keys,
        args.seed,
        moved,
        fmt_real(moved as f64 / args.keys.max(1) as f64),
        fell_back,
        fmt_real(fell_back as f64 / args.keys.max(1) as f64),
        fmt_real(attempts as f64 / args.keys.max(1) as f64),
        safe,
    );
    for p in 0..=args.max_probes as usize {
        table.push_str(&format!(
            "{:>6} {:>10} {:>10}\n",
            p, probe_histogram[p], fallback_histogram[p]
        ));
    }

    emit(&csv, &table, &args.output)?;
    Ok(safe)
}
