//! Command-line front end: single lookups, verification suites, remap
//! analysis, failure-injection rehash simulation, and latency benchmarks.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage error.

mod bench;
mod sim;
mod verify_cmd;

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use powerch::{jump_hash, mod_hash, power_hash, BucketCount, Key};

#[derive(Parser)]
#[command(
    name = "powerch",
    version,
    about = "Constant-time consistent hashing: lookups, verification, rehash simulation, benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Map a key to one of n buckets
    Lookup(LookupArgs),
    /// Run a verification suite (exit 0 iff it passes)
    #[command(subcommand)]
    Verify(verify_cmd::Suite),
    /// Measure per-lookup latency across bucket counts
    Bench(bench::BenchArgs),
    /// Route keys with some buckets unavailable and report movement
    RehashSim(sim::SimArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("key_input").required(true).args(["key", "key_string"])))]
struct LookupArgs {
    /// Numeric 64-bit key
    #[arg(long)]
    key: Option<u64>,
    /// String key, folded with 64-bit FNV-1a before hashing
    #[arg(long)]
    key_string: Option<String>,
    /// Number of buckets
    #[arg(long)]
    buckets: u64,
    /// Use the key bits as-is instead of pre-mixing them
    #[arg(long)]
    no_premix: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Power,
    Jump,
    Mod,
}

impl Algorithm {
    pub fn hash_fn(self) -> fn(Key, BucketCount) -> u64 {
        match self {
            Algorithm::Power => power_hash,
            Algorithm::Jump => jump_hash,
            Algorithm::Mod => mod_hash,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Power => "power",
            Algorithm::Jump => "jump",
            Algorithm::Mod => "mod",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
}

/// Output selection shared by the reporting commands.
#[derive(Args)]
pub struct OutputArgs {
    /// Write the CSV report to this path
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// What to print on stdout
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

/// 64-bit FNV-1a over the raw bytes.
pub fn fnv1a_64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01B3);
    }
    hash
}

pub fn bucket_count(n: u64) -> Result<BucketCount, String> {
    BucketCount::new(n).map_err(|e| e.to_string())
}

/// Prints the chosen stdout rendering and writes the CSV file when asked.
pub fn emit(csv: &str, table: &str, output: &OutputArgs) -> Result<(), String> {
    match output.format {
        Format::Table => print!("{table}"),
        Format::Csv => print!("{csv}"),
    }
    if let Some(path) = &output.out {
        write_file(path, csv)?;
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    std::fs::write(path, contents).map_err(|e| format!("writing {}: {e}", path.display()))
}

fn lookup(args: &LookupArgs) -> Result<bool, String> {
    let raw = match (args.key, &args.key_string) {
        (Some(k), None) => k,
        (None, Some(s)) => fnv1a_64(s.as_bytes()),
        _ => return Err("exactly one of --key / --key-string is required".into()),
    };
    let key = if args.no_premix {
        Key::raw(raw)
    } else {
        Key::premixed(raw)
    };
    let bucket = power_hash(key, bucket_count(args.buckets)?);
    println!("{bucket}");
    Ok(true)
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Lookup(args) => lookup(&args),
        Command::Verify(suite) => verify_cmd::run(suite),
        Command::Bench(args) => bench::run(&args),
        Command::RehashSim(args) => sim::run(&args),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(true) => {}
        Ok(false) => std::process::exit(1),
        Err(message) => {
            eprintln!("error: {message}");
            std::process::exit(2);
        }
    }
}
