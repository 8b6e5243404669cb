//! Report types produced by the verification suites, with CSV and
//! human-readable renderings. CSV output is byte-reproducible: header row,
//! comma separators, LF line endings, integers unquoted, reals printed with
//! six significant digits.

/// Formats a real with six significant digits in plain decimal notation.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).clamp(0, 17) as usize;
    format!("{x:.decimals$}")
}

/// Histogram of hash values with a Pearson chi-square verdict against the
/// expected per-cell counts.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionReport {
    /// Bucket count the hash ran with.
    pub n: u64,
    /// First bucket id covered by the histogram (nonzero for weighted runs).
    pub offset: u64,
    pub samples: u64,
    pub histogram: Vec<u64>,
    pub expected: Vec<f64>,
    pub chi_square: f64,
    pub degrees_of_freedom: u64,
    pub alpha: f64,
    pub critical: f64,
    pub pass: bool,
}

impl DistributionReport {
    /// Observed frequency of the cell holding `bucket`.
    pub fn frequency(&self, bucket: u64) -> f64 {
        self.histogram[(bucket - self.offset) as usize] as f64 / self.samples as f64
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bucket,count,expected,frequency\n");
        for (i, &count) in self.histogram.iter().enumerate() {
            let bucket = self.offset + i as u64;
            out.push_str(&format!(
                "{bucket},{count},{},{}\n",
                fmt_real(self.expected[i]),
                fmt_real(count as f64 / self.samples as f64),
            ));
        }
        out
    }

    pub fn render_table(&self) -> String {
        let mut out = format!(
            "cells={} samples={} chi_square={} df={} critical={} (alpha={}, Wilson-Hilferty) -> {}\n",
            self.histogram.len(),
            self.samples,
            fmt_real(self.chi_square),
            self.degrees_of_freedom,
            fmt_real(self.critical),
            fmt_real(self.alpha),
            if self.pass { "PASS" } else { "FAIL" },
        );
        if self.histogram.len() <= 64 {
            out.push_str("  bucket      count  frequency\n");
            for (i, &count) in self.histogram.iter().enumerate() {
                out.push_str(&format!(
                    "  {:>6} {:>10}  {}\n",
                    self.offset + i as u64,
                    count,
                    fmt_real(count as f64 / self.samples as f64),
                ));
            }
        } else {
            let min = self.histogram.iter().min().copied().unwrap_or(0);
            let max = self.histogram.iter().max().copied().unwrap_or(0);
            out.push_str(&format!(
                "  {} cells; per-cell counts in [{min}, {max}] (full histogram via CSV)\n",
                self.histogram.len(),
            ));
        }
        out
    }
}

/// A single counterexample to an exact mapping-consistency property.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    /// Key value fed to the hash.
    pub key: u64,
    pub n_large: u64,
    pub n_small: u64,
    pub at_large: u64,
    pub at_small: u64,
}

/// Outcome of an exact consistency check; these properties are deterministic,
/// so a single violation is a failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub keys_tested: u64,
    pub pairs_tested: u64,
    pub violations: u64,
    pub first_violation: Option<Violation>,
}

impl ConsistencyReport {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }

    pub fn to_csv(&self) -> String {
        format!(
            "keys_tested,pairs_tested,violations\n{},{},{}\n",
            self.keys_tested, self.pairs_tested, self.violations
        )
    }

    pub fn render_table(&self) -> String {
        let mut out = format!(
            "keys_tested={} pairs_tested={} violations={} -> {}\n",
            self.keys_tested,
            self.pairs_tested,
            self.violations,
            if self.pass() { "PASS" } else { "FAIL" },
        );
        if let Some(v) = self.first_violation {
            out.push_str(&format!(
                "  first violation: key={:#018x} value at n={} is {}, value at n={} is {}\n",
                v.key, v.n_large, v.at_large, v.n_small, v.at_small,
            ));
        }
        out
    }
}

/// Key movement measured between two bucket counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemapReport {
    pub n_from: u64,
    pub n_to: u64,
    pub keys: u64,
    pub moved: u64,
    pub moved_fraction: f64,
    /// Moves that violate minimality: a key that left a bucket still present
    /// in both spaces, or (when growing) moved anywhere but a new bucket.
    pub illegal_moves: u64,
}

impl RemapReport {
    pub fn pass(&self) -> bool {
        self.illegal_moves == 0
    }

    pub fn to_csv(&self) -> String {
        format!(
            "n_from,n_to,keys,moved,moved_fraction,illegal_moves\n{},{},{},{},{},{}\n",
            self.n_from,
            self.n_to,
            self.keys,
            self.moved,
            fmt_real(self.moved_fraction),
            self.illegal_moves
        )
    }

    pub fn render_table(&self) -> String {
        format!(
            "remap {} -> {} buckets over {} keys: moved={} ({}), illegal_moves={} -> {}\n",
            self.n_from,
            self.n_to,
            self.keys,
            self.moved,
            fmt_real(self.moved_fraction),
            self.illegal_moves,
            if self.pass() { "PASS" } else { "FAIL" },
        )
    }
}

/// Mean loop passes of the weighted stage must stay under this bound.
pub const ITERATION_MEAN_BOUND: f64 = 1.7;
/// Variance of weighted-stage loop passes must stay under this bound.
pub const ITERATION_VARIANCE_BOUND: f64 = 0.70;

/// Telemetry of the weighted stage collected across full lookups at one
/// bucket count.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationReport {
    pub n: u64,
    pub keys: u64,
    /// Lookups that actually entered the weighted stage.
    pub invocations: u64,
    /// Fraction of lookups resolved by the first stage alone.
    pub step1_exit_fraction: f64,
    pub mean: f64,
    pub variance: f64,
    pub max: u32,
    /// `histogram[i]` counts weighted-stage runs that took exactly i passes.
    pub histogram: Vec<u64>,
}

impl IterationReport {
    pub fn within_bounds(&self) -> bool {
        self.mean < ITERATION_MEAN_BOUND && self.variance < ITERATION_VARIANCE_BOUND
    }

    pub fn render_table(&self) -> String {
        let mut out = format!(
            "n={} keys={} weighted_stage_runs={} step1_exit={} mean={} (bound {}) variance={} (bound {}) max={} -> {}\n",
            self.n,
            self.keys,
            self.invocations,
            fmt_real(self.step1_exit_fraction),
            fmt_real(self.mean),
            fmt_real(ITERATION_MEAN_BOUND),
            fmt_real(self.variance),
            fmt_real(ITERATION_VARIANCE_BOUND),
            self.max,
            if self.within_bounds() { "PASS" } else { "FAIL" },
        );
        out.push_str("  passes      count\n");
        for (i, &count) in self.histogram.iter().enumerate() {
            if count > 0 {
                out.push_str(&format!("  {i:>6} {count:>10}\n"));
            }
        }
        out
    }
}

/// CSV over a batch of per-n iteration reports.
pub fn iteration_reports_to_csv(reports: &[IterationReport]) -> String {
    let mut out =
        String::from("n,keys,invocations,step1_exit_fraction,mean_iterations,variance,max_iterations\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n,
            r.keys,
            r.invocations,
            fmt_real(r.step1_exit_fraction),
            fmt_real(r.mean),
            fmt_real(r.variance),
            r.max
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_real_keeps_six_significant_digits() {
        assert_eq!(fmt_real(0.0), "0");
        assert_eq!(fmt_real(1.0 / 11.0), "0.0909091");
        assert_eq!(fmt_real(123.456789), "123.457");
        assert_eq!(fmt_real(0.0123456789), "0.0123457");
        assert_eq!(fmt_real(29.58829), "29.5883");
        assert_eq!(fmt_real(-1.0 / 3.0), "-0.333333");
        assert_eq!(fmt_real(1_000_000.4), "1000000");
    }

    #[test]
    fn csv_uses_lf_only_and_a_header_row() {
        let report = ConsistencyReport {
            keys_tested: 10,
            pairs_tested: 90,
            violations: 0,
            first_violation: None,
        };
        let csv = report.to_csv();
        assert!(csv.starts_with("keys_tested,"));
        assert!(!csv.contains('\r'));
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.ends_with('\n'));
    }
}
