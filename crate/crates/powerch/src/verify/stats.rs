//! Numeric helpers for the statistical suites. Critical values come from
//! closed-form approximations rather than tables so any cell count works
//! without data files.

/// Inverse standard normal CDF via Acklam's rational approximation
/// (absolute error below 1.2e-9 over the open unit interval).
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile requires p in (0, 1), got {p}");

    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let tail = |q: f64| -> f64 {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    }
}

/// Upper critical value of the chi-square distribution with `df` degrees of
/// freedom at significance `alpha` (the 1 - alpha quantile), via the
/// Wilson–Hilferty cube-root approximation. Accurate to well under 1% for
/// df >= 10 and slightly loose (higher) at small df, which only makes the
/// pass condition more conservative against false alarms.
pub fn chi_square_critical(df: u64, alpha: f64) -> f64 {
    if df == 0 {
        return 0.0;
    }
    let z = normal_quantile(1.0 - alpha);
    let d = df as f64;
    let t = 1.0 - 2.0 / (9.0 * d) + z * (2.0 / (9.0 * d)).sqrt();
    d * t.powi(3)
}

/// Pearson chi-square statistic of observed counts against expected counts.
pub fn pearson_statistic(observed: &[u64], expected: &[f64]) -> f64 {
    debug_assert_eq!(observed.len(), expected.len());
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_matches_known_points() {
        assert!((normal_quantile(0.5)).abs() < 1e-12);
        assert!((normal_quantile(0.975) - 1.959963984540054).abs() < 1e-8);
        assert!((normal_quantile(0.999) - 3.090232306167813).abs() < 1e-8);
        assert!((normal_quantile(0.001) + 3.090232306167813).abs() < 1e-8);
    }

    #[test]
    fn quantile_agrees_with_statrs() {
        use statrs::distribution::{ContinuousCDF, Normal};
        let normal = Normal::new(0.0, 1.0).unwrap();
        for p in [0.0005, 0.001, 0.01, 0.02425, 0.1, 0.4, 0.5, 0.9, 0.99, 0.999, 0.9999] {
            let ours = normal_quantile(p);
            let reference = normal.inverse_cdf(p);
            assert!(
                (ours - reference).abs() < 1e-6,
                "p={p}: {ours} vs {reference}"
            );
        }
    }

    #[test]
    fn critical_values_agree_with_statrs_inverse_cdf() {
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        for df in [2u64, 10, 36, 100, 256, 999] {
            for alpha in [0.001, 0.01, 0.05] {
                let ours = chi_square_critical(df, alpha);
                let reference = ChiSquared::new(df as f64).unwrap().inverse_cdf(1.0 - alpha);
                let rel = (ours - reference).abs() / reference;
                assert!(rel < 0.025, "df={df} alpha={alpha}: {ours} vs {reference}");
            }
        }
    }

    #[test]
    fn pearson_statistic_matches_textbook_hand_computation() {
        // 100 samples over 3 equally likely cells, observed [30, 50, 20]:
        // sum((o - 100/3)^2 / (100/3)) = 14.0 exactly.
        let observed = [30u64, 50, 20];
        let expected = [100.0 / 3.0; 3];
        let by_hand = {
            let e = 100.0 / 3.0;
            ((30.0 - e) * (30.0 - e) + (50.0 - e) * (50.0 - e) + (20.0 - e) * (20.0 - e)) / e
        };
        let stat = pearson_statistic(&observed, &expected);
        assert!((stat - by_hand).abs() < 1e-9);
        assert!((stat - 14.0).abs() < 1e-9);
    }

    #[test]
    fn zero_degrees_of_freedom_has_zero_critical_value() {
        assert_eq!(chi_square_critical(0, 0.001), 0.0);
    }
}
