//! Binomial statistics for win-rate estimates.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval at 95% for `wins` out of `trials`.
pub fn wilson(wins: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = wins as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Standard deviation of the mean of `trials` Bernoulli(`p`) draws.
pub fn binomial_sigma(p: f64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Fixed six decimals, or scientific notation below 10^-3.
pub fn fmt_prob(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-3 {
        format!("{x:.3e}")
    } else {
        format!("{x:.6}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // Textbook example: 81 of 263.
        let (lo, hi) = wilson(81, 263);
        assert!((lo - 0.2553).abs() < 1e-3, "{lo}");
        assert!((hi - 0.3662).abs() < 1e-3, "{hi}");
        let (lo, hi) = wilson(0, 100);
        assert!(lo.abs() < 1e-12);
        assert!(hi > 0.03 && hi < 0.04);
        let (lo, hi) = wilson(100, 100);
        assert!(lo > 0.96);
        assert!((hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn interval_contains_rate() {
        for trials in [1u64, 7, 100, 12345] {
            for wins in [0, trials / 3, trials / 2, trials] {
                let (lo, hi) = wilson(wins, trials);
                let p = wins as f64 / trials as f64;
                assert!(lo <= p + 1e-12 && p <= hi + 1e-12);
            }
        }
    }

    #[test]
    fn sigma() {
        assert!((binomial_sigma(0.5, 100) - 0.05).abs() < 1e-12);
        assert_eq!(binomial_sigma(0.0, 100), 0.0);
    }

    #[test]
    fn prob_format() {
        assert_eq!(fmt_prob(0.5), "0.500000");
        assert_eq!(fmt_prob(0.0), "0.000000");
        assert_eq!(fmt_prob(6.103515625e-5), "6.104e-5");
    }
}
