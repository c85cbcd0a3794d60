//! Binomial confidence bounds and the paired comparison used for decoder
//! races.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;
/// One-sided 95% normal quantile.
pub const Z95_ONE_SIDED: f64 = 1.644_853_626_951_472_2;

/// A failure proportion with its 95% interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Proportion {
    pub failures: u64,
    pub trials: u64,
    pub lower: f64,
    pub upper: f64,
}

impl Proportion {
    /// Wilson score interval; with zero failures the upper end is the rule
    /// of three, `3 / trials`.
    pub fn new(failures: u64, trials: u64) -> Proportion {
        assert!(failures <= trials, "more failures than trials");
        if trials == 0 {
            return Proportion {
                failures,
                trials,
                lower: 0.0,
                upper: 1.0,
            };
        }
        if failures == 0 {
            return Proportion {
                failures,
                trials,
                lower: 0.0,
                upper: (3.0 / trials as f64).min(1.0),
            };
        }
        let (lower, upper) = wilson(failures, trials, Z95);
        Proportion {
            failures,
            trials,
            lower,
            upper,
        }
    }

    pub fn estimate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.failures as f64 / self.trials as f64
        }
    }

    /// Upper end came from the rule of three.
    pub fn zero_failure(&self) -> bool {
        self.failures == 0 && self.trials > 0
    }
}

/// Wilson score interval for `x` successes in `n` trials at quantile `z`.
pub fn wilson(x: u64, n: u64, z: f64) -> (f64, f64) {
    let n = n as f64;
    let p = x as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// McNemar statistic for paired trials. `only_a` counts trials where only
/// decoder A failed, `only_b` where only B failed. Positive values favour B.
pub fn mcnemar_z(only_a: u64, only_b: u64) -> f64 {
    let d = only_a + only_b;
    if d == 0 {
        0.0
    } else {
        (only_a as f64 - only_b as f64) / (d as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_matches_reference_values() {
        // 10 of 100: score interval (0.0552, 0.1744).
        let (lo, hi) = wilson(10, 100, Z95);
        assert!((lo - 0.055_229).abs() < 1e-5, "{lo}");
        assert!((hi - 0.174_366).abs() < 1e-5, "{hi}");
    }

    #[test]
    fn zero_failures_use_rule_of_three() {
        let p = Proportion::new(0, 600);
        assert!(p.zero_failure());
        assert_eq!(p.upper, 0.005);
    }

    #[test]
    fn mcnemar_sign() {
        assert!(mcnemar_z(10, 2) > 0.0);
        assert_eq!(mcnemar_z(0, 0), 0.0);
    }
}
