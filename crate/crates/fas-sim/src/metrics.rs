//! Per-trial rate vectors to outage indicators, sum rates, and
//! Monte-Carlo estimates with 95% confidence intervals.

use crate::access::{RateVector, SchemeKind};
use crate::error::{Result, SimError};

/// Two-sided 95% normal quantile used by every interval here.
pub const Z95: f64 = 1.96;

/// Target rates in bit/s/Hz. A stream whose rate falls strictly below its
/// threshold is in outage; zero thresholds therefore never fire.
#[derive(Debug, Clone, PartialEq)]
pub struct OutageThresholds {
    pub common: f64,
    pub private: Vec<f64>,
}

impl OutageThresholds {
    pub fn uniform(users: usize, rate: f64) -> Self {
        Self { common: rate, private: vec![rate; users] }
    }

    pub fn validate(&self, users: usize) -> Result<()> {
        if !self.common.is_finite() || self.common < 0.0 {
            return Err(SimError::config("threshold_common", "must be finite and >= 0"));
        }
        if self.private.len() != users {
            return Err(SimError::config(
                "threshold_private",
                format!("expected {users} thresholds, got {}", self.private.len()),
            ));
        }
        if self.private.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(SimError::config("threshold_private", "must be finite and >= 0"));
        }
        Ok(())
    }
}

/// Outage of one trial: per user, and the network-wide OR.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutageReport {
    pub per_user: Vec<bool>,
    pub network: bool,
}

/// Apply the scheme's outage rule to one trial.
///
/// RSMA: user k fails if the shared common rate misses the common
/// threshold or its private rate misses its own threshold. NOMA: user k
/// fails if any decode in its SIC chain (the weaker messages it must
/// strip, then its own) falls below the message owner's threshold.
pub fn outage_indicator(
    rates: &RateVector,
    thresholds: &OutageThresholds,
    scheme: SchemeKind,
) -> OutageReport {
    let per_user: Vec<bool> = match scheme {
        SchemeKind::Rsma => rates
            .private_rates
            .iter()
            .enumerate()
            .map(|(k, &private)| {
                rates.common_rate < thresholds.common || private < thresholds.private[k]
            })
            .collect(),
        SchemeKind::Noma => rates
            .sic_chains
            .iter()
            .map(|chain| {
                chain.iter().any(|d| d.rate < thresholds.private[d.message_owner])
            })
            .collect(),
    };
    let network = per_user.iter().any(|&o| o);
    OutageReport { per_user, network }
}

/// Sum rate of one trial: the common rate plus every private rate.
pub fn sum_rate(rates: &RateVector) -> f64 {
    rates.common_rate + rates.private_rates.iter().sum::<f64>()
}

/// What a trial-value stream measures; picks the interval construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    /// 0/1 outage indicators: Wilson score interval (valid near 0).
    Proportion,
    /// Continuous rates: normal approximation mean +/- z*s/sqrt(n).
    Continuous,
}

/// Point estimate with a 95% confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Estimate {
    pub fn half_width(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }
}

/// Summation with O(eps * log n) error, deterministic for a fixed slice.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 128 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Aggregate per-trial values in canonical trial order.
///
/// Proportion streams must hold only 0.0/1.0 values and get a Wilson
/// interval; continuous streams get the normal approximation. Fewer than
/// two trials cannot support an interval.
pub fn aggregate(trial_values: &[f64], kind: SampleKind) -> Result<Estimate> {
    let n = trial_values.len();
    if n < 2 {
        return Err(SimError::config("trials", "at least 2 trials required for an interval"));
    }
    match kind {
        SampleKind::Proportion => {
            if trial_values.iter().any(|&v| v != 0.0 && v != 1.0) {
                return Err(SimError::Domain(
                    "proportion aggregation expects 0/1 indicators".into(),
                ));
            }
            let successes = trial_values.iter().filter(|&&v| v == 1.0).count() as u64;
            Ok(wilson_interval(successes, n as u64))
        }
        SampleKind::Continuous => {
            let nf = n as f64;
            let mean = pairwise_sum(trial_values) / nf;
            let squared: Vec<f64> =
                trial_values.iter().map(|&v| (v - mean) * (v - mean)).collect();
            let variance = pairwise_sum(&squared) / (nf - 1.0);
            let hw = Z95 * (variance / nf).sqrt();
            Ok(Estimate { mean, ci_low: mean - hw, ci_high: mean + hw })
        }
    }
}

/// Wilson score interval for `successes` out of `trials`; the reported
/// mean is the plain proportion, which the interval always contains.
pub fn wilson_interval(successes: u64, trials: u64) -> Estimate {
    assert!(trials > 0, "wilson_interval: trials must be positive");
    assert!(successes <= trials, "wilson_interval: successes exceed trials");
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let hw = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Estimate {
        mean: p,
        ci_low: (center - hw).max(0.0),
        ci_high: (center + hw).min(1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::access::SicDecode;
    use approx::assert_abs_diff_eq;

    fn rsma_rates_stub(common: f64, private: Vec<f64>) -> RateVector {
        let per_user = vec![common; private.len()];
        RateVector {
            common_rate: common,
            private_rates: private,
            per_user_common_rates: per_user,
            sic_chains: Vec::new(),
        }
    }

    #[test]
    fn zero_thresholds_never_fire() {
        let rates = rsma_rates_stub(0.0, vec![0.0, 0.0]);
        let report =
            outage_indicator(&rates, &OutageThresholds::uniform(2, 0.0), SchemeKind::Rsma);
        assert!(!report.network);
        assert!(report.per_user.iter().all(|&o| !o));
    }

    #[test]
    fn failed_common_stream_outages_every_user() {
        let rates = rsma_rates_stub(0.4, vec![9.0, 9.0, 9.0]);
        let report =
            outage_indicator(&rates, &OutageThresholds::uniform(3, 0.5), SchemeKind::Rsma);
        assert!(report.per_user.iter().all(|&o| o));
        assert!(report.network);
    }

    #[test]
    fn private_miss_outages_only_that_user() {
        let rates = rsma_rates_stub(2.0, vec![0.2, 1.0]);
        let report =
            outage_indicator(&rates, &OutageThresholds::uniform(2, 0.5), SchemeKind::Rsma);
        assert_eq!(report.per_user, vec![true, false]);
        assert!(report.network);
    }

    #[test]
    fn noma_chain_failure_outages_the_strong_user() {
        // The strong user cannot strip the weak user's message even though
        // its own-message rate is high.
        let rates = RateVector {
            common_rate: 0.0,
            private_rates: vec![0.8, 5.0],
            per_user_common_rates: Vec::new(),
            sic_chains: vec![
                vec![SicDecode { message_owner: 0, rate: 0.8 }],
                vec![
                    SicDecode { message_owner: 0, rate: 0.3 },
                    SicDecode { message_owner: 1, rate: 5.0 },
                ],
            ],
        };
        let report =
            outage_indicator(&rates, &OutageThresholds::uniform(2, 0.5), SchemeKind::Noma);
        assert_eq!(report.per_user, vec![false, true]);
        assert!(report.network);
    }

    #[test]
    fn network_outage_is_the_or_over_users() {
        let rates = rsma_rates_stub(2.0, vec![1.0, 1.0]);
        let report =
            outage_indicator(&rates, &OutageThresholds::uniform(2, 0.5), SchemeKind::Rsma);
        assert!(!report.network);
    }

    #[test]
    fn sum_rate_adds_common_and_private() {
        let rates = rsma_rates_stub(1.0, vec![0.5, 0.5, 0.5]);
        assert_abs_diff_eq!(sum_rate(&rates), 2.5, epsilon = 1e-15);
        let zero_common = rsma_rates_stub(0.0, vec![0.7, 0.4]);
        assert_abs_diff_eq!(sum_rate(&zero_common), 1.1, epsilon = 1e-15);
    }

    #[test]
    fn constant_stream_has_zero_width_interval() {
        let est = aggregate(&[0.5; 100], SampleKind::Continuous).unwrap();
        assert_eq!((est.mean, est.ci_low, est.ci_high), (0.5, 0.5, 0.5));
    }

    #[test]
    fn alternating_indicator_wilson_half_width() {
        let values: Vec<f64> = (0..10_000).map(|i| (i % 2) as f64).collect();
        let est = aggregate(&values, SampleKind::Proportion).unwrap();
        assert_eq!(est.mean, 0.5);
        assert_abs_diff_eq!(est.half_width(), 0.0098, epsilon = 1e-4);
    }

    #[test]
    fn all_zero_outage_stream_pins_ci_low_at_zero() {
        let est = aggregate(&[0.0; 1000], SampleKind::Proportion).unwrap();
        assert_eq!(est.mean, 0.0);
        assert_eq!(est.ci_low, 0.0);
        assert!(est.ci_high > 0.0);
    }

    #[test]
    fn interval_always_contains_the_mean() {
        for (s, n) in [(0u64, 50u64), (1, 50), (25, 50), (49, 50), (50, 50)] {
            let est = wilson_interval(s, n);
            assert!(est.ci_low <= est.mean && est.mean <= est.ci_high, "s={s} n={n}");
        }
    }

    #[test]
    fn too_few_trials_is_a_config_error() {
        let err = aggregate(&[1.0], SampleKind::Continuous).unwrap_err();
        assert!(err.to_string().contains("trials"));
    }

    #[test]
    fn proportion_stream_must_be_binary() {
        assert!(aggregate(&[0.0, 0.5], SampleKind::Proportion).is_err());
    }

    #[test]
    fn pairwise_sum_matches_naive_on_well_conditioned_input() {
        let values: Vec<f64> = (0..5000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = values.iter().sum();
        assert_abs_diff_eq!(pairwise_sum(&values), naive, epsilon = 1e-9);
    }
}
