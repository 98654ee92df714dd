//! Helpers shared by the integration suites: an independent Bessel
//! oracle, scenario builders, and result-table lookups.

#![allow(dead_code)]

use fas_sim::{
    Metric, OutageThresholds, PortStrategy, ResultRow, ResultTable, Scenario, SchemeKind, SnrGrid,
};

/// Power-series J0 evaluated with an explicit factorial table, summed
/// smallest term first. Shares no code with the production evaluator
/// (which runs a term recurrence with early exit), so agreement between
/// the two is evidence rather than tautology. Truncation error of the
/// 30-term series is below 1e-18 for |x| <= 12.
pub fn oracle_j0(x: f64) -> f64 {
    const TERMS: usize = 30;
    let mut factorial = [1.0_f64; TERMS];
    for k in 1..TERMS {
        factorial[k] = factorial[k - 1] * k as f64;
    }
    let q = x * x / 4.0;
    let mut total = 0.0;
    for k in (0..TERMS).rev() {
        let term = q.powi(k as i32) / (factorial[k] * factorial[k]);
        total += if k % 2 == 0 { term } else { -term };
    }
    total
}

/// K=3 single-antenna scenario on the default 0-40 dB grid with the
/// stock thresholds and power split.
pub fn siso_scenario(
    label: &str,
    scheme: SchemeKind,
    strategy: PortStrategy,
    num_ports: usize,
    trials: u64,
    seed: u64,
) -> Scenario {
    Scenario {
        label: label.to_string(),
        users: 3,
        tx_antennas: 1,
        num_ports,
        aperture_wavelengths: 0.5,
        strategy,
        scheme,
        common_power_fraction: 0.5,
        noma_power_fractions: vec![0.6, 0.3, 0.1],
        thresholds: OutageThresholds::uniform(3, 0.5),
        snr_grid: SnrGrid { start_db: 0.0, stop_db: 40.0, num_points: 9 },
        trials,
        seed,
    }
}

/// K=3, L=4 multi-antenna variant of [`siso_scenario`].
pub fn miso_scenario(
    label: &str,
    scheme: SchemeKind,
    strategy: PortStrategy,
    num_ports: usize,
    common_power_fraction: f64,
    trials: u64,
    seed: u64,
) -> Scenario {
    Scenario {
        tx_antennas: 4,
        common_power_fraction,
        ..siso_scenario(label, scheme, strategy, num_ports, trials, seed)
    }
}

/// Row lookup that panics with a readable message instead of `None`.
pub fn row<'t>(table: &'t ResultTable, label: &str, metric: Metric, snr_db: f64) -> &'t ResultRow {
    table
        .find(label, metric, snr_db)
        .unwrap_or_else(|| panic!("missing row: label={label} metric={metric} snr={snr_db} dB"))
}

pub fn value(table: &ResultTable, label: &str, metric: Metric, snr_db: f64) -> f64 {
    row(table, label, metric, snr_db).value
}

/// Half-width of the reported confidence interval.
pub fn half_width(table: &ResultTable, label: &str, metric: Metric, snr_db: f64) -> f64 {
    let r = row(table, label, metric, snr_db);
    (r.ci_high - r.ci_low) / 2.0
}
