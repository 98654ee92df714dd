//! Monte-Carlo driver: trials -> rate vectors -> outage/rate rows.
//!
//! Determinism contract: results are a pure function of (scenario, seed).
//! Trials are split into fixed-size blocks whose boundaries do not depend
//! on the worker count; each trial owns a private RNG stream keyed by its
//! global index; blocks are merged in index order. Byte-identical output
//! for any `workers` value follows by construction.

use rayon::prelude::*;

use crate::access::{scheme, MultipleAccess, SchemeConfig};
use crate::channel::{build_covariance, sample_channel, SpatialCovariance};
use crate::error::{Result, SimError};
use crate::fas::{effective_channels_with, PortSelector};
use crate::metrics::{aggregate, outage_indicator, sum_rate, wilson_interval, SampleKind};
use crate::rng::TrialRng;
use crate::scenario::Scenario;
use crate::table::{Metric, ResultRow, ResultTable};

/// Trials per parallel block. Fixed so the block layout — and therefore
/// the output — is independent of the worker count.
pub const BLOCK_TRIALS: u64 = 1024;

/// Give up on a trial after this many consecutive singular redraws; a
/// channel model this degenerate is misconfigured, not unlucky.
const MAX_REDRAWS_PER_TRIAL: u64 = 64;

/// Resampled trials above one percent of the budget indicate a broken
/// channel/precoder pairing rather than occasional ill-conditioning.
pub(crate) fn over_resample_budget(resampled: u64, trials: u64) -> bool {
    resampled * 100 > trials
}

struct BlockOut {
    resampled: u64,
    /// Per SNR point: count of trials with any user in outage.
    network_outages: Vec<u64>,
    /// Per SNR point, per user: outage counts.
    user_outages: Vec<Vec<u64>>,
    /// Per SNR point: per-trial sum rates in trial order.
    sum_rates: Vec<Vec<f64>>,
}

fn run_block(
    scenario: &Scenario,
    covariance: &SpatialCovariance,
    selector: &dyn PortSelector,
    access: &dyn MultipleAccess,
    configs: &[SchemeConfig],
    trial_rng: &TrialRng,
    first_trial: u64,
    block_len: u64,
) -> Result<BlockOut> {
    let points = configs.len();
    let users = scenario.users;
    let mut out = BlockOut {
        resampled: 0,
        network_outages: vec![0; points],
        user_outages: vec![vec![0; users]; points],
        sum_rates: vec![Vec::with_capacity(block_len as usize); points],
    };

    for trial in first_trial..first_trial + block_len {
        let mut rng = trial_rng.trial_stream(trial);
        let mut redraws = 0;
        // One channel draw serves the whole SNR grid; singular draws are
        // replaced from the same per-trial stream, so the resample path
        // never depends on how trials are scheduled. Counters are only
        // touched once the full grid has succeeded for the attempt.
        let trial_rates = 'attempt: loop {
            let realization =
                sample_channel(covariance, users, scenario.tx_antennas, &mut rng);
            let effective = effective_channels_with(&realization, selector)?;
            let mut attempt_rates = Vec::with_capacity(points);
            for config in configs {
                match access.rates(&effective, config) {
                    Ok(r) => attempt_rates.push(r),
                    Err(SimError::SingularChannel | SimError::DegenerateChannel(_)) => {
                        out.resampled += 1;
                        redraws += 1;
                        if redraws >= MAX_REDRAWS_PER_TRIAL {
                            return Err(SimError::Domain(format!(
                                "trial {trial}: {MAX_REDRAWS_PER_TRIAL} consecutive \
                                 singular channel draws"
                            )));
                        }
                        continue 'attempt;
                    }
                    Err(other) => return Err(other),
                }
            }
            break attempt_rates;
        };
        for (p, rates) in trial_rates.iter().enumerate() {
            let report = outage_indicator(rates, &scenario.thresholds, scenario.scheme);
            if report.network {
                out.network_outages[p] += 1;
            }
            for (k, &user_out) in report.per_user.iter().enumerate() {
                if user_out {
                    out.user_outages[p][k] += 1;
                }
            }
            out.sum_rates[p].push(sum_rate(rates));
        }
    }
    Ok(out)
}

fn merge_and_tabulate(
    scenario: &Scenario,
    snr_points: &[f64],
    blocks: Vec<BlockOut>,
) -> Result<ResultTable> {
    let trials = scenario.trials;
    let points = snr_points.len();
    let users = scenario.users;

    let mut resampled = 0u64;
    let mut network = vec![0u64; points];
    let mut user = vec![vec![0u64; users]; points];
    let mut rates: Vec<Vec<f64>> = vec![Vec::with_capacity(trials as usize); points];
    for block in blocks {
        resampled += block.resampled;
        for p in 0..points {
            network[p] += block.network_outages[p];
            for k in 0..users {
                user[p][k] += block.user_outages[p][k];
            }
            rates[p].extend_from_slice(&block.sum_rates[p]);
        }
    }
    if over_resample_budget(resampled, trials) {
        return Err(SimError::ResampleBudget { resampled, trials });
    }

    let mut table = ResultTable::new();
    let mut push = |metric: Metric, snr_db: f64, est: crate::metrics::Estimate| {
        table.push(ResultRow {
            snr_db,
            scheme_label: scenario.label.clone(),
            metric,
            value: est.mean,
            ci_low: est.ci_low,
            ci_high: est.ci_high,
            trials,
            resampled_trials: resampled,
        });
    };

    for (p, &snr_db) in snr_points.iter().enumerate() {
        debug_assert_eq!(rates[p].len() as u64, trials);
        push(Metric::NetworkOutage, snr_db, wilson_interval(network[p], trials));
        for k in 0..users {
            push(Metric::UserOutage(k), snr_db, wilson_interval(user[p][k], trials));
        }
        push(Metric::AvgSumRate, snr_db, aggregate(&rates[p], SampleKind::Continuous)?);
    }

    table.sort_canonical();
    Ok(table)
}

fn run_scenario_inner(scenario: &Scenario) -> Result<ResultTable> {
    scenario.validate()?;
    let grid = scenario.port_grid()?;
    let covariance = build_covariance(&grid)?;
    let selector = scenario.strategy.selector();
    let access = scheme(scenario.scheme);

    let snr_points = scenario.snr_grid.points();
    let configs: Vec<SchemeConfig> =
        snr_points.iter().map(|&snr| scenario.scheme_config(snr)).collect();
    for config in &configs {
        config.validate()?;
    }

    let trial_rng = TrialRng::new(scenario.seed, &scenario.label);
    let trials = scenario.trials;
    let num_blocks = trials.div_ceil(BLOCK_TRIALS);

    let blocks: Vec<Result<BlockOut>> = (0..num_blocks)
        .into_par_iter()
        .map(|b| {
            let first = b * BLOCK_TRIALS;
            let len = BLOCK_TRIALS.min(trials - first);
            run_block(
                scenario,
                &covariance,
                selector.as_ref(),
                access,
                &configs,
                &trial_rng,
                first,
                len,
            )
        })
        .collect();
    let blocks: Vec<BlockOut> = blocks.into_iter().collect::<Result<_>>()?;

    merge_and_tabulate(scenario, &snr_points, blocks)
}

/// Run one scenario to a canonical result table.
///
/// `workers` = 0 uses the process-global thread pool; any other value
/// runs inside a dedicated pool of exactly that many threads. The output
/// bytes are identical either way.
pub fn run_scenario(scenario: &Scenario, workers: usize) -> Result<ResultTable> {
    if workers == 0 {
        run_scenario_inner(scenario)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| SimError::Domain(format!("thread pool: {e}")))?;
        pool.install(|| run_scenario_inner(scenario))
    }
}

/// Run a scenario list (one parsed config) into a single canonical table.
pub fn run_scenarios(scenarios: &[Scenario], workers: usize) -> Result<ResultTable> {
    let mut table = ResultTable::new();
    for scenario in scenarios {
        table.extend_from(run_scenario(scenario, workers)?);
    }
    table.sort_canonical();
    Ok(table)
}
