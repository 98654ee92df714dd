//! Link-level Monte-Carlo simulator for fluid-antenna-system (FAS)
//! multi-user downlinks.
//!
//! A base station with L transmit antennas serves K single-antenna users;
//! each user's antenna can switch among N candidate ports on a compact
//! linear aperture, where port fading is spatially correlated (Jakes
//! model, Toeplitz covariance). The engine compares multiple-access
//! schemes — rate-splitting (RSMA) and power-domain NOMA — by outage
//! probability and average sum rate over an SNR grid, with reproducible
//! per-trial random streams, deterministic parallelism, CSV output, and
//! gnuplot script emission.
//!
//! Pipeline per trial: sample correlated channels -> select ports
//! ([`fas`]) -> precode and compute per-user rates ([`access`]) -> outage
//! indicators and sum rate ([`metrics`]) -> aggregate into a
//! [`table::ResultTable`].

pub mod access;
pub mod bessel;
pub mod channel;
pub mod config;
pub mod engine;
pub mod error;
pub mod fas;
pub mod metrics;
pub mod plot;
pub mod precoding;
pub mod rng;
pub mod scenario;
pub mod table;

pub use access::{
    noma_rates, rsma_rates, scheme, scheme_by_name, scheme_names, MultipleAccess,
    PrecoderFamily, RateVector, SchemeConfig, SchemeKind, SicDecode,
};
pub use bessel::{bessel_j0, jakes_correlation};
pub use channel::{
    build_covariance, sample_channel, ChannelRealization, PortGrid, SpatialCovariance,
    EPS_PSD,
};
pub use config::{default_noma_fractions, load_config, parse_config};
pub use engine::{run_scenario, run_scenarios, BLOCK_TRIALS};
pub use error::{Diagnostic, Result, SimError};
pub use fas::{
    effective_channels, effective_channels_with, select_port, strategy_specs,
    EffectiveChannel, PortSelector, PortStrategy,
};
pub use metrics::{
    aggregate, outage_indicator, pairwise_sum, sum_rate, wilson_interval, Estimate,
    OutageReport, OutageThresholds, SampleKind, Z95,
};
pub use plot::{plot_script, PlotKind};
pub use precoding::{
    common_precoder, mrt_precoder, stacked_rows, zf_precoders, CommonPrecoder,
    COMMON_DIRECTION_EPS, ZF_LEAKAGE_TOL,
};
pub use rng::TrialRng;
pub use scenario::{Scenario, SnrGrid};
pub use table::{Metric, ResultRow, ResultTable, CSV_HEADER};
