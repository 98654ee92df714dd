//! Multiple-access rate computation: 1-layer RSMA and power-domain NOMA.
//!
//! Scheme implementations sit behind the [`MultipleAccess`] trait and a
//! by-name registry so the engine, configs, and the CLI pick them at
//! runtime. Noise power is normalized to 1; the average transmit SNR is
//! carried entirely by the power P derived from `snr_db`.

mod noma;
mod rsma;

use std::collections::BTreeMap;
use std::fmt;

use once_cell::sync::Lazy;

use crate::error::{Result, SimError};
use crate::fas::EffectiveChannel;

pub use noma::noma_rates;
pub use rsma::rsma_rates;

/// Scheme selector, parsed from config/CLI by registry name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    Rsma,
    Noma,
}

impl SchemeKind {
    pub fn parse(name: &str) -> Result<Self> {
        scheme_by_name(name).map(|s| s.kind())
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(scheme(*self).name())
    }
}

/// Precoder family implied by the antenna count and scheme: scalar gains
/// for single-antenna links, zero-forcing private beams plus a shared
/// matched-filter beam for MISO RSMA, per-user matched filters for MISO
/// NOMA superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecoderFamily {
    Siso,
    HybridZfMrt,
    MrtOnly,
}

/// Everything a scheme needs to turn effective channels into rates.
#[derive(Debug, Clone)]
pub struct SchemeConfig {
    pub scheme: SchemeKind,
    /// Average transmit SNR P/sigma^2 in dB; sigma^2 = 1.
    pub snr_db: f64,
    /// RSMA common-stream power fraction t in [0, 1].
    pub common_power_fraction: f64,
    /// NOMA superposition fractions, weakest-ranked user first, sum 1.
    pub noma_power_fractions: Vec<f64>,
    pub precoder_family: PrecoderFamily,
}

impl SchemeConfig {
    /// Transmit power P implied by `snr_db` with unit noise power.
    pub fn transmit_power(&self) -> f64 {
        10f64.powf(self.snr_db / 10.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.snr_db.is_finite() {
            return Err(SimError::config("snr_db", "must be finite"));
        }
        let t = self.common_power_fraction;
        if !(0.0..=1.0).contains(&t) {
            return Err(SimError::config(
                "common_power_fraction",
                format!("must lie in [0, 1], got {t}"),
            ));
        }
        if self.scheme == SchemeKind::Noma {
            validate_fractions(&self.noma_power_fractions)?;
        }
        match (self.scheme, self.precoder_family) {
            (SchemeKind::Rsma, PrecoderFamily::MrtOnly) => Err(SimError::config(
                "scheme",
                "MRT-only superposition is the NOMA MISO family",
            )),
            (SchemeKind::Noma, PrecoderFamily::HybridZfMrt) => Err(SimError::config(
                "scheme",
                "hybrid ZF/MRT is the RSMA MISO family",
            )),
            _ => Ok(()),
        }
    }
}

pub(crate) fn validate_fractions(fractions: &[f64]) -> Result<()> {
    if fractions.is_empty() {
        return Err(SimError::config("noma_power_fractions", "must not be empty"));
    }
    if fractions.iter().any(|&a| !a.is_finite() || a <= 0.0) {
        return Err(SimError::config("noma_power_fractions", "every fraction must be positive"));
    }
    let sum: f64 = fractions.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(SimError::config(
            "noma_power_fractions",
            format!("fractions must sum to 1 within 1e-12, got {sum}"),
        ));
    }
    Ok(())
}

/// One decode step in a user's SIC chain: the rate at which this user can
/// decode the message owned by `message_owner` (an original user index).
#[derive(Debug, Clone, PartialEq)]
pub struct SicDecode {
    pub message_owner: usize,
    pub rate: f64,
}

/// Per-trial achievable rates in bit/s/Hz.
///
/// RSMA fills `per_user_common_rates` (with `common_rate` their minimum)
/// and leaves `sic_chains` empty; NOMA fills `sic_chains` (chains[k] is
/// user k's decode sequence, weakest-ranked message first, ending with
/// its own) and reports zero common rate.
#[derive(Debug, Clone, PartialEq)]
pub struct RateVector {
    pub common_rate: f64,
    pub private_rates: Vec<f64>,
    pub per_user_common_rates: Vec<f64>,
    pub sic_chains: Vec<Vec<SicDecode>>,
}

impl RateVector {
    pub fn num_users(&self) -> usize {
        self.private_rates.len()
    }
}

/// A multiple-access scheme: channels in, per-user rates out.
pub trait MultipleAccess: Send + Sync {
    fn name(&self) -> &'static str;
    fn kind(&self) -> SchemeKind;
    fn rates(&self, effective: &[EffectiveChannel], config: &SchemeConfig) -> Result<RateVector>;
}

struct RsmaScheme;

impl MultipleAccess for RsmaScheme {
    fn name(&self) -> &'static str {
        "rsma"
    }

    fn kind(&self) -> SchemeKind {
        SchemeKind::Rsma
    }

    fn rates(&self, effective: &[EffectiveChannel], config: &SchemeConfig) -> Result<RateVector> {
        rsma_rates(effective, config)
    }
}

struct NomaScheme;

impl MultipleAccess for NomaScheme {
    fn name(&self) -> &'static str {
        "noma"
    }

    fn kind(&self) -> SchemeKind {
        SchemeKind::Noma
    }

    fn rates(&self, effective: &[EffectiveChannel], config: &SchemeConfig) -> Result<RateVector> {
        noma_rates(effective, config)
    }
}

static RSMA: RsmaScheme = RsmaScheme;
static NOMA: NomaScheme = NomaScheme;

static REGISTRY: Lazy<BTreeMap<&'static str, &'static dyn MultipleAccess>> = Lazy::new(|| {
    let mut m: BTreeMap<&'static str, &'static dyn MultipleAccess> = BTreeMap::new();
    m.insert(RSMA.name(), &RSMA);
    m.insert(NOMA.name(), &NOMA);
    m
});

/// The implementation backing a scheme kind.
pub fn scheme(kind: SchemeKind) -> &'static dyn MultipleAccess {
    match kind {
        SchemeKind::Rsma => &RSMA,
        SchemeKind::Noma => &NOMA,
    }
}

/// Registry lookup by name.
pub fn scheme_by_name(name: &str) -> Result<&'static dyn MultipleAccess> {
    REGISTRY.get(name).copied().ok_or_else(|| {
        SimError::config(
            "scheme",
            format!("unknown scheme '{name}', expected one of: {}", scheme_names().join(", ")),
        )
    })
}

/// Registered scheme names in stable order.
pub fn scheme_names() -> Vec<&'static str> {
    REGISTRY.keys().copied().collect()
}
