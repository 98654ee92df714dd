//! TOML run configuration: flat scenario keys with spec'd defaults, plus
//! an optional `[matrix]` section whose value lists are cross-producted
//! into one scenario per combination (a whole figure from one file).
//!
//! Parsing never bails on the first problem: every diagnostic is
//! collected, prefixed with the scenario label where one exists, and
//! returned together.

use std::path::Path;

use serde::Deserialize;

use crate::access::SchemeKind;
use crate::error::{Diagnostic, Result, SimError};
use crate::fas::PortStrategy;
use crate::metrics::OutageThresholds;
use crate::scenario::{Scenario, SnrGrid};

pub const DEFAULT_TX_ANTENNAS: usize = 1;
pub const DEFAULT_APERTURE_WAVELENGTHS: f64 = 0.5;
pub const DEFAULT_STRATEGY: &str = "max_gain";
pub const DEFAULT_COMMON_POWER_FRACTION: f64 = 0.5;
pub const DEFAULT_THRESHOLD: f64 = 0.5;
pub const DEFAULT_SNR_MIN_DB: f64 = 0.0;
pub const DEFAULT_SNR_MAX_DB: f64 = 40.0;
pub const DEFAULT_SNR_STEPS: usize = 9;
pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 1;

/// Scalar-or-list TOML value for per-user thresholds.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ScalarOrList {
    Scalar(f64),
    List(Vec<f64>),
}

impl ScalarOrList {
    fn resolve(&self, users: usize) -> Vec<f64> {
        match self {
            ScalarOrList::Scalar(v) => vec![*v; users],
            ScalarOrList::List(vs) => vs.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSnr {
    min: Option<f64>,
    max: Option<f64>,
    steps: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatrix {
    schemes: Option<Vec<String>>,
    strategies: Option<Vec<String>>,
    ports: Option<Vec<usize>>,
    common_power_fractions: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    label: Option<String>,
    users: Option<usize>,
    tx_antennas: Option<usize>,
    ports: Option<usize>,
    aperture_wavelengths: Option<f64>,
    strategy: Option<String>,
    scheme: Option<String>,
    common_power_fraction: Option<f64>,
    noma_power_fractions: Option<Vec<f64>>,
    threshold_common: Option<f64>,
    threshold_private: Option<ScalarOrList>,
    snr_db: Option<RawSnr>,
    trials: Option<u64>,
    seed: Option<u64>,
    matrix: Option<RawMatrix>,
}

/// Built-in NOMA power splits, weakest user first. Only these user counts
/// have a pinned default; other counts must configure fractions.
pub fn default_noma_fractions(users: usize) -> Option<Vec<f64>> {
    match users {
        1 => Some(vec![1.0]),
        3 => Some(vec![0.6, 0.3, 0.1]),
        _ => None,
    }
}

fn strategy_label_part(strategy: &PortStrategy) -> &'static str {
    match strategy {
        PortStrategy::MaxGain => "fas",
        PortStrategy::Fixed(_) => "fpa",
    }
}

/// Trim an f64 for use inside a label: `0.2` -> "0.2".
fn fraction_label_part(t: f64) -> String {
    format!("{t}")
}

struct Expansion {
    schemes: Vec<String>,
    strategies: Vec<String>,
    ports: Vec<usize>,
    fractions: Vec<f64>,
    /// Which axes the matrix actually varies (length > 1 or explicitly
    /// listed); varied axes always appear in generated labels.
    from_matrix: bool,
    vary_fraction: bool,
}

fn expansion(raw: &RawConfig, diags: &mut Vec<Diagnostic>) -> Expansion {
    let matrix = raw.matrix.clone().unwrap_or_default();
    let from_matrix = raw.matrix.is_some();

    let schemes = match &matrix.schemes {
        Some(list) if list.is_empty() => {
            diags.push(Diagnostic::new("matrix.schemes", "must not be empty"));
            Vec::new()
        }
        Some(list) => list.clone(),
        None => match &raw.scheme {
            Some(s) => vec![s.clone()],
            None => {
                diags.push(Diagnostic::new(
                    "scheme",
                    "required: set `scheme` or `matrix.schemes` (rsma|noma)",
                ));
                Vec::new()
            }
        },
    };

    let strategies = match &matrix.strategies {
        Some(list) if list.is_empty() => {
            diags.push(Diagnostic::new("matrix.strategies", "must not be empty"));
            Vec::new()
        }
        Some(list) => list.clone(),
        None => vec![raw.strategy.clone().unwrap_or_else(|| DEFAULT_STRATEGY.into())],
    };

    let ports = match &matrix.ports {
        Some(list) if list.is_empty() => {
            diags.push(Diagnostic::new("matrix.ports", "must not be empty"));
            Vec::new()
        }
        Some(list) => list.clone(),
        None => match raw.ports {
            Some(n) => vec![n],
            None => {
                diags.push(Diagnostic::new(
                    "ports",
                    "required: set `ports` or `matrix.ports`",
                ));
                Vec::new()
            }
        },
    };

    let fractions = match &matrix.common_power_fractions {
        Some(list) if list.is_empty() => {
            diags.push(Diagnostic::new("matrix.common_power_fractions", "must not be empty"));
            Vec::new()
        }
        Some(list) => list.clone(),
        None => vec![raw.common_power_fraction.unwrap_or(DEFAULT_COMMON_POWER_FRACTION)],
    };
    let vary_fraction = fractions.len() > 1;

    Expansion { schemes, strategies, ports, fractions, from_matrix, vary_fraction }
}

fn resolve_scenario(
    raw: &RawConfig,
    users: usize,
    scheme: SchemeKind,
    strategy: PortStrategy,
    num_ports: usize,
    common_power_fraction: f64,
    label: String,
    diags: &mut Vec<Diagnostic>,
) -> Option<Scenario> {
    let mut local = Vec::new();

    let noma_power_fractions = if scheme == SchemeKind::Noma {
        match &raw.noma_power_fractions {
            Some(f) => f.clone(),
            None => match default_noma_fractions(users) {
                Some(f) => f,
                None => {
                    local.push(Diagnostic::new(
                        "noma_power_fractions",
                        format!("no built-in default for users = {users}; set it explicitly"),
                    ));
                    Vec::new()
                }
            },
        }
    } else {
        raw.noma_power_fractions.clone().unwrap_or_default()
    };

    let thresholds = OutageThresholds {
        common: raw.threshold_common.unwrap_or(DEFAULT_THRESHOLD),
        private: raw
            .threshold_private
            .as_ref()
            .map(|t| t.resolve(users))
            .unwrap_or_else(|| vec![DEFAULT_THRESHOLD; users]),
    };

    let snr = raw.snr_db.clone().unwrap_or_default();
    let snr_grid = SnrGrid {
        start_db: snr.min.unwrap_or(DEFAULT_SNR_MIN_DB),
        stop_db: snr.max.unwrap_or(DEFAULT_SNR_MAX_DB),
        num_points: snr.steps.unwrap_or(DEFAULT_SNR_STEPS),
    };

    let scenario = Scenario {
        label,
        users,
        tx_antennas: raw.tx_antennas.unwrap_or(DEFAULT_TX_ANTENNAS),
        num_ports,
        aperture_wavelengths: raw
            .aperture_wavelengths
            .unwrap_or(DEFAULT_APERTURE_WAVELENGTHS),
        strategy,
        scheme,
        common_power_fraction,
        noma_power_fractions,
        thresholds,
        snr_grid,
        trials: raw.trials.unwrap_or(DEFAULT_TRIALS),
        seed: raw.seed.unwrap_or(DEFAULT_SEED),
    };

    local.extend(scenario.diagnose());
    if local.is_empty() {
        Some(scenario)
    } else {
        let prefix = &scenario.label;
        diags.extend(
            local
                .into_iter()
                .map(|d| Diagnostic::new(format!("{prefix}.{}", d.path), d.message)),
        );
        None
    }
}

/// Parse one TOML document into its (possibly matrix-expanded) scenarios.
///
/// Generated labels are `{scheme}-{fas|fpa}-n{ports}`, suffixed `-t{t}`
/// for RSMA when the matrix sweeps the common power fraction, and
/// prefixed with the flat `label` when one is given. A flat `label`
/// without a `[matrix]` section is used verbatim. NOMA ignores the common
/// power fraction, so a fraction sweep adds no NOMA duplicates.
pub fn parse_config(text: &str) -> Result<Vec<Scenario>> {
    let raw: RawConfig = match toml::from_str(text) {
        Ok(raw) => raw,
        Err(e) => {
            return Err(SimError::Config(vec![Diagnostic::new(
                "config",
                e.message().to_string(),
            )]))
        }
    };

    let mut diags = Vec::new();
    let exp = expansion(&raw, &mut diags);

    // Required keys and name parsing come first: expansion is meaningless
    // until every axis has well-formed values.
    let users = match raw.users {
        Some(u) => u,
        None => {
            diags.push(Diagnostic::new("users", "required"));
            0
        }
    };
    let schemes: Vec<SchemeKind> = exp
        .schemes
        .iter()
        .filter_map(|name| match SchemeKind::parse(name) {
            Ok(k) => Some(k),
            Err(e) => {
                diags.push(Diagnostic::new("scheme", e.to_string()));
                None
            }
        })
        .collect();
    let strategies: Vec<PortStrategy> = exp
        .strategies
        .iter()
        .filter_map(|spec| match PortStrategy::parse(spec) {
            Ok(s) => Some(s),
            Err(e) => {
                diags.push(Diagnostic::new("strategy", e.to_string()));
                None
            }
        })
        .collect();
    if !diags.is_empty() {
        return Err(SimError::Config(diags));
    }

    let mut scenarios = Vec::new();
    for &scheme in &schemes {
        for strategy in &strategies {
            for &num_ports in &exp.ports {
                let mut fractions_for_scheme: Vec<f64> = exp.fractions.clone();
                if scheme == SchemeKind::Noma {
                    // The common split does not enter NOMA rates; one
                    // scenario per (scheme, strategy, ports) suffices.
                    fractions_for_scheme.truncate(1);
                }
                for &t in &fractions_for_scheme {
                    let label = if exp.from_matrix || raw.label.is_none() {
                        let mut generated = format!(
                            "{scheme}-{}-n{num_ports}",
                            strategy_label_part(strategy)
                        );
                        if exp.vary_fraction && scheme == SchemeKind::Rsma {
                            generated.push_str(&format!("-t{}", fraction_label_part(t)));
                        }
                        match &raw.label {
                            Some(prefix) => format!("{prefix}-{generated}"),
                            None => generated,
                        }
                    } else {
                        raw.label.clone().unwrap()
                    };
                    if let Some(s) = resolve_scenario(
                        &raw, users, scheme, strategy.clone(), num_ports, t, label, &mut diags,
                    ) {
                        scenarios.push(s);
                    }
                }
            }
        }
    }

    let mut seen = std::collections::BTreeSet::new();
    for s in &scenarios {
        if !seen.insert(s.label.clone()) {
            diags.push(Diagnostic::new(
                "label",
                format!(
                    "duplicate scenario label `{}`; give scenarios distinct labels",
                    s.label
                ),
            ));
        }
    }

    if diags.is_empty() {
        Ok(scenarios)
    } else {
        Err(SimError::Config(diags))
    }
}

pub fn load_config(path: &Path) -> Result<Vec<Scenario>> {
    parse_config(&std::fs::read_to_string(path)?)
}
