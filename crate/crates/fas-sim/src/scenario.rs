//! One fully-resolved simulation scenario: geometry, scheme, SNR grid,
//! trial budget. Validation reports every problem at once as diagnostics
//! with bare field paths; the config layer prefixes them per scenario.

use crate::access::{PrecoderFamily, SchemeConfig, SchemeKind};
use crate::channel::PortGrid;
use crate::error::{Diagnostic, Result, SimError};
use crate::fas::PortStrategy;
use crate::metrics::OutageThresholds;

/// Inclusive linear grid of transmit SNRs in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrGrid {
    pub start_db: f64,
    pub stop_db: f64,
    pub num_points: usize,
}

impl SnrGrid {
    pub fn points(&self) -> Vec<f64> {
        if self.num_points == 1 {
            return vec![self.start_db];
        }
        let span = self.stop_db - self.start_db;
        let last = (self.num_points - 1) as f64;
        (0..self.num_points)
            .map(|i| self.start_db + span * i as f64 / last)
            .collect()
    }

    fn diagnose(&self, diags: &mut Vec<Diagnostic>) {
        if !self.start_db.is_finite() || !self.stop_db.is_finite() {
            diags.push(Diagnostic::new("snr_db", "grid endpoints must be finite"));
            return;
        }
        if self.num_points == 0 {
            diags.push(Diagnostic::new("snr_points", "must be at least 1"));
        }
        if self.num_points > 1 && self.stop_db <= self.start_db {
            diags.push(Diagnostic::new(
                "snr_db",
                "snr_db_stop must exceed snr_db_start when snr_points > 1",
            ));
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub label: String,
    pub users: usize,
    pub tx_antennas: usize,
    pub num_ports: usize,
    pub aperture_wavelengths: f64,
    pub strategy: PortStrategy,
    pub scheme: SchemeKind,
    /// Fraction of transmit power on the common stream (RSMA only).
    pub common_power_fraction: f64,
    /// Per-user power fractions, weakest user first (NOMA only).
    pub noma_power_fractions: Vec<f64>,
    pub thresholds: OutageThresholds,
    pub snr_grid: SnrGrid,
    pub trials: u64,
    pub seed: u64,
}

fn label_is_safe(label: &str) -> bool {
    !label.is_empty()
        && label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

impl Scenario {
    /// Which precoder stack the (scheme, antenna count) pair implies.
    pub fn precoder_family(&self) -> PrecoderFamily {
        if self.tx_antennas == 1 {
            PrecoderFamily::Siso
        } else {
            match self.scheme {
                SchemeKind::Rsma => PrecoderFamily::HybridZfMrt,
                SchemeKind::Noma => PrecoderFamily::MrtOnly,
            }
        }
    }

    pub fn scheme_config(&self, snr_db: f64) -> SchemeConfig {
        SchemeConfig {
            scheme: self.scheme,
            snr_db,
            common_power_fraction: self.common_power_fraction,
            noma_power_fractions: self.noma_power_fractions.clone(),
            precoder_family: self.precoder_family(),
        }
    }

    pub fn port_grid(&self) -> Result<PortGrid> {
        PortGrid::new(self.num_ports, self.aperture_wavelengths)
    }

    /// Collect every validation problem; an empty vector means the
    /// scenario is runnable.
    pub fn diagnose(&self) -> Vec<Diagnostic> {
        let mut diags = Vec::new();
        if !label_is_safe(&self.label) {
            diags.push(Diagnostic::new(
                "label",
                "must be nonempty and use only [A-Za-z0-9._-]",
            ));
        }
        if self.users == 0 {
            diags.push(Diagnostic::new("users", "must be at least 1"));
        }
        if self.tx_antennas == 0 {
            diags.push(Diagnostic::new("tx_antennas", "must be at least 1"));
        }
        if self.num_ports == 0 {
            diags.push(Diagnostic::new("ports", "must be at least 1"));
        }
        if !(self.aperture_wavelengths.is_finite() && self.aperture_wavelengths > 0.0) {
            diags.push(Diagnostic::new("aperture_wavelengths", "must be finite and > 0"));
        }
        if let PortStrategy::Fixed(i) = self.strategy {
            if self.num_ports > 0 && i >= self.num_ports {
                diags.push(Diagnostic::new(
                    "strategy",
                    format!("fixed port {i} out of range for {} ports", self.num_ports),
                ));
            }
        }
        if self.precoder_family() == PrecoderFamily::HybridZfMrt
            && self.users > self.tx_antennas
        {
            diags.push(Diagnostic::new(
                "users",
                format!(
                    "zero-forcing needs users <= tx_antennas, got {} > {}",
                    self.users, self.tx_antennas
                ),
            ));
        }
        if !(self.common_power_fraction.is_finite()
            && (0.0..=1.0).contains(&self.common_power_fraction))
        {
            diags.push(Diagnostic::new("common_power_fraction", "must lie in [0, 1]"));
        }
        if self.scheme == SchemeKind::Noma {
            if self.noma_power_fractions.len() != self.users {
                diags.push(Diagnostic::new(
                    "noma_power_fractions",
                    format!(
                        "expected {} fractions, got {}",
                        self.users,
                        self.noma_power_fractions.len()
                    ),
                ));
            } else if let Err(err) =
                crate::access::validate_fractions(&self.noma_power_fractions)
            {
                diags.push(Diagnostic::new("noma_power_fractions", err.to_string()));
            }
        }
        if let Err(SimError::Config(mut t)) = self.thresholds.validate(self.users) {
            diags.append(&mut t);
        }
        if self.trials == 0 {
            diags.push(Diagnostic::new("trials", "must be at least 1"));
        }
        self.snr_grid.diagnose(&mut diags);
        diags
    }

    pub fn validate(&self) -> Result<()> {
        let diags = self.diagnose();
        if diags.is_empty() {
            Ok(())
        } else {
            Err(SimError::Config(diags))
        }
    }
}
