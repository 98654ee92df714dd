//! Fluid-antenna port activation: pick one candidate port per user and
//! expose the selected column as that user's effective channel.
//!
//! Strategies live behind the [`PortSelector`] trait and are registered
//! by name, so configs and the CLI select them at runtime; `max_gain`
//! models FAS reconfiguration, `fixed:<i>` the FPA baseline.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use once_cell::sync::Lazy;

use crate::channel::ChannelRealization;
use crate::error::{Result, SimError};

/// Port activation policy. `MaxGain` picks the column with the largest
/// Euclidean norm; `Fixed(i)` always picks port i (no reconfiguration).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PortStrategy {
    MaxGain,
    Fixed(usize),
}

impl PortStrategy {
    /// Parse a strategy spec: `max_gain` or `fixed:<i>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (head, arg) = match spec.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (spec, None),
        };
        let parser = PARSERS.get(head).ok_or_else(|| {
            SimError::config(
                "strategy",
                format!("unknown strategy '{spec}', expected one of: {}", spec_strings()),
            )
        })?;
        parser(arg)
    }

    /// Build the selector implementing this strategy.
    pub fn selector(&self) -> Box<dyn PortSelector> {
        match *self {
            PortStrategy::MaxGain => Box::new(MaxGainSelector),
            PortStrategy::Fixed(index) => Box::new(FixedSelector { index }),
        }
    }
}

impl fmt::Display for PortStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PortStrategy::MaxGain => write!(f, "max_gain"),
            PortStrategy::Fixed(i) => write!(f, "fixed:{i}"),
        }
    }
}

/// The selected-port channel of one user: column `chosen_port` of H.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveChannel {
    pub h: DVector<Complex64>,
    pub chosen_port: usize,
}

/// A port activation rule; selects a column index from an L-by-N channel.
pub trait PortSelector: Send + Sync {
    fn name(&self) -> &'static str;
    fn select(&self, h: &DMatrix<Complex64>) -> Result<usize>;
}

struct MaxGainSelector;

impl PortSelector for MaxGainSelector {
    fn name(&self) -> &'static str {
        "max_gain"
    }

    fn select(&self, h: &DMatrix<Complex64>) -> Result<usize> {
        // Strict > keeps the lowest index on ties.
        let mut best = 0usize;
        let mut best_gain = f64::NEG_INFINITY;
        for (idx, col) in h.column_iter().enumerate() {
            let gain = col.norm_squared();
            if gain > best_gain {
                best = idx;
                best_gain = gain;
            }
        }
        Ok(best)
    }
}

struct FixedSelector {
    index: usize,
}

impl PortSelector for FixedSelector {
    fn name(&self) -> &'static str {
        "fixed"
    }

    fn select(&self, h: &DMatrix<Complex64>) -> Result<usize> {
        if self.index >= h.ncols() {
            return Err(SimError::config(
                "strategy",
                format!("fixed port index {} out of range for {} ports", self.index, h.ncols()),
            ));
        }
        Ok(self.index)
    }
}

type StrategyParser = fn(Option<&str>) -> Result<PortStrategy>;

fn parse_max_gain(arg: Option<&str>) -> Result<PortStrategy> {
    match arg {
        None => Ok(PortStrategy::MaxGain),
        Some(_) => Err(SimError::config("strategy", "max_gain takes no argument")),
    }
}

fn parse_fixed(arg: Option<&str>) -> Result<PortStrategy> {
    let arg = arg
        .ok_or_else(|| SimError::config("strategy", "fixed requires a port index: fixed:<i>"))?;
    let index = arg.parse::<usize>().map_err(|_| {
        SimError::config("strategy", format!("invalid fixed port index '{arg}'"))
    })?;
    Ok(PortStrategy::Fixed(index))
}

static PARSERS: Lazy<BTreeMap<&'static str, StrategyParser>> = Lazy::new(|| {
    let mut m = BTreeMap::new();
    m.insert("max_gain", parse_max_gain as StrategyParser);
    m.insert("fixed", parse_fixed as StrategyParser);
    m
});

/// Registered strategy spec forms, for `list-schemes` and error messages.
pub fn strategy_specs() -> Vec<&'static str> {
    PARSERS
        .keys()
        .map(|&name| if name == "fixed" { "fixed:<i>" } else { name })
        .collect()
}

fn spec_strings() -> String {
    strategy_specs().join(", ")
}

/// Select a port for one user channel.
pub fn select_port(h: &DMatrix<Complex64>, strategy: &PortStrategy) -> Result<usize> {
    strategy.selector().select(h)
}

/// Apply the strategy independently per user.
pub fn effective_channels(
    realization: &ChannelRealization,
    strategy: &PortStrategy,
) -> Result<Vec<EffectiveChannel>> {
    effective_channels_with(realization, strategy.selector().as_ref())
}

/// Same as [`effective_channels`] with a prebuilt selector (hot path).
pub fn effective_channels_with(
    realization: &ChannelRealization,
    selector: &dyn PortSelector,
) -> Result<Vec<EffectiveChannel>> {
    realization
        .users()
        .iter()
        .map(|h| {
            let chosen_port = selector.select(h)?;
            Ok(EffectiveChannel { h: h.column(chosen_port).into_owned(), chosen_port })
        })
        .collect()
}
