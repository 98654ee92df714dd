//! Power-domain NOMA with successive interference cancellation, ordered
//! by effective channel strength.

use crate::error::{Result, SimError};
use crate::fas::EffectiveChannel;
use crate::precoding::mrt_precoder;

use super::{RateVector, SchemeConfig, SchemeKind, SicDecode};

/// Per-user NOMA rates plus full SIC chain records.
///
/// Users are ranked by ascending effective gain |h_k^H w_k|^2 (ties break
/// to the lower user index) and superposed with power P*alpha_r, where
/// alpha is the weakest-first fraction vector. User k decodes messages in
/// rank order up to its own, treating all stronger-ranked signals as
/// noise; each decode is recorded so outage can inspect the whole chain.
/// With multiple transmit antennas every message rides its owner's
/// matched-filter beam; with one antenna all gains collapse to |h_k|^2.
pub fn noma_rates(effective: &[EffectiveChannel], config: &SchemeConfig) -> Result<RateVector> {
    if config.scheme != SchemeKind::Noma {
        return Err(SimError::config("scheme", "noma_rates called with a non-NOMA config"));
    }
    if effective.is_empty() {
        return Err(SimError::config("users", "at least one user required"));
    }
    config.validate()?;

    let k = effective.len();
    let alpha = &config.noma_power_fractions;
    if alpha.len() != k {
        return Err(SimError::config(
            "noma_power_fractions",
            format!("expected {k} fractions (one per user), got {}", alpha.len()),
        ));
    }
    let p = config.transmit_power();

    // gains[j][i] = |h_j^H w_i|^2 with w_i the beam carrying user i's
    // superposed message.
    let gains: Vec<Vec<f64>> = if effective[0].h.len() == 1 {
        let g: Vec<f64> = effective.iter().map(|e| e.h[0].norm_sqr()).collect();
        g.iter().map(|&gj| vec![gj; k]).collect()
    } else {
        let beams = effective
            .iter()
            .map(|e| mrt_precoder(&e.h))
            .collect::<Result<Vec<_>>>()?;
        effective
            .iter()
            .map(|e| beams.iter().map(|w| e.h.dotc(w).norm_sqr()).collect())
            .collect()
    };

    // Rank users weakest-first by own-beam gain; stable sort keeps the
    // lower index on ties.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| gains[a][a].total_cmp(&gains[b][b]));

    let mut private_rates = vec![0.0; k];
    let mut sic_chains = vec![Vec::new(); k];
    for (rank, &user) in order.iter().enumerate() {
        let mut chain = Vec::with_capacity(rank + 1);
        for i in 0..=rank {
            let owner = order[i];
            let mut interference = 0.0;
            for j in (i + 1)..k {
                interference += p * alpha[j] * gains[user][order[j]];
            }
            let sinr = p * alpha[i] * gains[user][owner] / (interference + 1.0);
            let rate = (1.0 + sinr).log2();
            chain.push(SicDecode { message_owner: owner, rate });
            if i == rank {
                private_rates[user] = rate;
            }
        }
        sic_chains[user] = chain;
    }

    Ok(RateVector {
        common_rate: 0.0,
        private_rates,
        per_user_common_rates: Vec::new(),
        sic_chains,
    })
}
