//! 1-layer rate splitting: one common stream decoded by every user, then
//! per-user private streams after perfect SIC of the common part.

use nalgebra::DMatrix;

use crate::error::{Result, SimError};
use crate::fas::EffectiveChannel;
use crate::precoding::{common_precoder, stacked_rows, zf_precoders};

use super::{RateVector, SchemeConfig, SchemeKind};

/// Per-user RSMA rates.
///
/// Power split: P*t on the common beam, P*(1-t)/K on each private beam.
/// User k decodes the common stream with every private stream as noise,
/// strips it, then decodes its private stream with the other private
/// streams as noise. The common rate is the minimum over users so that
/// all of them can decode it. With one transmit antenna the precoders
/// collapse to scalars of unit modulus, so every beam gain is |h_k|^2.
pub fn rsma_rates(effective: &[EffectiveChannel], config: &SchemeConfig) -> Result<RateVector> {
    if config.scheme != SchemeKind::Rsma {
        return Err(SimError::config("scheme", "rsma_rates called with a non-RSMA config"));
    }
    if effective.is_empty() {
        return Err(SimError::config("users", "at least one user required"));
    }
    config.validate()?;

    let k = effective.len();
    let p = config.transmit_power();
    let t = config.common_power_fraction;
    let common_power = p * t;
    let private_power = p * (1.0 - t) / k as f64;

    // beam_gains[j][c] = |h_j^H w_c|^2, common_gains[j] = |h_j^H p_c|^2.
    let (beam_gains, common_gains) = if effective[0].h.len() == 1 {
        let gains: Vec<f64> = effective.iter().map(|e| e.h[0].norm_sqr()).collect();
        let beam = gains.iter().map(|&g| vec![g; k]).collect::<Vec<_>>();
        (beam, gains)
    } else {
        let rows = stacked_rows(effective);
        let w = zf_precoders(&rows)?;
        let pc = common_precoder(&rows)?;
        let cross: DMatrix<_> = &rows * &w;
        let onto_common = &rows * &pc.vector;
        let beam = (0..k)
            .map(|j| (0..k).map(|c| cross[(j, c)].norm_sqr()).collect())
            .collect::<Vec<Vec<f64>>>();
        let common = (0..k).map(|j| onto_common[j].norm_sqr()).collect();
        (beam, common)
    };

    let mut per_user_common_rates = Vec::with_capacity(k);
    let mut private_rates = Vec::with_capacity(k);
    for j in 0..k {
        let total_private: f64 = beam_gains[j].iter().map(|g| private_power * g).sum();
        let sinr_common = common_power * common_gains[j] / (total_private + 1.0);
        per_user_common_rates.push((1.0 + sinr_common).log2());

        let own = private_power * beam_gains[j][j];
        let interference = total_private - own;
        private_rates.push((1.0 + own / (interference + 1.0)).log2());
    }
    let common_rate = per_user_common_rates.iter().copied().fold(f64::INFINITY, f64::min);

    Ok(RateVector { common_rate, private_rates, per_user_common_rates, sic_chains: Vec::new() })
}
