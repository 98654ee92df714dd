//! Transmit precoders: per-user maximum-ratio beams, zero-forcing via the
//! right pseudo-inverse, and the matched-filter beam for a shared stream.
//!
//! Conventions: user channels are column vectors h_k of length L; the
//! stacked matrix H is K-by-L with row k equal to h_k^H, so H*W evaluates
//! every h_j^H w_k product at once.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::fas::EffectiveChannel;

/// Accepted zero-forcing trials must keep |h_j^H w_k| at or below this
/// for j != k; larger leakage marks the channel singular.
pub const ZF_LEAKAGE_TOL: f64 = 1e-10;

/// Below this norm the summed channel directions are considered cancelled
/// and the common precoder falls back to the first user's beam.
pub const COMMON_DIRECTION_EPS: f64 = 1e-9;

/// Stack effective channels into the K-by-L matrix of rows h_k^H.
pub fn stacked_rows(effective: &[EffectiveChannel]) -> DMatrix<Complex64> {
    let k = effective.len();
    let l = effective[0].h.len();
    DMatrix::from_fn(k, l, |i, j| effective[i].h[j].conj())
}

/// Matched-filter beam h/||h||; maximizes |h^H w| over unit vectors.
pub fn mrt_precoder(h: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    let norm = h.norm();
    if norm <= 0.0 {
        return Err(SimError::DegenerateChannel("mrt precoder needs a nonzero channel"));
    }
    Ok(h / Complex64::new(norm, 0.0))
}

/// Zero-forcing precoders: columns of H^H (H H^H)^-1, each normalized.
///
/// Requires K <= L. A non-invertible Gram matrix, or residual leakage
/// above [`ZF_LEAKAGE_TOL`] after normalization, reports the channel as
/// singular so the caller can resample the trial.
pub fn zf_precoders(h_rows: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let (k, l) = h_rows.shape();
    if k == 0 || l == 0 {
        return Err(SimError::DegenerateChannel("zero-forcing needs a nonempty channel"));
    }
    if k > l {
        return Err(SimError::config(
            "users",
            format!("zero-forcing requires users <= tx_antennas, got {k} > {l}"),
        ));
    }
    let gram = h_rows * h_rows.adjoint();
    let inv = gram.try_inverse().ok_or(SimError::SingularChannel)?;
    let mut w = h_rows.adjoint() * inv;
    for mut col in w.column_iter_mut() {
        let norm = col.norm();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(SimError::SingularChannel);
        }
        col /= Complex64::new(norm, 0.0);
    }
    let residual = h_rows * &w;
    for j in 0..k {
        for c in 0..k {
            if j != c && residual[(j, c)].norm() > ZF_LEAKAGE_TOL {
                return Err(SimError::SingularChannel);
            }
        }
    }
    Ok(w)
}

/// Common-stream beam and whether the degenerate fallback fired.
#[derive(Debug, Clone)]
pub struct CommonPrecoder {
    pub vector: DVector<Complex64>,
    pub fell_back: bool,
}

/// Beam for the stream every user must decode: the normalized sum of
/// per-user channel directions. If the directions cancel, falls back to
/// the first user's matched filter and flags it.
pub fn common_precoder(h_rows: &DMatrix<Complex64>) -> Result<CommonPrecoder> {
    let (k, l) = h_rows.shape();
    if k == 0 || l == 0 {
        return Err(SimError::DegenerateChannel("common precoder needs a nonempty channel"));
    }
    let mut sum = DVector::<Complex64>::zeros(l);
    let mut any_nonzero = false;
    for row in h_rows.row_iter() {
        // Row i is h_i^H; conjugate back to the column vector h_i. A zero
        // channel has no direction and contributes nothing.
        let h = row.transpose().map(|z| z.conj());
        let norm = h.norm();
        if norm > 0.0 {
            any_nonzero = true;
            sum += h / Complex64::new(norm, 0.0);
        }
    }
    if !any_nonzero {
        return Err(SimError::DegenerateChannel("common precoder: all user channels are zero"));
    }
    let norm = sum.norm();
    if norm < COMMON_DIRECTION_EPS {
        let first = h_rows.row(0).transpose().map(|z| z.conj());
        return Ok(CommonPrecoder { vector: mrt_precoder(&first)?, fell_back: true });
    }
    Ok(CommonPrecoder { vector: sum / Complex64::new(norm, 0.0), fell_back: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cvec(values: &[(f64, f64)]) -> DVector<Complex64> {
        DVector::from_iterator(values.len(), values.iter().map(|&(re, im)| Complex64::new(re, im)))
    }

    fn rows_from(cols: &[DVector<Complex64>]) -> DMatrix<Complex64> {
        DMatrix::from_fn(cols.len(), cols[0].len(), |i, j| cols[i][j].conj())
    }

    #[test]
    fn mrt_scales_to_unit_norm() {
        let w = mrt_precoder(&cvec(&[(2.0, 0.0), (0.0, 0.0)])).unwrap();
        assert_eq!(w[0], Complex64::new(1.0, 0.0));
        assert_eq!(w[1], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn mrt_normalizes_diagonal_direction() {
        let w = mrt_precoder(&cvec(&[(1.0, 0.0), (1.0, 0.0)])).unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        assert_abs_diff_eq!(w[0].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(w[1].re, s, epsilon = 1e-15);
    }

    #[test]
    fn mrt_achieves_cauchy_schwarz_equality() {
        let h = cvec(&[(0.3, -1.2), (2.0, 0.7), (-0.4, 0.1)]);
        let w = mrt_precoder(&h).unwrap();
        let gain = h.dotc(&w).norm();
        assert_abs_diff_eq!(gain, h.norm(), epsilon = 1e-12);
    }

    #[test]
    fn mrt_rejects_zero_channel() {
        assert!(mrt_precoder(&cvec(&[(0.0, 0.0)])).is_err());
    }

    #[test]
    fn zf_on_identity_is_identity() {
        let h = DMatrix::<Complex64>::identity(2, 2);
        let w = zf_precoders(&h).unwrap();
        assert!((&w - DMatrix::<Complex64>::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn zf_single_user_collapses_to_mrt() {
        let h1 = cvec(&[(1.0, 0.5), (-0.3, 0.2), (0.8, 0.0)]);
        let rows = rows_from(&[h1.clone()]);
        let w = zf_precoders(&rows).unwrap();
        let mrt = mrt_precoder(&h1).unwrap();
        // Pseudo-inverse of one row is the matched filter up to a positive
        // scale, so normalized columns agree exactly.
        assert!((w.column(0) - mrt).norm() < 1e-12);
    }

    #[test]
    fn zf_rejects_more_users_than_antennas() {
        let h = DMatrix::<Complex64>::identity(3, 2);
        assert!(matches!(zf_precoders(&h), Err(SimError::Config(_))));
    }

    #[test]
    fn zf_flags_rank_deficient_rows_as_singular() {
        let h1 = cvec(&[(1.0, 0.0), (2.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        let h2 = h1.map(|z| z * Complex64::new(2.0, 0.0));
        let h3 = cvec(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        let rows = rows_from(&[h1, h2, h3]);
        assert!(matches!(zf_precoders(&rows), Err(SimError::SingularChannel)));
    }

    #[test]
    fn common_precoder_single_user_is_mrt() {
        let h1 = cvec(&[(1.0, -0.4), (0.2, 0.9)]);
        let rows = rows_from(&[h1.clone()]);
        let pc = common_precoder(&rows).unwrap();
        assert!(!pc.fell_back);
        assert!((pc.vector - mrt_precoder(&h1).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn common_precoder_bisects_orthogonal_pair() {
        let h1 = cvec(&[(1.0, 0.0), (0.0, 0.0)]);
        let h2 = cvec(&[(0.0, 0.0), (1.0, 0.0)]);
        let pc = common_precoder(&rows_from(&[h1, h2])).unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        assert_abs_diff_eq!(pc.vector[0].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(pc.vector[1].re, s, epsilon = 1e-15);
    }

    #[test]
    fn common_precoder_falls_back_on_cancellation() {
        let h1 = cvec(&[(1.0, 0.0), (0.5, 0.0)]);
        let h2 = h1.map(|z| -z);
        let pc = common_precoder(&rows_from(&[h1.clone(), h2])).unwrap();
        assert!(pc.fell_back);
        assert!((pc.vector - mrt_precoder(&h1).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn common_precoder_rejects_all_zero() {
        let rows = DMatrix::<Complex64>::zeros(2, 3);
        assert!(common_precoder(&rows).is_err());
    }
}
