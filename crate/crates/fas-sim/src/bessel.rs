//! Bessel function of the first kind, order zero, and the Jakes spatial
//! correlation built on it.
//!
//! For |x| <= 12 the ascending power series Σ (-1)^k (x²/4)^k / (k!)² is
//! summed directly; its largest term at the split is ~4.2e3, so f64
//! cancellation noise stays below ~1e-12. Beyond the split the Hankel
//! asymptotic expansion is used with six cosine and six sine terms whose
//! coefficients a_k = Π (2j-1)² / (k! 8^k) are generated exactly by
//! recurrence; the first omitted terms bound the truncation error at
//! 2e-11 on the split and it shrinks with x. Absolute error is below
//! 1e-9 everywhere on |x| <= 1e4.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Result, SimError};

/// Branch point between the power series and the asymptotic expansion.
const SERIES_ASYMPTOTIC_SPLIT: f64 = 12.0;

fn j0_series(x: f64) -> f64 {
    let ratio = -(x * x) / 4.0;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 1..=60 {
        term *= ratio / ((k * k) as f64);
        sum += term;
        if term.abs() < 1e-20 {
            break;
        }
    }
    sum
}

/// a_0..a_11 of the order-zero Hankel expansion, a_k = Π_{j<=k} (2j-1)²
/// / (k! 8^k); every factor is a small integer, so the recurrence loses
/// only one rounding per step.
fn hankel_coefficients() -> [f64; 12] {
    let mut a = [0.0; 12];
    a[0] = 1.0;
    for k in 1..12 {
        let j = k as f64;
        a[k] = a[k - 1] * (2.0 * j - 1.0) * (2.0 * j - 1.0) / (8.0 * j);
    }
    a
}

fn j0_asymptotic(x: f64) -> f64 {
    let a = hankel_coefficients();
    let u = 1.0 / (x * x);
    let p = a[0] - u * (a[2] - u * (a[4] - u * (a[6] - u * (a[8] - u * a[10]))));
    let q = (a[1] - u * (a[3] - u * (a[5] - u * (a[7] - u * (a[9] - u * a[11]))))) / x;
    let omega = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (omega.cos() * p + omega.sin() * q)
}

/// J0(x), even in x, absolute error < 1e-9 over |x| <= 1e4.
pub fn bessel_j0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(SimError::Domain(format!("bessel_j0: argument must be finite, got {x}")));
    }
    let x = x.abs();
    if x <= SERIES_ASYMPTOTIC_SPLIT {
        Ok(j0_series(x))
    } else {
        Ok(j0_asymptotic(x))
    }
}

/// Spatial correlation J0(2πd) of isotropic scattering between two points
/// `d` carrier wavelengths apart.
pub fn jakes_correlation(d: f64) -> Result<f64> {
    if !d.is_finite() || d < 0.0 {
        return Err(SimError::Domain(format!(
            "jakes_correlation: distance must be finite and nonnegative, got {d}"
        )));
    }
    bessel_j0(2.0 * PI * d)
}
