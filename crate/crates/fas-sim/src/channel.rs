//! Spatially correlated Rayleigh fading across fluid-antenna ports.
//!
//! Ports sit on a one-dimensional aperture; the correlation between two
//! ports separated by `d` wavelengths follows the Jakes model J0(2*pi*d),
//! which makes the port covariance a real, symmetric, Toeplitz matrix.
//! Dense grids drive that matrix numerically rank-deficient, so the
//! coloring transform comes from an eigendecomposition with small
//! eigenvalues truncated, never from a Cholesky factor.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand_core::RngCore;

use crate::bessel::jakes_correlation;
use crate::error::{Result, SimError};

/// Eigenvalues at or below this are truncated from the coloring transform.
pub const EPS_PSD: f64 = 1e-10;

/// Geometry of the N-port linear aperture. Port n sits at n*W/(N-1)
/// wavelengths, so positions span exactly [0, W]; a single port sits at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PortGrid {
    num_ports: usize,
    aperture_len: f64,
}

impl PortGrid {
    pub fn new(num_ports: usize, aperture_len: f64) -> Result<Self> {
        if num_ports == 0 {
            return Err(SimError::config("ports", "at least one candidate port required"));
        }
        if !aperture_len.is_finite() || aperture_len < 0.0 {
            return Err(SimError::config(
                "aperture_wavelengths",
                format!("aperture must be finite and nonnegative, got {aperture_len}"),
            ));
        }
        Ok(Self { num_ports, aperture_len })
    }

    pub fn num_ports(&self) -> usize {
        self.num_ports
    }

    pub fn aperture_len(&self) -> f64 {
        self.aperture_len
    }

    /// Spacing between adjacent ports in wavelengths; 0 for a single port.
    pub fn spacing(&self) -> f64 {
        if self.num_ports < 2 {
            0.0
        } else {
            self.aperture_len / (self.num_ports - 1) as f64
        }
    }

    pub fn position(&self, n: usize) -> f64 {
        debug_assert!(n < self.num_ports);
        n as f64 * self.spacing()
    }
}

/// Port correlation matrix plus the transform that colors white samples.
///
/// `matrix` is the exact Jakes covariance. `coloring` is C = U sqrt(L+)
/// with eigenvalues at or below [`EPS_PSD`] (negatives included) zeroed;
/// `truncation_rank` counts the retained eigencomponents. C*C^H matches
/// the covariance to within the truncated mass, below 1e-8 elementwise.
#[derive(Debug, Clone)]
pub struct SpatialCovariance {
    matrix: DMatrix<Complex64>,
    coloring: DMatrix<Complex64>,
    /// Retained columns of the (real) coloring factor, for sampling.
    factor: DMatrix<f64>,
    truncation_rank: usize,
}

impl SpatialCovariance {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn coloring(&self) -> &DMatrix<Complex64> {
        &self.coloring
    }

    pub fn truncation_rank(&self) -> usize {
        self.truncation_rank
    }

    pub fn num_ports(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Build the Jakes covariance for a grid and factor it.
///
/// Sigma[j][k] = J0(2*pi*|j-k|*spacing) is Toeplitz, symmetric, and
/// unit-diagonal by construction. Eigenpairs are ordered by descending
/// eigenvalue so the factor is canonical.
pub fn build_covariance(grid: &PortGrid) -> Result<SpatialCovariance> {
    let n = grid.num_ports();
    let spacing = grid.spacing();
    let mut lags = Vec::with_capacity(n);
    for k in 0..n {
        lags.push(jakes_correlation(k as f64 * spacing)?);
    }
    let real = DMatrix::<f64>::from_fn(n, n, |i, j| lags[i.abs_diff(j)]);

    let eig = real.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b))
    });

    if let Some(&worst) = order.last() {
        let min_eig = eig.eigenvalues[worst];
        if min_eig < -EPS_PSD {
            return Err(SimError::Domain(format!(
                "covariance eigenvalue {min_eig} below -{EPS_PSD}; not PSD within tolerance"
            )));
        }
    }

    let retained: Vec<usize> =
        order.iter().copied().filter(|&i| eig.eigenvalues[i] > EPS_PSD).collect();
    let rank = retained.len();

    let mut factor = DMatrix::<f64>::zeros(n, rank);
    for (col, &i) in retained.iter().enumerate() {
        let scale = eig.eigenvalues[i].sqrt();
        for row in 0..n {
            factor[(row, col)] = eig.eigenvectors[(row, i)] * scale;
        }
    }

    let mut coloring = DMatrix::<Complex64>::zeros(n, n);
    for col in 0..rank {
        for row in 0..n {
            coloring[(row, col)] = Complex64::new(factor[(row, col)], 0.0);
        }
    }

    Ok(SpatialCovariance {
        matrix: real.map(|v| Complex64::new(v, 0.0)),
        coloring,
        factor,
        truncation_rank: rank,
    })
}

/// Per-user channel matrices: K users, each L transmit antennas by N ports,
/// unit average power per entry, rows correlated across ports per the
/// covariance, independent across users and antennas.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    users: Vec<DMatrix<Complex64>>,
}

impl ChannelRealization {
    /// All user matrices must share one shape with at least one antenna
    /// and one port.
    pub fn new(users: Vec<DMatrix<Complex64>>) -> Result<Self> {
        if users.is_empty() {
            return Err(SimError::config("users", "at least one user required"));
        }
        let shape = users[0].shape();
        if shape.0 == 0 || shape.1 == 0 {
            return Err(SimError::config("users", "channel matrices must be nonempty"));
        }
        if users.iter().any(|h| h.shape() != shape) {
            return Err(SimError::config("users", "user channel shapes differ"));
        }
        Ok(Self { users })
    }

    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    pub fn num_tx(&self) -> usize {
        self.users[0].nrows()
    }

    pub fn num_ports(&self) -> usize {
        self.users[0].ncols()
    }

    pub fn user(&self, k: usize) -> &DMatrix<Complex64> {
        &self.users[k]
    }

    pub fn users(&self) -> &[DMatrix<Complex64>] {
        &self.users
    }
}

/// Map a u64 draw to (0, 1]; the +1 keeps ln() finite.
fn unit_open(rng: &mut (impl RngCore + ?Sized)) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Map a u64 draw to [0, 1).
fn unit_half_open(rng: &mut (impl RngCore + ?Sized)) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Circularly symmetric complex Gaussian with E|z|^2 = 1, consuming
/// exactly two u64 draws: z = sqrt(-ln u1) * exp(i 2 pi u2).
fn complex_gaussian(rng: &mut (impl RngCore + ?Sized)) -> Complex64 {
    let radius = (-unit_open(rng).ln()).sqrt();
    let angle = 2.0 * std::f64::consts::PI * unit_half_open(rng);
    Complex64::from_polar(radius, angle)
}

/// Draw one channel realization.
///
/// Each row (one transmit antenna across all ports) is C*z with z a white
/// complex Gaussian vector over the retained eigencomponents. Draw order
/// is fixed: users outermost, then antennas, then 2*truncation_rank u64
/// draws per row, so a given random stream always yields the same
/// realization.
pub fn sample_channel(
    cov: &SpatialCovariance,
    users: usize,
    tx_antennas: usize,
    rng: &mut (impl RngCore + ?Sized),
) -> ChannelRealization {
    assert!(users >= 1, "sample_channel: users must be >= 1");
    assert!(tx_antennas >= 1, "sample_channel: tx_antennas must be >= 1");
    let n = cov.num_ports();
    let rank = cov.truncation_rank();
    let mut white = DVector::<Complex64>::zeros(rank);
    let mut matrices = Vec::with_capacity(users);
    for _ in 0..users {
        let mut h = DMatrix::<Complex64>::zeros(tx_antennas, n);
        for l in 0..tx_antennas {
            for m in 0..rank {
                white[m] = complex_gaussian(rng);
            }
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for m in 0..rank {
                    acc += cov.factor[(j, m)] * white[m];
                }
                h[(l, j)] = acc;
            }
        }
        matrices.push(h);
    }
    ChannelRealization { users: matrices }
}
