//! Single-photon polarization states in Stokes and density-matrix form.
//!
//! The density-matrix basis is fixed to circular {|R>, |L>} everywhere in
//! this library; linear-basis quantities are derived, never stored. The
//! Stokes components follow the Pauli decomposition rho = (1/2) sum_j S_j
//! sigma_j, so |H>/|V> are the sigma_x eigenstates, |A>/|D> the sigma_y
//! eigenstates, and |R>/|L> the sigma_z eigenstates.

use crate::error::{Error, Result};
use crate::math::{hermitian_asymmetry2, symmetrize2, Mat2, Vec4, C64};

/// Tolerance on Hermiticity of user-supplied matrices; inputs within it are
/// symmetrized as (rho + rho^dagger)/2 before use.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Tolerance on s0 = 1 for operations requiring a normalized state.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// 4-component polarization vector (S0, S1, S2, S3).
///
/// S0 tracks normalization: it equals 1 for states entering a scattering
/// chain and is generally smaller afterwards, keeping track of sequential
/// scattering probabilities.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StokesVector {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl StokesVector {
    pub fn new(s0: f64, s1: f64, s2: f64, s3: f64) -> Self {
        Self { s0, s1, s2, s3 }
    }

    /// (1, 0, 0, 0).
    pub fn unpolarized() -> Self {
        Self::new(1.0, 0.0, 0.0, 0.0)
    }

    /// |H>: sigma_x eigenstate with eigenvalue +1.
    pub fn horizontal() -> Self {
        Self::new(1.0, 1.0, 0.0, 0.0)
    }

    /// |V>: sigma_x eigenstate with eigenvalue -1.
    pub fn vertical() -> Self {
        Self::new(1.0, -1.0, 0.0, 0.0)
    }

    /// |A>: sigma_y eigenstate with eigenvalue +1.
    pub fn antidiagonal() -> Self {
        Self::new(1.0, 0.0, 1.0, 0.0)
    }

    /// |D>: sigma_y eigenstate with eigenvalue -1.
    pub fn diagonal() -> Self {
        Self::new(1.0, 0.0, -1.0, 0.0)
    }

    /// |R>: sigma_z eigenstate with eigenvalue +1.
    pub fn right_circular() -> Self {
        Self::new(1.0, 0.0, 0.0, 1.0)
    }

    /// |L>: sigma_z eigenstate with eigenvalue -1.
    pub fn left_circular() -> Self {
        Self::new(1.0, 0.0, 0.0, -1.0)
    }

    pub fn as_vec4(&self) -> Vec4 {
        Vec4::new(self.s0, self.s1, self.s2, self.s3)
    }

    pub fn from_vec4(v: Vec4) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    /// s1^2 + s2^2 + s3^2.
    pub fn polarization_norm_squared(&self) -> f64 {
        self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3
    }

    /// Physical states satisfy s1^2 + s2^2 + s3^2 <= s0^2 with s0 > 0.
    pub fn is_physical(&self) -> bool {
        self.s0 > 0.0 && self.polarization_norm_squared() <= self.s0 * self.s0 * (1.0 + 1e-12) + 1e-14
    }

    /// Errors unless s0 = 1 (within [`NORMALIZATION_TOL`]) and the state is physical.
    pub fn require_normalized(&self) -> Result<()> {
        if (self.s0 - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::UnnormalizedState {
                reason: format!("s0 = {} != 1", self.s0),
            });
        }
        if !self.is_physical() {
            return Err(Error::UnnormalizedState {
                reason: format!(
                    "polarization norm {} exceeds s0 = {}",
                    self.polarization_norm_squared().sqrt(),
                    self.s0
                ),
            });
        }
        Ok(())
    }
}

/// 2x2 complex Hermitian polarization density matrix in the {|R>, |L>} basis.
///
/// Construction symmetrizes the input, so the stored matrix is Hermitian to
/// machine precision.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationDensity {
    m: Mat2,
}

impl PolarizationDensity {
    /// Validates Hermiticity within [`HERMITICITY_TOL`], then symmetrizes.
    pub fn from_matrix(m: Mat2) -> Result<Self> {
        let asymmetry = hermitian_asymmetry2(&m);
        if asymmetry > HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                asymmetry,
                tolerance: HERMITICITY_TOL,
            });
        }
        Ok(Self { m: symmetrize2(&m) })
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// |R><R| = diag(1, 0).
    pub fn right_circular() -> Self {
        Self {
            m: Mat2::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
        }
    }

    /// Maximally mixed state, identity / 2.
    pub fn maximally_mixed() -> Self {
        Self {
            m: Mat2::identity() * C64::new(0.5, 0.0),
        }
    }
}

/// Bloch-sphere coordinates of a pure polarization state
/// |psi> = cos(theta/2)|R> + e^{2 i phi} sin(theta/2)|L>.
///
/// `phi` is the half-angle azimuth: the ket carries the phase 2*phi, so
/// polarization states have period pi in phi and phi is stored reduced
/// mod pi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles {
    theta: f64,
    phi: f64,
}

impl BlochAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::PolarAngleOutOfRange { value: theta });
        }
        Ok(Self {
            theta,
            phi: phi.rem_euclid(std::f64::consts::PI),
        })
    }

    /// Polar angle on the Bloch sphere, in [0, pi].
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Azimuthal half-angle, reduced mod pi.
    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// The state orthogonal to this one:
    /// |psi_perp> = sin(theta/2)|R> - e^{2 i phi} cos(theta/2)|L>.
    pub fn orthogonal_ket(&self) -> [C64; 2] {
        let half = 0.5 * self.theta;
        [
            C64::new(half.sin(), 0.0),
            -C64::from_polar(half.cos(), 2.0 * self.phi),
        ]
    }

    pub fn ket(&self) -> [C64; 2] {
        let half = 0.5 * self.theta;
        [
            C64::new(half.cos(), 0.0),
            C64::from_polar(half.sin(), 2.0 * self.phi),
        ]
    }
}

/// Stokes components of a density matrix: S_j = Tr[rho sigma_j].
pub fn density_to_stokes(rho: &PolarizationDensity) -> StokesVector {
    let m = rho.matrix();
    StokesVector::new(
        (m[(0, 0)] + m[(1, 1)]).re,
        (m[(0, 1)] + m[(1, 0)]).re,
        ((m[(0, 1)] - m[(1, 0)]) * C64::new(0.0, 1.0)).re,
        (m[(0, 0)] - m[(1, 1)]).re,
    )
}

/// Density matrix of a Stokes vector:
/// rho = (1/2) [[s0+s3, s1-i*s2], [s1+i*s2, s0-s3]].
pub fn stokes_to_density(s: &StokesVector) -> PolarizationDensity {
    let m = Mat2::new(
        C64::new(0.5 * (s.s0 + s.s3), 0.0),
        C64::new(0.5 * s.s1, -0.5 * s.s2),
        C64::new(0.5 * s.s1, 0.5 * s.s2),
        C64::new(0.5 * (s.s0 - s.s3), 0.0),
    );
    PolarizationDensity { m }
}

/// Rank-1 projector |psi(theta, phi)><psi(theta, phi)|.
pub fn bloch_state(angles: BlochAngles) -> PolarizationDensity {
    let [a, b] = angles.ket();
    let m = Mat2::new(
        a * a.conj(),
        a * b.conj(),
        b * a.conj(),
        b * b.conj(),
    );
    PolarizationDensity { m: symmetrize2(&m) }
}
