//! Single-scatter Compton kinematics and Mueller calculus.
//!
//! Energies are dimensionless, in units of the electron rest mass
//! (1.0 = 511 keV), and cross sections are in units of r_e^2 with the
//! classical electron radius set to 1. Both conventions cancel in every
//! probability this library reports.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::math::Mat4;
use crate::polarization::StokesVector;
use crate::quad;

/// Photon energy in electron-mass units; strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Energy(f64);

impl Energy {
    /// 511 keV, the energy of each annihilation photon.
    pub const ANNIHILATION: Energy = Energy(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::NonPositiveEnergy { value })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Scattering direction relative to the incoming photon momentum.
///
/// The azimuth is measured from the x-axis of the Bloch sphere, so phi = 0
/// probes the S1 (|H>/|V>) component and phi = pi/4 probes S2 (|A>/|D>).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterDirection {
    theta: f64,
    phi: f64,
}

impl ScatterDirection {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        check_polar(theta)?;
        if !(0.0..std::f64::consts::TAU).contains(&phi) {
            return Err(Error::AzimuthOutOfRange { value: phi });
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

pub(crate) fn check_polar(theta: f64) -> Result<()> {
    if (0.0..=std::f64::consts::PI).contains(&theta) {
        Ok(())
    } else {
        Err(Error::PolarAngleOutOfRange { value: theta })
    }
}

/// Compton energy propagation E = E0 / [1 + E0 (1 - cos theta)].
pub fn scattered_energy(e0: Energy, theta: f64) -> Result<Energy> {
    check_polar(theta)?;
    Ok(Energy(scattered_energy_unchecked(e0.value(), theta)))
}

#[inline]
pub(crate) fn scattered_energy_unchecked(e0: f64, theta: f64) -> f64 {
    e0 / (1.0 + e0 * (1.0 - theta.cos()))
}

/// The (alpha, beta) pair of the polarized Klein-Nishina density:
/// alpha is the unpolarized angular weight, beta the Compton analyzing power.
pub fn alpha_beta(e0: Energy, theta: f64) -> Result<(f64, f64)> {
    check_polar(theta)?;
    Ok(alpha_beta_unchecked(e0.value(), theta))
}

#[inline]
pub(crate) fn alpha_beta_unchecked(e0: f64, theta: f64) -> (f64, f64) {
    let ratio = 1.0 / (1.0 + e0 * (1.0 - theta.cos()));
    let sin2 = theta.sin() * theta.sin();
    let u = ratio + 1.0 / ratio - sin2;
    (0.5 * ratio * ratio * u, sin2 / u)
}

/// Reduced closed forms of alpha and beta at E0 = 1 (annihilation photons).
pub fn alpha_beta_annihilation(theta: f64) -> Result<(f64, f64)> {
    check_polar(theta)?;
    let c = theta.cos();
    let sin2 = theta.sin() * theta.sin();
    let denom = c * (3.0 + (c - 3.0) * c) - 3.0;
    let alpha = denom / (2.0 * (c - 2.0).powi(3));
    let beta = (c - 2.0) * sin2 / denom;
    Ok((alpha, beta))
}

/// The role a Mueller matrix plays in a scattering chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuellerKind {
    /// Compton transition matrix T (block diagonal 2x2 + 1 + 1).
    Transition,
    /// Frame rotation M about the propagation axis.
    Rotation,
    /// Product of transitions and rotations.
    Product,
}

/// 4x4 real matrix acting on Stokes vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MuellerMatrix {
    m: Mat4,
    kind: MuellerKind,
}

impl MuellerMatrix {
    pub(crate) fn new(m: Mat4, kind: MuellerKind) -> Self {
        Self { m, kind }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.m
    }

    pub fn kind(&self) -> MuellerKind {
        self.kind
    }

    pub fn apply(&self, s: &StokesVector) -> StokesVector {
        StokesVector::from_vec4(self.m * s.as_vec4())
    }

    /// self * rhs, acting right-to-left like the matrices themselves.
    pub fn compose(&self, rhs: &MuellerMatrix) -> MuellerMatrix {
        MuellerMatrix::new(self.m * rhs.m, MuellerKind::Product)
    }
}

/// Compton transition matrix T(E0, theta) with prefactor (1/2)(E/E0)^2:
///
/// elements t11 = 1 + cos^2 + (E0-E)(1-cos), t12 = sin^2, t22 = 2 - t12,
/// t33 = 2 cos, t44 = 2 cos + (E0-E)(1-cos) cos. The (0,0) entry equals
/// alpha(E0, theta) and t12/t11 equals beta(E0, theta).
pub fn transition_matrix(e0: Energy, theta: f64) -> Result<MuellerMatrix> {
    check_polar(theta)?;
    let e0 = e0.value();
    let e = scattered_energy_unchecked(e0, theta);
    let c = theta.cos();
    let s2 = theta.sin() * theta.sin();
    let recoil = (e0 - e) * (1.0 - c);
    let t11 = 1.0 + c * c + recoil;
    let t12 = s2;
    let t33 = 2.0 * c;
    let t44 = 2.0 * c + recoil * c;
    let pref = 0.5 * (e / e0) * (e / e0);
    let m = Mat4::new(
        t11, t12, 0.0, 0.0,
        t12, 2.0 - t12, 0.0, 0.0,
        0.0, 0.0, t33, 0.0,
        0.0, 0.0, 0.0, t44,
    ) * pref;
    Ok(MuellerMatrix::new(m, MuellerKind::Transition))
}

/// Frame rotation M(phi): rotates (S1, S2) by 2*phi, leaves S0 and S3 fixed.
pub fn rotation_matrix(phi: f64) -> MuellerMatrix {
    let (s, c) = (2.0 * phi).sin_cos();
    let m = Mat4::new(
        1.0, 0.0, 0.0, 0.0,
        0.0, c, s, 0.0,
        0.0, -s, c, 0.0,
        0.0, 0.0, 0.0, 1.0,
    );
    MuellerMatrix::new(m, MuellerKind::Rotation)
}

/// Polarized Klein-Nishina probability density per steradian:
///
/// dp/dOmega = N [1 + beta (S1 cos 2phi + S2 sin 2phi)],
/// N = alpha(E0, theta) / sigma_tot.
///
/// Requires a normalized physical state (s0 = 1); integrates to 1 over the
/// sphere.
pub fn klein_nishina_density(s: &StokesVector, e0: Energy, dir: ScatterDirection) -> Result<f64> {
    s.require_normalized()?;
    let (alpha, beta) = alpha_beta_unchecked(e0.value(), dir.theta());
    let norm = alpha / total_cross_section_single(e0);
    let (sin2phi, cos2phi) = (2.0 * dir.phi()).sin_cos();
    Ok(norm * (1.0 + beta * (s.s1 * cos2phi + s.s2 * sin2phi)))
}

/// Total single-scatter cross section sigma_tot^(1)(E0) in units of r_e^2,
/// computed as 2 pi int_0^pi alpha(E0, theta) sin(theta) dtheta and cached
/// per energy.
pub fn total_cross_section_single(e0: Energy) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<u64, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    *guard
        .entry(e0.value().to_bits())
        .or_insert_with(|| total_cross_section_single_uncached(e0.value()))
}

pub(crate) fn total_cross_section_single_uncached(e0: f64) -> f64 {
    std::f64::consts::TAU
        * quad::integrate_adaptive(
            |theta| alpha_beta_unchecked(e0, theta).0 * theta.sin(),
            0.0,
            std::f64::consts::PI,
            128,
            1e-12,
        )
}

/// Closed form of sigma_tot^(1) at E0 = 1: pi (40/9 - 3 ln 3).
pub fn total_cross_section_annihilation_closed_form() -> f64 {
    std::f64::consts::PI * (40.0 / 9.0 - 3.0 * 3.0f64.ln())
}

/// Klein-Nishina total cross section at arbitrary energy, closed form.
pub fn klein_nishina_total_closed_form(e0: Energy) -> f64 {
    let k = e0.value();
    let l = (1.0 + 2.0 * k).ln();
    std::f64::consts::TAU
        * ((1.0 + k) / (k * k) * (2.0 * (1.0 + k) / (1.0 + 2.0 * k) - l / k) + l / (2.0 * k)
            - (1.0 + 3.0 * k) / ((1.0 + 2.0 * k) * (1.0 + 2.0 * k)))
}
