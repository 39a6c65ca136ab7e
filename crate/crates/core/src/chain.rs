//! Sequential N-fold Compton scattering chains.
//!
//! A chain is the ordered Mueller product T_N M_N ... T_1 M_1 with each
//! transition evaluated at the propagated energy. Co-planar chains (all
//! azimuths after the first fixed to zero) keep the product block diagonal,
//! which reduces the whole chain to the two scalars alpha(thetas) and
//! beta(thetas) = gamma/alpha that drive the POVM and Bell machinery.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::kinematics::{
    self, check_polar, scattered_energy_unchecked, transition_matrix, Energy, MuellerKind,
    MuellerMatrix,
};
use crate::polarization::StokesVector;
use crate::quad::{self, ChebyshevInterpolant};

/// An N-scatter trajectory: initial energy plus ordered polar angles, and
/// optionally the azimuths.
///
/// Without azimuths the chain is co-planar: the first azimuth is a free
/// measurement parameter handled by the POVM layer, and all later scatters
/// stay in the plane (phi_j = 0 for j > 1).
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterChainSpec {
    e0: Energy,
    thetas: Vec<f64>,
    phis: Option<Vec<f64>>,
}

impl ScatterChainSpec {
    /// Co-planar chain.
    pub fn coplanar(e0: Energy, thetas: Vec<f64>) -> Result<Self> {
        Self::validate_thetas(&thetas)?;
        Ok(Self { e0, thetas, phis: None })
    }

    /// General trajectory with explicit azimuths, one per scatter.
    pub fn general(e0: Energy, thetas: Vec<f64>, phis: Vec<f64>) -> Result<Self> {
        Self::validate_thetas(&thetas)?;
        if phis.len() != thetas.len() {
            return Err(Error::InvalidChain {
                reason: format!(
                    "{} azimuths supplied for {} polar angles",
                    phis.len(),
                    thetas.len()
                ),
            });
        }
        for &phi in &phis {
            if !(0.0..std::f64::consts::TAU).contains(&phi) {
                return Err(Error::AzimuthOutOfRange { value: phi });
            }
        }
        Ok(Self { e0, thetas, phis: Some(phis) })
    }

    fn validate_thetas(thetas: &[f64]) -> Result<()> {
        if thetas.is_empty() {
            return Err(Error::InvalidChain {
                reason: "chain needs at least one scatter".into(),
            });
        }
        for &theta in thetas {
            check_polar(theta)?;
        }
        Ok(())
    }

    pub fn e0(&self) -> Energy {
        self.e0
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn phis(&self) -> Option<&[f64]> {
        self.phis.as_deref()
    }

    pub fn is_coplanar(&self) -> bool {
        self.phis.is_none()
    }

    /// Energies E_0, E_1, ..., E_N along the chain.
    pub fn energies(&self) -> Vec<Energy> {
        propagate_energies(self.e0, &self.thetas)
    }
}

pub(crate) fn propagate_energies(e0: Energy, thetas: &[f64]) -> Vec<Energy> {
    let mut energies = Vec::with_capacity(thetas.len() + 1);
    let mut e = e0.value();
    energies.push(e0);
    for &theta in thetas {
        e = scattered_energy_unchecked(e, theta);
        energies.push(Energy::new(e).expect("propagated energy stays positive"));
    }
    energies
}

/// Block reduction of a co-planar chain product:
/// T_N ... T_1 = [[alpha, gamma, 0, 0], [delta, epsilon, 0, 0],
///               [0, 0, f, 0], [0, 0, 0, g]], with beta = gamma / alpha.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ChainBlockSummary {
    pub alpha: f64,
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub f: f64,
    pub g: f64,
    /// Analyzing power gamma / alpha of the whole chain.
    pub beta: f64,
    /// Energies E_0 ..= E_N.
    pub energies: Vec<Energy>,
}

impl ChainBlockSummary {
    pub fn final_energy(&self) -> Energy {
        *self.energies.last().expect("at least E_0 and E_1")
    }
}

/// Ordered chain product T_N M_N ... T_1 M_1 at the propagated energies.
///
/// Co-planar specs take M_j = identity for every j, so the result is exactly
/// block diagonal; the free first azimuth of the co-planar family is applied
/// by the measurement layer, not here.
pub fn chain_mueller(spec: &ScatterChainSpec) -> MuellerMatrix {
    let mut e = spec.e0;
    let mut product: Option<MuellerMatrix> = None;
    for (j, &theta) in spec.thetas.iter().enumerate() {
        let t = transition_matrix(e, theta).expect("angles validated at construction");
        let step = match spec.phis.as_ref() {
            Some(phis) if phis[j] != 0.0 => t.compose(&kinematics::rotation_matrix(phis[j])),
            _ => t,
        };
        product = Some(match product {
            None => step,
            Some(p) => step.compose(&p),
        });
        e = kinematics::scattered_energy(e, theta).expect("angle validated");
    }
    let mut out = product.expect("chain is nonempty");
    if spec.len() == 1 && spec.phis.is_none() {
        out = MuellerMatrix::new(*out.matrix(), MuellerKind::Transition);
    }
    out
}

/// Block summary of the co-planar transition product for the given angles.
///
/// Reduces to (alpha, beta) of a single scatter at N = 1.
pub fn coplanar_summary(e0: Energy, thetas: &[f64]) -> Result<ChainBlockSummary> {
    ScatterChainSpec::validate_thetas(thetas)?;
    // 2x2 top block carried explicitly; f and g are plain products.
    let mut a = [1.0, 0.0, 0.0, 1.0]; // row major [a00, a01, a10, a11]
    let mut f = 1.0;
    let mut g = 1.0;
    let mut e = e0.value();
    let mut energies = Vec::with_capacity(thetas.len() + 1);
    energies.push(e0);
    for &theta in thetas {
        let e_next = scattered_energy_unchecked(e, theta);
        let c = theta.cos();
        let s2 = theta.sin() * theta.sin();
        let recoil = (e - e_next) * (1.0 - c);
        let pref = 0.5 * (e_next / e) * (e_next / e);
        let t11 = pref * (1.0 + c * c + recoil);
        let t12 = pref * s2;
        let t22 = pref * (2.0 - s2);
        a = [
            t11 * a[0] + t12 * a[2],
            t11 * a[1] + t12 * a[3],
            t12 * a[0] + t22 * a[2],
            t12 * a[1] + t22 * a[3],
        ];
        f *= pref * 2.0 * c;
        g *= pref * (2.0 * c + recoil * c);
        e = e_next;
        energies.push(Energy::new(e).expect("propagated energy stays positive"));
    }
    Ok(ChainBlockSummary {
        alpha: a[0],
        gamma: a[1],
        delta: a[2],
        epsilon: a[3],
        f,
        g,
        beta: a[1] / a[0],
        energies,
    })
}

/// N-fold differential cross section <I| T_N M_N ... T_1 M_1 |S> in units of
/// r_e^(2N) per steradian^N, for a normalized initial state.
pub fn nfold_cross_section(spec: &ScatterChainSpec, s: &StokesVector) -> Result<f64> {
    s.require_normalized()?;
    let out = chain_mueller(spec).apply(s);
    Ok(out.s0)
}

/// Total N-fold cross section sigma_tot^(N)(E0) in units of r_e^(2N).
///
/// The 2N-dimensional integral collapses: averaging each rotation over its
/// azimuth projects onto diag(1,0,0,1), and the block structure of T then
/// decouples the S3 channel, leaving the nested one-dimensional recursion
/// H_m(E) = 2 pi int alpha(E, theta) H_{m-1}(E') sin(theta) dtheta with
/// H_0 = 1. Inner levels are carried as Chebyshev interpolants in energy.
/// Results are cached per (n, E0).
pub fn total_cross_section(n: usize, e0: Energy) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidScatterCount);
    }
    static CACHE: OnceLock<Mutex<HashMap<(usize, u64), f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    Ok(*guard
        .entry((n, e0.value().to_bits()))
        .or_insert_with(|| total_cross_section_uncached(n, e0.value())))
}

fn total_cross_section_uncached(n: usize, e0: f64) -> f64 {
    if n == 1 {
        return kinematics::total_cross_section_single(Energy::new(e0).unwrap());
    }
    total_cross_section_at_resolution(n, e0, 128, 64)
}

/// Total cross section together with an accuracy estimate: the difference
/// against a half-resolution recomputation.
pub fn total_cross_section_with_accuracy(n: usize, e0: Energy) -> Result<(f64, f64)> {
    let value = total_cross_section(n, e0)?;
    let coarse = if n == 1 {
        std::f64::consts::TAU
            * quad::integrate(
                |theta| kinematics::alpha_beta_unchecked(e0.value(), theta).0 * theta.sin(),
                0.0,
                std::f64::consts::PI,
                64,
            )
    } else {
        total_cross_section_at_resolution(n, e0.value(), 64, 32)
    };
    Ok((value, (value - coarse).abs()))
}

fn total_cross_section_at_resolution(
    n: usize,
    e0: f64,
    gl_nodes: usize,
    cheb_degree: usize,
) -> f64 {
    let level_integral = |e: f64, prev: Option<&ChebyshevInterpolant>| -> f64 {
        std::f64::consts::TAU
            * quad::integrate(
                |theta| {
                    let alpha = kinematics::alpha_beta_unchecked(e, theta).0;
                    let inner = match prev {
                        None => 1.0,
                        Some(itp) => itp.eval(scattered_energy_unchecked(e, theta)),
                    };
                    alpha * inner * theta.sin()
                },
                0.0,
                std::f64::consts::PI,
                gl_nodes,
            )
    };
    // Level m is the cross section for m further scatters, queried at
    // energies reachable after n - m scatters; its interpolation interval
    // bottoms out there, padded slightly.
    let mut interp: Option<ChebyshevInterpolant> = None;
    for level in 1..n {
        let e_lo = 0.999 * e0 / (1.0 + 2.0 * (n - level) as f64 * e0);
        interp = Some(ChebyshevInterpolant::from_fn(e_lo, e0, cheb_degree, |e| {
            level_integral(e, interp.as_ref())
        }));
    }
    level_integral(e0, interp.as_ref())
}

/// POVM normalization prefactor alpha(thetas) / sigma_tot^(N) of the
/// co-planar family.
pub fn povm_normalizer(thetas: &[f64], e0: Energy) -> Result<f64> {
    let summary = coplanar_summary(e0, thetas)?;
    Ok(summary.alpha / total_cross_section(thetas.len(), e0)?)
}
