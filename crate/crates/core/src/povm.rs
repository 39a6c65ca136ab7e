//! POVM elements of N-scatter Compton polarimetry and their
//! quantum-information metrics.
//!
//! Detection after a co-planar chain at first azimuth phi corresponds to the
//! density-scaled element N(thetas) [[1, b e^{-2i phi}], [b e^{2i phi}, 1]]
//! with b = beta(thetas). Post-selecting the two azimuths phi and phi + pi/2
//! filters this into an exactly complete dichotomic pair whose sharpness is
//! entirely set by beta.

use crate::bell::{self, BipartiteState};
use crate::chain::{coplanar_summary, nfold_cross_section, povm_normalizer, ScatterChainSpec};
use crate::error::{Error, Result};
use crate::kinematics::Energy;
use crate::math::{self, Mat2, C64};
use crate::polarization::{BlochAngles, StokesVector};

/// Eigenvalues this far below zero still count as positive semidefinite.
pub const PSD_TOL: f64 = 1e-12;

/// Scale convention of a POVM element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PovmScale {
    /// Unfiltered: a density per steradian^N that integrates to identity.
    Density,
    /// Filtered: unit trace, pairs sum to identity.
    Normalized,
}

/// Measurement outcome label of a filtered pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

/// 2x2 complex Hermitian positive-semidefinite measurement operator.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmElement {
    m: Mat2,
    scale: PovmScale,
}

impl PovmElement {
    pub fn from_matrix(m: Mat2, scale: PovmScale) -> Result<Self> {
        let asymmetry = math::hermitian_asymmetry2(&m);
        if asymmetry > crate::polarization::HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                asymmetry,
                tolerance: crate::polarization::HERMITICITY_TOL,
            });
        }
        let m = math::symmetrize2(&m);
        let min_eig = math::eigvals_hermitian2(&m)[0];
        if min_eig < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min_eig });
        }
        Ok(Self { m, scale })
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn scale(&self) -> PovmScale {
        self.scale
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn determinant(&self) -> f64 {
        (self.m[(0, 0)] * self.m[(1, 1)] - self.m[(0, 1)] * self.m[(1, 0)]).re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        math::eigvals_hermitian2(&self.m)[0]
    }

    /// Outcome probability (or probability density) Tr[rho Pi].
    pub fn probability(&self, rho: &crate::polarization::PolarizationDensity) -> f64 {
        (rho.matrix() * self.m).trace().re
    }
}

/// The dichotomic, normalized POVM pair of a filtered Compton polarimeter.
///
/// Built analytically from (beta, phi); completeness plus + minus = identity
/// holds exactly by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredPair {
    plus: PovmElement,
    minus: PovmElement,
    beta: f64,
    phi: f64,
}

impl FilteredPair {
    pub fn from_beta_phi(beta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::AnalyzingPowerOutOfRange { value: beta });
        }
        Ok(Self {
            plus: PovmElement {
                m: filtered_matrix(beta, phi, 1.0),
                scale: PovmScale::Normalized,
            },
            minus: PovmElement {
                m: filtered_matrix(beta, phi, -1.0),
                scale: PovmScale::Normalized,
            },
            beta,
            phi,
        })
    }

    pub fn plus(&self) -> &PovmElement {
        &self.plus
    }

    pub fn minus(&self) -> &PovmElement {
        &self.minus
    }

    pub fn element(&self, outcome: Outcome) -> &PovmElement {
        match outcome {
            Outcome::Plus => &self.plus,
            Outcome::Minus => &self.minus,
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Outcome probabilities (p_plus, p_minus) on a normalized state; they
    /// sum to 1 exactly.
    pub fn probabilities(&self, rho: &crate::polarization::PolarizationDensity) -> (f64, f64) {
        let p = self.plus.probability(rho);
        (p, 1.0 - p)
    }
}

fn filtered_matrix(beta: f64, phi: f64, sign: f64) -> Mat2 {
    let off = C64::from_polar(sign * 0.5 * beta, -2.0 * phi);
    Mat2::new(C64::new(0.5, 0.0), off, off.conj(), C64::new(0.5, 0.0))
}

/// Unfiltered POVM element of a co-planar N-chain observed at first azimuth
/// phi: N(thetas) [[1, b e^{-2i phi}], [b e^{2i phi}, 1]].
pub fn unfiltered_povm(thetas: &[f64], phi: f64, e0: Energy) -> Result<PovmElement> {
    let norm = povm_normalizer(thetas, e0)?;
    let beta = coplanar_summary(e0, thetas)?.beta;
    let off = C64::from_polar(norm * beta, -2.0 * phi);
    let m = Mat2::new(C64::new(norm, 0.0), off, off.conj(), C64::new(norm, 0.0));
    Ok(PovmElement { m, scale: PovmScale::Density })
}

/// Filtered dichotomic pair of a co-planar N-chain, outcomes at azimuths
/// phi and phi + pi/2.
pub fn filtered_pair(thetas: &[f64], phi: f64, e0: Energy) -> Result<FilteredPair> {
    // The filtering step is only valid because the two unfiltered elements
    // sum to a multiple of the identity; check the cancellation instead of
    // assuming it.
    let plus = unfiltered_povm(thetas, phi, e0)?;
    let minus = unfiltered_povm(thetas, phi + std::f64::consts::FRAC_PI_2, e0)?;
    let sum_off = plus.m[(0, 1)] + minus.m[(0, 1)];
    debug_assert!(
        sum_off.norm() <= 1e-12 * plus.m[(0, 0)].re,
        "unfiltered pair does not sum to a multiple of identity"
    );
    let beta = coplanar_summary(e0, thetas)?.beta;
    FilteredPair::from_beta_phi(beta, phi)
}

/// Reconstructs the POVM element of an arbitrary trajectory from the four
/// probe states (1,0,0,0), (1,1,0,0), (1,0,1,0), (1,0,0,1).
///
/// Each probe is a physical normalized state, so the four N-fold cross
/// sections determine the four real degrees of freedom of the Hermitian
/// element. Co-planar chains reproduce [`unfiltered_povm`] with the chain's
/// first azimuth.
pub fn povm_from_probes(spec: &ScatterChainSpec) -> Result<PovmElement> {
    let sigma = crate::chain::total_cross_section(spec.len(), spec.e0())?;
    let probe = |s: StokesVector| -> Result<f64> {
        Ok(nfold_cross_section(spec, &s)? / sigma)
    };
    let d0 = probe(StokesVector::unpolarized())?;
    let d1 = probe(StokesVector::horizontal())?;
    let d2 = probe(StokesVector::antidiagonal())?;
    let d3 = probe(StokesVector::right_circular())?;
    // d0 = (Pi_RR + Pi_LL)/2, d3 - d0 = (Pi_RR - Pi_LL)/2,
    // d1 - d0 = Re Pi_RL, d2 - d0 = -Im Pi_RL.
    let m = Mat2::new(
        C64::new(d0 + (d3 - d0), 0.0),
        C64::new(d1 - d0, -(d2 - d0)),
        C64::new(d1 - d0, d2 - d0),
        C64::new(d0 - (d3 - d0), 0.0),
    );
    PovmElement::from_matrix(m, PovmScale::Density)
}

/// Fidelity <psi| Pi |psi> between a normalized element and the projector
/// onto |psi(target)>; closed form (1/2)[1 + beta sin(theta) cos 2(phi - phi_t)].
pub fn fidelity_to_projector(element: &PovmElement, target: BlochAngles) -> Result<f64> {
    if element.scale != PovmScale::Normalized {
        return Err(Error::UnnormalizedPovm);
    }
    Ok(sandwich(&element.m, &target.ket()))
}

fn sandwich(m: &Mat2, ket: &[C64; 2]) -> f64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            acc += ket[i].conj() * m[(i, j)] * ket[j];
        }
    }
    acc.re
}

/// Trace-norm distance (1/2) || Pi - |psi><psi| ||_1 between a normalized
/// element and the target projector; closed form
/// (1/2) sqrt(1 + beta^2 - 2 beta sin(theta) cos 2(phi - phi_t)).
pub fn trace_distance_to_projector(element: &PovmElement, target: BlochAngles) -> Result<f64> {
    if element.scale != PovmScale::Normalized {
        return Err(Error::UnnormalizedPovm);
    }
    let [a, b] = target.ket();
    let projector = Mat2::new(a * a.conj(), a * b.conj(), b * a.conj(), b * b.conj());
    Ok(0.5 * math::trace_norm2(&(element.m - projector)))
}

/// Success probability of discriminating the orthogonal pair
/// {|psi(target)>, |psi_perp(target)>} with the filtered pair; equals the
/// fidelity, and 1/2 for circular pairs.
pub fn qsd_success(pair: &FilteredPair, target: BlochAngles) -> f64 {
    let p_plus = sandwich(&pair.plus.m, &target.ket());
    let p_minus = sandwich(&pair.minus.m, &target.orthogonal_ket());
    0.5 * (p_plus + p_minus)
}

/// Trace-norm distance between the two filtered elements; equals beta, the
/// Helstrom distinguishability of the pair.
pub fn helstrom_distinguishability(pair: &FilteredPair) -> f64 {
    0.5 * math::trace_norm2(&(pair.plus.m - pair.minus.m))
}

/// Two-basis MUB witness I_2: the sum over the accessible linear bases
/// {H,V} and {A,D} of the correlated-outcome joint probabilities, measured
/// with filtered polarimeter POVMs of per-arm sharpness beta_a, beta_b.
///
/// For the annihilation state the correlated combinations are (H,V), (V,H),
/// (A,A), (D,D), giving 1 + beta_a beta_b; separable states satisfy
/// I_2 in [0.5, 1.5].
pub fn mub_witness_i2(state: &BipartiteState, beta_a: f64, beta_b: f64) -> Result<f64> {
    let hv_a = FilteredPair::from_beta_phi(beta_a, 0.0)?;
    let hv_b = FilteredPair::from_beta_phi(beta_b, 0.0)?;
    let ad_a = FilteredPair::from_beta_phi(beta_a, std::f64::consts::FRAC_PI_4)?;
    let ad_b = FilteredPair::from_beta_phi(beta_b, std::f64::consts::FRAC_PI_4)?;
    Ok(
        bell::joint_probability(state, &hv_a, Outcome::Plus, &hv_b, Outcome::Minus)
            + bell::joint_probability(state, &hv_a, Outcome::Minus, &hv_b, Outcome::Plus)
            + bell::joint_probability(state, &ad_a, Outcome::Plus, &ad_b, Outcome::Plus)
            + bell::joint_probability(state, &ad_a, Outcome::Minus, &ad_b, Outcome::Minus),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    const E1: Energy = Energy::ANNIHILATION;

    #[test]
    fn unfiltered_element_structure() {
        let elem = unfiltered_povm(&[1.0], 0.7, E1).unwrap();
        let m = elem.matrix();
        // Circular blindness: equal diagonal entries.
        assert_abs_diff_eq!(m[(0, 0)].re, m[(1, 1)].re, epsilon = 0.0);
        assert_eq!(elem.scale(), PovmScale::Density);

        // theta = 0 has beta = 0, so the element is diagonal.
        let elem = unfiltered_povm(&[0.0], 0.3, E1).unwrap();
        assert_abs_diff_eq!(elem.matrix()[(0, 1)].norm(), 0.0, epsilon = 0.0);
    }

    #[test]
    fn unfiltered_trace_reproduces_density() {
        let mut state = 11u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let theta = 0.02 + 3.1 * next();
            let phi = TAU * next();
            let bloch = BlochAngles::new(PI * next(), PI * next()).unwrap();
            let rho = crate::polarization::bloch_state(bloch);
            let elem = unfiltered_povm(&[theta], phi, E1).unwrap();
            let dir = crate::kinematics::ScatterDirection::new(theta, phi).unwrap();
            let s = crate::polarization::density_to_stokes(&rho);
            let density = crate::kinematics::klein_nishina_density(&s, E1, dir).unwrap();
            assert_abs_diff_eq!(elem.probability(&rho), density, epsilon = 1e-13);
        }
    }

    #[test]
    fn unfiltered_single_scatter_integrates_to_identity() {
        let mut diag = 0.0;
        let mut off = C64::new(0.0, 0.0);
        let rule = quad::gauss_legendre(128);
        let rule_phi = quad::gauss_legendre(64);
        for (x, w) in rule.0.iter().zip(&rule.1) {
            let theta = 0.5 * PI * (x + 1.0);
            let wt = 0.5 * PI * w * theta.sin();
            for (xp, wp) in rule_phi.0.iter().zip(&rule_phi.1) {
                let phi = PI * (xp + 1.0);
                let elem = unfiltered_povm(&[theta], phi, E1).unwrap();
                diag += wt * PI * wp * elem.matrix()[(0, 0)].re;
                off += elem.matrix()[(0, 1)] * C64::new(wt * PI * wp, 0.0);
            }
        }
        assert_abs_diff_eq!(diag, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(off.norm(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn filtered_pair_matches_table_beta() {
        let pair = filtered_pair(&[1.425], 0.0, E1).unwrap();
        assert_abs_diff_eq!(pair.plus().matrix()[(0, 1)].re, 0.5 * 0.6918, epsilon = 5e-5);
        let sum = pair.plus().matrix() + pair.minus().matrix();
        assert_abs_diff_eq!((sum - Mat2::identity()).norm(), 0.0, epsilon = 0.0);

        // p+ - p- on |H> at phi = 0 equals beta.
        let rho = crate::polarization::stokes_to_density(&StokesVector::horizontal());
        let (pp, pm) = pair.probabilities(&rho);
        assert_abs_diff_eq!(pp - pm, pair.beta(), epsilon = 1e-13);
        assert_abs_diff_eq!(pp + pm, 1.0, epsilon = 0.0);
    }

    #[test]
    fn beta_zero_pair_is_maximally_mixed() {
        let pair = FilteredPair::from_beta_phi(0.0, 0.4).unwrap();
        assert_abs_diff_eq!(
            (pair.plus().matrix() - Mat2::identity() * C64::new(0.5, 0.0)).norm(),
            0.0,
            epsilon = 0.0
        );
    }

    #[test]
    fn probes_match_analytic_element() {
        // Co-planar chains at assorted lengths and azimuths.
        let cases: [(&[f64], f64); 3] =
            [(&[1.425], 0.0), (&[1.038, 1.479], 1.1), (&[0.777, 1.071, 1.499], 4.0)];
        for (thetas, phi) in cases {
            let mut phis = vec![0.0; thetas.len()];
            phis[0] = phi;
            let spec = ScatterChainSpec::general(E1, thetas.to_vec(), phis).unwrap();
            let probed = povm_from_probes(&spec).unwrap();
            let analytic = unfiltered_povm(thetas, phi, E1).unwrap();
            assert_abs_diff_eq!(
                (probed.matrix() - analytic.matrix()).norm(),
                0.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn probed_general_trajectory_element_is_physical() {
        let spec =
            ScatterChainSpec::general(E1, vec![0.9, 1.3, 0.6], vec![0.4, 2.0, 5.1]).unwrap();
        let elem = povm_from_probes(&spec).unwrap();
        assert!(elem.min_eigenvalue() >= -PSD_TOL);
        // Circular blindness survives arbitrary trajectories.
        assert_abs_diff_eq!(
            elem.matrix()[(0, 0)].re,
            elem.matrix()[(1, 1)].re,
            epsilon = 1e-15
        );
    }

    #[test]
    fn fidelity_and_distance_closed_forms() {
        let beta = 0.6918;
        let pair = FilteredPair::from_beta_phi(beta, 0.0).unwrap();
        let aligned = BlochAngles::new(FRAC_PI_2, 0.0).unwrap();
        let f = fidelity_to_projector(pair.plus(), aligned).unwrap();
        let d = trace_distance_to_projector(pair.plus(), aligned).unwrap();
        assert_abs_diff_eq!(f, 0.8459, epsilon = 1e-4);
        assert_abs_diff_eq!(d, 0.1541, epsilon = 1e-4);
        assert_abs_diff_eq!(f + d, 1.0, epsilon = 1e-12);

        // Circular target: fidelity 1/2 regardless of beta.
        let circular = BlochAngles::new(0.0, 0.0).unwrap();
        let f = fidelity_to_projector(pair.plus(), circular).unwrap();
        assert_abs_diff_eq!(f, 0.5, epsilon = 1e-15);

        // beta = 1 aligned: a perfect projector.
        let ideal = FilteredPair::from_beta_phi(1.0, 0.0).unwrap();
        let d = trace_distance_to_projector(ideal.plus(), aligned).unwrap();
        assert_abs_diff_eq!(d, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn density_scaled_elements_are_rejected_by_metrics() {
        let elem = unfiltered_povm(&[1.0], 0.0, E1).unwrap();
        let target = BlochAngles::new(FRAC_PI_2, 0.0).unwrap();
        assert!(matches!(
            fidelity_to_projector(&elem, target),
            Err(Error::UnnormalizedPovm)
        ));
        assert!(matches!(
            trace_distance_to_projector(&elem, target),
            Err(Error::UnnormalizedPovm)
        ));
    }

    #[test]
    fn qsd_success_examples() {
        let beta = 0.6918;
        let pair = FilteredPair::from_beta_phi(beta, 0.0).unwrap();
        // |R> vs |L> cannot be distinguished.
        let circular = BlochAngles::new(0.0, 0.0).unwrap();
        assert_abs_diff_eq!(qsd_success(&pair, circular), 0.5, epsilon = 1e-15);
        // Aligned linear pair: (1 + beta)/2.
        let aligned = BlochAngles::new(FRAC_PI_2, 0.0).unwrap();
        assert_abs_diff_eq!(qsd_success(&pair, aligned), 0.5 * (1.0 + beta), epsilon = 1e-13);
        // Uninformative measurement.
        let blind = FilteredPair::from_beta_phi(0.0, 0.0).unwrap();
        assert_abs_diff_eq!(qsd_success(&blind, aligned), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn helstrom_equals_beta() {
        for beta in [0.0, 0.3, 0.6918, 0.95, 1.0] {
            let pair = FilteredPair::from_beta_phi(beta, 1.2).unwrap();
            assert_abs_diff_eq!(helstrom_distinguishability(&pair), beta, epsilon = 1e-12);
        }
    }

    #[test]
    fn i2_witness_golden_values() {
        let phi_minus = BipartiteState::phi_minus();
        let beta = 0.6918020508016843;
        assert_abs_diff_eq!(
            mub_witness_i2(&phi_minus, beta, beta).unwrap(),
            1.47859,
            epsilon = 1e-4
        );
        assert_abs_diff_eq!(mub_witness_i2(&phi_minus, 0.0, 0.0).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mub_witness_i2(&phi_minus, 1.0, 1.0).unwrap(), 2.0, epsilon = 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]
        #[test]
        fn constructed_elements_are_psd_and_complete(
            thetas in proptest::collection::vec(0.0f64..std::f64::consts::PI, 1..=4),
            phi in 0.0f64..std::f64::consts::TAU,
        ) {
            let elem = unfiltered_povm(&thetas, phi, E1).unwrap();
            prop_assert!(elem.min_eigenvalue() >= -PSD_TOL);

            let pair = filtered_pair(&thetas, phi, E1).unwrap();
            prop_assert!(pair.plus().min_eigenvalue() >= -PSD_TOL);
            let sum = pair.plus().matrix() + pair.minus().matrix();
            prop_assert!((sum - Mat2::identity()).norm() == 0.0);

            // det of a normalized element is (1 - beta^2)/4.
            let beta = pair.beta();
            let det = pair.plus().determinant();
            prop_assert!((det - 0.25 * (1.0 - beta * beta)).abs() < 1e-12);

            // Circular blindness.
            prop_assert!(
                (elem.matrix()[(0, 0)].re - elem.matrix()[(1, 1)].re).abs() < 1e-15
            );
        }

        #[test]
        fn metric_closed_forms_match_brute_force(
            beta in 0.0f64..1.0,
            phi in 0.0f64..std::f64::consts::PI,
            theta_t in 0.0f64..std::f64::consts::PI,
            phi_t in 0.0f64..std::f64::consts::PI,
        ) {
            let pair = FilteredPair::from_beta_phi(beta, phi).unwrap();
            let target = BlochAngles::new(theta_t, phi_t).unwrap();
            let f = fidelity_to_projector(pair.plus(), target).unwrap();
            let want_f = 0.5 * (1.0 + beta * theta_t.sin() * (2.0 * (phi - phi_t)).cos());
            prop_assert!((f - want_f).abs() < 1e-14);

            let d = trace_distance_to_projector(pair.plus(), target).unwrap();
            let want_d = 0.5
                * (1.0 + beta * beta
                    - 2.0 * beta * theta_t.sin() * (2.0 * (phi - phi_t)).cos())
                .sqrt();
            prop_assert!((d - want_d).abs() < 1e-12);

            prop_assert!((qsd_success(&pair, target) - f).abs() < 1e-13);
        }
    }
}
