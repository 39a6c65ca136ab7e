//! Bipartite states, CHSH evaluation, and witness false-positive audits.
//!
//! Both annihilation photons are measured in their local frames sharing the
//! x-axis, so joint probabilities are plain tensor-product traces in the
//! {|RR>,|RL>,|LR>,|LL>} basis and the |Phi-> correlations depend on
//! phi_a + phi_b. The R-ratio convention Delta-phi maps onto local azimuths
//! (0, Delta-phi).

use crate::error::{Error, Result};
use crate::kinematics::Energy;
use crate::math::{self, Mat4c, C64};
use crate::optim;
use crate::povm::{FilteredPair, Outcome};

/// Tolerance on Hermiticity, positivity, and unit trace of bipartite states.
const STATE_TOL: f64 = 1e-9;

/// 4x4 complex Hermitian PSD trace-1 matrix in the two-photon circular
/// basis {|RR>,|RL>,|LR>,|LL>}, with a human-readable label.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    m: Mat4c,
    label: String,
}

impl BipartiteState {
    pub fn from_matrix(label: impl Into<String>, m: Mat4c) -> Result<Self> {
        let asymmetry = math::hermitian_asymmetry4(&m);
        if asymmetry > STATE_TOL {
            return Err(Error::NotHermitian { asymmetry, tolerance: STATE_TOL });
        }
        let m = math::symmetrize4(&m);
        let trace = m.trace().re;
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::NotUnitTrace { trace });
        }
        let min_eig = math::eigvals_hermitian4(&m)[0];
        if min_eig < -STATE_TOL {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min_eig });
        }
        Ok(Self { m, label: label.into() })
    }

    pub fn matrix(&self) -> &Mat4c {
        &self.m
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The annihilation Bell state |Phi-> = (|RR> - |LL>)/sqrt(2).
    pub fn phi_minus() -> Self {
        let h = C64::new(0.5, 0.0);
        let mut m = Mat4c::zeros();
        m[(0, 0)] = h;
        m[(3, 3)] = h;
        m[(0, 3)] = -h;
        m[(3, 0)] = -h;
        Self { m, label: "phi_minus".into() }
    }

    /// Classical mixture (|HV><HV| + |VH><VH|)/2.
    pub fn omega_mix() -> Self {
        let hv = product_density(&[1.0, 0.0, 0.0], &[-1.0, 0.0, 0.0]);
        let vh = product_density(&[-1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]);
        Self {
            m: (hv + vh) * C64::new(0.5, 0.0),
            label: "omega_mix".into(),
        }
    }

    /// The rotationally symmetric separable state
    /// `(1/4) [[1,0,0,-1],[0,1,0,0],[0,0,1,0],[-1,0,0,1]]`.
    pub fn omega_sep() -> Self {
        let q = C64::new(0.25, 0.0);
        let mut m = Mat4c::identity() * q;
        m[(0, 3)] = -q;
        m[(3, 0)] = -q;
        Self { m, label: "omega_sep".into() }
    }

    /// The product state |HV><HV|.
    pub fn product_hv() -> Self {
        Self {
            m: product_density(&[1.0, 0.0, 0.0], &[-1.0, 0.0, 0.0]),
            label: "product_hv".into(),
        }
    }
}

fn product_density(bloch_a: &[f64; 3], bloch_b: &[f64; 3]) -> Mat4c {
    let single = |b: &[f64; 3]| {
        let pauli = math::pauli_basis();
        let mut m = pauli[0];
        for (k, &coeff) in b.iter().enumerate() {
            m += pauli[k + 1] * C64::new(coeff, 0.0);
        }
        m * C64::new(0.5, 0.0)
    };
    math::kron2(&single(bloch_a), &single(bloch_b))
}

/// The four named states used throughout the witness discussion.
pub fn standard_states() -> Vec<BipartiteState> {
    vec![
        BipartiteState::phi_minus(),
        BipartiteState::omega_mix(),
        BipartiteState::omega_sep(),
        BipartiteState::product_hv(),
    ]
}

/// Joint outcome probability Tr[rho (Pi_a ⊗ Pi_b)] of two filtered
/// measurements; the four outcomes of a setting pair sum to 1.
pub fn joint_probability(
    state: &BipartiteState,
    pair_a: &FilteredPair,
    outcome_a: Outcome,
    pair_b: &FilteredPair,
    outcome_b: Outcome,
) -> f64 {
    let op = math::kron2(
        pair_a.element(outcome_a).matrix(),
        pair_b.element(outcome_b).matrix(),
    );
    math::trace_product4(state.matrix(), &op)
}

/// Correlation E = p++ + p-- - p+- - p-+ of a setting pair.
pub fn expectation(state: &BipartiteState, pair_a: &FilteredPair, pair_b: &FilteredPair) -> f64 {
    use Outcome::{Minus, Plus};
    joint_probability(state, pair_a, Plus, pair_b, Plus)
        + joint_probability(state, pair_a, Minus, pair_b, Minus)
        - joint_probability(state, pair_a, Plus, pair_b, Minus)
        - joint_probability(state, pair_a, Minus, pair_b, Plus)
}

/// Alice's and Bob's two azimuthal measurement settings.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BellSettings {
    pub phi_a: f64,
    pub phi_a_prime: f64,
    pub phi_b: f64,
    pub phi_b_prime: f64,
}

impl BellSettings {
    /// The Bell-test angle family (0, 2 phi, -phi, -3 phi).
    pub fn bell_test_angles(phi: f64) -> Self {
        Self {
            phi_a: 0.0,
            phi_a_prime: 2.0 * phi,
            phi_b: -phi,
            phi_b_prime: -3.0 * phi,
        }
    }
}

/// CHSH function S = E(a,b) - E(a,b') + E(a',b) + E(a',b') evaluated by
/// explicit traces with per-arm analyzing powers.
pub fn chsh(
    state: &BipartiteState,
    beta_a: f64,
    beta_b: f64,
    settings: &BellSettings,
) -> Result<f64> {
    let pair_a = FilteredPair::from_beta_phi(beta_a, settings.phi_a)?;
    let pair_a_prime = FilteredPair::from_beta_phi(beta_a, settings.phi_a_prime)?;
    let pair_b = FilteredPair::from_beta_phi(beta_b, settings.phi_b)?;
    let pair_b_prime = FilteredPair::from_beta_phi(beta_b, settings.phi_b_prime)?;
    Ok(expectation(state, &pair_a, &pair_b) - expectation(state, &pair_a, &pair_b_prime)
        + expectation(state, &pair_a_prime, &pair_b)
        + expectation(state, &pair_a_prime, &pair_b_prime))
}

/// Closed form of the CHSH function for |Phi-> at the Bell-test angles:
/// S = beta^2 (-3 cos 2 phi + cos 6 phi).
pub fn chsh_phi_minus_closed_form(beta: f64, phi: f64) -> f64 {
    beta * beta * (-3.0 * (2.0 * phi).cos() + (6.0 * phi).cos())
}

/// One sample of a CHSH scan curve.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ChshPoint {
    pub phi: f64,
    pub s: f64,
    pub abs_s: f64,
}

/// |S(phi)| curve of |Phi-> at the Bell-test angles for a chain of
/// analyzing power beta, evaluated by explicit traces.
pub fn chsh_scan(beta: f64, phis: &[f64]) -> Result<Vec<ChshPoint>> {
    let state = BipartiteState::phi_minus();
    phis.iter()
        .map(|&phi| {
            let s = chsh(&state, beta, beta, &BellSettings::bell_test_angles(phi))?;
            Ok(ChshPoint { phi, s, abs_s: s.abs() })
        })
        .collect()
}

/// Minimum analyzing power for a CHSH violation at the Bell-test angles:
/// 2^(-1/4). At phi = pi/8 this beta gives exactly |S| = 2.
pub fn violation_threshold() -> f64 {
    0.25f64.exp2().recip()
}

/// Result of the R-ratio audit.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RRatioReport {
    pub r: f64,
    pub theta_a: f64,
    pub theta_b: f64,
    /// Azimuth separation of the numerator, +pi/2 or -pi/2.
    pub delta_phi: f64,
}

/// Perpendicular-to-parallel coincidence ratio of single-scatter (N = 1)
/// Compton polarimetry:
///
/// R = max over polar angles and Delta-phi = ±90 deg of
///     d4sigma(theta_a, theta_b, Delta-phi) / d4sigma(theta_a, theta_b, 0).
///
/// The polar angles maximize the ratio for the apparatus design energy
/// E0 = 1 (annihilation photons); the ratio is then evaluated for the
/// hypothesis state at the given `e0`. This is what makes R a false-positive
/// witness: the same instrument reads R > 1.63 for the separable omega_sep
/// once the assumed energy is wrong.
pub fn r_ratio(state: &BipartiteState, e0: Energy) -> Result<RRatioReport> {
    let design = Energy::ANNIHILATION;
    // Warm start both arms at the single-scatter analyzing-power optimum.
    let (theta_opt, _) = optim::golden_section_min(
        |t| -crate::kinematics::alpha_beta(design, t).unwrap().1,
        0.2,
        std::f64::consts::PI - 0.2,
        1e-10,
    );
    let clamp = |t: f64| t.clamp(1e-3, std::f64::consts::PI - 1e-3);
    let objective = |x: &[f64]| -> f64 {
        match ratio_and_sign(state, design, clamp(x[0]), clamp(x[1])) {
            Ok((r, _)) => -r,
            Err(_) => f64::INFINITY,
        }
    };
    let found = optim::nelder_mead(objective, &[theta_opt, theta_opt], 0.02, 1e-13, 20_000);
    let (theta_a, theta_b) = (clamp(found.x[0]), clamp(found.x[1]));
    let (r, delta_phi) = ratio_and_sign(state, e0, theta_a, theta_b)?;
    Ok(RRatioReport { r, theta_a, theta_b, delta_phi })
}

/// The ratio at fixed polar angles, maximized over the sign of the 90 deg
/// azimuth separation; azimuths are (0, Delta-phi) in the local frames.
pub fn r_ratio_at(
    state: &BipartiteState,
    e0: Energy,
    theta_a: f64,
    theta_b: f64,
) -> Result<f64> {
    Ok(ratio_and_sign(state, e0, theta_a, theta_b)?.0)
}

fn ratio_and_sign(
    state: &BipartiteState,
    e0: Energy,
    theta_a: f64,
    theta_b: f64,
) -> Result<(f64, f64)> {
    let trace = |phi_a: f64, phi_b: f64| -> Result<f64> {
        let a = crate::povm::unfiltered_povm(&[theta_a], phi_a, e0)?;
        let b = crate::povm::unfiltered_povm(&[theta_b], phi_b, e0)?;
        let op = math::kron2(a.matrix(), b.matrix());
        Ok(math::trace_product4(state.matrix(), &op))
    };
    let parallel = trace(0.0, 0.0)?;
    let plus = trace(0.0, std::f64::consts::FRAC_PI_2)?;
    let minus = trace(0.0, -std::f64::consts::FRAC_PI_2 + std::f64::consts::TAU)?;
    if plus >= minus {
        Ok((plus / parallel, std::f64::consts::FRAC_PI_2))
    } else {
        Ok((minus / parallel, -std::f64::consts::FRAC_PI_2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::partial_transpose_second;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

    const E1: Energy = Energy::ANNIHILATION;

    #[test]
    fn standard_states_are_valid() {
        for state in standard_states() {
            let revalidated = BipartiteState::from_matrix(state.label(), *state.matrix());
            assert!(revalidated.is_ok(), "{} failed validation", state.label());
        }
    }

    #[test]
    fn omega_sep_matches_printed_matrix() {
        let m = BipartiteState::omega_sep();
        for i in 0..4 {
            for j in 0..4 {
                let want = match (i, j) {
                    (0, 3) | (3, 0) => -0.25,
                    _ if i == j => 0.25,
                    _ => 0.0,
                };
                assert_abs_diff_eq!(m.matrix()[(i, j)].re, want, epsilon = 0.0);
                assert_abs_diff_eq!(m.matrix()[(i, j)].im, 0.0, epsilon = 0.0);
            }
        }
    }

    #[test]
    fn omega_sep_partial_transpose_is_psd() {
        let pt = partial_transpose_second(BipartiteState::omega_sep().matrix());
        let eigs = math::eigvals_hermitian4(&pt);
        assert!(eigs[0] >= -1e-12, "min eigenvalue {}", eigs[0]);
    }

    #[test]
    fn phi_minus_partial_transpose_is_not_psd() {
        let pt = partial_transpose_second(BipartiteState::phi_minus().matrix());
        let eigs = math::eigvals_hermitian4(&pt);
        assert!(eigs[0] < -0.4);
    }

    #[test]
    fn invalid_states_are_rejected() {
        let m = Mat4c::identity();
        assert!(matches!(
            BipartiteState::from_matrix("unnormalized", m),
            Err(Error::NotUnitTrace { .. })
        ));
        let mut m = Mat4c::zeros();
        m[(0, 0)] = C64::new(1.5, 0.0);
        m[(1, 1)] = C64::new(-0.5, 0.0);
        assert!(matches!(
            BipartiteState::from_matrix("indefinite", m),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn joint_probabilities_match_closed_form_for_phi_minus() {
        let state = BipartiteState::phi_minus();
        let beta = 0.8683;
        let mut lcg = 5u64;
        let mut next = || {
            lcg = lcg.wrapping_mul(6364136223846793005).wrapping_add(1);
            (lcg >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let (pa, pb) = (PI * next(), PI * next());
            let pair_a = FilteredPair::from_beta_phi(beta, pa).unwrap();
            let pair_b = FilteredPair::from_beta_phi(beta, pb).unwrap();
            let mut total = 0.0;
            for oa in [Outcome::Plus, Outcome::Minus] {
                for ob in [Outcome::Plus, Outcome::Minus] {
                    let p = joint_probability(&state, &pair_a, oa, &pair_b, ob);
                    let want = 0.25
                        * (1.0
                            - oa.sign() * ob.sign() * beta * beta * (2.0 * (pa + pb)).cos());
                    assert_abs_diff_eq!(p, want, epsilon = 1e-12);
                    total += p;
                }
            }
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn probability_shift_symmetry() {
        // p(phi_a, phi_b) = p(phi_a + pi/2, phi_b + pi/2) for |Phi->.
        let state = BipartiteState::phi_minus();
        let beta = 0.6918;
        let (pa, pb) = (0.37, 1.41);
        for oa in [Outcome::Plus, Outcome::Minus] {
            for ob in [Outcome::Plus, Outcome::Minus] {
                let p1 = joint_probability(
                    &state,
                    &FilteredPair::from_beta_phi(beta, pa).unwrap(),
                    oa,
                    &FilteredPair::from_beta_phi(beta, pb).unwrap(),
                    ob,
                );
                let p2 = joint_probability(
                    &state,
                    &FilteredPair::from_beta_phi(beta, pa + PI / 2.0).unwrap(),
                    oa,
                    &FilteredPair::from_beta_phi(beta, pb + PI / 2.0).unwrap(),
                    ob,
                );
                assert_abs_diff_eq!(p1, p2, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn expectation_examples() {
        let state = BipartiteState::phi_minus();
        let beta = 0.6918;
        let e = expectation(
            &state,
            &FilteredPair::from_beta_phi(beta, 0.0).unwrap(),
            &FilteredPair::from_beta_phi(beta, 0.0).unwrap(),
        );
        assert_abs_diff_eq!(e, -0.4786, epsilon = 1e-4);

        let e = expectation(
            &state,
            &FilteredPair::from_beta_phi(0.0, 0.0).unwrap(),
            &FilteredPair::from_beta_phi(0.0, 0.0).unwrap(),
        );
        assert_abs_diff_eq!(e, 0.0, epsilon = 1e-15);

        // phi_a + phi_b = pi/4 kills the correlation for any beta.
        let e = expectation(
            &state,
            &FilteredPair::from_beta_phi(0.9, FRAC_PI_8).unwrap(),
            &FilteredPair::from_beta_phi(0.9, FRAC_PI_8).unwrap(),
        );
        assert_abs_diff_eq!(e, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn chsh_golden_values() {
        let state = BipartiteState::phi_minus();
        let settings = BellSettings::bell_test_angles(FRAC_PI_8);
        let s = chsh(&state, 0.6918, 0.6918, &settings).unwrap();
        assert_abs_diff_eq!(s.abs(), 1.3537, epsilon = 3e-3);

        let s = chsh(&state, 1.0, 1.0, &settings).unwrap();
        assert_abs_diff_eq!(s.abs(), 2.0 * std::f64::consts::SQRT_2, epsilon = 1e-12);

        // At phi = 0 the settings collapse and S = -3 + 1 = -2 exactly.
        let s = chsh(&state, 1.0, 1.0, &BellSettings::bell_test_angles(0.0)).unwrap();
        assert_abs_diff_eq!(s, -2.0, epsilon = 1e-12);
    }

    #[test]
    fn scan_has_period_pi_and_peak_at_pi_over_8() {
        let beta = 0.8683;
        let phis: Vec<f64> = (0..=400).map(|i| PI * i as f64 / 400.0).collect();
        let curve = chsh_scan(beta, &phis).unwrap();
        let max = curve.iter().fold((0.0f64, 0.0f64), |acc, p| {
            if p.abs_s > acc.1 {
                (p.phi, p.abs_s)
            } else {
                acc
            }
        });
        // Maxima sit at odd multiples of pi/8 and all have the same height.
        let nearest_odd_eighth = (max.0 / FRAC_PI_8).round();
        assert_eq!(nearest_odd_eighth as i64 % 2, 1);
        assert_abs_diff_eq!(max.0, nearest_odd_eighth * FRAC_PI_8, epsilon = PI / 400.0);
        let at_pi_8 = chsh_phi_minus_closed_form(beta, FRAC_PI_8).abs();
        assert_abs_diff_eq!(max.1, at_pi_8, epsilon = 1e-12);
        assert!(max.1 > 2.0);
        // Antiperiodic under pi/2 shifts, hence |S| has period pi/2.
        for i in 0..200 {
            assert_abs_diff_eq!(curve[i].s, -curve[i + 200].s, epsilon = 1e-12);
        }

        // N = 1 never violates.
        let curve = chsh_scan(0.6918, &phis).unwrap();
        assert!(curve.iter().all(|p| p.abs_s < 2.0));
    }

    #[test]
    fn threshold_is_fourth_root_of_half() {
        let b = violation_threshold();
        assert_abs_diff_eq!(b, 0.8408964152537145, epsilon = 1e-15);
        assert_abs_diff_eq!(8.0 * b.powi(4), 4.0, epsilon = 1e-12);
        // Exactly |S| = 2 at the threshold.
        let s = chsh_phi_minus_closed_form(b, FRAC_PI_8);
        assert_abs_diff_eq!(s.abs(), 2.0, epsilon = 1e-12);
        // Table II: N = 1 below, N = 2 above.
        assert!(0.6918 < b && b < 0.8683);
    }

    #[test]
    fn r_ratio_golden_values() {
        let r = r_ratio(&BipartiteState::omega_mix(), E1).unwrap();
        assert_abs_diff_eq!(r.r, 2.84, epsilon = 0.01);
        assert_abs_diff_eq!(r.theta_a, 1.425, epsilon = 0.01);

        let r = r_ratio(&BipartiteState::product_hv(), E1).unwrap();
        assert_abs_diff_eq!(r.r, 5.49, epsilon = 0.01);

        let r = r_ratio(&BipartiteState::omega_sep(), E1).unwrap();
        assert_abs_diff_eq!(r.r, 1.63, epsilon = 0.01);

        // The false-positive energy dependence of omega_sep.
        let r = r_ratio(&BipartiteState::omega_sep(), Energy::new(0.01).unwrap()).unwrap();
        assert_abs_diff_eq!(r.r, 2.70, epsilon = 0.02);
    }

    #[test]
    fn phi_minus_ratio_matches_mix_ratio() {
        // R(|Phi->) = (1 + beta^2)/(1 - beta^2) = R(omega_mix): the classic
        // false positive.
        let a = r_ratio(&BipartiteState::phi_minus(), E1).unwrap();
        let b = r_ratio(&BipartiteState::omega_mix(), E1).unwrap();
        assert_abs_diff_eq!(a.r, b.r, epsilon = 1e-6);
        let beta = crate::kinematics::alpha_beta(E1, a.theta_a).unwrap().1;
        assert_abs_diff_eq!(
            a.r,
            (1.0 + beta * beta) / (1.0 - beta * beta),
            epsilon = 1e-6
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn chsh_traces_match_closed_form(beta in 0.0f64..1.0, phi in 0.0f64..std::f64::consts::PI) {
            let state = BipartiteState::phi_minus();
            let s = chsh(&state, beta, beta, &BellSettings::bell_test_angles(phi)).unwrap();
            let want = chsh_phi_minus_closed_form(beta, phi);
            prop_assert!((s - want).abs() < 1e-12);
            prop_assert!(s.abs() <= 2.0 * std::f64::consts::SQRT_2 * beta * beta + 1e-12);
        }

        #[test]
        fn expectations_bounded_probabilities_sum(
            beta_a in 0.0f64..1.0,
            beta_b in 0.0f64..1.0,
            pa in 0.0f64..std::f64::consts::PI,
            pb in 0.0f64..std::f64::consts::PI,
            which in 0usize..4,
        ) {
            let state = &standard_states()[which];
            let pair_a = FilteredPair::from_beta_phi(beta_a, pa).unwrap();
            let pair_b = FilteredPair::from_beta_phi(beta_b, pb).unwrap();
            let mut total = 0.0;
            for oa in [Outcome::Plus, Outcome::Minus] {
                for ob in [Outcome::Plus, Outcome::Minus] {
                    let p = joint_probability(state, &pair_a, oa, &pair_b, ob);
                    prop_assert!((-1e-12..=1.0 + 1e-12).contains(&p));
                    total += p;
                }
            }
            prop_assert!((total - 1.0).abs() < 1e-12);
            let e = expectation(state, &pair_a, &pair_b);
            prop_assert!(e.abs() <= 1.0 + 1e-12);
        }

        #[test]
        fn asymmetric_arms_generalize_the_closed_form(
            beta_a in 0.0f64..1.0,
            beta_b in 0.0f64..1.0,
            pa in 0.0f64..std::f64::consts::PI,
            pb in 0.0f64..std::f64::consts::PI,
        ) {
            // beta^2 -> beta_a beta_b in every |Phi-> closed form.
            let state = BipartiteState::phi_minus();
            let pair_a = FilteredPair::from_beta_phi(beta_a, pa).unwrap();
            let pair_b = FilteredPair::from_beta_phi(beta_b, pb).unwrap();
            let e = expectation(&state, &pair_a, &pair_b);
            let want = -beta_a * beta_b * (2.0 * (pa + pb)).cos();
            prop_assert!((e - want).abs() < 1e-12);
        }
    }

    #[test]
    fn four_outcome_check_at_quarter_angle() {
        // |Phi->, beta = 1, phi_a = phi_b = 0: perfectly anticorrelated in
        // the H/V basis, so p++ = p-- = 0.
        let state = BipartiteState::phi_minus();
        let pair = FilteredPair::from_beta_phi(1.0, 0.0).unwrap();
        let p = joint_probability(&state, &pair, Outcome::Plus, &pair, Outcome::Plus);
        assert_abs_diff_eq!(p, 0.0, epsilon = 1e-15);

        let quarter = FilteredPair::from_beta_phi(1.0, FRAC_PI_4).unwrap();
        let p = joint_probability(&state, &quarter, Outcome::Plus, &quarter, Outcome::Plus);
        assert_abs_diff_eq!(p, 0.5, epsilon = 1e-14);
    }
}
