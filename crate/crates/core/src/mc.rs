//! Seeded Monte Carlo verification: dichotomic outcome sampling for
//! empirical CHSH statistics, physical trajectory sampling, and the
//! coincidence-rate arithmetic.
//!
//! Bell statistics sample the exact analytic outcome probabilities rather
//! than simulated trajectories, separating the statistical verification of
//! the joint-probability layer from the kinematic verification of the
//! single-scatter density. All sampling is deterministic for a fixed seed;
//! parallel consumers derive independent sub-streams with
//! [`derive_subseed`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::bell::{joint_probability, BellSettings, BipartiteState};
use crate::error::{Error, Result};
use crate::kinematics::{
    alpha_beta_unchecked, klein_nishina_total_closed_form, scattered_energy_unchecked, Energy,
};
use crate::povm::{FilteredPair, Outcome};

/// SplitMix64 step: maps (seed, index) onto an independent sub-stream seed.
///
/// Shard i of a run seeded with s uses `derive_subseed(s, i)`, so merged
/// tallies are independent of execution order.
pub fn derive_subseed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ (index.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Coincidence tallies N_++, N_+-, N_-+, N_-- of one setting pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct OutcomeCounts {
    pub n_pp: u64,
    pub n_pm: u64,
    pub n_mp: u64,
    pub n_mm: u64,
}

impl OutcomeCounts {
    pub fn total(&self) -> u64 {
        self.n_pp + self.n_pm + self.n_mp + self.n_mm
    }
}

/// Draw `n_pairs` coincidences from the four joint outcome probabilities of
/// a setting pair (phi_a, phi_b) on `state` with per-arm analyzing powers.
///
/// The multinomial draw is decomposed into chained binomials, so the cost is
/// independent of `n_pairs`.
pub fn sample_outcomes(
    state: &BipartiteState,
    beta_a: f64,
    beta_b: f64,
    phi_a: f64,
    phi_b: f64,
    n_pairs: u64,
    seed: u64,
) -> Result<OutcomeCounts> {
    if n_pairs < 1 {
        return Err(Error::ParameterOutOfRange {
            name: "n_pairs",
            value: n_pairs as f64,
            expected: ">= 1",
        });
    }
    let pair_a = FilteredPair::from_beta_phi(beta_a, phi_a)?;
    let pair_b = FilteredPair::from_beta_phi(beta_b, phi_b)?;
    let outcomes = [
        (Outcome::Plus, Outcome::Plus),
        (Outcome::Plus, Outcome::Minus),
        (Outcome::Minus, Outcome::Plus),
        (Outcome::Minus, Outcome::Minus),
    ];
    let probs: Vec<f64> = outcomes
        .iter()
        .map(|&(oa, ob)| joint_probability(state, &pair_a, oa, &pair_b, ob).clamp(0.0, 1.0))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0u64; 4];
    let mut remaining = n_pairs;
    let mut prob_left = 1.0;
    for k in 0..3 {
        if remaining == 0 {
            break;
        }
        let p = (probs[k] / prob_left).clamp(0.0, 1.0);
        let draw = if p >= 1.0 {
            remaining
        } else {
            Binomial::new(remaining, p)
                .expect("probability in range")
                .sample(&mut rng)
        };
        counts[k] = draw;
        remaining -= draw;
        prob_left -= probs[k];
        if prob_left <= 0.0 {
            prob_left = 0.0;
        }
    }
    counts[3] = remaining;
    Ok(OutcomeCounts {
        n_pp: counts[0],
        n_pm: counts[1],
        n_mp: counts[2],
        n_mm: counts[3],
    })
}

/// Empirical correlation (N++ + N-- - N+- - N-+)/N with its standard error
/// sqrt((1 - E^2)/N).
pub fn empirical_expectation(counts: &OutcomeCounts) -> Result<(f64, f64)> {
    let total = counts.total();
    if total == 0 {
        return Err(Error::EmptyCounts);
    }
    let n = total as f64;
    let e = (counts.n_pp as f64 + counts.n_mm as f64
        - counts.n_pm as f64
        - counts.n_mp as f64)
        / n;
    Ok((e, ((1.0 - e * e).max(0.0) / n).sqrt()))
}

/// An empirical CHSH estimate with its per-setting tallies.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EmpiricalChsh {
    pub s: f64,
    pub standard_error: f64,
    /// (E, standard error) per setting pair, in the order
    /// (a,b), (a,b'), (a',b), (a',b').
    pub expectations: [(f64, f64); 4],
    pub counts: [OutcomeCounts; 4],
}

/// Estimate the CHSH function from four independent sampling runs, one per
/// setting pair, each on a sub-stream derived from `seed` by setting index.
pub fn empirical_chsh(
    state: &BipartiteState,
    beta_a: f64,
    beta_b: f64,
    settings: &BellSettings,
    n_pairs_per_setting: u64,
    seed: u64,
) -> Result<EmpiricalChsh> {
    let pairs = [
        (settings.phi_a, settings.phi_b),
        (settings.phi_a, settings.phi_b_prime),
        (settings.phi_a_prime, settings.phi_b),
        (settings.phi_a_prime, settings.phi_b_prime),
    ];
    let mut counts = [OutcomeCounts { n_pp: 0, n_pm: 0, n_mp: 0, n_mm: 0 }; 4];
    let mut expectations = [(0.0, 0.0); 4];
    for (i, &(pa, pb)) in pairs.iter().enumerate() {
        let tally = sample_outcomes(
            state,
            beta_a,
            beta_b,
            pa,
            pb,
            n_pairs_per_setting,
            derive_subseed(seed, i as u64),
        )?;
        expectations[i] = empirical_expectation(&tally)?;
        counts[i] = tally;
    }
    let s = expectations[0].0 - expectations[1].0 + expectations[2].0 + expectations[3].0;
    let standard_error = expectations
        .iter()
        .map(|(_, se)| se * se)
        .sum::<f64>()
        .sqrt();
    Ok(EmpiricalChsh { s, standard_error, expectations, counts })
}

/// One sampled scatter: direction and the energy after the scatter.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TrajectoryStep {
    pub theta: f64,
    pub phi: f64,
    pub energy: Energy,
}

/// A sampled N-scatter trajectory of an unpolarized photon.
///
/// The terminal weight is the product of single-scatter total cross sections
/// at the pre-scatter energies, which makes every sample an unbiased
/// estimator of sigma_tot^(N): each step draws from its normalized
/// single-scatter density, so the normalizations multiply back in.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TrajectorySample {
    pub steps: Vec<TrajectoryStep>,
    pub weight: f64,
}

/// Sample one unpolarized N-scatter trajectory by per-step rejection from
/// the Klein-Nishina density at the propagated energy.
pub fn sample_trajectory(e0: Energy, n_scatters: usize, seed: u64) -> Result<TrajectorySample> {
    if n_scatters < 1 {
        return Err(Error::InvalidScatterCount);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_trajectory_with(&mut rng, e0, n_scatters)
}

/// As [`sample_trajectory`], drawing from a caller-owned stream.
pub fn sample_trajectory_with<R: Rng>(
    rng: &mut R,
    e0: Energy,
    n_scatters: usize,
) -> Result<TrajectorySample> {
    if n_scatters < 1 {
        return Err(Error::InvalidScatterCount);
    }
    let mut steps = Vec::with_capacity(n_scatters);
    let mut e = e0.value();
    let mut weight = 1.0;
    for _ in 0..n_scatters {
        let envelope = rejection_envelope(e);
        let (theta, phi) = loop {
            // Uniform-on-sphere proposal.
            let cos_theta: f64 = rng.gen_range(-1.0..=1.0);
            let theta = cos_theta.acos();
            let phi = rng.gen_range(0.0..std::f64::consts::TAU);
            let density = alpha_beta_unchecked(e, theta).0;
            if density > envelope {
                return Err(Error::EnvelopeViolation { density, envelope });
            }
            if rng.gen_range(0.0..1.0) < density / envelope {
                break (theta, phi);
            }
        };
        weight *= klein_nishina_total_closed_form(Energy::new(e).expect("positive"));
        e = scattered_energy_unchecked(e, theta);
        steps.push(TrajectoryStep {
            theta,
            phi,
            energy: Energy::new(e).expect("propagated energy stays positive"),
        });
    }
    Ok(TrajectorySample { steps, weight })
}

/// Envelope constant for rejection sampling: 1.05 times the grid maximum of
/// the unpolarized angular density alpha(E, theta).
fn rejection_envelope(e: f64) -> f64 {
    let mut max = 0.0f64;
    for i in 0..=512 {
        let theta = std::f64::consts::PI * i as f64 / 512.0;
        max = max.max(alpha_beta_unchecked(e, theta).0);
    }
    1.05 * max
}

/// Monte Carlo estimate of sigma_tot^(N) with standard error, from the
/// terminal weights of sampled trajectories. Serves as an independent check
/// on the quadrature route and covers chain lengths beyond it.
pub fn estimate_total_cross_section(
    n: usize,
    e0: Energy,
    n_samples: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if n_samples < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "n_samples",
            value: n_samples as f64,
            expected: ">= 2",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_samples {
        let w = sample_trajectory_with(&mut rng, e0, n)?.weight;
        sum += w;
        sum_sq += w * w;
    }
    let nf = n_samples as f64;
    let mean = sum / nf;
    let var = (sum_sq / nf - mean * mean).max(0.0) / (nf - 1.0);
    Ok((mean, var.sqrt()))
}

/// Breakdown of the coincidence-rate estimate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CoincidenceEstimate {
    /// Squared per-photon double-scatter acceptance, C2 = C1^2.
    pub c2: f64,
    /// Solid-angle fraction of the emission cone, 1 - cos(half angle).
    pub cap_fraction: f64,
    /// Coincidence counts per source decay.
    pub rate: f64,
}

/// Coincidence rate per source decay: C1^2 x (1 - cos(cone half-angle)).
///
/// This reconstructs the published estimate arithmetically: the per-photon
/// double-scatter acceptance squared for the pair, times the isotropic
/// solid-angle fraction of the accepted emission cone. The acceptance itself
/// comes from detector-geometry simulation and is supplied by the caller, so
/// agreement is expected at order-of-magnitude level only.
pub fn coincidence_rate_estimate(c1: f64, cone_half_angle: f64) -> Result<CoincidenceEstimate> {
    if !(0.0..1.0).contains(&c1) || c1 == 0.0 {
        return Err(Error::ParameterOutOfRange {
            name: "c1",
            value: c1,
            expected: "(0, 1)",
        });
    }
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&cone_half_angle) || cone_half_angle == 0.0 {
        return Err(Error::ParameterOutOfRange {
            name: "cone_half_angle",
            value: cone_half_angle,
            expected: "(0, pi/2)",
        });
    }
    let c2 = c1 * c1;
    let cap_fraction = 1.0 - cone_half_angle.cos();
    Ok(CoincidenceEstimate { c2, cap_fraction, rate: c2 * cap_fraction })
}
