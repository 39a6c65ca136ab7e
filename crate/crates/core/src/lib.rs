//! POVM-based Compton polarimetry for annihilation photons.
//!
//! Photon polarization at 511 keV cannot be measured projectively; a Compton
//! polarimeter realizes a non-projective POVM whose sharpness is the
//! analyzing power beta of the scattering chain. This crate implements the
//! full numerical stack around that idea:
//!
//! - [`polarization`]: Stokes vectors, density matrices, Bloch states.
//! - [`kinematics`]: single-scatter Compton quantities and Mueller matrices.
//! - [`chain`]: N-fold scattering chains, block reduction, total cross
//!   sections.
//! - [`povm`]: unfiltered and filtered measurement operators with their
//!   quantum-information metrics.
//! - [`bell`]: bipartite states, CHSH evaluation, and the R-ratio and MUB
//!   witness audits.
//! - [`optimizer`]: maximization of beta over polar-angle vectors.
//! - [`mc`]: seeded Monte Carlo verification of the whole pipeline.
//!
//! Conventions: energies in electron-mass units (1.0 = 511 keV), cross
//! sections in units of r_e^(2N), angles in radians, and all polarization
//! operators in the circular {|R>, |L>} basis.

pub mod bell;
pub mod chain;
pub mod error;
pub mod kinematics;
pub mod math;
pub mod mc;
mod optim;
pub mod optimizer;
pub mod polarization;
pub mod povm;
pub mod quad;

pub use bell::{
    chsh, chsh_phi_minus_closed_form, chsh_scan, expectation, joint_probability, r_ratio,
    standard_states, violation_threshold, BellSettings, BipartiteState, ChshPoint, RRatioReport,
};
pub use chain::{
    chain_mueller, coplanar_summary, nfold_cross_section, povm_normalizer, total_cross_section,
    ChainBlockSummary, ScatterChainSpec,
};
pub use error::{Error, Result};
pub use kinematics::{
    alpha_beta, klein_nishina_density, rotation_matrix, scattered_energy, transition_matrix,
    Energy, MuellerKind, MuellerMatrix, ScatterDirection,
};
pub use mc::{
    coincidence_rate_estimate, empirical_chsh, empirical_expectation, sample_outcomes,
    sample_trajectory, CoincidenceEstimate, EmpiricalChsh, OutcomeCounts, TrajectorySample,
};
pub use optimizer::{optimize_beta, optimum_table, OptimizationConfig, OptimumRecord};
pub use polarization::{
    bloch_state, density_to_stokes, stokes_to_density, BlochAngles, PolarizationDensity,
    StokesVector,
};
pub use povm::{
    fidelity_to_projector, filtered_pair, helstrom_distinguishability, mub_witness_i2,
    povm_from_probes, qsd_success, trace_distance_to_projector, unfiltered_povm, FilteredPair,
    Outcome, PovmElement, PovmScale,
};
