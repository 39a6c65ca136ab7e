//! Maximization of the chain analyzing power beta(thetas) over co-planar
//! polar-angle vectors.
//!
//! The landscape is smooth with a nested structure: the optimal N-chain
//! starts with a slightly smaller first angle than the optimal (N-1)-chain.
//! Warm starts exploit that, with seeded jittered restarts guarding against
//! a bad basin and a quasi-Newton polish ensuring a small gradient at the
//! reported optimum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::coplanar_summary;
use crate::error::{Error, Result};
use crate::kinematics::Energy;
use crate::mc::derive_subseed;
use crate::optim;

const THETA_LO: f64 = 1e-4;
const THETA_HI: f64 = std::f64::consts::PI - 1e-4;

/// Configuration of a beta maximization run.
#[derive(Debug, Clone)]
pub struct OptimizationConfig {
    /// Chain length N >= 1.
    pub n: usize,
    pub e0: Energy,
    /// Convergence threshold on beta agreement between restarts.
    pub tolerance: f64,
    /// Budget of objective evaluations across all restarts.
    pub max_evals: u64,
    /// Jittered restarts around the warm start.
    pub restarts: u32,
    /// Seed for the restart jitter.
    pub seed: u64,
}

impl OptimizationConfig {
    pub fn new(n: usize, e0: Energy) -> Self {
        Self {
            n,
            e0,
            tolerance: 1e-8,
            max_evals: 2_000_000,
            restarts: 4,
            seed: 0,
        }
    }
}

/// A located optimum and the derived measurement figures of merit.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct OptimumRecord {
    pub thetas_opt: Vec<f64>,
    pub beta_opt: f64,
    /// 2 sqrt(2) beta^2, the CHSH maximum at the Bell-test angles.
    pub max_abs_s: f64,
    /// (1 + beta)/2, fidelity to the aligned linear projector.
    pub fidelity: f64,
    /// (1 - beta)/2, trace distance to the aligned linear projector.
    pub trace_distance: f64,
    /// Photon energy reaching the detector.
    pub e_final: Energy,
}

impl OptimumRecord {
    fn from_thetas(e0: Energy, thetas: Vec<f64>) -> Self {
        let summary = coplanar_summary(e0, &thetas).expect("angles stay in range");
        let beta = summary.beta;
        Self {
            thetas_opt: thetas,
            beta_opt: beta,
            max_abs_s: 2.0 * std::f64::consts::SQRT_2 * beta * beta,
            fidelity: 0.5 * (1.0 + beta),
            trace_distance: 0.5 * (1.0 - beta),
            e_final: summary.final_energy(),
        }
    }
}

fn beta_of(e0: Energy, thetas: &[f64]) -> f64 {
    coplanar_summary(e0, thetas).expect("angles in range").beta
}

/// Logistic map from unconstrained coordinates onto (THETA_LO, THETA_HI).
fn to_theta(y: f64) -> f64 {
    THETA_LO + (THETA_HI - THETA_LO) / (1.0 + (-y).exp())
}

fn to_y(theta: f64) -> f64 {
    let t = ((theta - THETA_LO) / (THETA_HI - THETA_LO)).clamp(1e-9, 1.0 - 1e-9);
    (t / (1.0 - t)).ln()
}

/// Maximize beta(thetas) for a co-planar chain of length `config.n`.
///
/// Deterministic for a fixed seed. Errors with the best record found so far
/// if the gradient criterion is not met within the evaluation budget.
pub fn optimize_beta(config: &OptimizationConfig) -> Result<OptimumRecord> {
    if config.n < 1 {
        return Err(Error::InvalidScatterCount);
    }
    let warm = warm_start(config)?;
    refine_from(config, &warm)
}

fn warm_start(config: &OptimizationConfig) -> Result<Vec<f64>> {
    if config.n == 1 {
        // Coarse grid scan, then golden-section refinement.
        let mut best = (0.0, f64::NEG_INFINITY);
        for i in 1..2000 {
            let theta = std::f64::consts::PI * i as f64 / 2000.0;
            let b = beta_of(config.e0, &[theta]);
            if b > best.1 {
                best = (theta, b);
            }
        }
        let step = std::f64::consts::PI / 2000.0;
        let (theta, _) = optim::golden_section_min(
            |t| -beta_of(config.e0, &[t]),
            best.0 - step,
            best.0 + step,
            1e-12,
        );
        return Ok(vec![theta]);
    }
    // Prepend a smaller first angle to the previous optimum, following the
    // nested pattern of the optimal chains.
    let prev = optimize_beta(&OptimizationConfig {
        n: config.n - 1,
        ..config.clone()
    })?;
    let mut thetas = Vec::with_capacity(config.n);
    thetas.push(0.8 * prev.thetas_opt[0]);
    thetas.extend_from_slice(&prev.thetas_opt);
    Ok(thetas)
}

fn refine_from(config: &OptimizationConfig, warm: &[f64]) -> Result<OptimumRecord> {
    let n = config.n;
    let e0 = config.e0;
    let mut evals_used = 0u64;
    let budget = config.max_evals;

    let mut candidates: Vec<Vec<f64>> = vec![warm.to_vec()];
    for restart in 0..config.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_subseed(config.seed, restart as u64));
        let jittered: Vec<f64> = warm
            .iter()
            .map(|&t| (t * rng.gen_range(0.85..1.15)).clamp(0.05, 3.0))
            .collect();
        candidates.push(jittered);
    }

    let mut best: Option<(Vec<f64>, f64)> = None;
    for start in &candidates {
        if evals_used >= budget {
            break;
        }
        let y0: Vec<f64> = start.iter().map(|&t| to_y(t)).collect();
        let objective = |y: &[f64]| {
            let thetas: Vec<f64> = y.iter().map(|&v| to_theta(v)).collect();
            -beta_of(e0, &thetas)
        };
        let nm = optim::nelder_mead(
            objective,
            &y0,
            0.05,
            1e-15,
            (budget - evals_used).min(200_000),
        );
        evals_used += nm.evals;
        let polish = optim::bfgs(objective, &nm.x, 1e-6, 1e-10, 200);
        evals_used += polish.evals;
        let thetas: Vec<f64> = polish.x.iter().map(|&v| to_theta(v)).collect();
        let beta = -polish.fx;
        let better = match &best {
            None => true,
            Some((cur_thetas, cur_beta)) => {
                beta > cur_beta + config.tolerance
                    || ((beta - cur_beta).abs() <= config.tolerance
                        && lexicographically_smaller(&thetas, cur_thetas))
            }
        };
        if better {
            best = Some((thetas, beta));
        }
    }

    let (thetas, _) = best.expect("at least one candidate ran");
    let record = OptimumRecord::from_thetas(e0, thetas);

    // Central-difference gradient of beta at the reported optimum, step
    // 1e-5 rad, must be small in every component.
    let grad = optim::fd_gradient(
        &mut |t: &[f64]| beta_of(e0, t),
        &record.thetas_opt,
        1e-5,
    );
    let grad_max = grad.iter().map(|g| g.abs()).fold(0.0, f64::max);
    if grad_max > 1e-5 * (1.0 + n as f64) {
        return Err(Error::OptimizerDidNotConverge {
            evals: evals_used,
            best: Box::new(record),
        });
    }
    Ok(record)
}

fn lexicographically_smaller(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

/// Optima for N = 1 ..= n_max, each warm-started from the previous row.
pub fn optimum_table(n_max: usize, e0: Energy) -> Result<Vec<OptimumRecord>> {
    if n_max < 1 {
        return Err(Error::InvalidScatterCount);
    }
    let mut records: Vec<OptimumRecord> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let config = OptimizationConfig::new(n, e0);
        let record = if let Some(prev) = records.last() {
            let mut warm = Vec::with_capacity(n);
            warm.push(0.8 * prev.thetas_opt[0]);
            warm.extend_from_slice(&prev.thetas_opt);
            refine_from(&config, &warm)?
        } else {
            optimize_beta(&config)?
        };
        let ascending = record.thetas_opt.windows(2).all(|w| w[0] < w[1]);
        if !ascending {
            log::warn!(
                "optimal angle vector for N = {n} is not strictly increasing: {:?}",
                record.thetas_opt
            );
        }
        records.push(record);
    }
    Ok(records)
}
