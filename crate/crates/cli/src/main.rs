//! Command-line surface for the Compton-polarimetry library.
//!
//! Subcommands reproduce the reference tables and curves: `tables` for the
//! optimal-angle tables, `chsh-scan` for the Bell curve, `xsec` for total
//! cross sections, `witness` for the R-ratio/MUB/CHSH audit of a bipartite
//! state, `mc` for seeded Monte Carlo tallies, and `optimize` for a single
//! optimum record. Every command writes its data file plus a
//! `<out>.manifest.json` run manifest; data files contain no timestamps, so
//! identical invocations are byte-identical.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure.

mod manifest;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use compton_povm::kinematics::Energy;
use compton_povm::math::{Mat4c, C64};
use compton_povm::{
    bell, chain, mc, mub_witness_i2, optimize_beta, optimum_table, r_ratio, BellSettings,
    BipartiteState, OptimizationConfig, OptimumRecord,
};
use manifest::RunManifest;

/// Historic R-ratio bound: the omega_sep value at annihilation energy.
const R_RATIO_BOUND: f64 = 1.63;
/// Upper edge of the separable band of the two-basis MUB witness.
const I2_SEPARABLE_MAX: f64 = 1.5;
const LHV_BOUND: f64 = 2.0;
const TSIRELSON: f64 = 2.0 * std::f64::consts::SQRT_2;

#[derive(Parser)]
#[command(
    name = "compton-povm",
    version,
    about = "POVM-based Compton polarimetry: tables, Bell curves, cross sections, witness audits, Monte Carlo"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal scattering angles and figures of merit for N = 1..n
    Tables(TablesArgs),
    /// CHSH curve |S(phi)| at the Bell-test angles (0, 2phi, -phi, -3phi)
    ChshScan(ChshScanArgs),
    /// Total N-fold cross sections sigma_tot(N)
    Xsec(XsecArgs),
    /// Witness audit of a bipartite state: R ratio, I2, CHSH verdicts
    Witness(WitnessArgs),
    /// Seeded Monte Carlo CHSH tallies and empirical S
    Mc(McArgs),
    /// Locate the optimal angle vector for one chain length
    Optimize(OptimizeArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct TablesArgs {
    /// Largest chain length N
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=12))]
    n: u32,
    /// Initial photon energy in electron-mass units
    #[arg(long, default_value_t = 1.0)]
    e0: f64,
    #[arg(long, default_value = "tables.csv")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Emit angles in degrees instead of radians
    #[arg(long)]
    degrees: bool,
}

#[derive(Args)]
struct ChshScanArgs {
    /// Chain length whose optimal beta parametrizes the curve
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=12))]
    n: u32,
    /// Analyzing power override; skips the optimizer
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    e0: f64,
    /// Scan start (radians unless --degrees)
    #[arg(long, default_value_t = 0.0)]
    phi_min: f64,
    /// Scan end (radians unless --degrees); default pi
    #[arg(long)]
    phi_max: Option<f64>,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(2..))]
    steps: u32,
    #[arg(long, default_value = "chsh_scan.csv")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    degrees: bool,
}

#[derive(Args)]
struct XsecArgs {
    /// Largest chain length N
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..=10))]
    n: u32,
    #[arg(long, default_value_t = 1.0)]
    e0: f64,
    #[arg(long, default_value = "xsec.json")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct WitnessArgs {
    /// phi_minus | omega_mix | omega_sep | product_hv | path to a JSON 4x4 matrix
    #[arg(long)]
    state: String,
    #[arg(long, default_value_t = 1.0)]
    e0: f64,
    /// Chain length for the CHSH part of the audit
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=12))]
    n: u32,
    #[arg(long, default_value = "witness.json")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct McArgs {
    /// Chain length whose optimal beta drives the measurement
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=12))]
    n: u32,
    /// Bell-test scan parameter (radians unless --degrees); default pi/8
    #[arg(long)]
    phi: Option<f64>,
    /// Analyzing power override; skips the optimizer
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    e0: f64,
    /// Coincidence pairs per setting
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pairs: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = "mc.json")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    degrees: bool,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Chain length N
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=12))]
    n: u32,
    #[arg(long, default_value_t = 1.0)]
    e0: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "optimum.json")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    degrees: bool,
}

enum CliError {
    Usage(String),
    Failure(String),
}

impl From<compton_povm::Error> for CliError {
    fn from(e: compton_povm::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Tables(args) => cmd_tables(args),
        Command::ChshScan(args) => cmd_chsh_scan(args),
        Command::Xsec(args) => cmd_xsec(args),
        Command::Witness(args) => cmd_witness(args),
        Command::Mc(args) => cmd_mc(args),
        Command::Optimize(args) => cmd_optimize(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_energy(e0: f64) -> Result<Energy, CliError> {
    Energy::new(e0).map_err(|e| CliError::Usage(e.to_string()))
}

fn angle_out(value: f64, degrees: bool) -> f64 {
    if degrees {
        value.to_degrees()
    } else {
        value
    }
}

fn angle_in(value: f64, degrees: bool) -> f64 {
    if degrees {
        value.to_radians()
    } else {
        value
    }
}

fn write_output(
    out: &Path,
    bytes: &[u8],
    mut manifest: RunManifest,
) -> Result<(), CliError> {
    std::fs::write(out, bytes)?;
    manifest.record_output(out, bytes);
    let manifest_path = manifest.write(out)?;
    eprintln!("wrote {} and {}", out.display(), manifest_path.display());
    Ok(())
}

fn record_json(record: &OptimumRecord, degrees: bool) -> serde_json::Value {
    json!({
        "n": record.thetas_opt.len(),
        "thetas_opt": record.thetas_opt.iter().map(|&t| angle_out(t, degrees)).collect::<Vec<_>>(),
        "beta": record.beta_opt,
        "max_abs_s": record.max_abs_s,
        "fidelity": record.fidelity,
        "trace_distance": record.trace_distance,
        "e_final": record.e_final.value(),
    })
}

fn resolve_beta(
    beta: Option<f64>,
    n: u32,
    e0: Energy,
    seed: u64,
) -> Result<f64, CliError> {
    match beta {
        Some(b) => {
            if !(0.0..=1.0).contains(&b) {
                return Err(CliError::Usage(format!(
                    "--beta must lie in [0, 1], got {b}"
                )));
            }
            Ok(b)
        }
        None => {
            let config = OptimizationConfig { seed, ..OptimizationConfig::new(n as usize, e0) };
            Ok(optimize_beta(&config)?.beta_opt)
        }
    }
}

fn cmd_tables(args: TablesArgs) -> Result<(), CliError> {
    let e0 = parse_energy(args.e0)?;
    let records = optimum_table(args.n as usize, e0)?;

    let bytes = match args.format {
        Format::Csv => {
            let n_max = args.n as usize;
            let mut csv = String::from("n");
            for j in 1..=n_max {
                csv.push_str(&format!(",theta_{j}"));
            }
            csv.push_str(",beta,max_abs_s,fidelity,trace_distance,e_final\n");
            for record in &records {
                csv.push_str(&record.thetas_opt.len().to_string());
                for j in 0..n_max {
                    match record.thetas_opt.get(j) {
                        Some(&t) => csv.push_str(&format!(",{:.6}", angle_out(t, args.degrees))),
                        None => csv.push(','),
                    }
                }
                csv.push_str(&format!(
                    ",{:.6},{:.6},{:.6},{:.6},{:.6}\n",
                    record.beta_opt,
                    record.max_abs_s,
                    record.fidelity,
                    record.trace_distance,
                    record.e_final.value()
                ));
            }
            csv.into_bytes()
        }
        Format::Json => {
            let rows: Vec<_> = records.iter().map(|r| record_json(r, args.degrees)).collect();
            let doc = json!({
                "e0": args.e0,
                "angle_unit": if args.degrees { "degree" } else { "radian" },
                "rows": rows,
            });
            serde_json::to_vec_pretty(&doc).expect("serializes")
        }
    };

    for record in &records {
        println!(
            "N = {:2}: beta = {:.4}, max|S| = {:.4}, F = {:.4}, D = {:.4}, E_N = {:.4}",
            record.thetas_opt.len(),
            record.beta_opt,
            record.max_abs_s,
            record.fidelity,
            record.trace_distance,
            record.e_final.value()
        );
    }

    let manifest = RunManifest::new(
        "tables",
        json!({"n": args.n, "e0": args.e0, "degrees": args.degrees}),
        None,
    );
    write_output(&args.out, &bytes, manifest)
}

fn cmd_chsh_scan(args: ChshScanArgs) -> Result<(), CliError> {
    let e0 = parse_energy(args.e0)?;
    let beta = resolve_beta(args.beta, args.n, e0, 0)?;
    let phi_min = angle_in(args.phi_min, args.degrees);
    let phi_max = angle_in(args.phi_max.unwrap_or(if args.degrees { 180.0 } else { PI }), args.degrees);
    if phi_max <= phi_min {
        return Err(CliError::Usage(format!(
            "empty scan range [{}, {}]",
            args.phi_min,
            args.phi_max.unwrap_or(PI)
        )));
    }
    let steps = args.steps as usize;
    let phis: Vec<f64> = (0..steps)
        .map(|i| phi_min + (phi_max - phi_min) * i as f64 / (steps - 1) as f64)
        .collect();
    let curve = bell::chsh_scan(beta, &phis)?;

    let peak = curve
        .iter()
        .fold((0.0f64, f64::MIN), |acc, p| if p.abs_s > acc.1 { (p.phi, p.abs_s) } else { acc });
    println!(
        "N = {}, beta = {beta:.4}: max |S| = {:.4} at phi = {:.4}{} (LHV bound {LHV_BOUND}, Tsirelson {TSIRELSON:.4})",
        args.n,
        peak.1,
        angle_out(peak.0, args.degrees),
        if args.degrees { " deg" } else { " rad" },
    );

    let bytes = match args.format {
        Format::Csv => {
            let mut csv = String::from("phi,s,abs_s\n");
            for p in &curve {
                csv.push_str(&format!(
                    "{:.6},{:.6},{:.6}\n",
                    angle_out(p.phi, args.degrees),
                    p.s,
                    p.abs_s
                ));
            }
            csv.into_bytes()
        }
        Format::Json => serde_json::to_vec_pretty(&json!({
            "n": args.n,
            "beta": beta,
            "angle_unit": if args.degrees { "degree" } else { "radian" },
            "lhv_bound": LHV_BOUND,
            "tsirelson": TSIRELSON,
            "points": curve.iter().map(|p| json!({
                "phi": angle_out(p.phi, args.degrees),
                "s": p.s,
                "abs_s": p.abs_s,
            })).collect::<Vec<_>>(),
        }))
        .expect("serializes"),
    };

    let manifest = RunManifest::new(
        "chsh-scan",
        json!({
            "n": args.n, "beta": beta, "e0": args.e0,
            "phi_min": phi_min, "phi_max": phi_max, "steps": args.steps,
            "degrees": args.degrees,
            "reference": {"lhv_bound": LHV_BOUND, "tsirelson": TSIRELSON},
        }),
        None,
    );
    write_output(&args.out, &bytes, manifest)
}

fn cmd_xsec(args: XsecArgs) -> Result<(), CliError> {
    let e0 = parse_energy(args.e0)?;
    let mut rows = Vec::new();
    for n in 1..=args.n as usize {
        let (sigma, error) = chain::total_cross_section_with_accuracy(n, e0)?;
        println!("sigma_tot({n}) = {sigma:.5} r_e^{} (accuracy estimate {error:.1e})", 2 * n);
        rows.push(json!({"n": n, "sigma_tot": sigma, "error_estimate": error}));
    }
    let bytes = match args.format {
        Format::Json => serde_json::to_vec_pretty(&json!({
            "e0": args.e0,
            "unit": "r_e^(2N)",
            "rows": rows,
        }))
        .expect("serializes"),
        Format::Csv => {
            let mut csv = String::from("n,sigma_tot,error_estimate\n");
            for row in &rows {
                csv.push_str(&format!(
                    "{},{:.8},{:.3e}\n",
                    row["n"], row["sigma_tot"].as_f64().unwrap(), row["error_estimate"].as_f64().unwrap()
                ));
            }
            csv.into_bytes()
        }
    };
    let manifest = RunManifest::new("xsec", json!({"n": args.n, "e0": args.e0}), None);
    write_output(&args.out, &bytes, manifest)
}

fn load_state(spec: &str) -> Result<BipartiteState, CliError> {
    match spec {
        "phi_minus" => Ok(BipartiteState::phi_minus()),
        "omega_mix" => Ok(BipartiteState::omega_mix()),
        "omega_sep" => Ok(BipartiteState::omega_sep()),
        "product_hv" => Ok(BipartiteState::product_hv()),
        path => {
            let body = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!(
                    "--state must be a known name or a readable JSON file ({path}: {e})"
                ))
            })?;
            let entries: [[[f64; 2]; 4]; 4] = serde_json::from_str(&body)
                .map_err(|e| CliError::Usage(format!("cannot parse {path} as a 4x4 complex matrix: {e}")))?;
            let mut m = Mat4c::zeros();
            for (i, row) in entries.iter().enumerate() {
                for (j, &[re, im]) in row.iter().enumerate() {
                    m[(i, j)] = C64::new(re, im);
                }
            }
            Ok(BipartiteState::from_matrix(path, m)?)
        }
    }
}

fn cmd_witness(args: WitnessArgs) -> Result<(), CliError> {
    let e0 = parse_energy(args.e0)?;
    let state = load_state(&args.state)?;

    let ratio = r_ratio(&state, e0)?;
    let beta_single = optimize_beta(&OptimizationConfig::new(1, e0))?.beta_opt;
    let i2 = mub_witness_i2(&state, beta_single, beta_single)?;
    let beta_n = optimize_beta(&OptimizationConfig::new(args.n as usize, e0))?.beta_opt;
    let mut max_abs_s = 0.0f64;
    let mut argmax_phi = 0.0;
    for i in 0..2000 {
        let phi = PI * i as f64 / 2000.0;
        let s = bell::chsh(&state, beta_n, beta_n, &BellSettings::bell_test_angles(phi))?;
        if s.abs() > max_abs_s {
            max_abs_s = s.abs();
            argmax_phi = phi;
        }
    }

    let r_flags = ratio.r > R_RATIO_BOUND;
    let i2_flags = !(0.5..=I2_SEPARABLE_MAX).contains(&i2);
    let chsh_violated = max_abs_s > LHV_BOUND;
    println!("state: {}", state.label());
    println!(
        "R ratio          = {:.3} at (theta_a, theta_b) = ({:.3}, {:.3}) rad -> {}",
        ratio.r,
        ratio.theta_a,
        ratio.theta_b,
        if r_flags {
            "exceeds 1.63: the R-ratio heuristic would claim entanglement"
        } else {
            "within the R <= 1.63 band"
        }
    );
    println!(
        "I2 (m = 2 MUBs)  = {:.5} with single-scatter beta = {:.4} -> {}",
        i2,
        beta_single,
        if i2_flags {
            "outside [0.5, 1.5]: MUB witness detects entanglement"
        } else {
            "inside the separable band [0.5, 1.5]: inconclusive"
        }
    );
    println!(
        "CHSH (N = {})     max |S| = {:.4} at phi = {:.4} rad, beta = {:.4} -> {}",
        args.n,
        max_abs_s,
        argmax_phi,
        beta_n,
        if chsh_violated {
            "violates |S| <= 2: entanglement certified"
        } else {
            "no violation"
        }
    );

    let doc = json!({
        "state": state.label(),
        "e0": args.e0,
        "r_ratio": {
            "value": ratio.r,
            "theta_a": ratio.theta_a,
            "theta_b": ratio.theta_b,
            "delta_phi": ratio.delta_phi,
            "bound": R_RATIO_BOUND,
            "flags_entanglement": r_flags,
        },
        "i2": {
            "value": i2,
            "beta": beta_single,
            "separable_band": [0.5, I2_SEPARABLE_MAX],
            "flags_entanglement": i2_flags,
        },
        "chsh": {
            "n": args.n,
            "beta": beta_n,
            "max_abs_s": max_abs_s,
            "argmax_phi": argmax_phi,
            "lhv_bound": LHV_BOUND,
            "violated": chsh_violated,
        },
    });
    let bytes = match args.format {
        Format::Json => serde_json::to_vec_pretty(&doc).expect("serializes"),
        Format::Csv => {
            let mut csv = String::from("quantity,value,flags_entanglement\n");
            csv.push_str(&format!("r_ratio,{:.6},{}\n", ratio.r, r_flags));
            csv.push_str(&format!("i2,{:.6},{}\n", i2, i2_flags));
            csv.push_str(&format!("chsh_max_abs_s,{:.6},{}\n", max_abs_s, chsh_violated));
            csv.into_bytes()
        }
    };
    let manifest = RunManifest::new(
        "witness",
        json!({"state": args.state, "e0": args.e0, "n": args.n}),
        None,
    );
    write_output(&args.out, &bytes, manifest)
}

fn cmd_mc(args: McArgs) -> Result<(), CliError> {
    let e0 = parse_energy(args.e0)?;
    let beta = resolve_beta(args.beta, args.n, e0, 0)?;
    let phi = angle_in(args.phi.unwrap_or(if args.degrees { 22.5 } else { PI / 8.0 }), args.degrees);
    let settings = BellSettings::bell_test_angles(phi);
    let state = BipartiteState::phi_minus();
    let estimate = mc::empirical_chsh(&state, beta, beta, &settings, args.pairs, args.seed)?;
    let analytic = bell::chsh_phi_minus_closed_form(beta, phi);
    let z_vs_lhv = (estimate.s.abs() - LHV_BOUND) / estimate.standard_error;

    println!(
        "S_emp = {:.5} +- {:.5} (analytic {:.5}); |S| z-score vs LHV bound 2: {:.1}",
        estimate.s, estimate.standard_error, analytic, z_vs_lhv
    );

    let doc = json!({
        "n": args.n,
        "beta": beta,
        "phi": phi,
        "pairs_per_setting": args.pairs,
        "seed": args.seed,
        "settings": settings,
        "counts": estimate.counts,
        "expectations": estimate.expectations.iter().map(|&(e, se)| json!({
            "e": e, "standard_error": se,
        })).collect::<Vec<_>>(),
        "s": estimate.s,
        "standard_error": estimate.standard_error,
        "abs_s": estimate.s.abs(),
        "analytic_s": analytic,
        "z_vs_lhv_bound": z_vs_lhv,
    });
    let bytes = match args.format {
        Format::Json => serde_json::to_vec_pretty(&doc).expect("serializes"),
        Format::Csv => {
            let mut csv = String::from("setting,phi_a,phi_b,n_pp,n_pm,n_mp,n_mm,e,standard_error\n");
            let pairs = [
                (settings.phi_a, settings.phi_b),
                (settings.phi_a, settings.phi_b_prime),
                (settings.phi_a_prime, settings.phi_b),
                (settings.phi_a_prime, settings.phi_b_prime),
            ];
            for (i, ((pa, pb), counts)) in pairs.iter().zip(&estimate.counts).enumerate() {
                let (e, se) = estimate.expectations[i];
                csv.push_str(&format!(
                    "{i},{pa:.6},{pb:.6},{},{},{},{},{e:.6},{se:.6}\n",
                    counts.n_pp, counts.n_pm, counts.n_mp, counts.n_mm
                ));
            }
            csv.into_bytes()
        }
    };
    let manifest = RunManifest::new(
        "mc",
        json!({
            "n": args.n, "beta": beta, "phi": phi,
            "pairs": args.pairs, "e0": args.e0,
        }),
        Some(args.seed),
    );
    write_output(&args.out, &bytes, manifest)
}

fn cmd_optimize(args: OptimizeArgs) -> Result<(), CliError> {
    let e0 = parse_energy(args.e0)?;
    let config = OptimizationConfig {
        seed: args.seed,
        ..OptimizationConfig::new(args.n as usize, e0)
    };
    let record = optimize_beta(&config)?;
    println!(
        "N = {}: beta = {:.6}, thetas = [{}] {}",
        args.n,
        record.beta_opt,
        record
            .thetas_opt
            .iter()
            .map(|&t| format!("{:.4}", angle_out(t, args.degrees)))
            .collect::<Vec<_>>()
            .join(", "),
        if args.degrees { "deg" } else { "rad" },
    );
    let doc = record_json(&record, args.degrees);
    let bytes = match args.format {
        Format::Json => serde_json::to_vec_pretty(&doc).expect("serializes"),
        Format::Csv => {
            let mut csv = String::from("n,j,theta_j\n");
            for (j, &t) in record.thetas_opt.iter().enumerate() {
                csv.push_str(&format!("{},{},{:.6}\n", args.n, j + 1, angle_out(t, args.degrees)));
            }
            csv.into_bytes()
        }
    };
    let manifest = RunManifest::new(
        "optimize",
        json!({"n": args.n, "e0": args.e0, "degrees": args.degrees}),
        Some(args.seed),
    );
    write_output(&args.out, &bytes, manifest)
}
