//! Command-line front end: config loading, flag overrides, and one
//! subcommand per experiment family.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::experiment::{self, ExperimentConfig};
use crate::models::{self, Algorithm};
use crate::noise::{self, NoiseSpec};
use crate::pauli::Pauli;
use crate::sequences;

#[derive(Debug, Parser)]
#[command(
    name = "aqc-dd",
    version,
    about = "Decoupling-protected adiabatic sweeps under classical Gaussian noise"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance-versus-run-time curves for the configured sequences.
    Run(RunArgs),
    /// Pulse-interval sweep at fixed CDD level (T = 4^level · τ).
    SweepBetaTau(RunArgs),
    /// CDD-versus-QDD comparison at matched pulse counts.
    Compare(RunArgs),
    /// Spectral-gap scan of a model.
    Gap(GapArgs),
    /// Statistical validation of the noise generator.
    ValidateNoise(ValidateNoiseArgs),
    /// Print a pulse schedule in the export format.
    ScheduleDump(ScheduleDumpArgs),
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// TOML config file; flags override file values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_parser = parse_algorithm)]
    pub algorithm: Option<Algorithm>,
    #[arg(long)]
    pub n_logical: Option<usize>,
    /// Marked bit string (Grover).
    #[arg(long)]
    pub marked: Option<String>,
    /// Comma-separated sequence labels (ideal, faulty, cdd1, udd2, qdd15).
    #[arg(long, value_delimiter = ',')]
    pub sequences: Option<Vec<String>>,
    /// Run times in units of the inverse minimum gap.
    #[arg(long, value_delimiter = ',')]
    pub t_grid: Option<Vec<f64>>,
    /// Cutoff β as a fraction of the minimum gap.
    #[arg(long)]
    pub beta_ratio: Option<f64>,
    /// Noise standard deviation as a fraction of the minimum gap.
    #[arg(long)]
    pub sigma_ratio: Option<f64>,
    #[arg(long, short = 'R')]
    pub realizations: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Integrator step override.
    #[arg(long)]
    pub max_step: Option<f64>,
    #[arg(long)]
    pub min_steps_per_segment: Option<usize>,
    /// Worker threads (0 = machine parallelism).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Cutoff grid for sweep/compare, as fractions of the gap.
    #[arg(long, value_delimiter = ',')]
    pub betas: Option<Vec<f64>>,
    /// Pulse intervals (units of the inverse gap) for the sweep.
    #[arg(long, value_delimiter = ',')]
    pub taus: Option<Vec<f64>>,
    /// CDD level for sweep/compare.
    #[arg(long)]
    pub level: Option<u32>,
    /// Per-axis UDD order for the QDD side of compare.
    #[arg(long)]
    pub qdd_order: Option<u32>,
    /// Output directory for records.csv and manifest.toml.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
}

fn parse_algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    match s.to_ascii_lowercase().as_str() {
        "grover" => Ok(Algorithm::Grover),
        "twosat" | "2sat" => Ok(Algorithm::TwoSat),
        other => Err(format!("unknown algorithm '{other}' (grover|twosat)")),
    }
}

#[derive(Debug, Args)]
pub struct GapArgs {
    #[arg(long, value_parser = parse_algorithm, default_value = "grover")]
    pub algorithm: Algorithm,
    #[arg(long, default_value_t = 2)]
    pub n_logical: usize,
    #[arg(long, default_value = "11")]
    pub marked: String,
    #[arg(long, default_value_t = 1001)]
    pub grid_points: usize,
    /// Optional CSV output of the (s, gap) samples.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateNoiseArgs {
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, short = 'R', default_value_t = 1500)]
    pub realizations: usize,
    /// Realization length; defaults to 50/β.
    #[arg(long)]
    pub duration: Option<f64>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Amplitude multiplier (values other than 1 are negative controls
    /// and should fail the checks).
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
}

#[derive(Debug, Args)]
pub struct ScheduleDumpArgs {
    /// cdd | udd | qdd | none
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub level: Option<u32>,
    #[arg(long)]
    pub order: Option<u32>,
    /// Inner,outer orders for qdd.
    #[arg(long, value_delimiter = ',')]
    pub orders: Option<Vec<u32>>,
    #[arg(long, default_value_t = 1.0)]
    pub total_time: f64,
    #[arg(long, default_value_t = 4)]
    pub qubits: usize,
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => run(args),
        Command::SweepBetaTau(args) => sweep_beta_tau(args),
        Command::Compare(args) => compare(args),
        Command::Gap(args) => gap(args),
        Command::ValidateNoise(args) => validate_noise(args),
        Command::ScheduleDump(args) => schedule_dump(args),
    }
}

/// Builds the effective config: file values (if any) with flag overrides.
pub fn effective_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            toml::from_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => ExperimentConfig::default_for(args.algorithm.unwrap_or(Algorithm::Grover)),
    };
    if let Some(algorithm) = args.algorithm {
        if args.config.is_none() && args.t_grid.is_none() {
            // keep the per-algorithm default grid
            config = ExperimentConfig {
                algorithm,
                ..ExperimentConfig::default_for(algorithm)
            };
        } else {
            config.algorithm = algorithm;
        }
    }
    if let Some(v) = args.n_logical {
        config.n_logical = v;
    }
    if let Some(v) = &args.marked {
        config.marked = v.clone();
    }
    if let Some(v) = &args.sequences {
        config.sequences = v.clone();
    }
    if let Some(v) = &args.t_grid {
        config.t_grid = v.clone();
    }
    if let Some(v) = args.beta_ratio {
        config.beta_over_gap = v;
    }
    if let Some(v) = args.sigma_ratio {
        config.sigma_over_gap = v;
    }
    if let Some(v) = args.realizations {
        config.realizations = v;
    }
    if let Some(v) = args.seed {
        config.master_seed = v;
    }
    if args.max_step.is_some() {
        config.max_step = args.max_step;
    }
    if let Some(v) = args.min_steps_per_segment {
        config.min_steps_per_segment = v;
    }
    if let Some(v) = args.workers {
        config.workers = v;
    }
    if let Some(v) = &args.betas {
        config.betas_over_gap = v.clone();
    }
    if let Some(v) = &args.taus {
        config.tau_grid = v.clone();
    }
    if let Some(v) = args.level {
        config.cdd_level = v;
    }
    if let Some(v) = args.qdd_order {
        config.qdd_order = v;
    }
    Ok(config)
}

fn run(args: RunArgs) -> Result<()> {
    let config = effective_config(&args)?;
    let records = experiment::distance_curve(&config)?;
    experiment::persist(&config, "run", &records, &args.out)?;
    for seq in &config.sequences {
        let best = records
            .iter()
            .filter(|r| &r.sequence == seq)
            .min_by(|a, b| a.d_mean.total_cmp(&b.d_mean));
        if let Some(r) = best {
            println!(
                "{seq}: min D = {:.4} at T = {}/gap",
                r.d_mean, r.t_over_invgap
            );
        }
    }
    println!("wrote {}", args.out.join("records.csv").display());
    Ok(())
}

fn sweep_beta_tau(args: RunArgs) -> Result<()> {
    let config = effective_config(&args)?;
    let (records, optima) = experiment::sweep_beta_tau(&config)?;
    experiment::persist(&config, "sweep-beta-tau", &records, &args.out)?;
    for opt in &optima {
        println!(
            "beta = {} gap: min D = {:.4} at tau = {}/gap",
            opt.beta_over_gap, opt.min_d, opt.tau_opt_over_invgap
        );
    }
    println!("wrote {}", args.out.join("records.csv").display());
    Ok(())
}

fn compare(args: RunArgs) -> Result<()> {
    let config = effective_config(&args)?;
    let records = experiment::compare_cdd_qdd(&config)?;
    experiment::persist(&config, "compare", &records, &args.out)?;
    let labels: Vec<String> = {
        let mut seen = Vec::new();
        for r in &records {
            if !seen.contains(&r.sequence) {
                seen.push(r.sequence.clone());
            }
        }
        seen
    };
    for label in labels {
        let ds: Vec<f64> = records
            .iter()
            .filter(|r| r.sequence == label)
            .map(|r| r.d_mean)
            .collect();
        let mean = ds.iter().sum::<f64>() / ds.len() as f64;
        println!("{label}: grid-mean D = {mean:.4} over {} points", ds.len());
    }
    println!("wrote {}", args.out.join("records.csv").display());
    Ok(())
}

fn gap(args: GapArgs) -> Result<()> {
    let model = match args.algorithm {
        Algorithm::Grover => {
            let marked: Vec<bool> = args
                .marked
                .chars()
                .map(|c| c == '1')
                .collect();
            models::AdiabaticModel::grover(args.n_logical, marked, 1.0)?
        }
        Algorithm::TwoSat => models::AdiabaticModel::twosat(args.n_logical, 1.0)?,
    };
    let profile = models::gap_scan(&model, args.grid_points)?;
    println!("algorithm = {}", args.algorithm.label());
    println!("n_logical = {}", args.n_logical);
    println!("min_gap = {}", profile.min_gap);
    println!("argmin_s = {}", profile.argmin);
    if let Some(path) = &args.out {
        let mut out = String::from("s,gap\n");
        for (s, g) in &profile.samples {
            out.push_str(&format!("{s},{g}\n"));
        }
        std::fs::write(path, out)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn validate_noise(args: ValidateNoiseArgs) -> Result<()> {
    if args.realizations < 2 {
        return Err(Error::input(format!(
            "validate-noise needs at least 2 realizations, got {} \
             (usage: --realizations <R>)",
            args.realizations
        )));
    }
    let beta = args.beta;
    let duration = args.duration.unwrap_or(50.0 / beta);
    let spec = NoiseSpec::new(beta, 1, duration, args.seed)?.with_amplitude(args.amplitude);
    let realizations: Vec<_> = (0..args.realizations as u64)
        .map(|r| noise::sample_realization(&spec, r))
        .collect::<Result<_>>()?;

    let mut checks = Vec::new();

    // pooled variance against C(0) = β²/√(2π)
    let c0 = noise::autocorrelation(0.0, beta);
    let mut var = 0.0;
    let mut count = 0.0;
    for r in &realizations {
        for &v in r.channel(0) {
            var += v * v;
            count += 1.0;
        }
    }
    var /= count;
    checks.push(Check {
        name: "variance",
        passed: (var - c0).abs() <= 0.05 * c0,
        detail: format!("measured {var:.6e}, expected {c0:.6e} (tol 5%)"),
    });

    // PSD against S(ω) for ω ≤ 2β
    let psd = noise::estimate_psd(&realizations, 0)?;
    let mut worst: f64 = 0.0;
    for &(w, s) in psd.iter().filter(|&&(w, _)| w <= 2.0 * beta) {
        let expect = noise::spectral_density(w, beta);
        worst = worst.max((s - expect).abs() / expect);
    }
    checks.push(Check {
        name: "psd",
        passed: worst <= 0.10,
        detail: format!("worst relative deviation {:.1}% for ω ≤ 2β (tol 10%)", 100.0 * worst),
    });

    // Parseval: (1/√(2π)) ∫ S dω returns C(0)
    let g = realizations[0].grid_len();
    let span = g as f64 * realizations[0].grid_step();
    let d_omega = 2.0 * std::f64::consts::PI / span;
    let integral: f64 = psd
        .iter()
        .enumerate()
        .map(|(k, &(_, s))| if k == 0 || k == g / 2 { s } else { 2.0 * s })
        .sum::<f64>()
        * d_omega
        / (2.0 * std::f64::consts::PI).sqrt();
    checks.push(Check {
        name: "parseval",
        passed: (integral - c0).abs() <= 0.05 * c0,
        detail: format!("PSD integral {integral:.6e}, C(0) {c0:.6e} (tol 5%)"),
    });

    // Gaussian moments on pooled standardized samples
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    for r in &realizations {
        for &v in r.channel(0) {
            m3 += v.powi(3);
            m4 += v.powi(4);
        }
    }
    let skew = m3 / count / var.powf(1.5);
    let kurt = m4 / count / (var * var) - 3.0;
    checks.push(Check {
        name: "moments",
        passed: skew.abs() < 0.1 && kurt.abs() < 0.2,
        detail: format!("skew {skew:.4}, excess kurtosis {kurt:.4} (tol 0.1 / 0.2)"),
    });

    // stationarity: lagged autocovariance against C(k·h) up to 3/β
    let h = realizations[0].grid_step();
    let max_lag = ((3.0 / beta / h) as usize).min(g - 1);
    let mut worst_lag = 0.0_f64;
    for lag in [max_lag / 4, max_lag / 2, max_lag].iter().filter(|&&l| l > 0) {
        let mut acc = 0.0;
        let mut pairs = 0.0;
        for r in &realizations {
            let x = r.channel(0);
            for i in 0..x.len() - lag {
                acc += x[i] * x[i + lag];
                pairs += 1.0;
            }
        }
        let expect = noise::autocorrelation(*lag as f64 * h, beta);
        worst_lag = worst_lag.max((acc / pairs - expect).abs() / c0);
    }
    checks.push(Check {
        name: "stationarity",
        passed: worst_lag <= 0.05,
        detail: format!("worst lag deviation {:.1}% of C(0) (tol 5%)", 100.0 * worst_lag),
    });

    let mut failed = Vec::new();
    for check in &checks {
        println!(
            "{} {}: {}",
            if check.passed { "PASS" } else { "FAIL" },
            check.name,
            check.detail
        );
        if !check.passed {
            failed.push(check.name);
        }
    }
    if !failed.is_empty() {
        return Err(Error::StatisticalValidation(format!(
            "{} of {} noise checks failed: {}",
            failed.len(),
            checks.len(),
            failed.join(", ")
        )));
    }
    Ok(())
}

fn schedule_dump(args: ScheduleDumpArgs) -> Result<()> {
    let schedule = match args.family.to_ascii_lowercase().as_str() {
        "none" => sequences::free_schedule(args.qubits, args.total_time),
        "cdd" => {
            let level = args
                .level
                .ok_or_else(|| Error::input("cdd needs --level"))?;
            sequences::cdd_schedule(args.qubits, level, args.total_time)
        }
        "udd" => {
            let order = args
                .order
                .ok_or_else(|| Error::input("udd needs --order"))?;
            sequences::udd_schedule(args.qubits, order, Pauli::X, args.total_time)
        }
        "qdd" => {
            let orders = args
                .orders
                .as_ref()
                .ok_or_else(|| Error::input("qdd needs --orders M1,M2"))?;
            if orders.len() != 2 {
                return Err(Error::input("qdd needs exactly two orders".to_string()));
            }
            sequences::qdd_schedule(args.qubits, orders[0], orders[1], args.total_time)
        }
        other => return Err(Error::input(format!("unknown family '{other}'"))),
    };
    print!("{}", sequences::export_schedule(&schedule));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_overrides_apply() {
        let args = RunArgs {
            algorithm: Some(Algorithm::TwoSat),
            realizations: Some(5),
            seed: Some(123),
            sequences: Some(vec!["cdd1".into()]),
            ..RunArgs::default()
        };
        let config = effective_config(&args).unwrap();
        assert_eq!(config.algorithm, Algorithm::TwoSat);
        assert_eq!(config.realizations, 5);
        assert_eq!(config.master_seed, 123);
        assert_eq!(config.sequences, vec!["cdd1".to_string()]);
        // per-algorithm default grid kept when no explicit grid given
        assert!(config.t_grid.contains(&12.5));
    }

    #[test]
    fn config_file_roundtrip() {
        let config = ExperimentConfig::default_for(Algorithm::TwoSat);
        let text = toml::to_string(&config).unwrap();
        let parsed: ExperimentConfig = toml::from_str(&text).unwrap();
        assert_eq!(parsed.algorithm, Algorithm::TwoSat);
        assert_eq!(parsed.t_grid, config.t_grid);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let text = "algorithm = \"grover\"\nnot_a_field = 3\n";
        let parsed: std::result::Result<ExperimentConfig, _> = toml::from_str(text);
        assert!(parsed.is_err());
    }

    #[test]
    fn validate_noise_refuses_single_realization() {
        let args = ValidateNoiseArgs {
            beta: 1.0,
            realizations: 1,
            duration: None,
            seed: 1,
            amplitude: 1.0,
        };
        assert!(matches!(validate_noise(args), Err(Error::Input(_))));
    }
}
