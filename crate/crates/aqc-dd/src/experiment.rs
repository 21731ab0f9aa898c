//! Ensemble orchestration: realization loops, averaged density matrices,
//! distance curves over run time, cutoff and sequence order, and result
//! persistence.
//!
//! All sweep axes are dimensionless, mirroring how the results are
//! reported: run times in units of the inverse minimum gap, the cutoff
//! `β` and the noise strength `σ` as ratios to the gap. Realization `r`
//! of any grid point draws its channels from ChaCha streams
//! `r * 256 + channel + 1` seeded with the master seed, so every single
//! run is reproducible in isolation and sequences are compared on
//! identical noise trajectories.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoding::CodeSpec;
use crate::error::{Error, Result};
use crate::linalg::{self, Operator, StateVector, C64};
use crate::models::{self, AdiabaticModel, Algorithm, EncodedSystem};
use crate::noise::{self, NoiseRealization, NoiseSpec};
use crate::propagation::{run_case, RunMode, StepPolicy};
use crate::sequences::{self, PulseSchedule};

/// One requested evolution variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceKind {
    Ideal,
    Faulty,
    Cdd(u32),
    Udd(u32),
    Qdd(u32, u32),
}

impl SequenceKind {
    /// Parses labels like `ideal`, `faulty`, `cdd3`, `udd2`, `qdd15` (read
    /// as `qdd15,15`) or `qdd1,3`.
    pub fn parse(label: &str) -> Result<SequenceKind> {
        let label = label.trim().to_ascii_lowercase();
        let bad = || Error::Config(format!("unknown sequence '{label}'"));
        if label == "ideal" {
            return Ok(SequenceKind::Ideal);
        }
        if label == "faulty" || label == "cdd0" {
            return Ok(SequenceKind::Faulty);
        }
        if let Some(rest) = label.strip_prefix("cdd") {
            return Ok(SequenceKind::Cdd(rest.parse().map_err(|_| bad())?));
        }
        if let Some(rest) = label.strip_prefix("udd") {
            return Ok(SequenceKind::Udd(rest.parse().map_err(|_| bad())?));
        }
        if let Some(rest) = label.strip_prefix("qdd") {
            let (m1, m2) = match rest.split_once(',') {
                Some((a, b)) => (
                    a.parse().map_err(|_| bad())?,
                    b.parse().map_err(|_| bad())?,
                ),
                None => {
                    let m = rest.parse().map_err(|_| bad())?;
                    (m, m)
                }
            };
            return Ok(SequenceKind::Qdd(m1, m2));
        }
        Err(bad())
    }

    pub fn label(self) -> String {
        match self {
            SequenceKind::Ideal => "ideal".to_string(),
            SequenceKind::Faulty => "faulty".to_string(),
            SequenceKind::Cdd(l) => format!("cdd{l}"),
            SequenceKind::Udd(m) => format!("udd{m}"),
            SequenceKind::Qdd(m1, m2) => format!("qdd{m1},{m2}"),
        }
    }

    /// The `level_or_order` column value.
    pub fn level_or_order(self) -> String {
        match self {
            SequenceKind::Ideal | SequenceKind::Faulty => "0".to_string(),
            SequenceKind::Cdd(l) => l.to_string(),
            SequenceKind::Udd(m) => m.to_string(),
            SequenceKind::Qdd(m1, m2) => format!("{m1};{m2}"),
        }
    }

    pub fn needs_noise(self) -> bool {
        !matches!(self, SequenceKind::Ideal)
    }

    fn schedule(self, n_qubits: usize, total_time: f64) -> Option<PulseSchedule> {
        match self {
            SequenceKind::Ideal | SequenceKind::Faulty => None,
            SequenceKind::Cdd(l) => Some(sequences::cdd_schedule(n_qubits, l, total_time)),
            SequenceKind::Udd(m) => Some(sequences::udd_schedule(
                n_qubits,
                m,
                crate::pauli::Pauli::X,
                total_time,
            )),
            SequenceKind::Qdd(m1, m2) => {
                Some(sequences::qdd_schedule(n_qubits, m1, m2, total_time))
            }
        }
    }
}

/// Everything needed to reproduce an experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub n_logical: usize,
    /// Marked bit string for Grover, most significant bit first.
    pub marked: String,
    /// Sequence labels for distance curves.
    pub sequences: Vec<String>,
    /// Run times in units of the inverse minimum gap.
    pub t_grid: Vec<f64>,
    /// Spectral cutoff as a fraction of the minimum gap.
    pub beta_over_gap: f64,
    /// Per-channel noise standard deviation as a fraction of the gap.
    pub sigma_over_gap: f64,
    /// Realizations per noisy grid point.
    pub realizations: usize,
    pub master_seed: u64,
    /// Integrator step override; the default couples to `β` and `‖H‖`.
    pub max_step: Option<f64>,
    pub min_steps_per_segment: usize,
    /// Worker threads (0 = machine parallelism).
    pub workers: usize,
    /// Cutoff grid for the pulse-interval sweep and sequence comparison.
    pub betas_over_gap: Vec<f64>,
    /// Pulse intervals (units of the inverse gap) for the sweep; the run
    /// time is `4^level · τ`.
    pub tau_grid: Vec<f64>,
    /// CDD level used by the sweep and the comparison.
    pub cdd_level: u32,
    /// UDD order per axis for the QDD side of the comparison.
    pub qdd_order: u32,
}

impl Default for ExperimentConfig {
    fn default() -> ExperimentConfig {
        ExperimentConfig {
            algorithm: Algorithm::Grover,
            n_logical: 2,
            marked: "11".to_string(),
            sequences: vec![
                "ideal".to_string(),
                "faulty".to_string(),
                "cdd1".to_string(),
                "cdd2".to_string(),
                "cdd3".to_string(),
                "cdd4".to_string(),
            ],
            t_grid: (1..=10).map(|k| k as f64).collect(),
            beta_over_gap: 0.2,
            sigma_over_gap: 0.02,
            realizations: 30,
            master_seed: 2012,
            max_step: None,
            min_steps_per_segment: StepPolicy::DEFAULT_MIN_STEPS,
            workers: 0,
            betas_over_gap: vec![0.25, 0.5, 1.0, 2.0],
            tau_grid: vec![0.0125, 0.025, 0.05, 0.1, 0.2, 0.4, 0.8, 1.6],
            cdd_level: 4,
            qdd_order: 15,
        }
    }
}

impl ExperimentConfig {
    /// Defaults tuned per algorithm (the 2-SAT curves extend to longer
    /// normalized run times).
    pub fn default_for(algorithm: Algorithm) -> ExperimentConfig {
        let mut config = ExperimentConfig {
            algorithm,
            ..ExperimentConfig::default()
        };
        if algorithm == Algorithm::TwoSat {
            config.t_grid = vec![2.0, 4.0, 6.0, 9.0, 12.5, 16.0, 20.0, 25.0, 30.0, 35.0, 40.0];
        }
        config
    }

    pub fn marked_bits(&self) -> Result<Vec<bool>> {
        let bits: Result<Vec<bool>> = self
            .marked
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Config(format!(
                    "marked state must be a bit string, got '{}'",
                    self.marked
                ))),
            })
            .collect();
        let bits = bits?;
        if bits.len() != self.n_logical {
            return Err(Error::Config(format!(
                "marked state '{}' does not have {} bits",
                self.marked, self.n_logical
            )));
        }
        Ok(bits)
    }

    pub fn model(&self, total_time: f64) -> Result<AdiabaticModel> {
        match self.algorithm {
            Algorithm::Grover => {
                AdiabaticModel::grover(self.n_logical, self.marked_bits()?, total_time)
            }
            Algorithm::TwoSat => AdiabaticModel::twosat(self.n_logical, total_time),
        }
    }

    pub fn sequence_kinds(&self) -> Result<Vec<SequenceKind>> {
        self.sequences
            .iter()
            .map(|s| SequenceKind::parse(s))
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::Config("realizations must be >= 1".to_string()));
        }
        if self.beta_over_gap <= 0.0 {
            return Err(Error::Config("beta_over_gap must be > 0".to_string()));
        }
        if self.sigma_over_gap < 0.0 {
            return Err(Error::Config("sigma_over_gap must be >= 0".to_string()));
        }
        if self.t_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(
                "t_grid must be strictly increasing".to_string(),
            ));
        }
        if self.n_logical == 0 {
            return Err(Error::Config("n_logical must be >= 1".to_string()));
        }
        Ok(())
    }

    fn run_in_pool<T: Send>(&self, job: impl FnOnce() -> Result<T> + Send) -> Result<T> {
        if self.workers == 0 {
            job()
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.workers)
                .build()
                .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
            pool.install(job)
        }
    }
}

/// One experiment result row.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub sequence: String,
    pub level_or_order: String,
    pub t_over_invgap: f64,
    pub beta_over_gap: f64,
    pub realizations: usize,
    pub d_mean: f64,
    pub d_stderr: f64,
    pub master_seed: u64,
    /// Coarse `max_t ‖H_err(t)‖ · T` regime diagnostic, maximized over
    /// the ensemble (not part of the CSV schema).
    pub noise_strength_max: f64,
    /// Wall time spent on this grid point (not part of the CSV schema).
    pub wall_time_s: f64,
}

/// Mean of the pure-state projectors of an ensemble.
pub fn ensemble_density(states: &[StateVector]) -> Result<Operator> {
    if states.is_empty() {
        return Err(Error::input("ensemble is empty".to_string()));
    }
    let dim = states[0].len();
    let mut rho = Operator::zeros(dim, dim);
    for psi in states {
        rho += linalg::projector(psi);
    }
    rho *= C64::new(1.0 / states.len() as f64, 0.0);
    Ok(rho)
}

/// `max_t ‖H_err(t)‖ · T`: single-qubit error terms act on distinct
/// qubits, so the operator norm is the sum over qubits of the per-qubit
/// field magnitudes.
pub fn noise_strength_diagnostic(realization: &NoiseRealization, total_time: f64) -> f64 {
    let qubits = realization.channels() / 3;
    let mut sup: f64 = 0.0;
    for i in 0..realization.grid_len() {
        let mut norm = 0.0;
        for q in 0..qubits {
            let x = realization.channel(3 * q)[i];
            let y = realization.channel(3 * q + 1)[i];
            let z = realization.channel(3 * q + 2)[i];
            norm += (x * x + y * y + z * z).sqrt();
        }
        sup = sup.max(norm);
    }
    sup * total_time
}

struct PointOutcome {
    d_mean: f64,
    d_stderr: f64,
    noise_strength_max: f64,
}

/// Runs one `(sequence, T)` grid point: `R` realizations, ensemble
/// average, trace-norm distance to the target projector.
fn run_point(
    config: &ExperimentConfig,
    kind: SequenceKind,
    t_phys: f64,
    beta: f64,
    sigma: f64,
) -> Result<PointOutcome> {
    let model = config.model(t_phys)?;
    let spec = CodeSpec::for_logical(config.n_logical)?;
    let system = EncodedSystem::new(model, spec)?;
    let target = models::target_state(system.model(), spec)?;
    let target_proj = linalg::projector(&target);

    let noise_margin = spec.n_physical() as f64 * sigma * (8.0 / std::f64::consts::PI).sqrt();
    let mut policy = StepPolicy::for_run(
        kind.needs_noise().then_some(beta),
        system.hamiltonian_scale() + noise_margin,
    )
    .with_min_steps(config.min_steps_per_segment);
    if let Some(max_step) = config.max_step {
        policy = policy.with_max_step(max_step);
    }

    if !kind.needs_noise() {
        // noise-free evolution is deterministic; one run represents any R
        let psi = run_case(&system, RunMode::Ideal, &policy)?;
        let rho = ensemble_density(std::slice::from_ref(&psi))?;
        return Ok(PointOutcome {
            d_mean: linalg::trace_distance(&rho, &target_proj)?,
            d_stderr: 0.0,
            noise_strength_max: 0.0,
        });
    }

    let schedule = kind.schedule(spec.n_physical(), t_phys);
    let amplitude = sigma / noise::unit_sigma(beta);
    let noise_spec = NoiseSpec::for_run(
        beta,
        spec.n_physical(),
        t_phys,
        config.master_seed,
        amplitude,
        schedule.as_ref().map(PulseSchedule::shortest_interval),
    )?;

    let runs: Result<Vec<(StateVector, f64)>> = (0..config.realizations as u64)
        .into_par_iter()
        .map(|r| {
            let realization = noise::sample_realization(&noise_spec, r)?;
            let strength = noise_strength_diagnostic(&realization, t_phys);
            let mode = match &schedule {
                Some(s) => RunMode::Protected(s, &realization),
                None => RunMode::Faulty(&realization),
            };
            let psi = run_case(&system, mode, &policy).map_err(|e| {
                Error::integrity(format!(
                    "realization {r} (seed {}) of {} at T={t_phys}: {e}",
                    config.master_seed,
                    kind.label()
                ))
            })?;
            Ok((psi, strength))
        })
        .collect();
    let runs = runs?;

    let states: Vec<StateVector> = runs.iter().map(|(psi, _)| psi.clone()).collect();
    let rho = ensemble_density(&states)?;
    let d_mean = linalg::trace_distance(&rho, &target_proj)?;

    let distances: Vec<f64> = states
        .iter()
        .map(|psi| linalg::pure_state_distance(psi, &target))
        .collect();
    let n = distances.len() as f64;
    let mean = distances.iter().sum::<f64>() / n;
    let d_stderr = if distances.len() > 1 {
        let var = distances.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    let noise_strength_max = runs.iter().map(|(_, s)| *s).fold(0.0, f64::max);

    Ok(PointOutcome {
        d_mean,
        d_stderr,
        noise_strength_max,
    })
}

fn record_for(
    config: &ExperimentConfig,
    kind: SequenceKind,
    t_units: f64,
    gap: f64,
    beta_over_gap: f64,
) -> Result<RunRecord> {
    let start = Instant::now();
    let outcome = run_point(
        config,
        kind,
        t_units / gap,
        beta_over_gap * gap,
        config.sigma_over_gap * gap,
    )?;
    Ok(RunRecord {
        algorithm: config.algorithm.label().to_string(),
        sequence: kind.label(),
        level_or_order: kind.level_or_order(),
        t_over_invgap: t_units,
        beta_over_gap,
        realizations: if kind.needs_noise() {
            config.realizations
        } else {
            1
        },
        d_mean: outcome.d_mean,
        d_stderr: outcome.d_stderr,
        master_seed: config.master_seed,
        noise_strength_max: outcome.noise_strength_max,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Minimum gap for the configured model (run time does not matter for
/// the scan).
pub fn config_min_gap(config: &ExperimentConfig) -> Result<f64> {
    models::min_gap(&config.model(1.0)?)
}

/// Distance-versus-run-time curves for every configured sequence.
pub fn distance_curve(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    config.validate()?;
    let kinds = config.sequence_kinds()?;
    let gap = config_min_gap(config)?;
    config.run_in_pool(|| {
        let mut records = Vec::new();
        for &kind in &kinds {
            for &t_units in &config.t_grid {
                records.push(record_for(config, kind, t_units, gap, config.beta_over_gap)?);
            }
        }
        Ok(records)
    })
}

/// Per-cutoff optimum of a pulse-interval sweep.
#[derive(Debug, Clone, Serialize)]
pub struct BetaOptimum {
    pub beta_over_gap: f64,
    pub tau_opt_over_invgap: f64,
    pub min_d: f64,
}

/// Pulse-interval sweep at fixed sequence: for every cutoff in
/// `betas_over_gap`, one curve over `tau_grid` with `T = 4^level · τ`.
pub fn sweep_beta_tau(config: &ExperimentConfig) -> Result<(Vec<RunRecord>, Vec<BetaOptimum>)> {
    config.validate()?;
    if config.tau_grid.is_empty() || config.betas_over_gap.is_empty() {
        return Err(Error::Config("sweep needs tau and beta grids".to_string()));
    }
    let gap = config_min_gap(config)?;
    let kind = SequenceKind::Cdd(config.cdd_level);
    let intervals = 4f64.powi(config.cdd_level as i32);
    config.run_in_pool(|| {
        let mut records = Vec::new();
        let mut optima = Vec::new();
        for &beta_ratio in &config.betas_over_gap {
            let mut best: Option<(f64, f64)> = None;
            for &tau in &config.tau_grid {
                let t_units = intervals * tau;
                let record = record_for(config, kind, t_units, gap, beta_ratio)?;
                match best {
                    Some((_, d)) if d <= record.d_mean => {}
                    _ => best = Some((tau, record.d_mean)),
                }
                records.push(record);
            }
            let (tau_opt, min_d) = best.expect("non-empty tau grid");
            optima.push(BetaOptimum {
                beta_over_gap: beta_ratio,
                tau_opt_over_invgap: tau_opt,
                min_d,
            });
        }
        Ok((records, optima))
    })
}

/// CDD-versus-QDD comparison over a `(β, T)` grid at matched pulse
/// counts, paired on identical noise realizations.
pub fn compare_cdd_qdd(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    config.validate()?;
    let cdd_intervals = 4u64.pow(config.cdd_level);
    let qdd_intervals = (config.qdd_order as u64 + 1).pow(2);
    if cdd_intervals != qdd_intervals {
        return Err(Error::Config(format!(
            "pulse counts not matched: 4^{} = {cdd_intervals} vs ({}+1)^2 = {qdd_intervals}",
            config.cdd_level, config.qdd_order
        )));
    }
    let gap = config_min_gap(config)?;
    let kinds = [
        SequenceKind::Cdd(config.cdd_level),
        SequenceKind::Qdd(config.qdd_order, config.qdd_order),
    ];
    config.run_in_pool(|| {
        let mut records = Vec::new();
        for &beta_ratio in &config.betas_over_gap {
            for &t_units in &config.t_grid {
                for kind in kinds {
                    records.push(record_for(config, kind, t_units, gap, beta_ratio)?);
                }
            }
        }
        Ok(records)
    })
}

/// CSV header shared by every persisted result table.
pub const CSV_HEADER: &str =
    "algorithm,sequence,level_or_order,T_over_invgap,beta_over_gap,R,D_mean,D_stderr,master_seed";

/// Writes records as comma-separated text with the fixed header row.
pub fn write_csv(records: &[RunRecord], out: &mut impl Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.algorithm,
            r.sequence,
            r.level_or_order,
            r.t_over_invgap,
            r.beta_over_gap,
            r.realizations,
            r.d_mean,
            r.d_stderr,
            r.master_seed
        )?;
    }
    Ok(())
}

/// Writes the run manifest: tool version, effective config echo, wall
/// times. Everything needed to reproduce the records exactly.
pub fn write_manifest(
    config: &ExperimentConfig,
    command: &str,
    records: &[RunRecord],
    out: &mut impl Write,
) -> Result<()> {
    let header = format!(
        "version = {:?}\ncommand = {:?}\n",
        env!("CARGO_PKG_VERSION"),
        command
    );
    let config_echo = toml::to_string_pretty(config)
        .map_err(|e| Error::Config(format!("manifest serialization: {e}")))?;
    let total: f64 = records.iter().map(|r| r.wall_time_s).sum();
    write!(out, "{header}")?;
    writeln!(out, "\n[config]")?;
    write!(out, "{config_echo}")?;
    writeln!(out, "\n[timing]")?;
    writeln!(out, "total_wall_s = {total}")?;
    writeln!(out, "points = {}", records.len())?;
    writeln!(out, "\n[diagnostics]")?;
    let max_strength = records
        .iter()
        .map(|r| r.noise_strength_max)
        .fold(0.0, f64::max);
    writeln!(out, "max_noise_strength = {max_strength}")?;
    Ok(())
}

/// Convenience wrapper writing `records.csv` and `manifest.toml` into a
/// directory.
pub fn persist(
    config: &ExperimentConfig,
    command: &str,
    records: &[RunRecord],
    dir: &Path,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut csv = std::fs::File::create(dir.join("records.csv"))?;
    write_csv(records, &mut csv)?;
    let mut manifest = std::fs::File::create(dir.join("manifest.toml"))?;
    write_manifest(config, command, records, &mut manifest)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tiny_config() -> ExperimentConfig {
        ExperimentConfig {
            sequences: vec!["ideal".into(), "faulty".into(), "cdd1".into()],
            t_grid: vec![1.0, 2.0],
            realizations: 3,
            master_seed: 99,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn sequence_labels_roundtrip() {
        for label in ["ideal", "faulty", "cdd3", "udd2", "qdd1,3"] {
            let kind = SequenceKind::parse(label).unwrap();
            assert_eq!(kind.label(), label);
        }
        assert_eq!(
            SequenceKind::parse("qdd15").unwrap(),
            SequenceKind::Qdd(15, 15)
        );
        assert_eq!(SequenceKind::parse("cdd0").unwrap(), SequenceKind::Faulty);
        assert!(SequenceKind::parse("xyz").is_err());
    }

    #[test]
    fn ensemble_density_is_valid_state() {
        let config = tiny_config();
        let gap = config_min_gap(&config).unwrap();
        let model = config.model(1.0 / gap).unwrap();
        let spec = CodeSpec::for_logical(2).unwrap();
        let system = EncodedSystem::new(model, spec).unwrap();
        let policy = StepPolicy::for_run(Some(0.1), system.hamiltonian_scale());
        let noise_spec = NoiseSpec::for_run(0.1, 4, 1.0 / gap, 5, 1.0, None).unwrap();
        let states: Vec<StateVector> = (0..3)
            .map(|r| {
                let noise = noise::sample_realization(&noise_spec, r).unwrap();
                run_case(&system, RunMode::Faulty(&noise), &policy).unwrap()
            })
            .collect();
        // single state: pure projector
        let pure = ensemble_density(&states[..1]).unwrap();
        let purity = (&pure * &pure).trace().re;
        assert_relative_eq!(purity, 1.0, epsilon = 1e-10);
        // ensemble: Hermitian, unit trace, PSD
        let rho = ensemble_density(&states).unwrap();
        assert!(linalg::hermiticity_error(&rho) < 1e-12);
        assert_relative_eq!(rho.trace().re, 1.0, epsilon = 1e-10);
        let (values, _) = linalg::hermitian_eigen(&rho).unwrap();
        assert!(values.iter().all(|&v| v > -1e-10));
    }

    #[test]
    fn noise_strength_diagnostic_cases() {
        let zero = NoiseRealization::from_values(0.1, vec![vec![0.0; 5]; 3]);
        assert_eq!(noise_strength_diagnostic(&zero, 2.0), 0.0);
        // constant ε on one channel of one qubit → |ε| · T
        let mut channels = vec![vec![0.0; 5]; 3];
        channels[2] = vec![-0.4; 5];
        let constant = NoiseRealization::from_values(0.1, channels);
        assert_relative_eq!(
            noise_strength_diagnostic(&constant, 2.0),
            0.8,
            epsilon = 1e-12
        );
    }

    #[test]
    fn distance_curve_rows_and_determinism() {
        let config = tiny_config();
        let a = distance_curve(&config).unwrap();
        assert_eq!(a.len(), 3 * 2);
        let b = distance_curve(&config).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.d_mean.to_bits(), y.d_mean.to_bits(), "{}", x.sequence);
            assert_eq!(x.d_stderr.to_bits(), y.d_stderr.to_bits());
        }
        for r in &a {
            assert!((0.0..=1.0).contains(&r.d_mean));
            assert!(r.d_stderr >= 0.0);
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let mut config = tiny_config();
        config.sequences = vec!["cdd1".into()];
        config.t_grid = vec![1.5];
        config.workers = 1;
        let serial = distance_curve(&config).unwrap();
        config.workers = 2;
        let parallel = distance_curve(&config).unwrap();
        assert_eq!(serial[0].d_mean.to_bits(), parallel[0].d_mean.to_bits());
        assert_eq!(serial[0].d_stderr.to_bits(), parallel[0].d_stderr.to_bits());
    }

    #[test]
    fn ideal_ignores_realization_count() {
        let mut config = tiny_config();
        config.sequences = vec!["ideal".into()];
        config.t_grid = vec![2.0];
        let one = distance_curve(&config).unwrap();
        config.realizations = 7;
        let many = distance_curve(&config).unwrap();
        assert_eq!(one[0].d_mean.to_bits(), many[0].d_mean.to_bits());
        assert_eq!(one[0].realizations, 1);
    }

    #[test]
    fn csv_schema_is_stable() {
        let config = tiny_config();
        let records = vec![RunRecord {
            algorithm: "grover".into(),
            sequence: "cdd1".into(),
            level_or_order: "1".into(),
            t_over_invgap: 2.0,
            beta_over_gap: 0.2,
            realizations: 3,
            d_mean: 0.5,
            d_stderr: 0.01,
            master_seed: 99,
            noise_strength_max: 1.2,
            wall_time_s: 0.1,
        }];
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        assert_eq!(lines.next().unwrap(), "grover,cdd1,1,2,0.2,3,0.5,0.01,99");
        let mut manifest = Vec::new();
        write_manifest(&config, "run", &records, &mut manifest).unwrap();
        let manifest = String::from_utf8(manifest).unwrap();
        assert!(manifest.contains("[config]"));
        assert!(manifest.contains("master_seed = 99"));
    }

    #[test]
    fn compare_requires_matched_pulse_counts() {
        let mut config = tiny_config();
        config.cdd_level = 2;
        config.qdd_order = 15;
        assert!(matches!(
            compare_cdd_qdd(&config),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn empty_sweep_grid_is_rejected() {
        let mut config = tiny_config();
        config.tau_grid.clear();
        assert!(sweep_beta_tau(&config).is_err());
    }
}
