//! Stationary zero-mean Gaussian noise with the Gaussian spectral
//! density `S(ω) = (β/√(2π)) exp(-½ (ω/β)²)`.
//!
//! Under the symmetric `1/√(2π)` Fourier convention the matching
//! autocorrelation is `C(τ) = (β²/√(2π)) exp(-½ (βτ)²)`, so `β` sets both
//! the spectral cutoff and the process variance; a dimensionless
//! `amplitude` multiplier rescales the sample paths for calibration.
//!
//! Realizations are drawn by circulant embedding: the covariance sequence
//! on a doubled-and-reflected grid is diagonalized by an FFT, so the
//! finite-grid covariance is exact up to the embedding tolerance. Every
//! `(qubit, axis)` channel is an independent stream fully determined by
//! `(seed, realization_index, channel)`.

use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};

/// Relative tolerance on negative circulant eigenvalues before the
/// embedding is enlarged.
const EMBEDDING_TOL: f64 = 1e-10;
/// Stream stride between realizations; channels index within a stride.
const CHANNEL_STRIDE: u64 = 256;

/// `C(τ) = (β²/√(2π)) exp(-(βτ)²/2)`, the inverse transform of the
/// spectral density under the symmetric convention.
pub fn autocorrelation(tau: f64, beta: f64) -> f64 {
    let scale = beta * beta / (2.0 * std::f64::consts::PI).sqrt();
    scale * (-0.5 * (beta * tau).powi(2)).exp()
}

/// `S(ω)` evaluated for reference and validation.
pub fn spectral_density(omega: f64, beta: f64) -> f64 {
    beta / (2.0 * std::f64::consts::PI).sqrt() * (-0.5 * (omega / beta).powi(2)).exp()
}

/// Process standard deviation at `amplitude = 1`, i.e. `√C(0)`.
pub fn unit_sigma(beta: f64) -> f64 {
    autocorrelation(0.0, beta).sqrt()
}

/// Parameters of one noise ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    pub beta: f64,
    pub n_qubits: usize,
    pub duration: f64,
    pub grid_step: f64,
    pub amplitude: f64,
    pub seed: u64,
}

impl NoiseSpec {
    /// Spec with the default grid step `0.05/β` and unit amplitude.
    pub fn new(beta: f64, n_qubits: usize, duration: f64, seed: u64) -> Result<NoiseSpec> {
        let spec = NoiseSpec {
            beta,
            n_qubits,
            duration,
            grid_step: 0.05 / beta,
            amplitude: 1.0,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Spec for a pulse-protected run: the grid additionally resolves the
    /// shortest pulse interval ten-fold.
    pub fn for_run(
        beta: f64,
        n_qubits: usize,
        duration: f64,
        seed: u64,
        amplitude: f64,
        shortest_pulse_interval: Option<f64>,
    ) -> Result<NoiseSpec> {
        let mut step = 0.05 / beta;
        if let Some(interval) = shortest_pulse_interval {
            step = step.min(interval / 10.0);
        }
        let spec = NoiseSpec {
            beta,
            n_qubits,
            duration,
            grid_step: step,
            amplitude,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> NoiseSpec {
        self.amplitude = amplitude;
        self
    }

    pub fn with_grid_step(mut self, grid_step: f64) -> Result<NoiseSpec> {
        self.grid_step = grid_step;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.beta <= 0.0 {
            return Err(Error::input(format!("beta must be positive, got {}", self.beta)));
        }
        if self.duration <= 0.0 {
            return Err(Error::input(format!(
                "duration must be positive, got {}",
                self.duration
            )));
        }
        if self.grid_step <= 0.0 || self.grid_step > 0.05 / self.beta * (1.0 + 1e-12) {
            return Err(Error::input(format!(
                "grid step {} outside (0, 0.05/beta = {}]",
                self.grid_step,
                0.05 / self.beta
            )));
        }
        if self.n_qubits == 0 {
            return Err(Error::input("need at least one qubit".to_string()));
        }
        Ok(())
    }

    /// Independent channels: three axes per qubit.
    pub fn channels(&self) -> usize {
        3 * self.n_qubits
    }

    /// Channel index for `(qubit, axis)` with axes ordered x, y, z.
    pub fn channel_index(&self, qubit: usize, axis: usize) -> usize {
        qubit * 3 + axis
    }

    /// Grid points covering `[0, duration]`.
    pub fn grid_len(&self) -> usize {
        (self.duration / self.grid_step).ceil() as usize + 1
    }
}

/// Sampled trajectories for every channel on a shared uniform grid.
#[derive(Debug, Clone)]
pub struct NoiseRealization {
    grid_step: f64,
    duration: f64,
    values: Vec<Vec<f64>>,
    pub seed: u64,
    pub realization_index: u64,
}

impl NoiseRealization {
    /// Wraps externally produced samples (used for control cases in
    /// validation).
    pub fn from_values(grid_step: f64, values: Vec<Vec<f64>>) -> NoiseRealization {
        let len = values.first().map_or(0, Vec::len);
        NoiseRealization {
            grid_step,
            duration: grid_step * len.saturating_sub(1) as f64,
            values,
            seed: 0,
            realization_index: 0,
        }
    }

    pub fn channels(&self) -> usize {
        self.values.len()
    }

    pub fn grid_step(&self) -> f64 {
        self.grid_step
    }

    pub fn grid_len(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        &self.values[c]
    }

    /// Linear interpolation of channel `c` at time `t ∈ [0, duration]`.
    pub fn value_at(&self, c: usize, t: f64) -> Result<f64> {
        if c >= self.channels() {
            return Err(Error::input(format!("channel {c} out of range")));
        }
        if t < -1e-12 || t > self.duration * (1.0 + 1e-12) + 1e-12 {
            return Err(Error::input(format!(
                "time {t} outside noise grid [0, {}]",
                self.duration
            )));
        }
        let x = (t / self.grid_step).clamp(0.0, (self.grid_len() - 1) as f64);
        let i = (x as usize).min(self.grid_len() - 2);
        let w = x - i as f64;
        let row = &self.values[c];
        Ok(row[i] * (1.0 - w) + row[i + 1] * w)
    }

    /// Fast unchecked interpolation for inner integrator loops; `t` must
    /// already be inside the grid.
    #[inline]
    pub fn value_at_unchecked(&self, c: usize, t: f64) -> f64 {
        let x = t / self.grid_step;
        let i = (x as usize).min(self.grid_len() - 2);
        let w = x - i as f64;
        let row = &self.values[c];
        row[i] * (1.0 - w) + row[i + 1] * w
    }
}

/// Circulant eigenvalues for a covariance sequence of length `g`
/// reflected onto `2g - 2` points.
fn circulant_eigenvalues(cov: &[f64], fft: &Arc<dyn Fft<f64>>) -> Vec<f64> {
    let g = cov.len();
    let m = 2 * g - 2;
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (k, &c) in cov.iter().enumerate() {
        buf[k] = Complex64::new(c, 0.0);
    }
    for k in 1..g - 1 {
        buf[m - k] = Complex64::new(cov[k], 0.0);
    }
    fft.process(&mut buf);
    buf.iter().map(|z| z.re).collect()
}

/// Draws one realization of all channels; bit-identical for equal
/// `(spec, realization_index)` regardless of caller threading.
pub fn sample_realization(spec: &NoiseSpec, realization_index: u64) -> Result<NoiseRealization> {
    let g = spec.grid_len();
    if g < 2 {
        return Err(Error::input("noise grid needs at least two points".to_string()));
    }

    let mut planner = FftPlanner::new();

    // covariance sequence; enlarge once if the embedding turns indefinite
    let mut embed_g = g;
    let mut lambda;
    loop {
        let cov: Vec<f64> = (0..embed_g)
            .map(|k| autocorrelation(k as f64 * spec.grid_step, spec.beta))
            .collect();
        let m = 2 * embed_g - 2;
        let fft = planner.plan_fft(m, FftDirection::Forward);
        lambda = circulant_eigenvalues(&cov, &fft);
        let max = lambda.iter().cloned().fold(0.0, f64::max);
        let min = lambda.iter().cloned().fold(f64::INFINITY, f64::min);
        if min >= -EMBEDDING_TOL * max {
            break;
        }
        if embed_g > g {
            log::warn!(
                "circulant embedding still indefinite after enlargement \
                 (min eigenvalue {min:.3e}); clipping to zero"
            );
            break;
        }
        embed_g = 2 * g;
    }
    for v in &mut lambda {
        if *v < 0.0 {
            *v = 0.0;
        }
    }

    let m = lambda.len();
    let fft = planner.plan_fft(m, FftDirection::Forward);
    let scale: Vec<f64> = lambda.iter().map(|&l| (l / m as f64).sqrt()).collect();

    let channels = spec.channels();
    let mut values = Vec::with_capacity(channels);
    for c in 0..channels {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(
            realization_index
                .wrapping_mul(CHANNEL_STRIDE)
                .wrapping_add(c as u64 + 1),
        );
        let mut buf: Vec<Complex64> = scale
            .iter()
            .map(|&s| {
                let a: f64 = rng.sample(StandardNormal);
                let b: f64 = rng.sample(StandardNormal);
                Complex64::new(s * a, s * b)
            })
            .collect();
        fft.process(&mut buf);
        values.push(
            buf[..g]
                .iter()
                .map(|z| spec.amplitude * z.re)
                .collect::<Vec<f64>>(),
        );
    }

    Ok(NoiseRealization {
        grid_step: spec.grid_step,
        duration: (g - 1) as f64 * spec.grid_step,
        values,
        seed: spec.seed,
        realization_index,
    })
}

/// Periodogram of one channel averaged over realizations, normalized to
/// the symmetric Fourier convention so `E[S_est(ω)] ≈ S(ω)`.
///
/// Returns `(ω_k, S_est)` up to the Nyquist frequency.
pub fn estimate_psd(
    realizations: &[NoiseRealization],
    channel: usize,
) -> Result<Vec<(f64, f64)>> {
    if realizations.len() < 2 {
        return Err(Error::input(format!(
            "need at least 2 realizations for a PSD estimate, got {}",
            realizations.len()
        )));
    }
    let g = realizations[0].grid_len();
    let h = realizations[0].grid_step();
    if realizations
        .iter()
        .any(|r| r.grid_len() != g || r.grid_step() != h || channel >= r.channels())
    {
        return Err(Error::input(
            "realizations have mismatched grids or missing channel".to_string(),
        ));
    }

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft(g, FftDirection::Forward);
    let span = g as f64 * h;
    let norm = h * h / ((2.0 * std::f64::consts::PI).sqrt() * span);

    let mut acc = vec![0.0; g];
    for r in realizations {
        let mut buf: Vec<Complex64> = r
            .channel(channel)
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        fft.process(&mut buf);
        for (a, z) in acc.iter_mut().zip(&buf) {
            *a += norm * z.norm_sqr();
        }
    }
    let count = realizations.len() as f64;
    let d_omega = 2.0 * std::f64::consts::PI / span;
    Ok((0..=g / 2)
        .map(|k| (k as f64 * d_omega, acc[k] / count))
        .collect())
}

/// Writes a realization as columnar text: `t` then one column per
/// channel, qubit-major with axes ordered x, y, z.
pub fn export_realization(r: &NoiseRealization, out: &mut impl Write) -> Result<()> {
    writeln!(
        out,
        "# t {}",
        (0..r.channels())
            .map(|c| format!("q{}{}", c / 3, ["x", "y", "z"][c % 3]))
            .collect::<Vec<_>>()
            .join(" ")
    )?;
    for i in 0..r.grid_len() {
        let mut line = format!("{:.9e}", i as f64 * r.grid_step());
        for c in 0..r.channels() {
            line.push_str(&format!(" {:.9e}", r.channel(c)[i]));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}
