//! Bayes (Richardson-Lucy) deconvolution of the log-time derivative against
//! the single-pole kernel `w(z) = exp(z - e^z)`.
//!
//! For a resistance density `R(zeta)` over `zeta = ln tau` the derivative of
//! the unit-power step response is `da/dz = (R * w)(z)`. The kernel is
//! sampled on the signal grid and normalised so its discrete sum is one,
//! which makes the discrete convolution conserve area.

use serde::{Deserialize, Serialize};

use super::signal::LogTimeSignal;
use crate::error::{Error, Result};

/// Kernel taps below this fraction of the peak are dropped.
const KERNEL_CUTOFF: f64 = 1e-14;

pub fn kernel(x: f64) -> f64 {
    (x - x.exp()).exp()
}

/// Density of thermal resistance over `zeta = ln(tau / 1 s)`, K/W per unit
/// `zeta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeConstantSpectrum {
    zeta_start: f64,
    spacing: f64,
    density: Vec<f64>,
}

impl TimeConstantSpectrum {
    pub fn new(zeta_start: f64, spacing: f64, density: Vec<f64>) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) || !zeta_start.is_finite() {
            return Err(Error::invalid("spectrum grid must be finite and increasing"));
        }
        if density.is_empty() {
            return Err(Error::invalid("spectrum has no samples"));
        }
        if density.iter().any(|d| !(*d >= 0.0 && d.is_finite())) {
            return Err(Error::invalid("spectrum density must be finite and >= 0"));
        }
        Ok(Self {
            zeta_start,
            spacing,
            density,
        })
    }

    pub fn zeta(&self, k: usize) -> f64 {
        self.zeta_start + k as f64 * self.spacing
    }

    pub fn zeta_grid(&self) -> Vec<f64> {
        (0..self.density.len()).map(|k| self.zeta(k)).collect()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn len(&self) -> usize {
        self.density.len()
    }

    pub fn is_empty(&self) -> bool {
        self.density.is_empty()
    }

    /// Total resistance, `sum density * dzeta`.
    pub fn area(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.spacing
    }

    /// Resistance carried by grid points with `lo <= zeta <= hi`.
    pub fn area_between(&self, lo: f64, hi: f64) -> f64 {
        self.density
            .iter()
            .enumerate()
            .filter(|(k, _)| (lo..=hi).contains(&self.zeta(*k)))
            .map(|(_, d)| d)
            .sum::<f64>()
            * self.spacing
    }

    pub fn peak_zeta(&self) -> f64 {
        let k = self
            .density
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |acc, (k, &d)| if d > acc.1 { (k, d) } else { acc })
            .0;
        self.zeta(k)
    }
}

/// Discrete normalised kernel: `taps[m + left]` weights an offset of `m`
/// grid steps, `-left <= m <= right`.
struct Kernel {
    taps: Vec<f64>,
    left: usize,
}

impl Kernel {
    fn sampled(spacing: f64) -> Self {
        let peak = kernel(0.0);
        let extent = |dir: f64| {
            let mut m = 0usize;
            while kernel(dir * (m + 1) as f64 * spacing) >= KERNEL_CUTOFF * peak {
                m += 1;
            }
            m
        };
        let (left, right) = (extent(-1.0), extent(1.0));
        let mut taps: Vec<f64> = (0..=left + right)
            .map(|i| kernel((i as f64 - left as f64) * spacing))
            .collect();
        let sum: f64 = taps.iter().sum();
        taps.iter_mut().for_each(|t| *t /= sum);
        Self { taps, left }
    }

    fn weight(&self, offset: isize) -> f64 {
        let i = offset + self.left as isize;
        if i < 0 {
            0.0
        } else {
            self.taps.get(i as usize).copied().unwrap_or(0.0)
        }
    }

    /// Dense `n x n` matrix `W[k][j] = w(z_k - zeta_j)`.
    fn matrix(&self, n: usize) -> Vec<f64> {
        let mut w = vec![0.0; n * n];
        for k in 0..n {
            for j in 0..n {
                w[k * n + j] = self.weight(k as isize - j as isize);
            }
        }
        w
    }
}

fn forward(w: &[f64], f: &[f64], out: &mut [f64]) {
    let n = f.len();
    for (k, o) in out.iter_mut().enumerate() {
        let row = &w[k * n..(k + 1) * n];
        *o = row.iter().zip(f).map(|(a, b)| a * b).sum();
    }
}

fn adjoint(w: &[f64], r: &[f64], out: &mut [f64]) {
    let n = r.len();
    out.iter_mut().for_each(|o| *o = 0.0);
    for (k, &rk) in r.iter().enumerate() {
        if rk == 0.0 {
            continue;
        }
        let row = &w[k * n..(k + 1) * n];
        for (o, a) in out.iter_mut().zip(row) {
            *o += a * rk;
        }
    }
}

/// Result of [`deconvolve_bayes_traced`].
#[derive(Debug, Clone)]
pub struct Deconvolution {
    pub spectrum: TimeConstantSpectrum,
    /// `||W f_i - g||_1 / ||g||_1` for the estimate entering iteration `i`,
    /// followed by the residual of the final estimate.
    pub residuals: Vec<f64>,
}

/// Re-convolves a spectrum with the kernel on its own grid.
pub fn reconvolve(spectrum: &TimeConstantSpectrum) -> Vec<f64> {
    let n = spectrum.len();
    let w = Kernel::sampled(spectrum.spacing()).matrix(n);
    let mut out = vec![0.0; n];
    forward(&w, spectrum.density(), &mut out);
    out
}

/// Recovers the time-constant spectrum from `da/dz` with `iterations`
/// multiplicative Bayes updates from a uniform start. Negative derivative
/// samples are clipped to zero first.
pub fn deconvolve_bayes(dadz: &LogTimeSignal, iterations: usize) -> Result<TimeConstantSpectrum> {
    deconvolve_bayes_traced(dadz, iterations).map(|d| d.spectrum)
}

pub fn deconvolve_bayes_traced(dadz: &LogTimeSignal, iterations: usize) -> Result<Deconvolution> {
    if iterations == 0 {
        return Err(Error::invalid("iterations must be >= 1"));
    }
    let n = dadz.len();
    let h = dadz.spacing();
    let g: Vec<f64> = dadz.values().iter().map(|&v| v.max(0.0)).collect();
    let g_norm: f64 = g.iter().sum();
    if g_norm == 0.0 {
        return Ok(Deconvolution {
            spectrum: TimeConstantSpectrum::new(dadz.z_start(), h, vec![0.0; n])?,
            residuals: vec![0.0],
        });
    }

    let w = Kernel::sampled(h).matrix(n);
    let mut column_sums = vec![0.0; n];
    adjoint(&w, &vec![1.0; n], &mut column_sums);

    let mut f = vec![g_norm / n as f64; n];
    let mut model = vec![0.0; n];
    let mut ratio = vec![0.0; n];
    let mut correction = vec![0.0; n];
    let mut residuals = Vec::with_capacity(iterations + 1);
    for _ in 0..iterations {
        forward(&w, &f, &mut model);
        residuals.push(l1_distance(&model, &g) / g_norm);
        for k in 0..n {
            ratio[k] = if model[k] > 0.0 { g[k] / model[k] } else { 0.0 };
        }
        adjoint(&w, &ratio, &mut correction);
        for j in 0..n {
            f[j] = if column_sums[j] > 0.0 {
                f[j] * correction[j] / column_sums[j]
            } else {
                0.0
            };
        }
    }
    forward(&w, &f, &mut model);
    residuals.push(l1_distance(&model, &g) / g_norm);

    Ok(Deconvolution {
        spectrum: TimeConstantSpectrum::new(dadz.z_start(), h, f)?,
        residuals,
    })
}

fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_peak_and_area() {
        assert!((kernel(0.0) - (-1.0f64).exp()).abs() < 1e-15);
        let k = Kernel::sampled(std::f64::consts::LN_10 / 48.0);
        assert!((k.taps.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let peak = k.taps.iter().cloned().fold(0.0, f64::max);
        assert_eq!(k.weight(0), peak);
    }

    #[test]
    fn zero_input_gives_zero_spectrum() {
        let sig = LogTimeSignal::from_fn(-5.0, 48, 100, |_| 0.0).unwrap();
        let s = deconvolve_bayes(&sig, 10).unwrap();
        assert!(s.density().iter().all(|&d| d == 0.0));
    }

    #[test]
    fn deconvolving_the_kernel_gives_a_pulse() {
        let sig = LogTimeSignal::from_fn(-12.0, 48, 48 * 8, kernel).unwrap();
        let s = deconvolve_bayes(&sig, 500).unwrap();
        assert!(s.peak_zeta().abs() <= s.spacing());
        let near = s.area_between(-0.5, 0.5);
        assert!(near > 0.9 * s.area(), "only {near} of {} near zero", s.area());
        assert!((s.area() - 1.0).abs() < 1e-2);
    }

    #[test]
    fn negative_noise_is_clipped() {
        let sig = LogTimeSignal::from_fn(-12.0, 24, 200, |z| kernel(z) - 1e-3).unwrap();
        let s = deconvolve_bayes(&sig, 50).unwrap();
        assert!(s.density().iter().all(|&d| d >= 0.0));
    }

    #[test]
    fn zero_iterations_rejected() {
        let sig = LogTimeSignal::from_fn(0.0, 10, 30, kernel).unwrap();
        assert!(deconvolve_bayes(&sig, 0).is_err());
    }
}
