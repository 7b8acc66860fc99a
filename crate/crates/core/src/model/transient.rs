use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignalKind {
    /// Temperature rise, K.
    Temperature,
    /// Change of the temperature-sensitive electrical parameter, V.
    Voltage,
}

/// A sampled response to a power step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransientRecord {
    times: Vec<f64>,
    values: Vec<f64>,
    power_step: f64,
    /// V/K; required for voltage records.
    sensitivity: Option<f64>,
    kind: SignalKind,
}

impl TransientRecord {
    pub fn new(
        times: Vec<f64>,
        values: Vec<f64>,
        power_step: f64,
        sensitivity: Option<f64>,
        kind: SignalKind,
    ) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::invalid(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.is_empty() {
            return Err(Error::invalid("transient has no samples"));
        }
        if times.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
            return Err(Error::invalid("sample times must be positive and finite"));
        }
        if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::invalid(format!(
                "sample times must be strictly increasing (sample {})",
                i + 1
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("sample values must be finite"));
        }
        if !(power_step > 0.0 && power_step.is_finite()) {
            return Err(Error::invalid(format!(
                "power step {power_step} must be positive"
            )));
        }
        match (kind, sensitivity) {
            (SignalKind::Voltage, None) => {
                return Err(Error::invalid("voltage transient needs a sensitivity"))
            }
            (_, Some(s)) if s == 0.0 || !s.is_finite() => {
                return Err(Error::invalid("sensitivity must be finite and nonzero"))
            }
            _ => {}
        }
        Ok(Self {
            times,
            values,
            power_step,
            sensitivity,
            kind,
        })
    }

    pub(crate) fn new_unchecked(
        times: Vec<f64>,
        values: Vec<f64>,
        power_step: f64,
        sensitivity: Option<f64>,
        kind: SignalKind,
    ) -> Self {
        Self {
            times,
            values,
            power_step,
            sensitivity,
            kind,
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn power_step(&self) -> f64 {
        self.power_step
    }

    pub fn sensitivity(&self) -> Option<f64> {
        self.sensitivity
    }

    pub fn kind(&self) -> SignalKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn with_sensitivity(mut self, sensitivity: f64) -> Self {
        self.sensitivity = Some(sensitivity);
        self
    }

    /// Converts a voltage record to temperature rise, `dT = dU / S`.
    /// Temperature records are returned unchanged.
    pub fn into_temperature(self) -> Result<Self> {
        match self.kind {
            SignalKind::Temperature => Ok(self),
            SignalKind::Voltage => {
                let s = match self.sensitivity {
                    Some(s) if s != 0.0 && s.is_finite() => s,
                    _ => return Err(Error::invalid("voltage transient has zero sensitivity")),
                };
                let values = self.values.iter().map(|u| u / s).collect();
                Ok(Self {
                    values,
                    kind: SignalKind::Temperature,
                    ..self
                })
            }
        }
    }

    /// Linear interpolation of the value at `t` on a logarithmic time axis,
    /// clamped to the end samples.
    pub fn value_at(&self, t: f64) -> f64 {
        interpolate_log_time(&self.times, &self.values, t)
    }

    /// Adds zero-mean Gaussian noise with standard deviation
    /// `relative_sigma * |final value|`, reproducibly from `seed`.
    pub fn with_gaussian_noise(&self, relative_sigma: f64, seed: u64) -> Result<Self> {
        if !(relative_sigma >= 0.0 && relative_sigma.is_finite()) {
            return Err(Error::invalid("noise level must be >= 0"));
        }
        let scale = self.values.last().map_or(0.0, |v| v.abs());
        let sigma = relative_sigma * scale;
        if sigma == 0.0 {
            return Ok(self.clone());
        }
        let normal = Normal::new(0.0, sigma).map_err(|e| Error::invalid(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = self
            .values
            .iter()
            .map(|v| v + normal.sample(&mut rng))
            .collect();
        Ok(Self {
            values,
            ..self.clone()
        })
    }
}

pub(crate) fn interpolate_log_time(times: &[f64], values: &[f64], t: f64) -> f64 {
    let n = times.len();
    if t <= times[0] {
        return values[0];
    }
    if t >= times[n - 1] {
        return values[n - 1];
    }
    let hi = times.partition_point(|&x| x < t);
    let lo = hi - 1;
    let (z0, z1, z) = (times[lo].ln(), times[hi].ln(), t.ln());
    let w = (z - z0) / (z1 - z0);
    values[lo] + w * (values[hi] - values[lo])
}

/// Settling test applied before the steady-state resistance is read.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SettlingCriterion {
    /// Largest accepted `|T(t_end) - T(t_end / 10)| / |T(t_end)|`.
    pub max_relative_change: f64,
}

impl Default for SettlingCriterion {
    fn default() -> Self {
        Self {
            max_relative_change: 1e-4,
        }
    }
}

impl SettlingCriterion {
    /// Relative change of the record over its last decade of time.
    pub fn relative_change(&self, record: &TransientRecord) -> f64 {
        let t_end = *record.times.last().expect("records are never empty");
        let last = *record.values.last().expect("records are never empty");
        let earlier = record.value_at(t_end / 10.0);
        let change = (last - earlier).abs();
        if change == 0.0 {
            0.0
        } else if last == 0.0 {
            f64::INFINITY
        } else {
            change / last.abs()
        }
    }
}

/// Junction-to-ambient resistance `dT_final / P` of a settled transient.
pub fn steady_state_resistance(record: &TransientRecord) -> Result<f64> {
    steady_state_resistance_with(record, &SettlingCriterion::default())
}

pub fn steady_state_resistance_with(
    record: &TransientRecord,
    criterion: &SettlingCriterion,
) -> Result<f64> {
    let record = record.clone().into_temperature()?;
    let relative_change = criterion.relative_change(&record);
    if !(relative_change < criterion.max_relative_change) {
        return Err(Error::NotSettled {
            relative_change,
            threshold: criterion.max_relative_change,
        });
    }
    let last = *record.values.last().expect("records are never empty");
    Ok(last / record.power_step)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(value: f64, power: f64) -> TransientRecord {
        TransientRecord::new(
            vec![1e-3, 1e-2, 1e-1, 1.0, 10.0],
            vec![value; 5],
            power,
            None,
            SignalKind::Temperature,
        )
        .unwrap()
    }

    #[test]
    fn eq1_arithmetic() {
        assert_eq!(steady_state_resistance(&flat(5.0, 0.1)).unwrap(), 50.0);
        assert_eq!(steady_state_resistance(&flat(0.0, 0.1)).unwrap(), 0.0);
    }

    #[test]
    fn unsettled_is_reported() {
        let rec = TransientRecord::new(
            vec![1.0, 10.0, 100.0],
            vec![1.0, 2.0, 3.0],
            0.1,
            None,
            SignalKind::Temperature,
        )
        .unwrap();
        assert!(matches!(
            steady_state_resistance(&rec),
            Err(Error::NotSettled { .. })
        ));
    }

    #[test]
    fn voltage_record_requires_sensitivity() {
        let err = TransientRecord::new(vec![1.0], vec![-0.01], 0.1, None, SignalKind::Voltage);
        assert!(err.is_err());
        let err = TransientRecord::new(vec![1.0], vec![-0.01], 0.1, Some(0.0), SignalKind::Voltage);
        assert!(err.is_err());
    }

    #[test]
    fn rejects_nonpositive_power_and_times() {
        let t = || vec![1.0, 2.0];
        let v = || vec![0.0, 1.0];
        assert!(TransientRecord::new(t(), v(), 0.0, None, SignalKind::Temperature).is_err());
        assert!(
            TransientRecord::new(vec![0.0, 1.0], v(), 1.0, None, SignalKind::Temperature).is_err()
        );
        assert!(
            TransientRecord::new(vec![2.0, 1.0], v(), 1.0, None, SignalKind::Temperature).is_err()
        );
    }

    #[test]
    fn noise_is_seeded() {
        let rec = flat(5.0, 0.1);
        let a = rec.with_gaussian_noise(1e-3, 7).unwrap();
        let b = rec.with_gaussian_noise(1e-3, 7).unwrap();
        let c = rec.with_gaussian_noise(1e-3, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(rec.with_gaussian_noise(0.0, 7).unwrap(), rec);
    }
}
