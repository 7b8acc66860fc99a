use std::f64::consts::LN_10;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{interpolate_log_time, SignalKind, TransientRecord};

/// Samples earlier than this are electrical switching transient, not heat
/// flow.
pub const DEFAULT_EARLY_CUT_TIME: f64 = 1e-6;

/// A signal on a uniform grid of `z = ln(t / 1 s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogTimeSignal {
    z_start: f64,
    points_per_decade: usize,
    values: Vec<f64>,
}

impl LogTimeSignal {
    pub fn new(z_start: f64, points_per_decade: usize, values: Vec<f64>) -> Result<Self> {
        if points_per_decade == 0 {
            return Err(Error::invalid("points_per_decade must be >= 1"));
        }
        if !z_start.is_finite() {
            return Err(Error::invalid("grid start must be finite"));
        }
        if values.is_empty() {
            return Err(Error::invalid("log-time signal has no samples"));
        }
        Ok(Self {
            z_start,
            points_per_decade,
            values,
        })
    }

    /// Samples `f(z)` on `len` grid points starting at `z_start`.
    pub fn from_fn(
        z_start: f64,
        points_per_decade: usize,
        len: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let spacing = LN_10 / points_per_decade.max(1) as f64;
        let values = (0..len).map(|k| f(z_start + k as f64 * spacing)).collect();
        Self::new(z_start, points_per_decade, values)
    }

    pub fn spacing(&self) -> f64 {
        LN_10 / self.points_per_decade as f64
    }

    pub fn points_per_decade(&self) -> usize {
        self.points_per_decade
    }

    pub fn z_start(&self) -> f64 {
        self.z_start
    }

    pub fn z(&self, k: usize) -> f64 {
        self.z_start + k as f64 * self.spacing()
    }

    pub fn z_grid(&self) -> Vec<f64> {
        (0..self.values.len()).map(|k| self.z(k)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same grid, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), self.values.len());
        Self {
            values,
            ..self.clone()
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.with_values(self.values.iter().map(|v| v * factor).collect())
    }

    /// Trapezoidal integral over z.
    pub fn integral(&self) -> f64 {
        let n = self.values.len();
        if n < 2 {
            return 0.0;
        }
        let inner: f64 = self.values[1..n - 1].iter().sum();
        self.spacing() * (inner + 0.5 * (self.values[0] + self.values[n - 1]))
    }

    /// Piecewise-linear value at time `t`, clamped to the grid ends.
    pub fn value_at(&self, t: f64) -> f64 {
        let n = self.values.len();
        let x = (t.ln() - self.z_start) / self.spacing();
        if x <= 0.0 {
            return self.values[0];
        }
        if x >= (n - 1) as f64 {
            return self.values[n - 1];
        }
        let k = x.floor() as usize;
        let w = x - k as f64;
        self.values[k] + w * (self.values[k + 1] - self.values[k])
    }
}

/// Converts a voltage transient to temperature rise using its sensitivity
/// (V/K). Temperature transients pass through.
pub fn to_temperature(record: &TransientRecord) -> Result<TransientRecord> {
    record.clone().into_temperature()
}

/// Resamples a temperature transient onto a uniform log-time grid, starting
/// at the first sample at or after 1 us.
pub fn log_resample(record: &TransientRecord, points_per_decade: usize) -> Result<LogTimeSignal> {
    log_resample_from(record, points_per_decade, DEFAULT_EARLY_CUT_TIME)
}

pub fn log_resample_from(
    record: &TransientRecord,
    points_per_decade: usize,
    early_cut_time: f64,
) -> Result<LogTimeSignal> {
    if points_per_decade == 0 {
        return Err(Error::invalid("points_per_decade must be >= 1"));
    }
    if record.kind() != SignalKind::Temperature {
        return Err(Error::invalid(
            "log resampling expects a temperature transient; convert voltage first",
        ));
    }
    // Grid times computed as exp(ln t) may land a few ulps below the cut.
    let cut = early_cut_time * (1.0 - 1e-9);
    let first = record.times().partition_point(|&t| t < cut);
    let times = &record.times()[first..];
    let values = &record.values()[first..];
    if times.len() < 2 {
        return Err(Error::invalid(
            "fewer than two samples remain after the early-time cut",
        ));
    }
    let (t0, t1) = (times[0], times[times.len() - 1]);
    let decades = (t1 / t0).log10();
    if decades < 2.0 - 1e-9 {
        return Err(Error::invalid(format!(
            "transient spans only {decades:.2} decades; at least 2 are required"
        )));
    }
    let spacing = LN_10 / points_per_decade as f64;
    let z_start = t0.ln();
    let steps = ((t1.ln() - z_start) / spacing + 1e-9).floor() as usize;
    let resampled = (0..=steps)
        .map(|k| interpolate_log_time(times, values, (z_start + k as f64 * spacing).exp()))
        .collect();
    LogTimeSignal::new(z_start, points_per_decade, resampled)
}
