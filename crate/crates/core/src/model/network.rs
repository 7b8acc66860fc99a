//! Foster and Cauer one-port thermal RC networks and their step responses.
//!
//! A Cauer ladder is stored junction end first. Rung `i` places its
//! capacitance between node `i` and ambient and its resistance between node
//! `i` and node `i + 1`; the node after the last rung is ambient. Heating power
//! is injected at node 0 (the junction).

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::transient::{SignalKind, TransientRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FosterStage {
    /// K/W
    pub resistance: f64,
    /// s
    pub time_constant: f64,
}

impl FosterStage {
    pub fn capacitance(&self) -> f64 {
        self.time_constant / self.resistance
    }
}

/// Series chain of parallel RC stages, sorted by strictly increasing time
/// constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FosterNetwork {
    stages: Vec<FosterStage>,
}

impl FosterNetwork {
    pub fn new(stages: Vec<FosterStage>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::invalid("Foster network needs at least one stage"));
        }
        for (i, s) in stages.iter().enumerate() {
            if !(s.resistance > 0.0 && s.resistance.is_finite()) {
                return Err(Error::invalid(format!(
                    "Foster stage {i}: resistance {} must be positive",
                    s.resistance
                )));
            }
            if !(s.time_constant > 0.0 && s.time_constant.is_finite()) {
                return Err(Error::invalid(format!(
                    "Foster stage {i}: time constant {} must be positive",
                    s.time_constant
                )));
            }
        }
        if let Some(i) = stages
            .windows(2)
            .position(|w| w[1].time_constant <= w[0].time_constant)
        {
            return Err(Error::invalid(format!(
                "Foster time constants must be strictly increasing (stage {})",
                i + 1
            )));
        }
        Ok(Self { stages })
    }

    /// Builds a network from `(resistance, time_constant)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(resistance, time_constant)| FosterStage {
                    resistance,
                    time_constant,
                })
                .collect(),
        )
    }

    /// Sorts modes by time constant, merges exact duplicates and drops modes
    /// with no resistance. Used for eigenmode output, where a mode can have
    /// (numerically) zero weight at the driving point.
    pub(crate) fn from_modes(mut modes: Vec<FosterStage>) -> Result<Self> {
        modes.retain(|m| m.resistance > 0.0 && m.time_constant > 0.0);
        modes.sort_by(|a, b| a.time_constant.total_cmp(&b.time_constant));
        let mut merged: Vec<FosterStage> = Vec::with_capacity(modes.len());
        for m in modes {
            match merged.last_mut() {
                Some(last) if last.time_constant == m.time_constant => {
                    last.resistance += m.resistance;
                }
                _ => merged.push(m),
            }
        }
        Self::new(merged)
    }

    pub fn stages(&self) -> &[FosterStage] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn total_resistance(&self) -> f64 {
        self.stages.iter().map(|s| s.resistance).sum()
    }

    /// Junction temperature rise `P * sum R_i (1 - exp(-t / tau_i))`.
    pub fn temperature_rise(&self, power: f64, t: f64) -> f64 {
        power
            * self
                .stages
                .iter()
                .map(|s| -s.resistance * (-t / s.time_constant).exp_m1())
                .sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CauerRung {
    /// K/W
    pub resistance: f64,
    /// J/K
    pub capacitance: f64,
}

/// Ladder of grounded capacitances and series resistances, junction end
/// first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauerNetwork {
    rungs: Vec<CauerRung>,
}

impl CauerNetwork {
    pub fn new(rungs: Vec<CauerRung>) -> Result<Self> {
        if rungs.is_empty() {
            return Err(Error::invalid("Cauer network needs at least one rung"));
        }
        for (i, r) in rungs.iter().enumerate() {
            if !(r.resistance > 0.0 && r.resistance.is_finite()) {
                return Err(Error::invalid(format!(
                    "Cauer rung {i}: resistance {} must be positive",
                    r.resistance
                )));
            }
            if !(r.capacitance > 0.0 && r.capacitance.is_finite()) {
                return Err(Error::invalid(format!(
                    "Cauer rung {i}: capacitance {} must be positive",
                    r.capacitance
                )));
            }
        }
        Ok(Self { rungs })
    }

    /// Builds a ladder from `(resistance, capacitance)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(resistance, capacitance)| CauerRung {
                    resistance,
                    capacitance,
                })
                .collect(),
        )
    }

    pub fn rungs(&self) -> &[CauerRung] {
        &self.rungs
    }

    pub fn len(&self) -> usize {
        self.rungs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rungs.is_empty()
    }

    pub fn total_resistance(&self) -> f64 {
        self.rungs.iter().map(|r| r.resistance).sum()
    }

    pub fn total_capacitance(&self) -> f64 {
        self.rungs.iter().map(|r| r.capacitance).sum()
    }

    /// Modal (Foster) form of the ladder's driving-point impedance.
    ///
    /// With nodal equations `C dT/dt = -G T + P e_0`, the symmetric matrix
    /// `C^-1/2 G C^-1/2 = Q diag(lambda) Q^T` yields stages
    /// `R_k = q_0k^2 / (C_0 lambda_k)` and `tau_k = 1 / lambda_k`. Stage
    /// resistances are finally rescaled by the (exact) ratio of the ladder's
    /// series resistance to their sum, which removes the round-off the slow
    /// modes pick up in stiff ladders.
    pub fn to_foster(&self) -> Result<FosterNetwork> {
        let n = self.rungs.len();
        let inv_sqrt_c: Vec<f64> = self
            .rungs
            .iter()
            .map(|r| 1.0 / r.capacitance.sqrt())
            .collect();
        let mut a = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            let g_right = 1.0 / self.rungs[i].resistance;
            let g_left = if i > 0 {
                1.0 / self.rungs[i - 1].resistance
            } else {
                0.0
            };
            a[(i, i)] = (g_left + g_right) * inv_sqrt_c[i] * inv_sqrt_c[i];
            if i + 1 < n {
                let off = -g_right * inv_sqrt_c[i] * inv_sqrt_c[i + 1];
                a[(i, i + 1)] = off;
                a[(i + 1, i)] = off;
            }
        }
        let eig = a.symmetric_eigen();
        let c0 = self.rungs[0].capacitance;
        let modes = (0..n)
            .map(|k| {
                let lambda = eig.eigenvalues[k];
                let q = eig.eigenvectors[(0, k)];
                FosterStage {
                    resistance: q * q / (c0 * lambda),
                    time_constant: 1.0 / lambda,
                }
            })
            .collect();
        let mut foster = FosterNetwork::from_modes(modes)?;
        let scale = self.total_resistance() / foster.total_resistance();
        for s in &mut foster.stages {
            s.resistance *= scale;
        }
        Ok(foster)
    }
}

fn validate_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::invalid("no sample times given"));
    }
    if times.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::invalid("sample times must be positive and finite"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("sample times must be strictly increasing"));
    }
    Ok(())
}

/// Closed-form step response of a Foster network driven by `power` watts.
pub fn foster_step_response(
    net: &FosterNetwork,
    power: f64,
    times: &[f64],
) -> Result<TransientRecord> {
    validate_times(times)?;
    let values = times.iter().map(|&t| net.temperature_rise(power, t)).collect();
    TransientRecord::from_simulation(times.to_vec(), values, power)
}

/// Junction temperature rise of a Cauer ladder under a power step, ambient
/// node grounded.
pub fn cauer_step_response(
    net: &CauerNetwork,
    power: f64,
    times: &[f64],
) -> Result<TransientRecord> {
    validate_times(times)?;
    let foster = net.to_foster()?;
    let values = times
        .iter()
        .map(|&t| foster.temperature_rise(power, t))
        .collect();
    TransientRecord::from_simulation(times.to_vec(), values, power)
}

impl TransientRecord {
    /// Simulated records carry a temperature rise; a zero power step is
    /// allowed here so linearity can be checked, but such a record cannot be
    /// analysed.
    fn from_simulation(times: Vec<f64>, values: Vec<f64>, power: f64) -> Result<Self> {
        if !power.is_finite() || power < 0.0 {
            return Err(Error::invalid(format!("power step {power} must be >= 0")));
        }
        Ok(Self::new_unchecked(times, values, power, None, SignalKind::Temperature))
    }
}

/// `count` logarithmically spaced sample times from `start` to `end`
/// inclusive.
pub fn log_spaced_times(start: f64, end: f64, count: usize) -> Vec<f64> {
    assert!(start > 0.0 && end > start && count >= 2);
    let (ls, le) = (start.ln(), end.ln());
    (0..count)
        .map(|i| {
            if i == 0 {
                start
            } else if i + 1 == count {
                end
            } else {
                (ls + (le - ls) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

/// Sample times at `per_decade` points per decade between `start` and `end`.
pub fn times_per_decade(start: f64, end: f64, per_decade: usize) -> Vec<f64> {
    let decades = (end / start).log10();
    let count = (decades * per_decade as f64).round() as usize + 1;
    log_spaced_times(start, end, count.max(2))
}
