//! The evaluation chain from a measured transient to its structure function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    steady_state_resistance_with, CauerNetwork, FosterNetwork, SettlingCriterion, TransientRecord,
};
use crate::nid::{
    deconvolve_bayes, log_derivative, log_resample_from, spectrum_to_foster, LogTimeSignal,
    TimeConstantSpectrum, DEFAULT_EARLY_CUT_TIME,
};
use crate::structure::{
    cumulative_structure_function, foster_to_cauer_with, ExpansionOptions, ExpansionReport,
    StructureFunction, DEFAULT_DIVERGENCE_TOLERANCE,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub points_per_decade: usize,
    pub bayes_iterations: usize,
    pub smoothing_halfwidth: usize,
    /// Number of equal-width bins the spectrum is lumped into.
    pub foster_stages: usize,
    #[serde(alias = "divergence_rel_tolerance")]
    pub divergence_tolerance: f64,
    pub classifier_threshold: f64,
    /// Samples before this time (s) are discarded.
    pub early_cut_time: f64,
    pub settling_threshold: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            points_per_decade: 48,
            bayes_iterations: 500,
            smoothing_halfwidth: 3,
            foster_stages: 100,
            divergence_tolerance: DEFAULT_DIVERGENCE_TOLERANCE,
            classifier_threshold: 0.10,
            early_cut_time: DEFAULT_EARLY_CUT_TIME,
            settling_threshold: 1e-4,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if self.points_per_decade == 0 || self.bayes_iterations == 0 || self.foster_stages == 0 {
            return Err(Error::invalid(
                "points_per_decade, bayes_iterations and foster_stages must be >= 1",
            ));
        }
        for (name, v) in [
            ("divergence_tolerance", self.divergence_tolerance),
            ("classifier_threshold", self.classifier_threshold),
            ("early_cut_time", self.early_cut_time),
            ("settling_threshold", self.settling_threshold),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Analysis {
    /// `dT_final / P`, or the reason it was withheld.
    pub steady_state: std::result::Result<f64, Error>,
    /// Temperature rise per unit power on the log-time grid, K/W.
    pub impedance: LogTimeSignal,
    pub derivative: LogTimeSignal,
    pub spectrum: TimeConstantSpectrum,
    pub foster: FosterNetwork,
    pub cauer: CauerNetwork,
    pub expansion: ExpansionReport,
    pub structure_function: StructureFunction,
}

/// Runs resampling, differentiation, deconvolution, Foster lumping, Cauer
/// expansion and the cumulative structure function.
pub fn analyze(record: &TransientRecord, config: &AnalysisConfig) -> Result<Analysis> {
    config.validate()?;
    let temperature = record.clone().into_temperature()?;
    if !(temperature.power_step() > 0.0) {
        return Err(Error::invalid("analysis needs a positive power step"));
    }
    let steady_state = steady_state_resistance_with(
        &temperature,
        &SettlingCriterion {
            max_relative_change: config.settling_threshold,
        },
    );
    if let Err(e) = &steady_state {
        log::warn!("steady-state resistance withheld: {e}");
    }

    let signal = log_resample_from(&temperature, config.points_per_decade, config.early_cut_time)?;
    let impedance = signal.scaled(1.0 / temperature.power_step());
    let derivative = log_derivative(&impedance, config.smoothing_halfwidth)?;
    let spectrum = deconvolve_bayes(&derivative, config.bayes_iterations)?;
    let foster = spectrum_to_foster(&spectrum, config.foster_stages)?;
    let (cauer, expansion) = foster_to_cauer_with(&foster, &ExpansionOptions::default())?;
    let structure_function = cumulative_structure_function(&cauer);
    Ok(Analysis {
        steady_state,
        impedance,
        derivative,
        spectrum,
        foster,
        cauer,
        expansion,
        structure_function,
    })
}
