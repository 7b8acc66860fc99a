//! Analysis settings: defaults, overridden by a TOML file, overridden by
//! command-line flags.

use std::path::Path;

use clap::Args;
use thermal_transient::moisture::ClassifierConfig;
use thermal_transient::AnalysisConfig;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Default, Args)]
pub struct AnalysisFlags {
    /// Key-value settings file (TOML)
    #[arg(long, value_name = "FILE")]
    pub config: Option<std::path::PathBuf>,
    #[arg(long)]
    pub points_per_decade: Option<usize>,
    #[arg(long)]
    pub bayes_iterations: Option<usize>,
    #[arg(long)]
    pub smoothing_halfwidth: Option<usize>,
    #[arg(long)]
    pub foster_stages: Option<usize>,
    /// Tolerance on |log10 C_a - log10 C_b| for the divergence point
    #[arg(long)]
    pub divergence_tolerance: Option<f64>,
    /// Relative sensing-section resistance drop that counts as a breach
    #[arg(long)]
    pub classifier_threshold: Option<f64>,
    /// Samples before this time (s) are ignored
    #[arg(long)]
    pub early_cut_time: Option<f64>,
    #[arg(long)]
    pub settling_threshold: Option<f64>,
}

pub fn parse_config(path: &Path, text: &str) -> Result<AnalysisConfig> {
    toml::from_str(text).map_err(|e| CliError::Parse {
        path: path.into(),
        line: e
            .span()
            .map_or(0, |s| text[..s.start.min(text.len())].matches('\n').count() + 1),
        message: e.message().to_string(),
    })
}

impl AnalysisFlags {
    pub fn resolve(&self) -> Result<AnalysisConfig> {
        let mut c = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                parse_config(path, &text)?
            }
            None => AnalysisConfig::default(),
        };
        macro_rules! apply {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { c.$field = v; })*
            };
        }
        apply!(
            points_per_decade,
            bayes_iterations,
            smoothing_halfwidth,
            foster_stages,
            divergence_tolerance,
            classifier_threshold,
            early_cut_time,
            settling_threshold
        );
        c.validate()?;
        Ok(c)
    }
}

pub fn classifier_config(c: &AnalysisConfig) -> ClassifierConfig {
    ClassifierConfig {
        resistance_drop_threshold: c.classifier_threshold,
        divergence_tolerance: c.divergence_tolerance,
        ..ClassifierConfig::default()
    }
}
