//! Network identification by deconvolution: log-time resampling,
//! differentiation, Bayes deconvolution into a time-constant spectrum and
//! discretisation of the spectrum into a Foster network.

mod deconvolution;
mod derivative;
mod foster;
mod signal;

pub use deconvolution::{
    deconvolve_bayes, deconvolve_bayes_traced, kernel, reconvolve, Deconvolution,
    TimeConstantSpectrum,
};
pub use derivative::log_derivative;
pub use foster::spectrum_to_foster;
pub use signal::{
    log_resample, log_resample_from, to_temperature, LogTimeSignal, DEFAULT_EARLY_CUT_TIME,
};
