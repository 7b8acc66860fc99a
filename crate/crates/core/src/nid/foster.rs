use super::deconvolution::TimeConstantSpectrum;
use crate::error::{Error, Result};
use crate::model::{FosterNetwork, FosterStage};

/// Fraction of the total resistance below which a bin is not kept as a
/// stage of its own.
const NEGLIGIBLE_SHARE: f64 = 1e-6;

/// Bins the spectrum into `stages` equal-width `zeta` intervals. Each bin
/// becomes one Foster stage carrying the bin's resistance at the
/// resistance-weighted mean time constant; empty bins are dropped.
pub fn spectrum_to_foster(spectrum: &TimeConstantSpectrum, stages: usize) -> Result<FosterNetwork> {
    if stages == 0 {
        return Err(Error::invalid("stages must be >= 1"));
    }
    if !(spectrum.area() > 0.0) {
        return Err(Error::invalid("spectrum has zero area"));
    }
    let n = spectrum.len();
    let zeta0 = spectrum.zeta(0);
    let width = (spectrum.zeta(n - 1) - zeta0) / stages as f64;
    let mut resistance = vec![0.0; stages];
    let mut moment = vec![0.0; stages];
    for (k, &d) in spectrum.density().iter().enumerate() {
        let zeta = spectrum.zeta(k);
        let bin = if width > 0.0 {
            (((zeta - zeta0) / width).floor() as usize).min(stages - 1)
        } else {
            0
        };
        let r = d * spectrum.spacing();
        resistance[bin] += r;
        moment[bin] += r * zeta;
    }
    // Bins carrying a negligible share are folded into the next bin so the
    // total is kept while the Cauer expansion sees no vanishing stages.
    let floor = NEGLIGIBLE_SHARE * resistance.iter().sum::<f64>();
    let mut stages: Vec<FosterStage> = Vec::new();
    let (mut carry_r, mut carry_m) = (0.0, 0.0);
    for (&r, &m) in resistance.iter().zip(&moment) {
        carry_r += r;
        carry_m += m;
        if carry_r > floor {
            stages.push(FosterStage {
                resistance: carry_r,
                time_constant: (carry_m / carry_r).exp(),
            });
            carry_r = 0.0;
            carry_m = 0.0;
        }
    }
    if carry_r > 0.0 {
        let last = stages.last_mut().expect("at least one bin exceeds the floor");
        let r = last.resistance + carry_r;
        let m = last.resistance * last.time_constant.ln() + carry_m;
        *last = FosterStage {
            resistance: r,
            time_constant: (m / r).exp(),
        };
    }
    FosterNetwork::new(stages)
}
