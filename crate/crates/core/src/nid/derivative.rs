use super::signal::LogTimeSignal;
use crate::error::{Error, Result};

/// Moving average with a window that shrinks symmetrically near the ends,
/// so linear signals pass through unchanged.
fn smooth(values: &[f64], halfwidth: usize) -> Vec<f64> {
    let n = values.len();
    (0..n)
        .map(|k| {
            let hw = halfwidth.min(k).min(n - 1 - k);
            let window = &values[k - hw..=k + hw];
            window.iter().sum::<f64>() / window.len() as f64
        })
        .collect()
}

/// `da/dz` by central differences after moving-average smoothing; the two
/// end points use second-order one-sided stencils.
pub fn log_derivative(signal: &LogTimeSignal, smoothing_halfwidth: usize) -> Result<LogTimeSignal> {
    let n = signal.len();
    if n <= 2 * smoothing_halfwidth + 1 || n < 3 {
        return Err(Error::invalid(format!(
            "signal of {n} points is too short for smoothing halfwidth {smoothing_halfwidth}"
        )));
    }
    let a = smooth(signal.values(), smoothing_halfwidth);
    let h = signal.spacing();
    let mut d = vec![0.0; n];
    d[0] = (-3.0 * a[0] + 4.0 * a[1] - a[2]) / (2.0 * h);
    d[n - 1] = (3.0 * a[n - 1] - 4.0 * a[n - 2] + a[n - 3]) / (2.0 * h);
    for k in 1..n - 1 {
        d[k] = (a[k + 1] - a[k - 1]) / (2.0 * h);
    }
    Ok(signal.with_values(d))
}
