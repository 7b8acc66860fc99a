//! Divergence point of two structure functions measured on the same package.
//!
//! Both curves are read as piecewise-linear functions of `log10 C` over `R`.
//! Their difference is then piecewise linear between the union of the two
//! curves' breakpoints, so the first crossing of the tolerance band is found
//! exactly rather than on a sampled grid.

use serde::{Deserialize, Serialize};

use super::function::StructureFunction;
use crate::error::{Error, Result};

pub const DEFAULT_DIVERGENCE_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergenceStatus {
    /// The curves separate at the reported resistance.
    Diverged,
    /// The curves agree over their whole common range.
    Identical,
    /// The curves differ from the first comparable point on.
    NoCommonSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Divergence {
    /// K/W
    pub resistance: f64,
    pub status: DivergenceStatus,
}

/// `log10 C` evaluated as a one-sided limit at `r`. On a vertical run the
/// left limit is its first point and the right limit its last.
fn log_c(points: &[(f64, f64)], r: f64, from_right: bool) -> f64 {
    let n = points.len();
    let after = if from_right {
        points.partition_point(|p| p.0 <= r)
    } else {
        points.partition_point(|p| p.0 < r)
    };
    let j = after.saturating_sub(1);
    if after == 0 || j + 1 >= n {
        return points[j.min(n - 1)].1.log10();
    }
    let (r0, c0) = points[j];
    let (r1, c1) = points[j + 1];
    let w = (r - r0) / (r1 - r0);
    if w <= 0.0 {
        c0.log10()
    } else if w >= 1.0 {
        c1.log10()
    } else {
        c0.log10() + w * (c1.log10() - c0.log10())
    }
}

fn first_positive_resistance(sf: &StructureFunction) -> Option<f64> {
    sf.points().iter().find(|p| p.1 > 0.0).map(|p| p.0)
}

/// Largest resistance up to which `|log10 C_a - log10 C_b| < rel_tolerance`
/// holds continuously, starting from the first resistance where both curves
/// carry capacitance.
pub fn divergence_point(
    a: &StructureFunction,
    b: &StructureFunction,
    rel_tolerance: f64,
) -> Result<Divergence> {
    if !(rel_tolerance > 0.0 && rel_tolerance.is_finite()) {
        return Err(Error::invalid("divergence tolerance must be positive"));
    }
    let no_common = Divergence {
        resistance: 0.0,
        status: DivergenceStatus::NoCommonSection,
    };
    let (Some(sa), Some(sb)) = (first_positive_resistance(a), first_positive_resistance(b)) else {
        return Ok(no_common);
    };
    let start = sa.max(sb);
    let end = a.total_resistance().min(b.total_resistance());
    if start > end {
        return Ok(no_common);
    }

    let mut breaks: Vec<f64> = a
        .points()
        .iter()
        .chain(b.points())
        .map(|p| p.0)
        .filter(|&r| r > start && r < end)
        .collect();
    breaks.push(start);
    breaks.push(end);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let diff = |r: f64, from_right: bool| {
        log_c(a.points(), r, from_right) - log_c(b.points(), r, from_right)
    };
    let outside = |d: f64| !(d.abs() < rel_tolerance);

    if outside(diff(start, true)) {
        return Ok(no_common);
    }
    for w in breaks.windows(2) {
        let (r0, r1) = (w[0], w[1]);
        let d0 = diff(r0, true);
        let d1 = diff(r1, false);
        if outside(d1) {
            let target = if d1 > 0.0 { rel_tolerance } else { -rel_tolerance };
            let t = ((target - d0) / (d1 - d0)).clamp(0.0, 1.0);
            return Ok(Divergence {
                resistance: r0 + t * (r1 - r0),
                status: DivergenceStatus::Diverged,
            });
        }
        if r1 < end && outside(diff(r1, true)) {
            return Ok(Divergence {
                resistance: r1,
                status: DivergenceStatus::Diverged,
            });
        }
    }
    Ok(Divergence {
        resistance: end,
        status: DivergenceStatus::Identical,
    })
}
