//! Foster to Cauer conversion by continued-fraction expansion of the
//! driving-point admittance.
//!
//! With `Z(s) = sum R_i / (1 + s tau_i) = N(s) / D(s)` the expansion
//! alternates
//!
//! ```text
//! Y = D / N = s C_1 + Y_1,   1 / Y_1 = R_1 + Z_2,   ...
//! ```
//!
//! where each element is a ratio of leading coefficients and each step
//! cancels one leading term. The cancellation loses precision geometrically
//! in the number of stages, so the expansion runs in binary floating point of
//! adjustable precision: it is repeated at doubled precision until two
//! successive results agree after rounding to `f64`.

use dashu_float::{round::mode::HalfEven, FBig};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CauerNetwork, CauerRung, FosterNetwork, FosterStage};

type Float = FBig<HalfEven, 2>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionOptions {
    /// Working precision of the first attempt, bits.
    pub initial_precision: usize,
    /// Give up beyond this precision, bits.
    pub max_precision: usize,
    /// Relative agreement required between successive precisions.
    pub agreement: f64,
    /// Neighbouring stages whose time-constant ratio is below `1 + merge_ratio`
    /// are merged before expansion.
    pub merge_ratio: f64,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        Self {
            initial_precision: 256,
            max_precision: 1 << 15,
            agreement: 1e-12,
            merge_ratio: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport {
    /// Precision of the accepted expansion, bits.
    pub precision: usize,
    /// Number of Foster stages merged into a neighbour.
    pub merged_stages: usize,
}

/// Converts a Foster network into the Cauer ladder with the same
/// driving-point impedance.
pub fn foster_to_cauer(net: &FosterNetwork) -> Result<CauerNetwork> {
    foster_to_cauer_with(net, &ExpansionOptions::default()).map(|(c, _)| c)
}

pub fn foster_to_cauer_with(
    net: &FosterNetwork,
    opts: &ExpansionOptions,
) -> Result<(CauerNetwork, ExpansionReport)> {
    let (stages, merged_stages) = merge_degenerate(net.stages(), opts.merge_ratio);
    if merged_stages > 0 {
        log::warn!(
            "merged {merged_stages} Foster stage(s) with nearly equal time constants before \
             Cauer expansion"
        );
    }

    let mut precision = opts.initial_precision.max(64);
    let mut previous = expand(&stages, precision);
    let mut unstable_stage = 0;
    loop {
        let next_precision = precision * 2;
        if next_precision > opts.max_precision {
            return Err(match previous {
                Err(e) => e,
                Ok(_) => Error::NumericalBreakdown {
                    stage: unstable_stage,
                    detail: format!(
                        "expansion did not converge within {} bits",
                        opts.max_precision
                    ),
                },
            });
        }
        let current = expand(&stages, next_precision);
        match (&previous, &current) {
            (Ok(a), Ok(b)) => match first_disagreement(a, b, opts.agreement) {
                None => {
                    let total: f64 = stages.iter().map(|s| s.resistance).sum();
                    let rungs = rescale_to_total(b.clone(), total);
                    log::debug!("Cauer expansion of {} stages at {next_precision} bits", stages.len());
                    return Ok((
                        CauerNetwork::new(rungs)?,
                        ExpansionReport {
                            precision: next_precision,
                            merged_stages,
                        },
                    ));
                }
                Some(stage) => unstable_stage = stage,
            },
            (_, Err(Error::NumericalBreakdown { stage, .. })) => unstable_stage = *stage,
            _ => {}
        }
        previous = current;
        precision = next_precision;
    }
}

/// The expansion reproduces the total resistance to within the agreement
/// tolerance; the remaining round-off is folded into the rungs so the ladder's
/// series resistance equals the Foster total.
fn rescale_to_total(mut rungs: Vec<CauerRung>, total: f64) -> Vec<CauerRung> {
    let sum: f64 = rungs.iter().map(|r| r.resistance).sum();
    let scale = total / sum;
    for r in &mut rungs {
        r.resistance *= scale;
    }
    rungs
}

fn first_disagreement(a: &[CauerRung], b: &[CauerRung], tol: f64) -> Option<usize> {
    if a.len() != b.len() {
        return Some(a.len().min(b.len()));
    }
    let close = |x: f64, y: f64| (x - y).abs() <= tol * x.abs().max(y.abs());
    a.iter()
        .zip(b)
        .position(|(p, q)| !close(p.resistance, q.resistance) || !close(p.capacitance, q.capacitance))
}

fn merge_degenerate(stages: &[FosterStage], merge_ratio: f64) -> (Vec<FosterStage>, usize) {
    let mut out: Vec<FosterStage> = Vec::with_capacity(stages.len());
    let mut merged = 0;
    for s in stages {
        match out.last_mut() {
            Some(last) if s.time_constant / last.time_constant < 1.0 + merge_ratio => {
                let r = last.resistance + s.resistance;
                let log_tau = (last.resistance * last.time_constant.ln()
                    + s.resistance * s.time_constant.ln())
                    / r;
                *last = FosterStage {
                    resistance: r,
                    time_constant: log_tau.exp(),
                };
                merged += 1;
            }
            _ => out.push(*s),
        }
    }
    (out, merged)
}

fn float(x: f64, precision: usize) -> Float {
    Float::try_from(x)
        .expect("finite f64")
        .with_precision(precision)
        .value()
}

/// Polynomial in `s`, ascending coefficients.
type Poly = Vec<Float>;

fn expand(stages: &[FosterStage], precision: usize) -> Result<Vec<CauerRung>> {
    let one = float(1.0, precision);
    // Z = N / D built one stage at a time:
    // N' = N (1 + tau s) + R D, D' = D (1 + tau s).
    let mut num: Poly = vec![float(0.0, precision)];
    let mut den: Poly = vec![one.clone()];
    for s in stages {
        let tau = float(s.time_constant, precision);
        let r = float(s.resistance, precision);
        let mut next_num = mul_linear(&num, &tau);
        for (c, d) in next_num.iter_mut().zip(&den) {
            *c = &*c + &r * d;
        }
        num = next_num;
        den = mul_linear(&den, &tau);
    }
    // num has a (zero) coefficient of degree n that mul_linear introduced.
    num.pop();

    // Admittance D / num: degree(D) = degree(num) + 1.
    let mut upper = den;
    let mut lower = num;
    let mut rungs = Vec::with_capacity(stages.len());
    for stage in 0..stages.len() {
        // Y = s C + (upper - s C lower) / lower
        let c = lead(&upper) / lead(&lower);
        let offset = upper.len() - lower.len();
        for (i, l) in lower.iter().enumerate() {
            let idx = i + offset;
            upper[idx] = &upper[idx] - &c * l;
        }
        upper.pop();
        // Z = lower / upper = R + (lower - R upper) / upper
        let r = lead(&lower) / lead(&upper);
        let offset = lower.len() - upper.len();
        for (i, u) in upper.iter().enumerate() {
            let idx = i + offset;
            lower[idx] = &lower[idx] - &r * u;
        }
        lower.pop();

        let (c, r) = (c.to_f64().value(), r.to_f64().value());
        if !(c > 0.0 && c.is_finite()) || !(r > 0.0 && r.is_finite()) {
            return Err(Error::NumericalBreakdown {
                stage,
                detail: format!("non-positive element (R = {r:e}, C = {c:e}) at {precision} bits"),
            });
        }
        rungs.push(CauerRung {
            resistance: r,
            capacitance: c,
        });
        if lower.is_empty() {
            if stage + 1 != stages.len() {
                return Err(Error::NumericalBreakdown {
                    stage,
                    detail: "expansion terminated early".into(),
                });
            }
            break;
        }
    }
    Ok(rungs)
}

fn lead(p: &Poly) -> &Float {
    p.last().expect("non-empty polynomial")
}

/// `p * (1 + tau s)`
fn mul_linear(p: &Poly, tau: &Float) -> Poly {
    let mut out: Poly = Vec::with_capacity(p.len() + 1);
    out.push(p[0].clone());
    for i in 1..p.len() {
        out.push(&p[i] + tau * &p[i - 1]);
    }
    out.push(tau * &p[p.len() - 1]);
    out
}
