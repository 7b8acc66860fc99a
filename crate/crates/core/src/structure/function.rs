use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::CauerNetwork;

/// Capacitance standing in for the ambient, J/K. Ambient is an infinite heat
/// sink; this value marks the singularity at the end of the curve.
pub const AMBIENT_CAPACITANCE: f64 = 1e6;

/// Cumulative thermal capacitance (J/K) against cumulative thermal
/// resistance (K/W) from the junction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureFunction {
    points: Vec<(f64, f64)>,
}

impl StructureFunction {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("structure function has no points"));
        }
        if points
            .iter()
            .any(|&(r, c)| !(r >= 0.0 && r.is_finite() && c >= 0.0 && c.is_finite()))
        {
            return Err(Error::invalid(
                "structure function coordinates must be finite and >= 0",
            ));
        }
        if let Some(i) = points
            .windows(2)
            .position(|w| w[1].0 < w[0].0 || w[1].1 < w[0].1)
        {
            return Err(Error::invalid(format!(
                "structure function must be nondecreasing in both axes (point {})",
                i + 1
            )));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Resistance of the final point: the junction-to-ambient resistance.
    pub fn total_resistance(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.0)
    }

    pub fn final_capacitance(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.1)
    }

    /// Appends the ambient singularity: a vertical rise by
    /// [`AMBIENT_CAPACITANCE`] at the total resistance.
    pub fn with_ambient_singularity(&self) -> Self {
        let mut points = self.points.clone();
        let (r, c) = *points.last().expect("structure functions are never empty");
        points.push((r, c + AMBIENT_CAPACITANCE));
        Self { points }
    }

    /// Resistance of the first point whose cumulative capacitance reaches
    /// `c`: the node where a ladder's capacitance first amounts to `c`.
    /// `None` if the curve stays below `c`.
    pub fn resistance_at_capacitance(&self, c: f64) -> Option<f64> {
        self.points.iter().find(|q| q.1 >= c).map(|q| q.0)
    }

    /// Cumulative capacitance at resistance `r`, interpolated linearly in
    /// `(R, log C)` where both neighbours are positive and linearly otherwise.
    /// On a vertical segment the lowest value is returned.
    pub fn capacitance_at(&self, r: f64) -> f64 {
        let p = &self.points;
        if r <= p[0].0 {
            return p[0].1;
        }
        if r >= self.total_resistance() {
            let first_at_end = p.partition_point(|q| q.0 < self.total_resistance());
            return p[first_at_end].1;
        }
        let hi = p.partition_point(|q| q.0 < r);
        let (r0, c0) = p[hi - 1];
        let (r1, c1) = p[hi];
        let w = (r - r0) / (r1 - r0);
        if c0 > 0.0 && c1 > 0.0 {
            (c0.ln() + w * (c1.ln() - c0.ln())).exp()
        } else {
            c0 + w * (c1 - c0)
        }
    }
}

/// Prefix sums of a Cauer ladder, starting at the origin. Each rung's
/// capacitance sits at the node before its resistance, so point `k` is
/// `(R_1 + .. + R_(k-1), C_1 + .. + C_k)`; the last point carries the total
/// resistance.
pub fn cumulative_structure_function(net: &CauerNetwork) -> StructureFunction {
    let mut points = Vec::with_capacity(net.len() + 2);
    points.push((0.0, 0.0));
    let (mut r, mut c) = (0.0, 0.0);
    for rung in net.rungs() {
        c += rung.capacitance;
        points.push((r, c));
        r += rung.resistance;
    }
    points.push((r, c));
    StructureFunction { points }
}

/// Difference quotients `dC/dR` placed at segment midpoints. Vertical
/// segments (the ambient singularity) have no finite slope and are skipped.
pub fn differential_structure_function(sf: &StructureFunction) -> Result<Vec<(f64, f64)>> {
    if sf.len() < 2 {
        return Err(Error::invalid(
            "differential structure function needs at least two points",
        ));
    }
    Ok(sf
        .points
        .windows(2)
        .filter(|w| w[1].0 > w[0].0)
        .map(|w| {
            let (r0, c0) = w[0];
            let (r1, c1) = w[1];
            (0.5 * (r0 + r1), (c1 - c0) / (r1 - r0))
        })
        .collect())
}

/// Resistance between two features on the curve, `b - a`.
pub fn partial_resistance(sf: &StructureFunction, feature_a: f64, feature_b: f64) -> Result<f64> {
    let total = sf.total_resistance();
    let slack = 1e-12 * total.max(1.0);
    if !(feature_a >= 0.0) || !(feature_b >= feature_a) || feature_b > total + slack {
        return Err(Error::invalid(format!(
            "features must satisfy 0 <= a <= b <= {total}, got a = {feature_a}, b = {feature_b}"
        )));
    }
    Ok(feature_b - feature_a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_sums() {
        let net = CauerNetwork::from_pairs(&[(1.0, 1.0), (2.0, 3.0)]).unwrap();
        let sf = cumulative_structure_function(&net);
        assert_eq!(
            sf.points(),
            &[(0.0, 0.0), (0.0, 1.0), (1.0, 4.0), (3.0, 4.0)]
        );
        assert_eq!(sf.total_resistance(), 3.0);
    }

    #[test]
    fn origin_always_present() {
        let net = CauerNetwork::from_pairs(&[(0.5, 2.0)]).unwrap();
        assert_eq!(cumulative_structure_function(&net).points()[0], (0.0, 0.0));
    }

    #[test]
    fn slopes() {
        let sf = StructureFunction::new(vec![(0.0, 0.0), (1.0, 1.0), (3.0, 4.0)]).unwrap();
        let d = differential_structure_function(&sf).unwrap();
        assert_eq!(d, vec![(0.5, 1.0), (2.0, 1.5)]);
        let flat = StructureFunction::new(vec![(0.0, 2.0), (1.0, 2.0)]).unwrap();
        assert_eq!(differential_structure_function(&flat).unwrap(), vec![(0.5, 0.0)]);
        let single = StructureFunction::new(vec![(0.0, 0.0)]).unwrap();
        assert!(differential_structure_function(&single).is_err());
    }

    #[test]
    fn singularity_is_vertical_and_skipped_by_slopes() {
        let sf = StructureFunction::new(vec![(0.0, 0.0), (1.0, 1.0)]).unwrap();
        let s = sf.with_ambient_singularity();
        assert_eq!(s.points().last().unwrap(), &(1.0, 1.0 + AMBIENT_CAPACITANCE));
        assert_eq!(s.total_resistance(), 1.0);
        assert_eq!(differential_structure_function(&s).unwrap().len(), 1);
    }

    #[test]
    fn partial_resistance_checks_range() {
        let sf = StructureFunction::new(vec![(0.0, 0.0), (5.0, 1.0)]).unwrap();
        assert!((partial_resistance(&sf, 1.56, 4.56).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(partial_resistance(&sf, 2.0, 2.0).unwrap(), 0.0);
        assert!(partial_resistance(&sf, 3.0, 2.0).is_err());
        assert!(partial_resistance(&sf, -1.0, 2.0).is_err());
        assert!(partial_resistance(&sf, 1.0, 6.0).is_err());
    }

    #[test]
    fn rejects_decreasing_points() {
        assert!(StructureFunction::new(vec![(0.0, 0.0), (1.0, 2.0), (0.5, 3.0)]).is_err());
        assert!(StructureFunction::new(vec![(0.0, 1.0), (1.0, 0.5)]).is_err());
        assert!(StructureFunction::new(vec![]).is_err());
    }

    #[test]
    fn log_interpolation() {
        let sf = StructureFunction::new(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 100.0)]).unwrap();
        assert!((sf.capacitance_at(1.5) - 10.0).abs() < 1e-9);
        assert!((sf.capacitance_at(0.5) - 0.5).abs() < 1e-12);
        assert_eq!(sf.resistance_at_capacitance(10.0), Some(2.0));
        assert_eq!(sf.resistance_at_capacitance(0.25), Some(1.0));
        assert_eq!(sf.resistance_at_capacitance(0.0), Some(0.0));
        assert_eq!(sf.resistance_at_capacitance(1e3), None);
    }
}
