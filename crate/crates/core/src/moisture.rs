//! Moisture in a porous sensing layer and the hermeticity test built on it.
//!
//! Water conducts heat more than twenty times better than air, so filling
//! the pores of an adsorbent layer lowers its thermal resistance markedly,
//! whereas the humidity of bulk air barely changes the air's own
//! conductivity. A porous layer in the heat-flow path therefore turns a
//! moisture change into a measurable change of its partial resistance on the
//! structure function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Layer, LayerStack};
use crate::structure::{
    divergence_point, DivergenceStatus, StructureFunction, DEFAULT_DIVERGENCE_TOLERANCE,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// W/(m K)
    pub lambda_water: f64,
    /// W/(m K)
    pub lambda_air: f64,
    /// J/kg
    pub evaporation_heat: f64,
    /// J/(m^3 K)
    pub c_v_water: f64,
    /// J/(m^3 K)
    pub c_v_air: f64,
}

impl PhysicalConstants {
    pub const REFERENCE: Self = Self {
        lambda_water: 0.58,
        lambda_air: 0.0257,
        evaporation_heat: 2.25e6,
        c_v_water: 4.18e6,
        c_v_air: 1.2e3,
    };

    pub fn conductivity_ratio(&self) -> f64 {
        self.lambda_water / self.lambda_air
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::REFERENCE
    }
}

/// A porous layer: the solid skeleton's geometry and properties in `base`,
/// plus how much of its pore volume is filled with liquid water.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PorousLayerState {
    pub base: Layer,
    pub porosity: f64,
    pub saturation: f64,
}

impl PorousLayerState {
    pub fn new(base: Layer, porosity: f64, saturation: f64) -> Result<Self> {
        base.validate()?;
        if !(porosity > 0.0 && porosity < 1.0) {
            return Err(Error::invalid(format!(
                "porosity {porosity} must lie in (0, 1)"
            )));
        }
        if !(0.0..=1.0).contains(&saturation) {
            return Err(Error::invalid(format!(
                "saturation {saturation} must lie in [0, 1]"
            )));
        }
        Ok(Self {
            base,
            porosity,
            saturation,
        })
    }

    pub fn with_saturation(&self, saturation: f64) -> Result<Self> {
        Self::new(self.base, self.porosity, saturation)
    }
}

/// Geometric-mean mixing: `lambda_pore = lambda_air^(1-s) lambda_water^s`,
/// `lambda_eff = lambda_solid^(1-phi) lambda_pore^phi`.
pub fn effective_conductivity(state: &PorousLayerState, constants: &PhysicalConstants) -> f64 {
    let s = state.saturation;
    let phi = state.porosity;
    let pore = constants.lambda_air.powf(1.0 - s) * constants.lambda_water.powf(s);
    state.base.conductivity.powf(1.0 - phi) * pore.powf(phi)
}

/// Volume-weighted heat capacity of skeleton, air and water.
pub fn effective_heat_capacity(state: &PorousLayerState, constants: &PhysicalConstants) -> f64 {
    let s = state.saturation;
    let phi = state.porosity;
    (1.0 - phi) * state.base.volumetric_heat_capacity
        + phi * ((1.0 - s) * constants.c_v_air + s * constants.c_v_water)
}

/// The porous layer as a homogeneous [`Layer`] at its current moisture.
pub fn wet_layer(state: &PorousLayerState, constants: &PhysicalConstants) -> Layer {
    Layer {
        thickness: state.base.thickness,
        area: state.base.area,
        conductivity: effective_conductivity(state, constants),
        volumetric_heat_capacity: effective_heat_capacity(state, constants),
    }
}

/// Saturations at `steps` successive measurements of a drying layer,
/// `s_k = s_0 exp(-k dt / tau)` for `k = 0..=steps`.
pub fn drying_sequence(
    initial_saturation: f64,
    step_interval: f64,
    time_constant: f64,
    steps: usize,
) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&initial_saturation) {
        return Err(Error::invalid("initial saturation must lie in [0, 1]"));
    }
    if !(step_interval >= 0.0 && step_interval.is_finite()) {
        return Err(Error::invalid("step interval must be >= 0"));
    }
    if !(time_constant > 0.0) {
        return Err(Error::invalid("drying time constant must be positive"));
    }
    Ok((0..=steps)
        .map(|k| initial_saturation * (-(k as f64) * step_interval / time_constant).exp())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HermeticityStatus {
    Hermetic,
    Breached,
    Inconclusive,
}

impl HermeticityStatus {
    /// Process exit code: 0 hermetic, 1 breached, 2 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            HermeticityStatus::Hermetic => 0,
            HermeticityStatus::Breached => 1,
            HermeticityStatus::Inconclusive => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermeticityVerdict {
    pub status: HermeticityStatus,
    /// `(R_measured - R_reference) / R_reference` of the section between the
    /// divergence point and the ambient singularity.
    pub sensing_layer_resistance_change: f64,
    /// K/W
    pub divergence_point: f64,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifierConfig {
    /// Relative drop of the sensing-section resistance that signals moisture.
    pub resistance_drop_threshold: f64,
    pub divergence_tolerance: f64,
    /// Larger relative differences of total resistance mean a different
    /// fixture.
    pub max_total_mismatch: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            resistance_drop_threshold: 0.10,
            divergence_tolerance: DEFAULT_DIVERGENCE_TOLERANCE,
            max_total_mismatch: 0.5,
        }
    }
}

/// Compares a measured structure function with the dry reference of the same
/// package. Moisture in the sensing layer lowers the resistance between the
/// divergence point and the singularity.
pub fn classify_hermeticity(
    reference: &StructureFunction,
    measured: &StructureFunction,
    config: &ClassifierConfig,
) -> Result<HermeticityVerdict> {
    if !(config.resistance_drop_threshold > 0.0) {
        return Err(Error::invalid("classifier threshold must be positive"));
    }
    let inconclusive = |divergence_point: f64, reason: String| HermeticityVerdict {
        status: HermeticityStatus::Inconclusive,
        sensing_layer_resistance_change: 0.0,
        divergence_point,
        reason,
    };
    let (r_ref, r_meas) = (reference.total_resistance(), measured.total_resistance());
    if !(r_ref > 0.0) {
        return Ok(inconclusive(0.0, "reference has no thermal resistance".into()));
    }
    let mismatch = (r_meas - r_ref).abs() / r_ref;
    if mismatch > config.max_total_mismatch {
        return Ok(inconclusive(
            0.0,
            format!(
                "total resistances differ by {:.0}% (wrong fixture?)",
                100.0 * mismatch
            ),
        ));
    }
    let div = divergence_point(reference, measured, config.divergence_tolerance)?;
    if div.status == DivergenceStatus::NoCommonSection {
        return Ok(inconclusive(
            0.0,
            "structure functions share no common section".into(),
        ));
    }
    if div.status == DivergenceStatus::Identical {
        return Ok(HermeticityVerdict {
            status: HermeticityStatus::Hermetic,
            sensing_layer_resistance_change: 0.0,
            divergence_point: div.resistance,
            reason: "structure functions agree over their common range".into(),
        });
    }
    let section_ref = r_ref - div.resistance;
    let section_meas = r_meas - div.resistance;
    if !(section_ref > 0.0) {
        return Ok(inconclusive(
            div.resistance,
            "no sensing section beyond the divergence point".into(),
        ));
    }
    let change = (section_meas - section_ref) / section_ref;
    let (status, reason) = if change < -config.resistance_drop_threshold {
        (
            HermeticityStatus::Breached,
            format!(
                "sensing-section resistance dropped by {:.1}%",
                -100.0 * change
            ),
        )
    } else {
        (
            HermeticityStatus::Hermetic,
            format!("sensing-section resistance changed by {:+.1}%", 100.0 * change),
        )
    };
    Ok(HermeticityVerdict {
        status,
        sensing_layer_resistance_change: change,
        divergence_point: div.resistance,
        reason,
    })
}

/// Relative humidity over saturated salt solutions used as humidity
/// standards.
const SALT_RH_25C: &[(&str, f64)] = &[("LiCl", 0.113), ("KNO3", 0.9358)];

/// Equilibrium relative humidity (fraction) over a saturated solution of
/// `salt` at `temperature_c`. Only 25 degC is tabulated.
pub fn rh_of_salt_solution(salt: &str, temperature_c: f64) -> Result<f64> {
    let key: String = salt
        .trim()
        .chars()
        .map(|c| match c {
            '₃' => '3',
            c => c,
        })
        .collect();
    let rh = SALT_RH_25C
        .iter()
        .find(|(name, _)| name.eq_ignore_ascii_case(&key))
        .map(|&(_, rh)| rh)
        .ok_or_else(|| Error::NotTabulated {
            what: format!("salt {salt}"),
        })?;
    if (temperature_c - 25.0).abs() > 1e-9 {
        return Err(Error::NotTabulated {
            what: format!("{salt} at {temperature_c} degC"),
        });
    }
    Ok(rh)
}

/// Synthetic model experiment: a power transistor in a small package, a thin
/// gypsum layer and an aluminium heat sink. The package-internal layers sum
/// to the junction-to-case resistance; all material values are declared
/// fixture constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GypsumExperiment {
    pub package: Vec<Layer>,
    pub gypsum: PorousLayerState,
    pub heat_sink: Layer,
    /// Heat sink to ambient, K/W.
    pub boundary_resistance: f64,
    pub constants: PhysicalConstants,
}

/// Junction-to-case resistance of the modelled transistor, K/W.
pub const JUNCTION_TO_CASE_RESISTANCE: f64 = 1.56;
pub const GYPSUM_SOLID_CONDUCTIVITY: f64 = 1.2;
pub const GYPSUM_SOLID_HEAT_CAPACITY: f64 = 1.6e6;
pub const GYPSUM_POROSITY: f64 = 0.5;
/// Gypsum layer thickness, m.
pub const GYPSUM_THICKNESS: f64 = 1e-4;

impl Default for GypsumExperiment {
    fn default() -> Self {
        // Silicon die and solder die attach; the ceramic substrate thickness
        // is chosen so the three layers add up to the junction-to-case value.
        let die = Layer::new(3e-4, 4e-6, 148.0, 1.66e6).expect("valid");
        let attach = Layer::new(5e-5, 4e-6, 50.0, 1.67e6).expect("valid");
        let substrate_area = 1e-5;
        let substrate_conductivity = 25.0;
        let rest = JUNCTION_TO_CASE_RESISTANCE - die.resistance() - attach.resistance();
        let substrate = Layer::new(
            rest * substrate_conductivity * substrate_area,
            substrate_area,
            substrate_conductivity,
            3.0e6,
        )
        .expect("valid");
        let gypsum = PorousLayerState::new(
            Layer::new(
                GYPSUM_THICKNESS,
                6e-4,
                GYPSUM_SOLID_CONDUCTIVITY,
                GYPSUM_SOLID_HEAT_CAPACITY,
            )
            .expect("valid"),
            GYPSUM_POROSITY,
            0.0,
        )
        .expect("valid");
        Self {
            package: vec![die, attach, substrate],
            gypsum,
            heat_sink: Layer::new(5e-3, 1e-3, 237.0, 2.42e6).expect("valid"),
            boundary_resistance: 0.5,
            constants: PhysicalConstants::REFERENCE,
        }
    }
}

impl GypsumExperiment {
    pub fn package_resistance(&self) -> f64 {
        self.package.iter().map(Layer::resistance).sum()
    }

    /// Stack with the gypsum at the given pore saturation.
    pub fn stack(&self, saturation: f64) -> Result<LayerStack> {
        let gypsum = wet_layer(&self.gypsum.with_saturation(saturation)?, &self.constants);
        let mut layers = self.package.clone();
        layers.push(gypsum);
        layers.push(self.heat_sink);
        LayerStack::new(layers, self.boundary_resistance)
    }
}

/// An uncapped transistor on a header inside a metal humidity chamber; heat
/// crosses the air gap between header and chamber wall. Returns the stack for
/// the given air conductivity.
pub fn open_package_stack(lambda_air: f64, constants: &PhysicalConstants) -> Result<LayerStack> {
    let die = Layer::new(2e-4, 1e-6, 148.0, 1.66e6)?;
    let header = Layer::new(2e-4, 2e-5, 17.0, 3.7e6)?;
    let air = Layer::new(1e-4, 2e-4, lambda_air, constants.c_v_air)?;
    let wall = Layer::new(1e-3, 5e-4, 237.0, 2.42e6)?;
    LayerStack::new(vec![die, header, air, wall], 5.0)
}
