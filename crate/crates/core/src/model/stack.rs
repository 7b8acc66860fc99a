//! One-dimensional physical layer stacks and their Cauer discretization.

use serde::{Deserialize, Serialize};

use super::network::{CauerNetwork, CauerRung};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    /// m
    pub thickness: f64,
    /// m^2
    pub area: f64,
    /// W/(m K)
    pub conductivity: f64,
    /// J/(m^3 K)
    pub volumetric_heat_capacity: f64,
}

impl Layer {
    pub fn new(
        thickness: f64,
        area: f64,
        conductivity: f64,
        volumetric_heat_capacity: f64,
    ) -> Result<Self> {
        let layer = Self {
            thickness,
            area,
            conductivity,
            volumetric_heat_capacity,
        };
        layer.validate()?;
        Ok(layer)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("thickness", self.thickness),
            ("area", self.area),
            ("conductivity", self.conductivity),
            ("volumetric heat capacity", self.volumetric_heat_capacity),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!(
                    "layer {name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Conduction resistance across the layer, K/W.
    pub fn resistance(&self) -> f64 {
        self.thickness / (self.conductivity * self.area)
    }

    /// Heat capacity of the layer, J/K.
    pub fn heat_capacity(&self) -> f64 {
        self.volumetric_heat_capacity * self.area * self.thickness
    }
}

/// Layers ordered from the junction towards ambient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerStack {
    layers: Vec<Layer>,
    boundary_resistance: f64,
}

impl LayerStack {
    pub fn new(layers: Vec<Layer>, boundary_resistance: f64) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::invalid("layer stack needs at least one layer"));
        }
        for (i, l) in layers.iter().enumerate() {
            l.validate()
                .map_err(|e| Error::invalid(format!("layer {i}: {e}")))?;
        }
        if !(boundary_resistance >= 0.0 && boundary_resistance.is_finite()) {
            return Err(Error::invalid(format!(
                "boundary resistance {boundary_resistance} must be >= 0"
            )));
        }
        Ok(Self {
            layers,
            boundary_resistance,
        })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn boundary_resistance(&self) -> f64 {
        self.boundary_resistance
    }

    /// Sum of layer conduction resistances plus the ambient boundary.
    pub fn steady_resistance(&self) -> f64 {
        self.layers.iter().map(Layer::resistance).sum::<f64>() + self.boundary_resistance
    }

    pub fn heat_capacity(&self) -> f64 {
        self.layers.iter().map(Layer::heat_capacity).sum()
    }
}

/// Capacitance given to the boundary rung, as a fraction of the stack's heat
/// capacity, unless set explicitly.
pub const DEFAULT_BOUNDARY_CAPACITANCE_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discretization {
    pub slices_per_layer: usize,
    /// J/K of the node between the last layer and the boundary resistance.
    /// `None` uses [`DEFAULT_BOUNDARY_CAPACITANCE_FRACTION`] of the stack's
    /// heat capacity.
    pub boundary_capacitance: Option<f64>,
}

impl Discretization {
    pub fn slices(slices_per_layer: usize) -> Self {
        Self {
            slices_per_layer,
            boundary_capacitance: None,
        }
    }
}

/// Splits every layer into `slices_per_layer` equal slices, each one rung
/// with `R = dx / (lambda A)` and `C = c_v A dx`. A nonzero boundary
/// resistance becomes one extra terminal rung.
pub fn stack_to_cauer(stack: &LayerStack, slices_per_layer: usize) -> Result<CauerNetwork> {
    stack_to_cauer_with(stack, &Discretization::slices(slices_per_layer))
}

pub fn stack_to_cauer_with(stack: &LayerStack, disc: &Discretization) -> Result<CauerNetwork> {
    let n = disc.slices_per_layer;
    if n == 0 {
        return Err(Error::invalid("slices_per_layer must be >= 1"));
    }
    for (i, l) in stack.layers.iter().enumerate() {
        l.validate()
            .map_err(|e| Error::invalid(format!("layer {i}: {e}")))?;
    }
    let mut rungs = Vec::with_capacity(stack.layers.len() * n + 1);
    for layer in &stack.layers {
        let r = layer.resistance() / n as f64;
        let c = layer.heat_capacity() / n as f64;
        rungs.extend((0..n).map(|_| CauerRung {
            resistance: r,
            capacitance: c,
        }));
    }
    if stack.boundary_resistance > 0.0 {
        let capacitance = disc
            .boundary_capacitance
            .unwrap_or(DEFAULT_BOUNDARY_CAPACITANCE_FRACTION * stack.heat_capacity());
        if !(capacitance > 0.0 && capacitance.is_finite()) {
            return Err(Error::invalid("boundary capacitance must be positive"));
        }
        rungs.push(CauerRung {
            resistance: stack.boundary_resistance,
            capacitance,
        });
    }
    CauerNetwork::new(rungs)
}
