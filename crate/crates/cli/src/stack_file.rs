//! Stack description files.
//!
//! ```toml
//! boundary_resistance = 0.5   # K/W, optional
//! slices_per_layer = 8        # optional
//!
//! [[layer]]
//! name = "die"
//! thickness = 3e-4            # m
//! area = 4e-6                 # m^2
//! conductivity = 148          # W/(m K)
//! heat_capacity = 1.66e6      # J/(m^3 K)
//!
//! [[layer]]
//! name = "gypsum"
//! thickness = 1e-4
//! area = 6e-4
//! conductivity = 1.2          # of the solid skeleton
//! heat_capacity = 1.6e6
//! porosity = 0.5
//! saturation = 0.8
//! ```
//!
//! A ladder can be given directly instead, as `[[rung]]` tables with
//! `resistance` (K/W) and `capacitance` (J/K).

use std::path::Path;

use serde::Deserialize;
use thermal_transient::model::{stack_to_cauer, Layer, LayerStack};
use thermal_transient::moisture::{wet_layer, PhysicalConstants, PorousLayerState};
use thermal_transient::{CauerNetwork, CauerRung};
use toml::Spanned;

use crate::error::{CliError, Result};

pub const DEFAULT_SLICES_PER_LAYER: usize = 8;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StackFile {
    boundary_resistance: Option<f64>,
    slices_per_layer: Option<usize>,
    #[serde(default)]
    layer: Vec<Spanned<LayerEntry>>,
    #[serde(default)]
    rung: Vec<Spanned<RungEntry>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerEntry {
    #[allow(dead_code)]
    name: Option<String>,
    thickness: f64,
    area: f64,
    conductivity: f64,
    heat_capacity: f64,
    porosity: Option<f64>,
    saturation: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RungEntry {
    resistance: f64,
    capacitance: f64,
}

/// A parsed stack, ready to be turned into a ladder.
#[derive(Debug, Clone)]
pub enum StackDescription {
    Layers {
        stack: LayerStack,
        /// Porous layers by index, with their dry skeleton.
        porous: Vec<(usize, PorousLayerState)>,
        slices_per_layer: usize,
    },
    Ladder(CauerNetwork),
}

impl StackDescription {
    /// Sets every porous layer to `saturation`.
    pub fn with_saturation(&self, saturation: f64) -> thermal_transient::Result<Self> {
        match self {
            StackDescription::Ladder(_) => Err(thermal_transient::Error::InvalidInput(
                "a saturation override needs a layer stack with porous layers".into(),
            )),
            StackDescription::Layers {
                stack,
                porous,
                slices_per_layer,
            } => {
                if porous.is_empty() {
                    return Err(thermal_transient::Error::InvalidInput(
                        "stack has no porous layer to wet".into(),
                    ));
                }
                let mut layers = stack.layers().to_vec();
                let mut states = Vec::with_capacity(porous.len());
                for (i, state) in porous {
                    let state = state.with_saturation(saturation)?;
                    layers[*i] = wet_layer(&state, &PhysicalConstants::REFERENCE);
                    states.push((*i, state));
                }
                Ok(StackDescription::Layers {
                    stack: LayerStack::new(layers, stack.boundary_resistance())?,
                    porous: states,
                    slices_per_layer: *slices_per_layer,
                })
            }
        }
    }

    pub fn ladder(&self) -> thermal_transient::Result<CauerNetwork> {
        match self {
            StackDescription::Layers {
                stack,
                slices_per_layer,
                ..
            } => stack_to_cauer(stack, *slices_per_layer),
            StackDescription::Ladder(net) => Ok(net.clone()),
        }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

pub fn parse_stack(path: &Path, text: &str) -> Result<StackDescription> {
    let parsed: StackFile = toml::from_str(text).map_err(|e| CliError::Parse {
        path: path.into(),
        line: e.span().map_or(0, |s| line_of(text, s.start)),
        message: e.message().to_string(),
    })?;
    let at = |offset: usize, message: String| CliError::Parse {
        path: path.into(),
        line: line_of(text, offset),
        message,
    };

    match (parsed.layer.is_empty(), parsed.rung.is_empty()) {
        (true, true) => {
            return Err(CliError::format(path, "no [[layer]] or [[rung]] entries"));
        }
        (false, false) => {
            return Err(CliError::format(path, "use either [[layer]] or [[rung]] entries, not both"));
        }
        _ => {}
    }

    if !parsed.rung.is_empty() {
        if parsed.boundary_resistance.is_some() || parsed.slices_per_layer.is_some() {
            return Err(CliError::format(
                path,
                "boundary_resistance and slices_per_layer apply to layer stacks only",
            ));
        }
        let mut rungs = Vec::with_capacity(parsed.rung.len());
        for entry in &parsed.rung {
            let r = entry.get_ref();
            let rung = CauerRung {
                resistance: r.resistance,
                capacitance: r.capacitance,
            };
            CauerNetwork::new(vec![rung]).map_err(|e| at(entry.span().start, e.to_string()))?;
            rungs.push(rung);
        }
        return Ok(StackDescription::Ladder(CauerNetwork::new(rungs)?));
    }

    let mut layers = Vec::with_capacity(parsed.layer.len());
    let mut porous = Vec::new();
    for (i, entry) in parsed.layer.iter().enumerate() {
        let l = entry.get_ref();
        let base = Layer::new(l.thickness, l.area, l.conductivity, l.heat_capacity)
            .map_err(|e| at(entry.span().start, e.to_string()))?;
        match (l.porosity, l.saturation) {
            (None, None) => layers.push(base),
            (Some(phi), s) => {
                let state = PorousLayerState::new(base, phi, s.unwrap_or(0.0))
                    .map_err(|e| at(entry.span().start, e.to_string()))?;
                layers.push(wet_layer(&state, &PhysicalConstants::REFERENCE));
                porous.push((i, state));
            }
            (None, Some(_)) => {
                return Err(at(
                    entry.span().start,
                    "saturation needs a porosity".into(),
                ))
            }
        }
    }
    let slices_per_layer = parsed.slices_per_layer.unwrap_or(DEFAULT_SLICES_PER_LAYER);
    if slices_per_layer == 0 {
        return Err(CliError::format(path, "slices_per_layer must be >= 1"));
    }
    let stack = LayerStack::new(layers, parsed.boundary_resistance.unwrap_or(0.0))
        .map_err(|e| CliError::format(path, e.to_string()))?;
    Ok(StackDescription::Layers {
        stack,
        porous,
        slices_per_layer,
    })
}

pub fn read_stack(path: &Path) -> Result<StackDescription> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_stack(path, &text)
}
