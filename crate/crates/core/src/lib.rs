//! Thermal transient analysis of packaged semiconductor devices.
//!
//! The crate covers the full measurement-evaluation chain: forward simulation
//! of step responses from physical layer stacks ([`model`]), network
//! identification by deconvolution of the logarithmic-time derivative
//! ([`nid`]), Foster to Cauer conversion and structure functions
//! ([`structure`]), and a moisture model of a porous sensing layer with a
//! hermeticity classifier built on top of it ([`moisture`]). [`pipeline`]
//! wires the steps together with a single configuration.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod model;
pub mod moisture;
pub mod nid;
pub mod pipeline;
pub mod structure;

pub use error::{Error, Result};
pub use model::{
    cauer_step_response, foster_step_response, stack_to_cauer, steady_state_resistance,
    CauerNetwork, CauerRung, FosterNetwork, FosterStage, Layer, LayerStack, SignalKind,
    TransientRecord,
};
pub use nid::{LogTimeSignal, TimeConstantSpectrum};
pub use pipeline::{analyze, Analysis, AnalysisConfig};
pub use structure::{foster_to_cauer, StructureFunction};
