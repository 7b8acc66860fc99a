//! Thermal network types, layer-stack discretization, the forward
//! step-response solver and the steady-state junction-to-ambient resistance.

mod network;
mod stack;
mod transient;

pub use network::{
    cauer_step_response, foster_step_response, log_spaced_times, times_per_decade, CauerNetwork,
    CauerRung, FosterNetwork, FosterStage,
};
pub use stack::{
    stack_to_cauer, stack_to_cauer_with, Discretization, Layer, LayerStack,
    DEFAULT_BOUNDARY_CAPACITANCE_FRACTION,
};
pub(crate) use transient::interpolate_log_time;
pub use transient::{
    steady_state_resistance, steady_state_resistance_with, SettlingCriterion, SignalKind,
    TransientRecord,
};
