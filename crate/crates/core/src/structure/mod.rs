//! Foster to Cauer conversion, cumulative and differential structure
//! functions, divergence-point detection and partial-resistance readout.

mod continued_fraction;
mod divergence;
mod function;

pub use continued_fraction::{
    foster_to_cauer, foster_to_cauer_with, ExpansionOptions, ExpansionReport,
};
pub use divergence::{
    divergence_point, Divergence, DivergenceStatus, DEFAULT_DIVERGENCE_TOLERANCE,
};
pub use function::{
    cumulative_structure_function, differential_structure_function, partial_resistance,
    StructureFunction, AMBIENT_CAPACITANCE,
};
