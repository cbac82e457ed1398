//! Dilogarithm, the saddle-point potential, and hyperbolic gluing equations.

pub mod dilog;
pub mod gluing;
pub mod potential;

pub use dilog::{bloch_wigner, dilog, try_dilog};
pub use gluing::{
    figure_eight_gluing_system, newton_solve, volume, GluingEquation, GluingSystem, NewtonOptions,
    NewtonSolution, ShapeAssignment, ShapeExponent,
};
pub use potential::{
    growth_rate, growth_saddle, potential, potential_derivative, saddle_roots, saddle_solve,
};
