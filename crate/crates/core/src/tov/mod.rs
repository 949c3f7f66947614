//! Neutron-star structure for an ideal degenerate neutron gas, in CGS units.
//!
//! The state vector is `(m, P)`: enclosed mass in grams and pressure in
//! erg cm^-3, integrated outward in radius from the centre until the
//! pressure vanishes.

pub mod constants;
pub mod eos;
pub mod sieve;
pub mod star;
pub mod sweep;

pub use constants::PhysicalConstants;
pub use eos::{eos_energy_density, eos_pressure, invert_pressure, relativity_parameter, EosPoint};
pub use sieve::{trinary_sieve, SieveError, SieveResult, DEFAULT_BRACKET_TOLERANCE};
pub use star::{integrate_star, star_config, tov_derivatives, StarFailure, StarRow, StarSolution};
pub use sweep::{parameter_sweep, CellStatus, Reference, SweepRow};

/// Central pressure of the heaviest star, erg cm^-3, as reported by the
/// original sieve.
pub const REFERENCE_P_CENTRAL: f64 = 3.631382e35;
pub const REFERENCE_MASS_MSUN: f64 = 0.710_171_88;
pub const REFERENCE_RADIUS_KM: f64 = 9.162_33;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TovError {
    #[error("number density must be finite and non-negative, got {0}")]
    Density(f64),
    #[error("pressure must be finite and non-negative, got {0}")]
    Pressure(f64),
    #[error("surface reached at r = {r} cm")]
    SurfaceReached { r: f64 },
    #[error("horizon formation: 2Gm/(c^2 r) >= 1 at r = {r} cm, m = {m} g")]
    Horizon { r: f64, m: f64 },
    #[error("invalid state r = {r}, m = {m}, P = {pressure}")]
    State { r: f64, m: f64, pressure: f64 },
    #[error("physical constants must be finite and positive")]
    Constants,
}
