//! Zero-temperature ideal neutron gas.
//!
//! With `x = (h / 2 m_n c) (3n/pi)^(1/3)` and `K = pi m_n^4 c^5 / 3h^3`:
//!
//! ```text
//! P   = K [ x (2x^2 - 3) sqrt(x^2 + 1) + 3 asinh(x) ]
//! rho = m_n c^2 n + K [ 3x (2x^2 + 1) sqrt(x^2 + 1) - 8x^3 - 3 asinh(x) ]
//! ```
//!
//! Both brackets start at `x^5`, so for small `x` the closed forms cancel
//! catastrophically. Below [`SERIES_CUTOFF`] they are summed from the series
//! of their derivatives, `8x^4 / sqrt(1+x^2)` and `24x^2 (sqrt(1+x^2) - 1)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::constants::PhysicalConstants;
use super::TovError;

const SERIES_CUTOFF: f64 = 0.3;
const SERIES_TERMS: usize = 30;
const BISECTION_REL_TOL: f64 = 1e-13;
const BISECTION_MAX_ITER: usize = 4000;

/// Thermodynamic state at one number density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EosPoint {
    /// Number density, cm^-3.
    pub n: f64,
    /// Relativity parameter (Fermi momentum over `m_n c`).
    pub x: f64,
    /// Pressure, erg cm^-3.
    pub pressure: f64,
    /// Mass-energy density, erg cm^-3.
    pub rho: f64,
    /// `rho - m_n c^2 n`, erg cm^-3.
    pub u_kinetic: f64,
}

impl EosPoint {
    pub fn at_density(n: f64, k: &PhysicalConstants) -> Result<Self, TovError> {
        let x = relativity_parameter(n, k)?;
        let scale = k.pressure_scale();
        let u_kinetic = scale * kinetic_bracket(x);
        Ok(EosPoint {
            n,
            x,
            pressure: scale * pressure_bracket(x),
            rho: k.m_n * k.c2() * n + u_kinetic,
            u_kinetic,
        })
    }
}

pub fn relativity_parameter(n: f64, k: &PhysicalConstants) -> Result<f64, TovError> {
    if !(n >= 0.0) || !n.is_finite() {
        return Err(TovError::Density(n));
    }
    Ok(k.compton_half() * (3.0 * n / PI).cbrt())
}

/// Number density for a relativity parameter; inverse of [`relativity_parameter`].
pub fn density_from_parameter(x: f64, k: &PhysicalConstants) -> f64 {
    PI / 3.0 * (x / k.compton_half()).powi(3)
}

/// `x (2x^2 - 3) sqrt(x^2 + 1) + 3 asinh(x)`.
pub fn pressure_bracket(x: f64) -> f64 {
    if x < SERIES_CUTOFF {
        // 8 sum_k binom(-1/2, k) x^(2k+5) / (2k+5)
        let x2 = x * x;
        let mut binom = 1.0;
        let mut power = x2 * x2 * x;
        let mut sum = 0.0;
        for j in 0..SERIES_TERMS {
            sum += binom * power / (2 * j + 5) as f64;
            binom *= -(j as f64 + 0.5) / (j as f64 + 1.0);
            power *= x2;
        }
        8.0 * sum
    } else {
        let root = (x * x + 1.0).sqrt();
        x * (2.0 * x * x - 3.0) * root + 3.0 * x.asinh()
    }
}

/// `3x (2x^2 + 1) sqrt(x^2 + 1) - 8x^3 - 3 asinh(x)`.
pub fn kinetic_bracket(x: f64) -> f64 {
    if x < SERIES_CUTOFF {
        // 24 sum_{k>=1} binom(1/2, k) x^(2k+3) / (2k+3)
        let x2 = x * x;
        let mut binom = 0.5;
        let mut power = x2 * x2 * x;
        let mut sum = 0.0;
        for j in 1..=SERIES_TERMS {
            sum += binom * power / (2 * j + 3) as f64;
            binom *= (0.5 - j as f64) / (j as f64 + 1.0);
            power *= x2;
        }
        24.0 * sum
    } else {
        let root = (x * x + 1.0).sqrt();
        3.0 * x * (2.0 * x * x + 1.0) * root - 8.0 * x * x * x - 3.0 * x.asinh()
    }
}

pub fn eos_pressure(n: f64, k: &PhysicalConstants) -> Result<f64, TovError> {
    let x = relativity_parameter(n, k)?;
    Ok(k.pressure_scale() * pressure_bracket(x))
}

pub fn eos_energy_density(n: f64, k: &PhysicalConstants) -> Result<f64, TovError> {
    let x = relativity_parameter(n, k)?;
    Ok(k.m_n * k.c2() * n + k.pressure_scale() * kinetic_bracket(x))
}

/// Relativity parameter whose pressure equals `pressure`.
///
/// Brackets `[0, x_hi]` by doubling, then bisects to a relative width of
/// 1e-13 in `x`.
pub fn invert_pressure_parameter(pressure: f64, k: &PhysicalConstants) -> Result<f64, TovError> {
    if !(pressure >= 0.0) || !pressure.is_finite() {
        return Err(TovError::Pressure(pressure));
    }
    if pressure == 0.0 {
        return Ok(0.0);
    }
    let target = pressure / k.pressure_scale();
    let (mut lo, mut hi) = (0.0, 1.0);
    while pressure_bracket(hi) < target {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(TovError::Pressure(pressure));
        }
    }
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= BISECTION_REL_TOL * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pressure_bracket(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Number density whose pressure equals `pressure`.
pub fn invert_pressure(pressure: f64, k: &PhysicalConstants) -> Result<f64, TovError> {
    invert_pressure_parameter(pressure, k).map(|x| density_from_parameter(x, k))
}

/// Energy density at a given pressure.
pub fn energy_density_at_pressure(pressure: f64, k: &PhysicalConstants) -> Result<f64, TovError> {
    let x = invert_pressure_parameter(pressure, k)?;
    let n = density_from_parameter(x, k);
    Ok(k.m_n * k.c2() * n + k.pressure_scale() * kinetic_bracket(x))
}
