//! Ternary ("trinary") search for the central pressure of the heaviest star.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::constants::PhysicalConstants;
use super::star::{integrate_star, StarFailure, StarSolution};
use crate::config::IntegratorConfig;
use crate::fanout;

const MAX_ITERATIONS: usize = 500;

/// Relative bracket width at which the sieve stops. The published central
/// pressure carries about five significant digits.
pub const DEFAULT_BRACKET_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn relative_width(&self) -> f64 {
        self.width() / self.mid().abs()
    }
}

/// Maximises a unimodal function on `[lo, hi]`.
///
/// Each iteration evaluates the two interior third-points together (through
/// `eval_pair`) and drops the outer third on the side of the smaller value.
/// Stops once the bracket's width relative to its midpoint is at most
/// `rel_tol` and returns the final bracket.
pub fn ternary_maximize<E, F>(
    lo: f64,
    hi: f64,
    rel_tol: f64,
    mut eval_pair: F,
) -> Result<(Bracket, usize), E>
where
    F: FnMut(f64, f64) -> Result<(f64, f64), E>,
{
    let mut b = Bracket { lo, hi };
    let mut iterations = 0;
    while b.relative_width() > rel_tol && iterations < MAX_ITERATIONS {
        let third = b.width() / 3.0;
        let (left, right) = (b.lo + third, b.hi - third);
        let (f_left, f_right) = eval_pair(left, right)?;
        if f_left < f_right {
            b.lo = left;
        } else {
            b.hi = right;
        }
        iterations += 1;
    }
    Ok((b, iterations))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SieveResult {
    pub p_central: f64,
    pub bracket: Bracket,
    pub iterations: usize,
    /// Distinct star integrations performed.
    pub evaluations: usize,
    /// Star at the returned central pressure.
    pub star: StarSolution,
}

#[derive(Debug, thiserror::Error)]
pub enum SieveError {
    #[error("search bracket must satisfy 0 < lo < hi, got [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },
    #[error("bracket tolerance must be positive, got {0}")]
    Tolerance(f64),
    #[error("star integration at P_c = {p_central:e} failed: {source}")]
    Star {
        p_central: f64,
        #[source]
        source: StarFailure,
    },
}

/// Memoised total mass as a function of central pressure.
struct MassOracle<'a> {
    config: &'a IntegratorConfig,
    constants: &'a PhysicalConstants,
    memo: Mutex<HashMap<u64, f64>>,
}

impl MassOracle<'_> {
    fn mass(&self, p_central: f64) -> Result<f64, SieveError> {
        let key = p_central.to_bits();
        if let Some(&m) = self.memo.lock().unwrap().get(&key) {
            return Ok(m);
        }
        let star = integrate_star(p_central, self.config, self.constants)
            .map_err(|source| SieveError::Star { p_central, source })?;
        self.memo.lock().unwrap().insert(key, star.mass_g);
        Ok(star.mass_g)
    }
}

/// Central pressure maximising the total mass on `[p_lo, p_hi]`.
///
/// The two probes of each iteration run concurrently when `jobs != 1`.
pub fn trinary_sieve(
    p_lo: f64,
    p_hi: f64,
    config: &IntegratorConfig,
    constants: &PhysicalConstants,
    bracket_tolerance: f64,
    jobs: usize,
) -> Result<SieveResult, SieveError> {
    if !(p_lo > 0.0 && p_hi > p_lo && p_hi.is_finite()) {
        return Err(SieveError::Bracket { lo: p_lo, hi: p_hi });
    }
    if !(bracket_tolerance > 0.0) {
        return Err(SieveError::Tolerance(bracket_tolerance));
    }
    let oracle = MassOracle {
        config,
        constants,
        memo: Mutex::new(HashMap::new()),
    };
    let (bracket, iterations) = ternary_maximize(p_lo, p_hi, bracket_tolerance, |a, b| {
        let masses = fanout::map(&[a, b], jobs, |&p| oracle.mass(p));
        let mut it = masses.into_iter();
        Ok::<_, SieveError>((it.next().unwrap()?, it.next().unwrap()?))
    })?;
    let p_central = bracket.mid();
    let star = integrate_star(p_central, config, constants)
        .map_err(|source| SieveError::Star { p_central, source })?;
    let evaluations = oracle.memo.lock().unwrap().len() + 1;
    Ok(SieveResult {
        p_central,
        bracket,
        iterations,
        evaluations,
        star,
    })
}
