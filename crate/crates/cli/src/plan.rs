//! Fully resolved run descriptions. A manifest stores one of these, and
//! replaying it needs nothing else.

use std::path::Path;

use abm::poly::PolyCase;
use abm::tov::{star_config, PhysicalConstants, Reference};
use abm::{IntegratorConfig, Mode};
use anyhow::{ensure, Context};
use serde::{Deserialize, Serialize};

use crate::args::{ControlArgs, PolyArgs, SieveArgs, StarArgs, SweepArgs, TovArgs};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunPlan {
    Poly {
        case: PolyCase,
    },
    Tov {
        p_central: f64,
        config: IntegratorConfig,
        constants: PhysicalConstants,
    },
    Sieve {
        lo: f64,
        hi: f64,
        bracket_tolerance: f64,
        config: IntegratorConfig,
        constants: PhysicalConstants,
        jobs: usize,
    },
    Sweep {
        orders: Vec<usize>,
        tolerances: Vec<f64>,
        p_central: f64,
        reference: Reference,
        /// Order and tolerance are replaced cell by cell.
        base: IntegratorConfig,
        constants: PhysicalConstants,
        jobs: usize,
    },
}

impl RunPlan {
    pub fn name(&self) -> &'static str {
        match self {
            RunPlan::Poly { .. } => "poly",
            RunPlan::Tov { .. } => "tov",
            RunPlan::Sieve { .. } => "sieve",
            RunPlan::Sweep { .. } => "sweep",
        }
    }

    pub fn constants(&self) -> Option<&PhysicalConstants> {
        match self {
            RunPlan::Poly { .. } => None,
            RunPlan::Tov { constants, .. }
            | RunPlan::Sieve { constants, .. }
            | RunPlan::Sweep { constants, .. } => Some(constants),
        }
    }

    /// Rejects settings the integrator would refuse before taking a step.
    pub fn validate(&self) -> anyhow::Result<()> {
        match self {
            RunPlan::Poly { case } => {
                case.config.validate()?;
                ensure!(
                    case.x_end > case.x0,
                    "--xend {} must lie beyond --x0 {}",
                    case.x_end,
                    case.x0
                );
            }
            RunPlan::Tov {
                config, constants, ..
            } => {
                config.validate()?;
                ensure!(
                    constants.is_valid(),
                    "physical constants must be finite and positive"
                );
            }
            RunPlan::Sieve {
                lo,
                hi,
                config,
                constants,
                ..
            } => {
                config.validate()?;
                ensure!(
                    constants.is_valid(),
                    "physical constants must be finite and positive"
                );
                ensure!(lo < hi, "--lo {lo:e} must be below --hi {hi:e}");
            }
            RunPlan::Sweep {
                orders,
                tolerances,
                base,
                constants,
                ..
            } => {
                ensure!(!orders.is_empty(), "no orders given");
                ensure!(!tolerances.is_empty(), "no tolerances given");
                for &order_ab in orders {
                    for &target_correction in tolerances {
                        IntegratorConfig {
                            order_ab,
                            target_correction,
                            ..*base
                        }
                        .validate()?;
                    }
                }
                ensure!(
                    constants.is_valid(),
                    "physical constants must be finite and positive"
                );
            }
        }
        Ok(())
    }
}

fn controlled(config: IntegratorConfig, control: &ControlArgs) -> IntegratorConfig {
    IntegratorConfig {
        growth_cap: control.growth_cap,
        max_steps: control.max_steps,
        ..config
    }
}

fn load_constants(path: Option<&Path>) -> anyhow::Result<PhysicalConstants> {
    let Some(path) = path else {
        return Ok(PhysicalConstants::default());
    };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading constants from {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing constants in {}", path.display()))
}

fn star(args: &StarArgs) -> IntegratorConfig {
    let config = IntegratorConfig {
        dx_initial: args.dx0,
        dx_min: args.dxmin,
        ..star_config(args.order, args.tol)
    };
    controlled(config, &args.control)
}

pub fn poly(args: &PolyArgs) -> RunPlan {
    let mode = Mode::from(args.mode);
    let config = IntegratorConfig {
        order_ab: args.order,
        target_correction: args.tol,
        dx_initial: args.resolved_dx(),
        dx_min: args.dxmin,
        mode,
        ..Default::default()
    };
    RunPlan::Poly {
        case: PolyCase {
            x0: args.x0,
            y0: args.y0,
            x_end: args.xend,
            config: controlled(config, &args.control),
        },
    }
}

pub fn tov(args: &TovArgs) -> anyhow::Result<RunPlan> {
    Ok(RunPlan::Tov {
        p_central: args.pc,
        config: star(&args.star),
        constants: load_constants(args.star.constants.as_deref())?,
    })
}

pub fn sieve(args: &SieveArgs) -> anyhow::Result<RunPlan> {
    Ok(RunPlan::Sieve {
        lo: args.lo,
        hi: args.hi,
        bracket_tolerance: args.bracket_tol,
        config: star(&args.star),
        constants: load_constants(args.star.constants.as_deref())?,
        jobs: args.jobs,
    })
}

pub fn sweep(args: &SweepArgs) -> anyhow::Result<RunPlan> {
    let base = IntegratorConfig {
        dx_initial: args.dx0,
        dx_min: args.dxmin,
        ..star_config(args.orders.0[0], args.tols.0[0])
    };
    Ok(RunPlan::Sweep {
        orders: args.orders.0.clone(),
        tolerances: args.tols.0.clone(),
        p_central: args.pc,
        reference: Reference {
            mass_msun: args.ref_mass,
            radius_km: args.ref_radius,
        },
        base: controlled(base, &args.control),
        constants: load_constants(args.constants.as_deref())?,
        jobs: args.jobs,
    })
}
