//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use ctdt_core::mpc::{self, GradientMap, SoftConstraints};
use ctdt_core::{CtDtSystem, GainConstants, LtiSystem, MpcProblem};
use nalgebra::DMatrix;

/// Double integrator, Δ = 0.2, H = 5, optional soft state bounds ±(10, 3).
pub fn double_integrator(gamma: f64) -> MpcProblem {
    let prob = MpcProblem::double_integrator(0.2, 5).expect("double integrator");
    if gamma == 0.0 {
        return prob;
    }
    prob.with_soft_constraints(SoftConstraints::symmetric(gamma, &[10.0, 3.0]).expect("bounds"))
        .expect("soft constraints")
}

pub fn suboptimal_loop(prob: &MpcProblem, n: u32, period: f64) -> CtDtSystem {
    let cost = Arc::new(mpc::condense(prob).expect("condense"));
    GradientMap::with_default_step(cost).to_ctdt(prob, n, period).expect("loop")
}

pub fn gains() -> GainConstants {
    GainConstants {
        lip_x_f: 1.0,
        lip_z_f: 1.0,
        oslip_x_f: -2.0,
        lip_x_g: 0.5,
        lip_z_g: 0.5,
        rm_rate: Some(1.0),
    }
}

/// A stable `dim`-state, `dim`-input LTI loop with a contracting map.
pub fn lti(dim: usize) -> LtiSystem {
    let a = DMatrix::from_fn(dim, dim, |i, j| if i == j { -1.0 - i as f64 } else { 0.1 * (i as f64 - j as f64) });
    let b = DMatrix::from_fn(dim, dim, |i, j| if i == j { 1.0 } else { 0.05 });
    let c = DMatrix::from_fn(dim, dim, |i, j| 0.1 / (1.0 + i as f64 + j as f64));
    let d = DMatrix::from_fn(dim, dim, |i, j| if i == j { 0.3 } else { 0.0 });
    LtiSystem::new(a, b, c, d).expect("lti")
}
