//! Contraction certificates, zero-order-hold simulation and suboptimal MPC
//! experiments for sampled-data CT/DT interconnections.
//!
//! A continuous-time plant `ẋ = f(x, z)` is driven through a zero-order hold
//! by a discrete-time algorithm that, every `T` seconds, applies `n`
//! iterations of a map `G` to the sampled state:
//! `z_k = Gⁿ(x(kT), z_{k−1})`.

// Guards like `!(x > 0.0)` are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod error;
pub mod linalg;
pub mod mpc;
pub mod norms;
pub mod simulate;
pub mod systems;

pub use certify::{Certificate, CertificateKind, GainConstants};
pub use error::{Error, Result};
pub use mpc::{CondensedCost, GradientMap, MpcProblem, SoftConstraints};
pub use norms::{h_kernel, CompositeNorm, MatrixMeasure, MeasureWeight, NormKind, WeightedNorm};
pub use simulate::{BoxSet, EstimatedConstants, SimOptions, Trajectory};
pub use systems::{CtDtSystem, FixedPointResult, LtiSystem};
