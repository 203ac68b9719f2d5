//! Effective geometry of linearized waves about the static Q=1 Hopf soliton
//! of the Nicole model, and an adaptive Runge-Kutta ray tracer for it.
//!
//! The crate is organised bottom-up:
//!
//! - [`hopf_map`]: toroidal chart, torus ansatz, strain, Hopf charge and
//!   preimage linking.
//! - [`effective_geometry`]: closed-form effective and reciprocal metrics,
//!   Ricci scalar (closed form and finite-difference oracle), principal
//!   symbol and the Lorentzian-signature check.
//! - [`geodesics`]: geodesic right-hand sides, classical RK4 with
//!   step-doubling control, trajectories.
//! - [`scenarios`]: declarative ray-bundle experiments and their diagnostics.
//! - [`validation`]: the cross-validation battery behind `hopflens validate`.

pub mod effective_geometry;
pub mod error;
mod finite_diff;
pub mod geodesics;
pub mod hopf_map;
pub mod scenarios;
pub mod tensor;
pub mod validation;

pub use error::{Error, Result};
pub use tensor::{Chart, SymTensor3};

/// Position in Cartesian 3-space, in units of the soliton core radius.
pub type Point3 = nalgebra::Vector3<f64>;
/// Velocity (or any tangent vector) in Cartesian 3-space.
pub type Vec3 = nalgebra::Vector3<f64>;
