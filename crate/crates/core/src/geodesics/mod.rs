//! Geodesics of the effective metric: right-hand sides, RK4 stepping and trajectories.

pub mod integrator;
pub mod rhs;

pub use integrator::{
    integrate, integrate_fixed, rk4_step, AbortReason, IntegratorSettings, RayTrajectory, Sample,
    TrajectoryStatus, MAX_DRIFT,
};
pub use rhs::{
    christoffel_acceleration, closed_form_acceleration, normalize_velocity, normalize_velocity_in,
    rhs_christoffel, rhs_closed_form, ChristoffelGeometry, ClosedFormGeometry, FlatGeometry,
    GeodesicState, Geometry,
};
