//! Toroidal coordinates (η, θ, ψ) on ℝ³ with focal ring x²+y²=1, z=0.
//!
//! ```text
//! x = sinh η cos ψ / q,  y = sinh η sin ψ / q,  z = sin θ / q,  q = cosh η − cos θ
//! ```
//!
//! η = 0 is the z-axis together with the point at infinity, η → ∞ is the focal
//! (core) ring. Surfaces of constant η are nested tori.

use std::f64::consts::TAU;

use nalgebra::Matrix3;

use crate::{Error, Point3, Result, Vec3};

/// Distance from the core ring below which the chart is refused (η would exceed ~28).
const RING_EXCLUSION: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToroidalPoint {
    pub eta: f64,
    pub theta: f64,
    pub psi: f64,
}

pub(crate) fn reduce_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    // rem_euclid can return TAU itself for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl ToroidalPoint {
    /// Validates η ≥ 0 and reduces both angles into [0, 2π).
    pub fn new(eta: f64, theta: f64, psi: f64) -> Result<Self> {
        if !(eta.is_finite() && theta.is_finite() && psi.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite toroidal coordinates ({eta}, {theta}, {psi})"
            )));
        }
        if eta < 0.0 {
            return Err(Error::InvalidInput(format!("eta must be >= 0, got {eta}")));
        }
        Ok(Self {
            eta,
            theta: reduce_angle(theta),
            psi: reduce_angle(psi),
        })
    }

    /// q = cosh η − cos θ, evaluated as 2 sinh²(η/2) + 2 sin²(θ/2) to keep
    /// precision near the point at infinity.
    pub fn q(&self) -> f64 {
        let a = (0.5 * self.eta).sinh();
        let b = (0.5 * self.theta).sin();
        2.0 * (a * a + b * b)
    }

    pub fn to_cartesian(&self) -> Result<Point3> {
        toroidal_to_cartesian(self)
    }

    /// Columns are ∂x/∂η, ∂x/∂θ, ∂x/∂ψ.
    pub fn jacobian(&self) -> Matrix3<f64> {
        let (sh, ch) = (self.eta.sinh(), self.eta.cosh());
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.psi.sin_cos();
        let q = self.q();
        let q2 = q * q;
        let a = (1.0 - ch * ct) / q2;
        Matrix3::new(
            cp * a,
            -sh * cp * st / q2,
            -sh * sp / q,
            sp * a,
            -sh * sp * st / q2,
            sh * cp / q,
            -st * sh / q2,
            (ct * ch - 1.0) / q2,
            0.0,
        )
    }

    /// Cartesian gradients of η and θ, and the unit azimuthal direction
    /// e_ψ = (−sin ψ, cos ψ, 0). ∇ψ = (q / sinh η) e_ψ is left to the caller
    /// so the ratio can be regularised on the z-axis.
    pub fn gradients(&self) -> (Vec3, Vec3, Vec3) {
        // orthogonal chart with scale factors (1/q, 1/q, sinh η / q)
        let j = self.jacobian();
        let q2 = self.q() * self.q();
        let grad_eta = j.column(0) * q2;
        let grad_theta = j.column(1) * q2;
        let (sp, cp) = self.psi.sin_cos();
        (grad_eta, grad_theta, Vec3::new(-sp, cp, 0.0))
    }
}

pub fn toroidal_to_cartesian(p: &ToroidalPoint) -> Result<Point3> {
    let q = p.q();
    if q <= 0.0 {
        return Err(Error::ChartDomain(
            "(eta=0, theta=0) is the point at infinity".into(),
        ));
    }
    let sh = p.eta.sinh();
    let (sp, cp) = p.psi.sin_cos();
    Ok(Point3::new(sh * cp / q, sh * sp / q, p.theta.sin() / q))
}

/// Inverse of the toroidal chart.
///
/// Points on the z-axis are representable (η = 0) and get ψ = 0 by convention;
/// points on the core ring are rejected.
pub fn cartesian_to_toroidal(x: &Point3) -> Result<ToroidalPoint> {
    if !(x[0].is_finite() && x[1].is_finite() && x[2].is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite point {x:?}")));
    }
    let rho = x[0].hypot(x[1]);
    let z = x[2];
    let d2sq = (rho - 1.0) * (rho - 1.0) + z * z;
    if d2sq.sqrt() < RING_EXCLUSION {
        return Err(Error::ChartDomain(format!(
            "point {:?} lies on the core ring x²+y²=1, z=0",
            [x[0], x[1], x[2]]
        )));
    }
    // ln(d1²/d2²) with d1² − d2² = 4ρ, accurate near the axis
    let eta = 0.5 * (4.0 * rho / d2sq).ln_1p();
    let r2 = rho * rho + z * z;
    let theta = reduce_angle((2.0 * z).atan2(r2 - 1.0));
    let psi = if rho == 0.0 {
        0.0
    } else {
        reduce_angle(x[1].atan2(x[0]))
    };
    Ok(ToroidalPoint { eta, theta, psi })
}
