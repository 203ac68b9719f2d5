//! Geodesic accelerations ẍ^i = −Γ^i_jk ẋ^j ẋ^k.

use nalgebra::Matrix3;

use crate::effective_geometry::{
    christoffel_fd, default_step, metric_matrix, FlatMetric, HopfionMetric, SpatialMetric,
};
use crate::{Error, Point3, Result, Vec3};

/// Position and velocity d/dt with t the static time coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicState {
    pub position: Point3,
    pub velocity: Vec3,
}

impl GeodesicState {
    pub fn new(position: Point3, velocity: Vec3) -> Self {
        Self { position, velocity }
    }
}

/// A spatial geometry able to produce geodesic accelerations.
pub trait Geometry: Sync {
    fn metric(&self, x: &Point3) -> Matrix3<f64>;
    fn acceleration(&self, x: &Point3, v: &Vec3) -> Result<Vec3>;

    /// m_ij v^i v^j.
    fn norm_sq(&self, x: &Point3, v: &Vec3) -> f64 {
        v.dot(&(self.metric(x) * v))
    }
}

/// The hopfion metric with the closed-form geodesic equations (production path).
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedFormGeometry;

impl Geometry for ClosedFormGeometry {
    fn metric(&self, x: &Point3) -> Matrix3<f64> {
        metric_matrix(x)
    }
    fn acceleration(&self, x: &Point3, v: &Vec3) -> Result<Vec3> {
        Ok(closed_form_acceleration(x, v))
    }
}

/// Any [`SpatialMetric`] with Christoffel symbols from finite differences.
#[derive(Debug, Clone, Copy, Default)]
pub struct ChristoffelGeometry<M>(pub M);

impl<M: SpatialMetric> Geometry for ChristoffelGeometry<M> {
    fn metric(&self, x: &Point3) -> Matrix3<f64> {
        self.0.metric(x)
    }
    fn acceleration(&self, x: &Point3, v: &Vec3) -> Result<Vec3> {
        christoffel_acceleration(&self.0, x, v)
    }
}

/// Euclidean space: straight lines.
#[derive(Debug, Clone, Copy, Default)]
pub struct FlatGeometry;

impl Geometry for FlatGeometry {
    fn metric(&self, x: &Point3) -> Matrix3<f64> {
        FlatMetric.metric(x)
    }
    fn acceleration(&self, _x: &Point3, _v: &Vec3) -> Result<Vec3> {
        Ok(Vec3::zeros())
    }
}

/// Coefficients c^i_(jk) of the written-out geodesic equations
/// ẍ^i + Σ_{j≤k} c^i_(jk) ẋ^j ẋ^k = 0, monomial order xx, xy, xz, yy, yz, zz.
///
/// These are the equations of the mirror image z → −z of the effective metric;
/// [`closed_form_acceleration`] conjugates them back.
fn mirrored_coefficients(x: f64, y: f64, z: f64) -> [[f64; 6]; 3] {
    let (x2, y2, z2) = (x * x, y * y, z * z);
    let (x4, y4, z4) = (x2 * x2, y2 * y2, z2 * z2);
    let (x6, y6, z6) = (x4 * x2, y4 * y2, z4 * z2);
    let (z3, z5) = (z2 * z, z4 * z);
    let s = 1.0 + x2 + y2 + z2;
    let d = s * s * s * s;
    let k43 = 4.0 / 3.0 / d;
    let k23 = 2.0 / 3.0 / d;
    let k13 = 1.0 / 3.0 / d;
    let k83 = 8.0 / 3.0 / d;
    let rho2 = x2 + y2;

    let ex = [
        -k43 * (-(x * z + y)
            * (z3 * (x2 + 2.0 * y2 + 2.0) - 3.0 * x * y * (rho2 + 1.0)
                + z * (-2.0 * x4 - x2 * (y2 + 1.0) + y4 + 4.0 * y2 + 1.0)
                + x * y * z2
                + z5)),
        k43 * (-(x * z + y)
            * (-2.0 * z2 * (x2 + 2.0 * y2 + 3.0) + 2.0 * x * y * z * (3.0 * x2 + 3.0 * y2 + 5.0)
                - 3.0 * (x2 + 1.0) * (x2 + 1.0)
                + 2.0 * x * y * z3
                + 3.0 * y4
                - 3.0 * z4)),
        k43 * ((x * z + y)
            * (-2.0 * x * z2 * (rho2 - 1.0) - 4.0 * y * z * (2.0 * x2 + 2.0 * y2 + 1.0)
                + 3.0 * x * (rho2 + 1.0) * (rho2 + 1.0)
                - x * z4
                - 4.0 * y * z3)),
        k43 * (x * z4 * (2.0 * x2 + y2 - 1.0)
            + 4.0 * y * z3 * (rho2 + 2.0)
            + 3.0 * x * (y2 - 1.0) * (rho2 + 1.0)
            + x * z2 * (x4 - (x2 + 5.0) * y2 + x2 - 2.0 * y4 - 5.0)
            + 2.0 * y * z * (2.0 * x4 + x2 * (y2 + 5.0) - y4 + y2 + 2.0)
            + x * z6
            + 4.0 * y * z5),
        -k23 * (3.0 * x6 - 6.0 * x4 * x * y * z
            + x4 * (3.0 * y2 - z2 + 15.0)
            + 4.0 * x2 * x * y * z * (-3.0 * y2 + z2 - 7.0)
            + x2 * (-3.0 * y4 + 18.0 * y2 * (z2 + 1.0) + z4 + 10.0 * z2 + 9.0)
            - 2.0 * x * y * z * (3.0 * y4 - 2.0 * y2 * (z2 - 7.0) - z4 + 6.0 * z2 + 7.0)
            - 3.0 * y6
            + y4 * (19.0 * z2 + 3.0)
            + y2 * (z2 + 1.0) * (11.0 * z2 + 3.0)
            - 3.0 * (z2 + 1.0) * (z2 + 1.0) * (z2 + 1.0)),
        // printed with 2/3; the Christoffel symbols need 1/3, as in the ÿ equation
        -k13 * (-x * z4 * (7.0 * x2 + 7.0 * y2 + 15.0) - 4.0 * y * z3 * (rho2 - 3.0)
            + 3.0 * x * (rho2 - 1.0) * (rho2 + 1.0) * (rho2 + 3.0)
            - x * z2 * (9.0 * x4 + 2.0 * x2 * (9.0 * y2 + 5.0) + 9.0 * y4 + 10.0 * y2 + 21.0)
            - 2.0 * y * z * (9.0 * x4 + 2.0 * x2 * (9.0 * y2 + 1.0) + 9.0 * y4 + 2.0 * y2 - 3.0)
            - 3.0 * x * z6
            + 6.0 * y * z5),
    ];

    let ey = [
        k43 * (y * z4 * (x2 + 2.0 * y2 - 1.0) - 4.0 * x * z3 * (rho2 + 2.0)
            + 3.0 * (x2 - 1.0) * y * (rho2 + 1.0)
            + y * z2 * (-2.0 * x4 - x2 * (y2 + 5.0) + y4 + y2 - 5.0)
            + 2.0 * x * z * (x4 - (x2 + 5.0) * y2 - x2 - 2.0 * y4 - 2.0)
            - 4.0 * x * z5
            + y * z6),
        -k43 * ((x - y * z)
            * (3.0 * x4 - 2.0 * z2 * (2.0 * x2 + y2 + 3.0)
                - 2.0 * x * y * z * (3.0 * x2 + 3.0 * y2 + 5.0)
                - 2.0 * x * y * z3
                - 3.0 * (y2 + 1.0) * (y2 + 1.0)
                - 3.0 * z4)),
        -k23 * (3.0 * x6 - 6.0 * x4 * x * y * z
            + x4 * (3.0 * y2 - 19.0 * z2 - 3.0)
            + 4.0 * x2 * x * y * z * (-3.0 * y2 + z2 - 7.0)
            - x2 * (3.0 * y4 + 18.0 * y2 * (z2 + 1.0) + 11.0 * z4 + 14.0 * z2 + 3.0)
            - 2.0 * x * y * z * (3.0 * y4 - 2.0 * y2 * (z2 - 7.0) - z4 + 6.0 * z2 + 7.0)
            - 3.0 * y6
            + y4 * (z2 - 15.0)
            - y2 * (z2 + 1.0) * (z2 + 9.0)
            + 3.0 * (z2 + 1.0) * (z2 + 1.0) * (z2 + 1.0)),
        -k43 * ((x - y * z)
            * (z3 * (2.0 * x2 + y2 + 2.0) + 3.0 * x * y * (rho2 + 1.0)
                + z * (x4 - (x2 + 1.0) * y2 + 4.0 * x2 - 2.0 * y4 + 1.0)
                - x * y * z2
                + z5)),
        -k43 * ((x - y * z)
            * (-2.0 * y * z2 * (rho2 - 1.0) + 4.0 * x * z * (2.0 * x2 + 2.0 * y2 + 1.0)
                + 3.0 * y * (rho2 + 1.0) * (rho2 + 1.0)
                + 4.0 * x * z3
                - y * z4)),
        -k13 * (-y * z4 * (7.0 * x2 + 7.0 * y2 + 15.0) + 4.0 * x * z3 * (rho2 - 3.0)
            + 3.0 * y * (rho2 - 1.0) * (rho2 + 1.0) * (rho2 + 3.0)
            - y * z2 * (9.0 * x4 + 2.0 * x2 * (9.0 * y2 + 5.0) + 9.0 * y4 + 10.0 * y2 + 21.0)
            + 2.0 * x * z * (9.0 * x4 + 2.0 * x2 * (9.0 * y2 + 1.0) + 9.0 * y4 + 2.0 * y2 - 3.0)
            - 6.0 * x * z5
            - 3.0 * y * z6),
    ];

    let c = rho2 - z2 - 1.0;
    let ez = [
        -k23 * (x6 * z
            + x4 * z * (3.0 * y2 + 9.0 * z2 + 13.0)
            + 4.0 * x2 * x * y * (z2 + 3.0)
            + x2 * z * (3.0 * y4 + 10.0 * y2 * (z2 + 1.0) + 3.0 * z4 + 14.0 * z2 + 11.0)
            + 4.0 * x * y * (y2 * (z2 + 3.0) - z4 + 2.0 * z2 + 3.0)
            + z * (y6 + y4 * (z2 - 3.0) - y2 * (z2 + 1.0) * (z2 + 9.0) - (z2 + 1.0) * (z2 + 1.0) * (z2 + 1.0))),
        k83 * (x4 * (z2 + 3.0) - 4.0 * x2 * x * y * z * (z2 + 2.0)
            + x2 * (-z4 + 2.0 * z2 + 3.0)
            - 2.0 * x * y * z * (2.0 * y2 * (z2 + 2.0) + z4 + 6.0 * z2 + 5.0)
            - y2 * (y2 * (z2 + 3.0) - z4 + 2.0 * z2 + 3.0)),
        k43 * (c
            * (x * z2 * (4.0 * x2 + 4.0 * y2 + 5.0) + y * z * (rho2 - 1.0)
                + 3.0 * x * (rho2 + 1.0)
                + 2.0 * x * z4
                - y * z3)),
        -k23 * (x6 * z + x4 * z * (3.0 * y2 + z2 - 3.0)
            - 4.0 * x2 * x * y * (z2 + 3.0)
            - x2 * z * (-3.0 * y4 - 10.0 * y2 * (z2 + 1.0) + z4 + 10.0 * z2 + 9.0)
            - 4.0 * x * y * (y2 * (z2 + 3.0) - z4 + 2.0 * z2 + 3.0)
            + z * (y6 + y4 * (9.0 * z2 + 13.0) + y2 * (z2 + 1.0) * (3.0 * z2 + 11.0)
                - (z2 + 1.0) * (z2 + 1.0) * (z2 + 1.0))),
        -k43 * (c
            * (-3.0 * y * (1.0 + rho2) + x * (rho2 - 1.0) * z - y * (5.0 + 4.0 * rho2) * z2
                - x * z3
                - 2.0 * y * z4)),
        -k23 * (z * rho2 * c * (3.0 * rho2 + z2 + 1.0)),
    ];
    [ex, ey, ez]
}

/// Closed-form geodesic acceleration of the hopfion metric.
pub fn closed_form_acceleration(p: &Point3, v: &Vec3) -> Vec3 {
    // conjugate by the mirror P = diag(1, 1, −1)
    let c = mirrored_coefficients(p[0], p[1], -p[2]);
    let (vx, vy, vz) = (v[0], v[1], -v[2]);
    let mono = [vx * vx, vx * vy, vx * vz, vy * vy, vy * vz, vz * vz];
    let acc = |row: &[f64; 6]| -> f64 { -row.iter().zip(&mono).map(|(a, b)| a * b).sum::<f64>() };
    Vec3::new(acc(&c[0]), acc(&c[1]), -acc(&c[2]))
}

pub fn rhs_closed_form(s: &GeodesicState) -> Vec3 {
    closed_form_acceleration(&s.position, &s.velocity)
}

/// −Γ^i_jk v^j v^k with Γ from finite differences of `m`.
pub fn christoffel_acceleration<M: SpatialMetric + ?Sized>(m: &M, x: &Point3, v: &Vec3) -> Result<Vec3> {
    let gam = christoffel_fd(m, x, default_step(x))?;
    Ok(Vec3::from_fn(|i, _| {
        let mut s = 0.0;
        for j in 0..3 {
            for k in 0..3 {
                s += gam[i][j][k] * v[j] * v[k];
            }
        }
        -s
    }))
}

/// Acceleration from the Christoffel symbols of the hopfion metric (validation path).
pub fn rhs_christoffel(s: &GeodesicState) -> Result<Vec3> {
    christoffel_acceleration(&HopfionMetric, &s.position, &s.velocity)
}

/// Rescales `direction` so that m_ij v^i v^j = 1 at `x`.
pub fn normalize_velocity_in<G: Geometry + ?Sized>(g: &G, x: &Point3, direction: &Vec3) -> Result<Vec3> {
    if !(direction.iter().all(|c| c.is_finite()) && direction.norm() > 0.0) {
        return Err(Error::InvalidInput(format!(
            "direction must be finite and nonzero, got {:?}",
            [direction[0], direction[1], direction[2]]
        )));
    }
    // scale first so the quadratic form is O(1)
    let d = direction / direction.norm();
    Ok(d / g.norm_sq(x, &d).sqrt())
}

pub fn normalize_velocity(x: &Point3, direction: &Vec3) -> Result<Vec3> {
    normalize_velocity_in(&ClosedFormGeometry, x, direction)
}
