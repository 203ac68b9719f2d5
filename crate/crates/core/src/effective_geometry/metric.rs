use nalgebra::Matrix3;

use crate::hopf_map::{strain, AnsatzConfig, ToroidalPoint};
use crate::tensor::{Chart, SymTensor3};
use crate::{Error, Point3, Result};

/// A Riemannian metric on (a region of) ℝ³ in Cartesian components.
///
/// Blanket-implemented for closures so tests can inject perturbed or flat metrics.
pub trait SpatialMetric: Sync {
    fn metric(&self, x: &Point3) -> Matrix3<f64>;
}

impl<F: Fn(&Point3) -> Matrix3<f64> + Sync> SpatialMetric for F {
    fn metric(&self, x: &Point3) -> Matrix3<f64> {
        self(x)
    }
}

/// The effective metric m_ij of the Q = 1 hopfion.
#[derive(Debug, Clone, Copy, Default)]
pub struct HopfionMetric;

impl SpatialMetric for HopfionMetric {
    fn metric(&self, x: &Point3) -> Matrix3<f64> {
        metric_matrix(x)
    }
}

/// The Euclidean metric δ_ij.
#[derive(Debug, Clone, Copy, Default)]
pub struct FlatMetric;

impl SpatialMetric for FlatMetric {
    fn metric(&self, _x: &Point3) -> Matrix3<f64> {
        Matrix3::identity()
    }
}

/// Reciprocal effective metric (m⁻¹)^ij of the Q = 1 hopfion, Cartesian chart.
pub fn inv_metric_matrix(p: &Point3) -> Matrix3<f64> {
    let (x, y, z) = (p[0], p[1], p[2]);
    let r2 = x * x + y * y + z * z;
    let d = (1.0 + r2) * (1.0 + r2);
    let a = y - x * z;
    let b = x + y * z;
    let c = x * x + y * y - z * z - 1.0;
    let (x2, y2, z2) = (x * x, y * y, z * z);
    let zz = x2 * x2
        + 2.0 * x2 * (y2 + 2.0 * z2 + 2.0)
        + y2 * y2
        + 4.0 * y2 * (z2 + 1.0)
        + (z2 + 1.0) * (z2 + 1.0);
    let xy = 2.0 * a * b / d;
    let xz = -a * c / d;
    let yz = b * c / d;
    Matrix3::new(
        1.5 - 2.0 * a * a / d,
        xy,
        xz,
        xy,
        1.5 - 2.0 * b * b / d,
        yz,
        xz,
        yz,
        zz / d,
    )
}

/// Effective metric m_ij of the Q = 1 hopfion, Cartesian chart.
pub fn metric_matrix(p: &Point3) -> Matrix3<f64> {
    let (x, y, z) = (p[0], p[1], p[2]);
    let (x2, y2, z2) = (x * x, y * y, z * z);
    let s = 1.0 + x2 + y2 + z2;
    let d3 = 3.0 * s * s;
    let a = y - x * z;
    let b = x + y * z;
    let c = x2 + y2 - z2 - 1.0;
    let xx = 2.0
        * (x2 * x2 + 2.0 * x2 * (y2 + 2.0 * z2 + 1.0) - 4.0 * x * y * z
            + y2 * y2
            + 2.0 * y2 * (z2 + 2.0)
            + (z2 + 1.0) * (z2 + 1.0))
        / d3;
    let yy = 2.0
        * (x2 * x2 + 2.0 * x2 * (y2 + z2 + 2.0) + 4.0 * x * y * z
            + y2 * y2
            + y2 * (4.0 * z2 + 2.0)
            + (z2 + 1.0) * (z2 + 1.0))
        / d3;
    let zz = 1.0 - 4.0 * (z2 + 1.0) * (x2 + y2) / d3;
    let xy = -4.0 * a * b / d3;
    let xz = 2.0 * a * c / d3;
    let yz = -2.0 * b * c / d3;
    Matrix3::new(xx, xy, xz, xy, yy, yz, xz, yz, zz)
}

pub fn inv_metric_cartesian(x: &Point3) -> SymTensor3 {
    SymTensor3::from_matrix(inv_metric_matrix(x), Chart::Cartesian)
}

pub fn metric_cartesian(x: &Point3) -> SymTensor3 {
    SymTensor3::from_matrix(metric_matrix(x), Chart::Cartesian)
}

/// Reciprocal metric in the (η, θ, ψ) chart for a general torus ansatz:
///
/// ```text
/// q² [ diag(1, 1, sinh⁻²η) + Δ⁻² ( (f'/f)²  0            0
///                                  0        a²           ab sinh⁻²η
///                                  0        ab sinh⁻²η   b² sinh⁻⁴η ) ]
/// ```
pub fn inv_metric_toroidal(cfg: &AnsatzConfig, p: &ToroidalPoint) -> Result<SymTensor3> {
    if !(p.eta > 0.0) {
        return Err(Error::ChartDomain(format!(
            "toroidal reciprocal metric needs eta > 0, got {}",
            p.eta
        )));
    }
    let f = cfg.profile.value(p.eta);
    let fp = cfg.profile.derivative(p.eta);
    let s2 = 1.0 / (p.eta.sinh() * p.eta.sinh());
    let (a, b) = (cfg.a as f64, cfg.b as f64);
    let lf = fp / f;
    let delta_sq = lf * lf + a * a + b * b * s2;
    let q2 = p.q() * p.q();
    let m = Matrix3::new(
        1.0 + lf * lf / delta_sq,
        0.0,
        0.0,
        0.0,
        1.0 + a * a / delta_sq,
        a * b * s2 / delta_sq,
        0.0,
        a * b * s2 / delta_sq,
        s2 + b * b * s2 * s2 / delta_sq,
    ) * q2;
    Ok(SymTensor3::from_matrix(m, Chart::Toroidal))
}

/// Pushes a contravariant toroidal tensor forward to Cartesian components: J T Jᵀ.
pub fn toroidal_to_cartesian_tensor(p: &ToroidalPoint, t: &SymTensor3) -> Result<SymTensor3> {
    if t.chart() != Chart::Toroidal {
        return Err(Error::InvalidInput("tensor is not in the toroidal chart".into()));
    }
    let j = p.jacobian();
    Ok(SymTensor3::from_matrix(j * t.matrix() * j.transpose(), Chart::Cartesian))
}

/// g⁻¹ + ξL with ξ = 1/σ₁, built from the pullback strain of the ansatz.
pub fn reciprocal_from_strain(cfg: &AnsatzConfig, x: &Point3) -> Result<SymTensor3> {
    let s = strain(cfg, x)?;
    let sigma = s.sigma1();
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!("sigma1 vanishes at {:?}", [x[0], x[1], x[2]])));
    }
    Ok(SymTensor3::from_matrix(
        Matrix3::identity() + s.l.matrix() / sigma,
        Chart::Cartesian,
    ))
}

/// Least-squares factor c with a ≈ c·b and the relative residual max|a − c b| / max|a|.
pub fn proportionality(a: &SymTensor3, b: &SymTensor3) -> (f64, f64) {
    let (ma, mb) = (a.matrix(), b.matrix());
    let c = ma.dot(mb) / mb.dot(mb);
    let resid = (ma - mb * c).abs().max() / ma.abs().max();
    (c, resid)
}
