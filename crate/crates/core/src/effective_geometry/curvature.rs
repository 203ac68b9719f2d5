//! Ricci scalar in closed form and by finite differences of a [`SpatialMetric`].

use nalgebra::Matrix3;

use crate::effective_geometry::metric::{HopfionMetric, SpatialMetric};
use crate::finite_diff::FIRST_STENCIL;
use crate::{Error, Point3, Result};

/// Christoffel symbols of the second kind, indexed `[i][j][k]` for Γ^i_jk.
pub type Christoffel = [[[f64; 3]; 3]; 3];

/// Closed-form Ricci scalar of the hopfion metric, −(4x²+4y²−8z²+2)/(1+r²)².
pub fn ricci_scalar(p: &Point3) -> f64 {
    let (x, y, z) = (p[0], p[1], p[2]);
    let s = 1.0 + x * x + y * y + z * z;
    -(4.0 * x * x + 4.0 * y * y - 8.0 * z * z + 2.0) / (s * s)
}

/// Default finite-difference step, h = 1e-4 (1 + |x|).
pub fn default_step(x: &Point3) -> f64 {
    1e-4 * (1.0 + x.norm())
}

fn check_step(x: &Point3, h: f64) -> Result<()> {
    // below ~1e3 ulps of the coordinates the stencil differences are pure round-off
    let floor = 1e3 * f64::EPSILON * (1.0 + x.amax());
    if !(h.is_finite() && h > floor) {
        return Err(Error::StepUnderflow(h));
    }
    Ok(())
}

fn unit(k: usize) -> Point3 {
    let mut e = Point3::zeros();
    e[k] = 1.0;
    e
}

/// ∂_k g, fourth-order central differences.
fn metric_gradient<M: SpatialMetric + ?Sized>(m: &M, x: &Point3, h: f64) -> [Matrix3<f64>; 3] {
    std::array::from_fn(|k| {
        let e = unit(k);
        FIRST_STENCIL
            .iter()
            .fold(Matrix3::zeros(), |acc, (o, w)| acc + m.metric(&(x + e * (o * h))) * *w)
            / h
    })
}

/// ∂_k ∂_l g, tensor product of the first-derivative stencil.
fn metric_hessian<M: SpatialMetric + ?Sized>(
    m: &M,
    x: &Point3,
    h: f64,
) -> [[Matrix3<f64>; 3]; 3] {
    let mut out = [[Matrix3::zeros(); 3]; 3];
    for k in 0..3 {
        for l in k..3 {
            let (ek, el) = (unit(k), unit(l));
            let mut acc = Matrix3::zeros();
            for (ok, wk) in FIRST_STENCIL {
                for (ol, wl) in FIRST_STENCIL {
                    acc += m.metric(&(x + ek * (ok * h) + el * (ol * h))) * (wk * wl);
                }
            }
            out[k][l] = acc / (h * h);
            out[l][k] = out[k][l];
        }
    }
    out
}

fn christoffel_from(ginv: &Matrix3<f64>, dg: &[Matrix3<f64>; 3]) -> Christoffel {
    let mut gam = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in j..3 {
                let mut s = 0.0;
                for l in 0..3 {
                    s += ginv[(i, l)] * (dg[j][(l, k)] + dg[k][(l, j)] - dg[l][(j, k)]);
                }
                gam[i][j][k] = 0.5 * s;
                gam[i][k][j] = 0.5 * s;
            }
        }
    }
    gam
}

fn inverse(g: Matrix3<f64>, x: &Point3) -> Result<Matrix3<f64>> {
    g.try_inverse()
        .ok_or_else(|| Error::Domain(format!("metric is singular at {:?}", [x[0], x[1], x[2]])))
}

/// Γ^i_jk = ½ g^il (∂_j g_lk + ∂_k g_lj − ∂_l g_jk) by finite differences of the metric.
pub fn christoffel_fd<M: SpatialMetric + ?Sized>(m: &M, x: &Point3, h: f64) -> Result<Christoffel> {
    check_step(x, h)?;
    let ginv = inverse(m.metric(x), x)?;
    Ok(christoffel_from(&ginv, &metric_gradient(m, x, h)))
}

/// Ricci scalar of an arbitrary metric from finite-difference first and second
/// derivatives, assembled through the Christoffel symbols and their derivatives.
pub fn ricci_scalar_fd<M: SpatialMetric + ?Sized>(m: &M, x: &Point3, h: f64) -> Result<f64> {
    check_step(x, h)?;
    let ginv = inverse(m.metric(x), x)?;
    let dg = metric_gradient(m, x, h);
    let ddg = metric_hessian(m, x, h);
    let gam = christoffel_from(&ginv, &dg);

    // ∂_l g⁻¹ = −g⁻¹ (∂_l g) g⁻¹
    let dginv: [Matrix3<f64>; 3] = std::array::from_fn(|l| -(ginv * dg[l] * ginv));
    // dgam[l][i][j][k] = ∂_l Γ^i_jk
    let mut dgam = [[[[0.0; 3]; 3]; 3]; 3];
    for l in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let mut s = 0.0;
                    for n in 0..3 {
                        let first = dg[j][(n, k)] + dg[k][(n, j)] - dg[n][(j, k)];
                        let second = ddg[l][j][(n, k)] + ddg[l][k][(n, j)] - ddg[l][n][(j, k)];
                        s += dginv[l][(i, n)] * first + ginv[(i, n)] * second;
                    }
                    dgam[l][i][j][k] = 0.5 * s;
                }
            }
        }
    }

    let mut r = 0.0;
    for j in 0..3 {
        for k in 0..3 {
            let mut ric = 0.0;
            for i in 0..3 {
                ric += dgam[i][i][j][k] - dgam[k][i][j][i];
                for p in 0..3 {
                    ric += gam[i][i][p] * gam[p][j][k] - gam[i][k][p] * gam[p][j][i];
                }
            }
            r += ginv[(j, k)] * ric;
        }
    }
    Ok(r)
}

/// Ricci scalar of the hopfion metric by finite differences, the oracle for [`ricci_scalar`].
pub fn ricci_scalar_numeric(x: &Point3) -> Result<f64> {
    ricci_scalar_fd(&HopfionMetric, x, default_step(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective_geometry::metric::FlatMetric;

    #[test]
    fn closed_form_landmarks() {
        assert_eq!(ricci_scalar(&Point3::zeros()), -2.0);
        assert_eq!(ricci_scalar(&Point3::new(0.0, 0.0, 0.5)), 0.0);
        assert_eq!(ricci_scalar(&Point3::new(0.0, 0.0, -0.5)), 0.0);
        let top = ricci_scalar(&Point3::new(0.0, 0.0, 1.5f64.sqrt()));
        assert!((top - 1.6).abs() < 1e-15);
    }

    #[test]
    fn numeric_matches_closed_form() {
        for p in [Point3::zeros(), Point3::new(2.0, 1.0, -1.0), Point3::new(0.0, 0.0, 0.5)] {
            let n = ricci_scalar_numeric(&p).unwrap();
            let c = ricci_scalar(&p);
            assert!((n - c).abs() <= 1e-3 * c.abs().max(1e-3), "{p:?}: {n} vs {c}");
        }
    }

    #[test]
    fn round_sphere_metric_in_stereographic_chart() {
        // 4/(1+r²)² δ is the unit 3-sphere: R = 6
        let m = |x: &Point3| {
            let s = 1.0 + x.norm_squared();
            Matrix3::identity() * (4.0 / (s * s))
        };
        let r = ricci_scalar_fd(&m, &Point3::new(0.4, -0.2, 0.7), 1e-4).unwrap();
        assert!((r - 6.0).abs() < 1e-5, "{r}");
    }

    #[test]
    fn flat_metric_has_no_curvature() {
        let x = Point3::new(1.0, 2.0, 3.0);
        // stencil weights cancel only up to round-off
        assert!(ricci_scalar_fd(&FlatMetric, &x, 1e-3).unwrap().abs() < 1e-8);
        let g = christoffel_fd(&FlatMetric, &x, 1e-3).unwrap();
        assert!(g.iter().flatten().flatten().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn christoffel_symmetric_in_lower_indices() {
        let g = christoffel_fd(&HopfionMetric, &Point3::new(0.3, -1.1, 0.8), 1e-4).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!((g[i][j][k] - g[i][k][j]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn tiny_step_is_refused() {
        let x = Point3::new(1.0, 0.0, 0.0);
        assert!(matches!(ricci_scalar_fd(&HopfionMetric, &x, 1e-15), Err(Error::StepUnderflow(_))));
        assert!(matches!(christoffel_fd(&HopfionMetric, &x, 0.0), Err(Error::StepUnderflow(_))));
    }
}
