//! Principal symbol of the field equations and the Lorentzian-signature test.
//!
//! Spacetime indices run over (t, x, y, z) with g = diag(−1, 1, 1, 1). The
//! target indices α, β refer to the stereographic chart (R, Φ) of the sphere.

use nalgebra::{Matrix2, Vector2, Vector4};
use serde::Serialize;

use crate::hopf_map::{field_jet, AnsatzConfig, StrainSample};
use crate::{Error, Point3, Result};

pub type Covector4 = Vector4<f64>;

const MINKOWSKI: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

fn minkowski_square(k: &Covector4) -> f64 {
    (0..4).map(|a| MINKOWSKI[a] * k[a] * k[a]).sum()
}

/// M_αβ(x, k) = g^ab k_a k_b h_αβ + ξ h_αμ h_βν ∂^aφ^μ ∂^bφ^ν k_a k_b, with the
/// two quadrics P1 = g^ab k_a k_b and P2 = (m⁻¹)^ab k_a k_b.
#[derive(Debug, Clone, Copy)]
pub struct PrincipalSymbol {
    pub m: Matrix2<f64>,
    pub h: Matrix2<f64>,
    pub p1: f64,
    pub p2: f64,
}

impl PrincipalSymbol {
    /// Builds the symbol from background data.
    ///
    /// `dphi[α][a]` is ∂_aφ^α (lower spacetime index); `xi` is 2𝓛₁₁/𝓛₁.
    /// P2 is assembled independently of M as g^ab k_a k_b + ξ L^ab k_a k_b.
    pub fn from_background(
        h: Matrix2<f64>,
        dphi: [Covector4; 2],
        xi: f64,
        k: &Covector4,
    ) -> Result<Self> {
        if !(h.determinant() > 0.0) {
            return Err(Error::DegenerateTarget(format!(
                "target metric has determinant {}",
                h.determinant()
            )));
        }
        let p1 = minkowski_square(k);
        // v^μ = ∂^aφ^μ k_a
        let raise = |d: &Covector4| -> f64 { (0..4).map(|a| MINKOWSKI[a] * d[a] * k[a]).sum() };
        let v = Vector2::new(raise(&dphi[0]), raise(&dphi[1]));
        let hv = h * v;
        let m = h * p1 + hv * hv.transpose() * xi;

        // L_ab = h_αβ ∂_aφ^α ∂_bφ^β, then L^ab k_a k_b with both indices raised by g
        let mut lkk = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                let mut lab = 0.0;
                for al in 0..2 {
                    for be in 0..2 {
                        lab += h[(al, be)] * dphi[al][a] * dphi[be][b];
                    }
                }
                lkk += MINKOWSKI[a] * MINKOWSKI[b] * lab * k[a] * k[b];
            }
        }
        Ok(Self {
            m,
            h,
            p1,
            p2: p1 + xi * lkk,
        })
    }

    /// det M_αβ.
    pub fn determinant(&self) -> f64 {
        self.m.determinant()
    }

    /// det(h) P1 P2, the factorised characteristic polynomial.
    pub fn factorized_determinant(&self) -> f64 {
        self.h.determinant() * self.p1 * self.p2
    }

    /// Mixed tensor h⁻¹M.
    pub fn mixed(&self) -> Matrix2<f64> {
        self.h.try_inverse().expect("h checked at construction") * self.m
    }

    /// Roots of λ² − Tr(h⁻¹M) λ + det(h⁻¹M) = 0, ascending.
    pub fn mixed_eigenvalues(&self) -> [f64; 2] {
        let mm = self.mixed();
        let tr = mm.trace();
        let det = mm.determinant();
        let disc = (0.25 * tr * tr - det).max(0.0).sqrt();
        [0.5 * tr - disc, 0.5 * tr + disc]
    }

    /// λ± = (P1+P2)/2 ± |P1−P2|/2, ascending.
    pub fn lambda_pm(&self) -> [f64; 2] {
        let mean = 0.5 * (self.p1 + self.p2);
        let half = 0.5 * (self.p1 - self.p2).abs();
        [mean - half, mean + half]
    }
}

/// Principal symbol of the static torus ansatz at `x` for the covector `k`, with ξ = 1/σ₁.
pub fn principal_symbol(cfg: &AnsatzConfig, x: &Point3, k: &Covector4) -> Result<PrincipalSymbol> {
    let jet = field_jet(cfg, x)?;
    let r = jet.value.r;
    if jet.value.is_pole() {
        return Err(Error::DegenerateTarget(format!(
            "field sits at a pole (R={r}) where the (R, Φ) chart degenerates"
        )));
    }
    let conf = jet.conformal_factor();
    let h = Matrix2::new(conf, 0.0, 0.0, conf * r * r);
    let grad_phi = jet.r_grad_phi / r;
    let dphi = [
        Covector4::new(0.0, jet.grad_r[0], jet.grad_r[1], jet.grad_r[2]),
        Covector4::new(0.0, grad_phi[0], grad_phi[1], grad_phi[2]),
    ];
    let sigma1 = conf * (jet.grad_r.norm_squared() + jet.r_grad_phi.norm_squared());
    PrincipalSymbol::from_background(h, dphi, 1.0 / sigma1, k)
}

/// Eigenvalues λ₀², …, λ₃² of the spacetime strain relative to g.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrainEigenvalues(pub [f64; 4]);

impl From<&StrainSample> for StrainEigenvalues {
    /// Static field: λ₀² = 0; the spatial eigenvalues come from the sample.
    fn from(s: &StrainSample) -> Self {
        let l = s.lambda_sq;
        StrainEigenvalues([0.0, l[0], l[1], l[2]])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignatureStatus {
    Lorentzian,
    NotLorentzian,
    /// λ₀² = (λ₁²+λ₂²+λ₃²)/2: the time-time entry vanishes.
    Degenerate,
    /// All eigenvalues zero; ξ and the diagonal are undefined.
    Vacuum,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LorentzianReport {
    pub lorentzian: bool,
    pub status: SignatureStatus,
    /// Diagonal of m⁻¹ in the frame diagonalising L, when σ₁ ≠ 0.
    pub diagonal: Option<[f64; 4]>,
}

/// Tests λ₀² < (λ₁²+λ₂²+λ₃²)/2 and returns the diagonal of m⁻¹ = g⁻¹ + L/σ₁.
pub fn lorentzian_check(ev: &StrainEigenvalues) -> Result<LorentzianReport> {
    let [l0, l1, l2, l3] = ev.0;
    if ev.0.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidInput(format!(
            "strain eigenvalues must be finite and nonnegative, got {:?}",
            ev.0
        )));
    }
    let spatial = l1 + l2 + l3;
    if l0 == 0.0 && spatial == 0.0 {
        return Ok(LorentzianReport {
            lorentzian: false,
            status: SignatureStatus::Vacuum,
            diagonal: None,
        });
    }
    let sigma = spatial - l0;
    let diagonal = (sigma != 0.0).then(|| {
        [
            (2.0 * l0 - spatial) / sigma,
            (sigma + l1) / sigma,
            (sigma + l2) / sigma,
            (sigma + l3) / sigma,
        ]
    });
    let status = if 2.0 * l0 < spatial {
        SignatureStatus::Lorentzian
    } else if 2.0 * l0 == spatial {
        SignatureStatus::Degenerate
    } else {
        SignatureStatus::NotLorentzian
    };
    Ok(LorentzianReport {
        lorentzian: status == SignatureStatus::Lorentzian,
        status,
        diagonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective_geometry::metric::inv_metric_matrix;
    use crate::hopf_map::strain;
    use crate::Vec3;

    #[test]
    fn determinant_factorises() {
        let cfg = AnsatzConfig::q1();
        let x = Point3::new(0.4, -0.9, 0.3);
        let k = Covector4::new(0.7, -1.3, 0.2, 2.1);
        let s = principal_symbol(&cfg, &x, &k).unwrap();
        let rel = (s.determinant() - s.factorized_determinant()).abs() / s.determinant().abs();
        assert!(rel < 1e-12, "{rel}");
    }

    #[test]
    fn p2_is_the_closed_form_reciprocal_metric() {
        let cfg = AnsatzConfig::q1();
        let x = Point3::new(-1.2, 0.5, 0.8);
        let k = Covector4::new(0.3, 0.1, -0.6, 1.0);
        let s = principal_symbol(&cfg, &x, &k).unwrap();
        let ks = Vec3::new(k[1], k[2], k[3]);
        let p2 = -k[0] * k[0] + ks.dot(&(inv_metric_matrix(&x) * ks));
        assert!((s.p2 - p2).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_follow_deter_formula() {
        let cfg = AnsatzConfig::q1();
        let s = principal_symbol(&cfg, &Point3::new(1.5, 0.2, -0.4), &Covector4::new(0.1, 1.0, 2.0, -0.5))
            .unwrap();
        let a = s.mixed_eigenvalues();
        let b = s.lambda_pm();
        assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12, "{a:?} {b:?}");
    }

    #[test]
    fn vacuum_symbol_of_null_covector_vanishes() {
        let h = Matrix2::new(4.0, 0.0, 0.0, 1.0);
        let k = Covector4::new(1.0, 0.0, 1.0, 0.0);
        let s = PrincipalSymbol::from_background(h, [Covector4::zeros(); 2], 1.0, &k).unwrap();
        assert_eq!(s.m, Matrix2::zeros());
        assert_eq!(s.p1, 0.0);
        assert_eq!(s.p2, 0.0);
    }

    #[test]
    fn pole_is_degenerate() {
        let r = principal_symbol(&AnsatzConfig::q1(), &Point3::new(0.0, 0.0, 2.0), &Covector4::new(0.0, 1.0, 0.0, 0.0));
        assert!(matches!(r, Err(Error::DegenerateTarget(_))));
    }

    #[test]
    fn static_strain_is_lorentzian() {
        let s = strain(&AnsatzConfig::q1(), &Point3::new(0.5, 0.5, 0.5)).unwrap();
        let rep = lorentzian_check(&StrainEigenvalues::from(&s)).unwrap();
        assert!(rep.lorentzian);
        assert!(rep.diagonal.unwrap()[0] == -1.0);
    }

    #[test]
    fn inequality_cases() {
        let r = lorentzian_check(&StrainEigenvalues([0.0, 0.2, 3.0, 0.1])).unwrap();
        assert_eq!(r.status, SignatureStatus::Lorentzian);
        let r = lorentzian_check(&StrainEigenvalues([1.0, 0.5, 0.5, 0.5])).unwrap();
        assert_eq!(r.status, SignatureStatus::NotLorentzian);
        assert!(!r.lorentzian);
        let r = lorentzian_check(&StrainEigenvalues([0.75, 0.5, 0.5, 0.5])).unwrap();
        assert_eq!(r.status, SignatureStatus::Degenerate);
        assert!(!r.lorentzian);
        assert_eq!(r.diagonal.unwrap()[0], 0.0);
        let r = lorentzian_check(&StrainEigenvalues([0.0; 4])).unwrap();
        assert_eq!(r.status, SignatureStatus::Vacuum);
        assert!(lorentzian_check(&StrainEigenvalues([-1.0, 0.0, 0.0, 1.0])).is_err());
    }

    #[test]
    fn diagonal_matches_display() {
        let r = lorentzian_check(&StrainEigenvalues([0.0, 1.0, 2.0, 0.0])).unwrap();
        let d = r.diagonal.unwrap();
        assert_eq!(d, [-1.0, 4.0 / 3.0, 5.0 / 3.0, 1.0]);
    }
}
