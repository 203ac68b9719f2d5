use std::fmt;
use std::sync::Arc;

use crate::hopf_map::chart::{cartesian_to_toroidal, reduce_angle, ToroidalPoint};
use crate::tensor::{Chart, SymTensor3};
use crate::{finite_diff, Error, Point3, Result, Vec3};

/// Radial profile f(η) of the torus ansatz R = f(η).
///
/// Only `value` is required. Derivatives default to fourth-order central
/// differences, so the profile must be evaluable slightly below η = 0
/// (odd extensions such as sinh and η itself are the usual case).
pub trait Profile: Send + Sync + fmt::Debug {
    fn value(&self, eta: f64) -> f64;

    fn derivative(&self, eta: f64) -> f64 {
        finite_diff::first(|e| self.value(e), eta, 1e-4 * eta.max(1.0))
    }

    fn second_derivative(&self, eta: f64) -> f64 {
        // wider step than the first derivative: round-off grows like 1/h²
        finite_diff::second(|e| self.value(e), eta, 1e-3 * eta.max(1.0))
    }

    /// η with f(η) = r. The default bisects on [0, 50] and assumes f is increasing.
    fn inverse(&self, r: f64) -> Option<f64> {
        if !(r > 0.0) || !r.is_finite() {
            return None;
        }
        let (mut lo, mut hi) = (0.0_f64, 50.0_f64);
        if self.value(hi) < r {
            return None;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.value(mid) < r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }

    /// f(η)/sinh η, continued to η = 0 by f'(0).
    fn ratio_to_sinh(&self, eta: f64) -> f64 {
        if eta == 0.0 {
            self.derivative(0.0)
        } else {
            self.value(eta) / eta.sinh()
        }
    }
}

/// f(η) = sinh η, the exact Q = 1 profile.
#[derive(Debug, Clone, Copy, Default)]
pub struct SinhProfile;

impl Profile for SinhProfile {
    fn value(&self, eta: f64) -> f64 {
        eta.sinh()
    }
    fn derivative(&self, eta: f64) -> f64 {
        eta.cosh()
    }
    fn second_derivative(&self, eta: f64) -> f64 {
        eta.sinh()
    }
    fn inverse(&self, r: f64) -> Option<f64> {
        (r > 0.0 && r.is_finite()).then(|| r.asinh())
    }
    fn ratio_to_sinh(&self, _eta: f64) -> f64 {
        1.0
    }
}

/// A profile given by a closure; derivatives come from finite differences.
pub struct FnProfile<F> {
    name: &'static str,
    f: F,
}

impl<F: Fn(f64) -> f64 + Send + Sync> FnProfile<F> {
    pub fn new(name: &'static str, f: F) -> Self {
        Self { name, f }
    }
}

impl<F> fmt::Debug for FnProfile<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FnProfile({})", self.name)
    }
}

impl<F: Fn(f64) -> f64 + Send + Sync> Profile for FnProfile<F> {
    fn value(&self, eta: f64) -> f64 {
        (self.f)(eta)
    }
}

/// Torus ansatz R = f(η), Φ = aθ + bψ.
#[derive(Clone)]
pub struct AnsatzConfig {
    pub a: i32,
    pub b: i32,
    pub profile: Arc<dyn Profile>,
}

impl fmt::Debug for AnsatzConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnsatzConfig")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("profile", &self.profile)
            .finish()
    }
}

impl AnsatzConfig {
    pub fn new(a: i32, b: i32, profile: Arc<dyn Profile>) -> Self {
        Self { a, b, profile }
    }

    /// Windings (a, b) with the sinh profile. Only (1, 1) solves the field equation.
    pub fn with_sinh(a: i32, b: i32) -> Self {
        Self::new(a, b, Arc::new(SinhProfile))
    }

    /// The exact Q = 1 hopfion.
    pub fn q1() -> Self {
        Self::with_sinh(1, 1)
    }

    /// Topological charge a·b.
    pub fn charge(&self) -> i64 {
        self.a as i64 * self.b as i64
    }

    fn ab_sq(&self, eta: f64) -> f64 {
        let (a, b) = (self.a as f64, self.b as f64);
        let s = eta.sinh();
        a * a + b * b / (s * s)
    }
}

/// Point on the target sphere in stereographic polar coordinates (R, Φ).
/// R = 0 is the north pole (vacuum), R → ∞ the south pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub r: f64,
    pub phi: f64,
}

impl SpherePoint {
    pub fn is_pole(&self) -> bool {
        self.r == 0.0 || !self.r.is_finite()
    }

    /// Embedding in ℝ³ as a unit vector; the south pole is (0, 0, −1).
    pub fn to_unit_vector(&self) -> Vec3 {
        if self.r.is_infinite() {
            return Vec3::new(0.0, 0.0, -1.0);
        }
        let r2 = self.r * self.r;
        let (s, c) = self.phi.sin_cos();
        Vec3::new(2.0 * self.r * c, 2.0 * self.r * s, 1.0 - r2) / (1.0 + r2)
    }

    /// Great-circle distance on the unit sphere.
    pub fn distance(&self, other: &SpherePoint) -> f64 {
        let (u, v) = (self.to_unit_vector(), other.to_unit_vector());
        u.cross(&v).norm().atan2(u.dot(&v))
    }
}

pub fn ansatz_map(cfg: &AnsatzConfig, p: &ToroidalPoint) -> SpherePoint {
    SpherePoint {
        r: cfg.profile.value(p.eta),
        phi: reduce_angle(cfg.a as f64 * p.theta + cfg.b as f64 * p.psi),
    }
}

fn require_positive_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("eta must be > 0, got {eta}")))
    }
}

/// First symmetric polynomial σ₁ = 4 f² q² Δ² / (1+f²)²,
/// Δ² = (f'/f)² + a² + b² sinh⁻²η.
pub fn sigma1(cfg: &AnsatzConfig, p: &ToroidalPoint) -> Result<f64> {
    require_positive_eta(p.eta)?;
    let f = cfg.profile.value(p.eta);
    let fp = cfg.profile.derivative(p.eta);
    let q = p.q();
    // f²Δ² written without dividing by f
    let f_delta_sq = fp * fp + f * f * cfg.ab_sq(p.eta);
    let den = 1.0 + f * f;
    Ok(4.0 * q * q * f_delta_sq / (den * den))
}

/// Residual of the static profile equation at η.
///
/// The Euler-Lagrange equation of ∫ σ₁^{3/2} d³x under the ansatz is written in
/// flux form X' − S = 0 with
///
/// ```text
/// X = Δ sinh η f f' / (1+f²)
/// S = Δ sinh η f² / (1+f²)² · [2 f'² + (1−f²)(a² + b² sinh⁻²η)]
/// ```
///
/// which is the ratio form `(1+f²)²/(Δ sinh η f²) X' = 2f'² + (1−f²)(a²+b² sinh⁻²η)`
/// multiplied through by a positive factor. The flux form stays well scaled
/// for large η, where both sides of the ratio form grow like e^{2η}.
pub fn profile_residual(cfg: &AnsatzConfig, eta: f64) -> Result<f64> {
    require_positive_eta(eta)?;
    let prof = &cfg.profile;
    let f = prof.value(eta);
    let fp = prof.derivative(eta);
    let fpp = prof.second_derivative(eta);
    let (sh, ch) = (eta.sinh(), eta.cosh());
    let b = cfg.b as f64;
    let a_sq = cfg.ab_sq(eta);
    let a_sq_prime = -2.0 * b * b * ch / (sh * sh * sh);

    // G = fΔ = sqrt(f'² + f² A)
    let g = (fp * fp + f * f * a_sq).sqrt();
    if g == 0.0 {
        return Err(Error::Domain(format!("profile gradient vanishes at eta={eta}")));
    }
    let gp = (fp * fpp + f * fp * a_sq + 0.5 * f * f * a_sq_prime) / g;
    let den = 1.0 + f * f;

    let flux_prime = (ch * g * fp + sh * gp * fp + sh * g * fpp) / den
        - sh * g * fp * 2.0 * f * fp / (den * den);
    let source = sh * g * f / (den * den) * (2.0 * fp * fp + (1.0 - f * f) * a_sq);
    Ok(flux_prime - source)
}

/// Value and first derivatives of the field at a Cartesian point, in the
/// regular combinations ∂R and R∂Φ (finite on the z-axis).
#[derive(Debug, Clone, Copy)]
pub struct FieldJet {
    pub value: SpherePoint,
    /// ∂_i R
    pub grad_r: Vec3,
    /// R ∂_i Φ
    pub r_grad_phi: Vec3,
}

impl FieldJet {
    /// Conformal factor 4/(1+R²)² of the stereographic sphere metric.
    pub fn conformal_factor(&self) -> f64 {
        let d = 1.0 + self.value.r * self.value.r;
        4.0 / (d * d)
    }
}

/// Field value and gradient by the analytic chain rule through the toroidal chart.
pub fn field_jet(cfg: &AnsatzConfig, x: &Point3) -> Result<FieldJet> {
    let p = cartesian_to_toroidal(x)?;
    let (grad_eta, grad_theta, e_psi) = p.gradients();
    let f = cfg.profile.value(p.eta);
    let fp = cfg.profile.derivative(p.eta);
    let ratio = cfg.profile.ratio_to_sinh(p.eta);
    let q = p.q();
    Ok(FieldJet {
        value: ansatz_map(cfg, &p),
        grad_r: grad_eta * fp,
        // f ∇ψ = (f / sinh η) q e_ψ
        r_grad_phi: grad_theta * (cfg.a as f64 * f) + e_psi * (cfg.b as f64 * ratio * q),
    })
}

/// Pullback strain L_ij = h_αβ ∂_iφ^α ∂_jφ^β in Cartesian components.
#[derive(Debug, Clone, Copy)]
pub struct StrainSample {
    pub l: SymTensor3,
    /// Eigenvalues relative to the flat metric, ascending and clamped at 0.
    /// λ₀² = 0 for static maps is implicit.
    pub lambda_sq: [f64; 3],
}

impl StrainSample {
    pub fn from_tensor(l: SymTensor3) -> Self {
        let ev = l.eigenvalues();
        Self {
            l,
            lambda_sq: ev.map(|v| v.max(0.0)),
        }
    }

    /// σ₁, the flat trace.
    pub fn sigma1(&self) -> f64 {
        self.l.trace()
    }
}

pub fn strain(cfg: &AnsatzConfig, x: &Point3) -> Result<StrainSample> {
    let jet = field_jet(cfg, x)?;
    let u = jet.grad_r;
    let w = jet.r_grad_phi;
    let m = (u * u.transpose() + w * w.transpose()) * jet.conformal_factor();
    Ok(StrainSample::from_tensor(SymTensor3::from_matrix(m, Chart::Cartesian)))
}
