//! Hopf charge as the Whitehead integral Q = (1/16π²) ∫ C ∧ F over ℝ³.
//!
//! F = φ*ε is the pullback of the sphere's area form and C is a potential with
//! dC = F. For the torus ansatz we use
//!
//! ```text
//! C = −2a/(1+f²) dθ + 2b f²/(1+f²) dψ
//! ```
//!
//! which is regular on both the z-axis (f = 0 kills the dψ term) and the core
//! ring (f → ∞ kills the dθ term). The gauge −2/(1+f²) dΦ is singular on the
//! z-axis and gives C ∧ F ≡ 0 away from it, so it cannot be used pointwise.

use std::f64::consts::{PI, TAU};
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use serde::Serialize;

use crate::hopf_map::ansatz::AnsatzConfig;
use crate::{Error, Result};

/// Quadrature layout for [`hopf_charge_whitehead_with`].
#[derive(Debug, Clone, Copy)]
pub struct ChargeQuadrature {
    /// Upper cut-off of the η integral.
    pub eta_max: f64,
    pub eta_panels: usize,
    pub nodes_per_panel: usize,
    /// Nodes per angle (θ and ψ).
    pub angle_nodes: usize,
    /// Largest acceptable error estimate (panel-halving difference + tail).
    pub threshold: f64,
}

impl Default for ChargeQuadrature {
    fn default() -> Self {
        Self {
            eta_max: 12.0,
            eta_panels: 48,
            nodes_per_panel: 8,
            angle_nodes: 8,
            threshold: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChargeEstimate {
    pub value: f64,
    /// |Q(panels) − Q(panels/2)| plus the tail estimate.
    pub error_estimate: f64,
    /// Estimated contribution of η > η_max.
    pub tail_estimate: f64,
    pub eta_max: f64,
}

/// Toroidal components (C_η, C_θ, C_ψ) of the gauge potential.
pub fn gauge_potential(cfg: &AnsatzConfig, eta: f64) -> [f64; 3] {
    let f = cfg.profile.value(eta);
    let den = 1.0 + f * f;
    [
        0.0,
        -2.0 * cfg.a as f64 / den,
        2.0 * cfg.b as f64 * f * f / den,
    ]
}

/// Toroidal components F_jk = ε_RΦ (∂_jR ∂_kΦ − ∂_kR ∂_jΦ), ε_RΦ = 4R/(1+R²)².
pub fn hopf_curvature(cfg: &AnsatzConfig, eta: f64) -> [[f64; 3]; 3] {
    let f = cfg.profile.value(eta);
    let fp = cfg.profile.derivative(eta);
    let den = 1.0 + f * f;
    let area = 4.0 * f / (den * den);
    let d_r = [fp, 0.0, 0.0];
    let d_phi = [0.0, cfg.a as f64, cfg.b as f64];
    let mut out = [[0.0; 3]; 3];
    for j in 0..3 {
        for k in 0..3 {
            out[j][k] = area * (d_r[j] * d_phi[k] - d_r[k] * d_phi[j]);
        }
    }
    out
}

/// Component of C ∧ F on dη∧dθ∧dψ. The chart (η, θ, ψ) is positively oriented.
fn density(cfg: &AnsatzConfig, eta: f64) -> f64 {
    let c = gauge_potential(cfg, eta);
    let f = hopf_curvature(cfg, eta);
    c[0] * f[1][2] + c[1] * f[2][0] + c[2] * f[0][1]
}

fn gl(n: usize) -> GaussLegendre {
    GaussLegendre::new(NonZeroUsize::new(n.max(1)).unwrap())
}

fn integrate(cfg: &AnsatzConfig, quad: &ChargeQuadrature, panels: usize) -> f64 {
    let eta_rule = gl(quad.nodes_per_panel);
    let angle_rule = gl(quad.angle_nodes);
    let width = quad.eta_max / panels as f64;
    let mut total = 0.0;
    // sequential panels keep the summation order fixed
    for k in 0..panels {
        let (lo, hi) = (k as f64 * width, (k + 1) as f64 * width);
        total += eta_rule.integrate(lo, hi, |eta| {
            angle_rule.integrate(0.0, TAU, |_theta| {
                angle_rule.integrate(0.0, TAU, |_psi| density(cfg, eta))
            })
        });
    }
    total / (16.0 * PI * PI)
}

pub fn hopf_charge_whitehead(cfg: &AnsatzConfig) -> Result<ChargeEstimate> {
    hopf_charge_whitehead_with(cfg, &ChargeQuadrature::default())
}

pub fn hopf_charge_whitehead_with(
    cfg: &AnsatzConfig,
    quad: &ChargeQuadrature,
) -> Result<ChargeEstimate> {
    if cfg.profile.value(0.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "profile must satisfy f(0)=0, got {}",
            cfg.profile.value(0.0)
        )));
    }
    let fine = integrate(cfg, quad, quad.eta_panels);
    let coarse = integrate(cfg, quad, (quad.eta_panels / 2).max(1));
    // C∧F integrates in η to 2ab [−2/(1+f²)]; the part beyond η_max is ab/(1+f(η_max)²)
    let f_max = cfg.profile.value(quad.eta_max);
    let tail = (cfg.charge() as f64).abs() / (1.0 + f_max * f_max);
    let estimate = ChargeEstimate {
        value: fine,
        error_estimate: (fine - coarse).abs() + tail,
        tail_estimate: tail,
        eta_max: quad.eta_max,
    };
    if estimate.error_estimate > quad.threshold || !fine.is_finite() {
        return Err(Error::Quadrature {
            value: fine,
            error_estimate: estimate.error_estimate,
            threshold: quad.threshold,
        });
    }
    Ok(estimate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf_map::ansatz::FnProfile;
    use std::sync::Arc;

    #[test]
    fn unit_charge() {
        let q = hopf_charge_whitehead(&AnsatzConfig::q1()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-2, "{q:?}");
    }

    #[test]
    fn charge_two_for_a2_b1() {
        let q = hopf_charge_whitehead(&AnsatzConfig::with_sinh(2, 1)).unwrap();
        assert!((q.value - 2.0).abs() < 2e-2, "{q:?}");
    }

    #[test]
    fn zero_winding_gives_zero() {
        let q = hopf_charge_whitehead(&AnsatzConfig::with_sinh(0, 1)).unwrap();
        assert!(q.value.abs() < 1e-12);
    }

    #[test]
    fn sign_follows_orientation() {
        let q = hopf_charge_whitehead(&AnsatzConfig::with_sinh(1, -1)).unwrap();
        assert!((q.value + 1.0).abs() < 1e-2);
    }

    #[test]
    fn slow_profile_reports_truncation() {
        // f = η reaches the south pole too slowly for the η ≤ 12 cut-off
        let cfg = AnsatzConfig::new(1, 1, Arc::new(FnProfile::new("eta", |e| e)));
        match hopf_charge_whitehead(&cfg) {
            Err(Error::Quadrature { error_estimate, .. }) => assert!(error_estimate > 1e-3),
            other => panic!("expected a quadrature diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn potential_is_exact_for_curvature() {
        // dC = F: ∂_η C_θ = F_ηθ and ∂_η C_ψ = F_ηψ
        let cfg = AnsatzConfig::with_sinh(2, 3);
        for eta in [0.1, 0.9, 2.4] {
            let h = 1e-5;
            let cp = gauge_potential(&cfg, eta + h);
            let cm = gauge_potential(&cfg, eta - h);
            let f = hopf_curvature(&cfg, eta);
            assert!(((cp[1] - cm[1]) / (2.0 * h) - f[0][1]).abs() < 1e-8);
            assert!(((cp[2] - cm[2]) / (2.0 * h) - f[0][2]).abs() < 1e-8);
            assert_eq!(f[1][2], 0.0);
        }
    }
}
