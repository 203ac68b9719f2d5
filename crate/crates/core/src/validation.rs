//! Cross-validation battery: every closed-form quantity against an independent route.

use std::fmt::Write as _;

use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::effective_geometry::{inv_metric_matrix, ricci_scalar, ricci_scalar_fd, HopfionMetric, SpatialMetric};
use crate::geodesics::{christoffel_acceleration, closed_form_acceleration};
use crate::hopf_map::{hopf_charge_whitehead, preimage_linking, profile_residual, AnsatzConfig};
use crate::{Point3, Vec3};

pub const SEED: u64 = 0x5eed_0f_4077;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckResult {
    fn new(name: &str, max_deviation: f64, tolerance: f64, samples: usize) -> Self {
        Self {
            name: name.into(),
            max_deviation,
            tolerance,
            // NaN deviations fail
            passed: max_deviation <= tolerance,
            samples,
            error: None,
        }
    }

    fn failed(name: &str, tolerance: f64, error: impl ToString) -> Self {
        Self {
            name: name.into(),
            max_deviation: f64::NAN,
            tolerance,
            passed: false,
            samples: 0,
            error: Some(error.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = write!(
                s,
                "{} {:<24} max_dev={:.6e} tol={:.1e} n={}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.max_deviation,
                c.tolerance,
                c.samples
            );
            if let Some(e) = &c.error {
                let _ = write!(s, " error: {e}");
            }
            s.push('\n');
        }
        let _ = writeln!(s, "{}", if self.passed { "all checks passed" } else { "validation FAILED" });
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Sizes of the sampled checks.
#[derive(Debug, Clone, Copy)]
pub struct ValidationSizes {
    pub inverse_points: usize,
    pub rhs_states: usize,
    pub curvature_grid: usize,
    pub residual_points: usize,
    pub linking_samples: usize,
}

impl Default for ValidationSizes {
    fn default() -> Self {
        Self {
            inverse_points: 1000,
            rhs_states: 1000,
            curvature_grid: 5,
            residual_points: 50,
            linking_samples: 128,
        }
    }
}

/// Runs the battery against the production metric.
pub fn run_validation() -> ValidationReport {
    run_validation_with(&HopfionMetric, ValidationSizes::default())
}

/// Runs the battery with `metric` standing in for the covariant metric m_ij.
/// The closed-form inverse, accelerations and curvature are compared against
/// this metric, so a corrupted metric shows up as failed checks.
pub fn run_validation_with<M: SpatialMetric + ?Sized>(metric: &M, sizes: ValidationSizes) -> ValidationReport {
    let checks = vec![
        check_inverse(metric, sizes.inverse_points),
        check_rhs(metric, sizes.rhs_states),
        check_curvature(metric, sizes.curvature_grid),
        check_charge(1, 1),
        check_charge(2, 1),
        check_linking(1, 1, sizes.linking_samples),
        check_linking(2, 1, sizes.linking_samples),
        check_profile(sizes.residual_points),
    ];
    ValidationReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn uniform_point(rng: &mut ChaCha8Rng, half_width: f64) -> Point3 {
    Point3::new(
        rng.gen_range(-half_width..=half_width),
        rng.gen_range(-half_width..=half_width),
        rng.gen_range(-half_width..=half_width),
    )
}

/// max |m · m⁻¹ − I| over uniform points in [−10, 10]³.
pub fn check_inverse<M: SpatialMetric + ?Sized>(metric: &M, n: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let x = uniform_point(&mut rng, 10.0);
        let d = metric.metric(&x) * inv_metric_matrix(&x) - Matrix3::identity();
        worst = worst.max(d.amax());
    }
    CheckResult::new("inverse_identity", worst, 1e-10, n)
}

/// Closed-form accelerations against finite-difference Christoffel symbols of
/// `metric`, unit-speed velocities at points in [−5, 5]³.
pub fn check_rhs<M: SpatialMetric + ?Sized>(metric: &M, n: usize) -> CheckResult {
    const NAME: &str = "rhs_agreement";
    const TOL: f64 = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let x = uniform_point(&mut rng, 5.0);
        let dir = loop {
            let d = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if d.norm() > 1e-3 {
                break d;
            }
        };
        let speed_sq = dir.dot(&(metric.metric(&x) * dir));
        if !(speed_sq > 0.0) {
            return CheckResult::failed(NAME, TOL, format!("metric not positive at {x:?}"));
        }
        let v = dir / speed_sq.sqrt();
        let fd = match christoffel_acceleration(metric, &x, &v) {
            Ok(a) => a,
            Err(e) => return CheckResult::failed(NAME, TOL, e),
        };
        worst = worst.max((closed_form_acceleration(&x, &v) - fd).amax());
    }
    CheckResult::new(NAME, worst, TOL, n)
}

/// Closed-form Ricci scalar against finite differences of `metric` on an
/// n³ grid over [−3, 3]³; deviation relative to max(|R|, 1e-3).
pub fn check_curvature<M: SpatialMetric + ?Sized>(metric: &M, n: usize) -> CheckResult {
    const NAME: &str = "curvature_oracle";
    const TOL: f64 = 1e-3;
    let coord = |i: usize| if n == 1 { 0.0 } else { -3.0 + 6.0 * i as f64 / (n - 1) as f64 };
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let x = Point3::new(coord(i), coord(j), coord(k));
                let fd = match ricci_scalar_fd(metric, &x, crate::effective_geometry::default_step(&x)) {
                    Ok(r) => r,
                    Err(e) => return CheckResult::failed(NAME, TOL, e),
                };
                let exact = ricci_scalar(&x);
                worst = worst.max((fd - exact).abs() / exact.abs().max(1e-3));
            }
        }
    }
    CheckResult::new(NAME, worst, TOL, n * n * n)
}

/// Whitehead integral against the winding product ab, relative.
pub fn check_charge(a: i32, b: i32) -> CheckResult {
    let name = format!("charge_whitehead_{a}_{b}");
    let expected = (a * b) as f64;
    match hopf_charge_whitehead(&AnsatzConfig::with_sinh(a, b)) {
        Ok(q) => CheckResult::new(&name, (q.value - expected).abs() / expected.abs(), 1e-2, 1),
        Err(e) => CheckResult::failed(&name, 1e-2, e),
    }
}

/// Gauss linking number of two preimages against ab, relative.
pub fn check_linking(a: i32, b: i32, samples: usize) -> CheckResult {
    let name = format!("linking_{a}_{b}");
    let expected = (a * b) as f64;
    match preimage_linking(&AnsatzConfig::with_sinh(a, b), samples) {
        Ok(l) => CheckResult::new(&name, (l - expected).abs() / expected.abs(), 1e-2, 1),
        Err(e) => CheckResult::failed(&name, 1e-2, e),
    }
}

/// |profile residual| of f = sinh, a = b = 1 at log-spaced η in [1e-3, 10].
pub fn check_profile(n: usize) -> CheckResult {
    const NAME: &str = "profile_residual";
    const TOL: f64 = 1e-8;
    let cfg = AnsatzConfig::q1();
    let mut worst: f64 = 0.0;
    for eta in log_spaced(1e-3, 10.0, n) {
        match profile_residual(&cfg, eta) {
            Ok(r) => worst = worst.max(r.abs()),
            Err(e) => return CheckResult::failed(NAME, TOL, e),
        }
    }
    CheckResult::new(NAME, worst, TOL, n)
}

/// `n` points spaced evenly in log from `lo` to `hi`, both included.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
