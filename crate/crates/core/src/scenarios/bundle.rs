//! Batch integration of a ray bundle and the diagnostics derived from it.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::geodesics::{
    integrate, normalize_velocity_in, AbortReason, ClosedFormGeometry, GeodesicState, Geometry,
    RayTrajectory, TrajectoryStatus,
};
use crate::scenarios::config::ScenarioConfig;
use crate::{Error, Point3, Result};

/// Abort fraction above which a scenario counts as degraded.
pub const MAX_ABORT_FRACTION: f64 = 0.1;
/// Time resolution of the focal-spread scan.
pub const FOCAL_DT: f64 = 0.01;
const SPREAD_EXPORT_DT: f64 = 0.05;
const WAVEFRONT_TIMES: usize = 8;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct AbortCounts {
    pub step_underflow: usize,
    pub constraint: usize,
    pub rhs: usize,
    /// Seeds whose initial direction could not be normalised.
    pub seeding: usize,
}

impl AbortCounts {
    pub fn total(&self) -> usize {
        self.step_underflow + self.constraint + self.rhs + self.seeding
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FocalPoint {
    pub t: f64,
    pub centroid: [f64; 3],
    pub spread: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpreadSample {
    pub t: f64,
    pub spread: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WavefrontMeasure {
    pub t: f64,
    /// Closed-polyline length with each segment measured in the effective metric.
    pub perimeter: f64,
    /// 2πt, the flat geodesic-circle perimeter.
    pub euclid_perimeter: f64,
    /// Plain Euclidean length of the same polyline.
    pub polyline_length: f64,
}

impl WavefrontMeasure {
    pub fn ratio(&self) -> f64 {
        self.perimeter / self.euclid_perimeter
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub scenario: String,
    pub rays: usize,
    pub completed: usize,
    pub aborted: usize,
    pub aborts: AbortCounts,
    pub degraded: bool,
    pub max_abs_drift: f64,
    pub focal_points: Vec<FocalPoint>,
    pub spreads: Vec<SpreadSample>,
    pub wavefronts: Vec<WavefrontMeasure>,
}

#[derive(Debug, Clone)]
pub struct BundleResult {
    pub config: ScenarioConfig,
    /// In seed order.
    pub trajectories: Vec<RayTrajectory>,
    pub diagnostics: Diagnostics,
}

impl BundleResult {
    pub fn completed(&self) -> impl Iterator<Item = &RayTrajectory> {
        self.trajectories.iter().filter(|t| t.is_completed())
    }

    pub fn is_degraded(&self) -> bool {
        self.diagnostics.degraded
    }
}

/// Runs a scenario in the hopfion geometry.
pub fn run(cfg: &ScenarioConfig) -> Result<BundleResult> {
    run_with(&ClosedFormGeometry, cfg)
}

/// Runs a scenario in an arbitrary geometry. Rays are integrated in parallel and
/// collected in seed order, so the result does not depend on scheduling.
pub fn run_with<G: Geometry + ?Sized>(g: &G, cfg: &ScenarioConfig) -> Result<BundleResult> {
    cfg.validate()?;
    let settings = cfg.settings();
    let trajectories: Vec<RayTrajectory> = cfg
        .seeds()
        .into_par_iter()
        .map(|(x, dir)| match normalize_velocity_in(g, &x, &dir) {
            Ok(v) => integrate(g, &GeodesicState::new(x, v), &settings),
            Err(_) => Ok(RayTrajectory {
                samples: vec![crate::geodesics::Sample {
                    t: 0.0,
                    state: GeodesicState::new(x, dir),
                    drift: f64::NAN,
                }],
                status: TrajectoryStatus::Aborted {
                    reason: AbortReason::Rhs,
                    t: 0.0,
                },
            }),
        })
        .collect::<Result<_>>()?;

    let mut aborts = AbortCounts::default();
    for t in &trajectories {
        if let TrajectoryStatus::Aborted { reason, t: at } = t.status {
            match reason {
                AbortReason::StepUnderflow => aborts.step_underflow += 1,
                AbortReason::Constraint => aborts.constraint += 1,
                AbortReason::Rhs if at == 0.0 && t.samples.len() == 1 && t.samples[0].drift.is_nan() => {
                    aborts.seeding += 1
                }
                AbortReason::Rhs => aborts.rhs += 1,
            }
        }
    }
    let rays = trajectories.len();
    let aborted = aborts.total();
    let max_abs_drift = trajectories
        .iter()
        .filter(|t| t.is_completed())
        .map(RayTrajectory::max_abs_drift)
        .fold(0.0, f64::max);

    let mut result = BundleResult {
        config: cfg.clone(),
        trajectories,
        diagnostics: Diagnostics {
            scenario: cfg.name.clone(),
            rays,
            completed: rays - aborted,
            aborted,
            aborts,
            degraded: aborted as f64 > MAX_ABORT_FRACTION * rays as f64,
            max_abs_drift,
            focal_points: Vec::new(),
            spreads: Vec::new(),
            wavefronts: Vec::new(),
        },
    };

    if result.diagnostics.completed >= 3 {
        result.diagnostics.focal_points = focal_points(&result)?;
        result.diagnostics.spreads = spread_series(&result, SPREAD_EXPORT_DT)?;
    }
    if cfg.is_planar_fan() && aborted == 0 {
        result.diagnostics.wavefronts = (1..=WAVEFRONT_TIMES)
            .map(|k| wavefront_measure_in(g, &result, cfg.t_end * k as f64 / WAVEFRONT_TIMES as f64))
            .collect::<Result<_>>()?;
    }
    Ok(result)
}

fn common_end(result: &BundleResult) -> f64 {
    result
        .completed()
        .map(|t| t.t_span().1)
        .fold(f64::INFINITY, f64::min)
}

/// RMS distance of the completed rays from their centroid at time `t`.
pub fn bundle_spread(result: &BundleResult, t: f64) -> Option<(Point3, f64)> {
    let pts: Vec<Point3> = result
        .completed()
        .map(|tr| tr.position_at(t))
        .collect::<Option<_>>()?;
    if pts.is_empty() {
        return None;
    }
    let n = pts.len() as f64;
    let c = pts.iter().fold(Point3::zeros(), |a, p| a + p) / n;
    let rms = (pts.iter().map(|p| (p - c).norm_squared()).sum::<f64>() / n).sqrt();
    Some((c, rms))
}

fn scan_times(end: f64, dt: f64) -> Vec<f64> {
    let n = (end / dt).floor() as usize;
    (0..=n).map(|k| k as f64 * dt).collect()
}

fn require_rays(result: &BundleResult) -> Result<f64> {
    let n = result.completed().count();
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "focal analysis needs at least 3 completed rays, have {n}"
        )));
    }
    Ok(common_end(result))
}

fn spread_series(result: &BundleResult, dt: f64) -> Result<Vec<SpreadSample>> {
    let end = require_rays(result)?;
    Ok(scan_times(end, dt)
        .into_iter()
        .filter_map(|t| bundle_spread(result, t).map(|(_, spread)| SpreadSample { t, spread }))
        .collect())
}

/// Interior local minima of the RMS spread, scanned every [`FOCAL_DT`].
///
/// A run of equal values (to 1e-9 of the largest spread) counts as one minimum, reported at its middle, when
/// the spread rises on both sides.
pub fn focal_points(result: &BundleResult) -> Result<Vec<FocalPoint>> {
    let end = require_rays(result)?;
    let series: Vec<(f64, Point3, f64)> = scan_times(end, FOCAL_DT)
        .into_iter()
        .filter_map(|t| bundle_spread(result, t).map(|(c, s)| (t, c, s)))
        .collect();
    // differences below this are round-off, not structure
    let tol = 1e-9 * series.iter().map(|s| s.2).fold(0.0, f64::max);
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < series.len() {
        if series[i].2 < series[i - 1].2 - tol {
            let mut j = i;
            while j + 1 < series.len() && (series[j + 1].2 - series[i].2).abs() <= tol {
                j += 1;
            }
            if j + 1 < series.len() && series[j + 1].2 > series[j].2 + tol {
                let (t, c, spread) = series[(i + j) / 2];
                out.push(FocalPoint {
                    t,
                    centroid: [c[0], c[1], c[2]],
                    spread,
                });
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    Ok(out)
}

/// Effective perimeter of the planar-fan wavefront at time `t` in the hopfion geometry.
pub fn wavefront_measure(result: &BundleResult, t: f64) -> Result<WavefrontMeasure> {
    wavefront_measure_in(&ClosedFormGeometry, result, t)
}

/// Closed polyline through the same-t positions of all rays (in fan order);
/// each chord dx is measured as sqrt(m(midpoint)(dx, dx)).
pub fn wavefront_measure_in<G: Geometry + ?Sized>(
    g: &G,
    result: &BundleResult,
    t: f64,
) -> Result<WavefrontMeasure> {
    if !result.config.is_planar_fan() {
        return Err(Error::InvalidInput(
            "wavefront perimeter is defined only for planar-fan scenarios".into(),
        ));
    }
    if result.trajectories.iter().any(|tr| !tr.is_completed()) {
        return Err(Error::InvalidInput(
            "wavefront needs every ray of the fan to have completed".into(),
        ));
    }
    if result.trajectories.len() < 3 {
        return Err(Error::InvalidInput("wavefront needs at least 3 rays".into()));
    }
    let end = common_end(result);
    if !(t > 0.0 && t <= end) {
        return Err(Error::InvalidInput(format!(
            "t = {t} lies outside the integration span (0, {end}]"
        )));
    }
    let pts: Vec<Point3> = result
        .trajectories
        .iter()
        .map(|tr| tr.position_at(t).expect("t checked against the span"))
        .collect();
    let (mut perimeter, mut polyline_length) = (0.0, 0.0);
    for k in 0..pts.len() {
        let (a, b) = (pts[k], pts[(k + 1) % pts.len()]);
        let dx = b - a;
        let m = g.metric(&((a + b) * 0.5));
        perimeter += dx.dot(&(m * dx)).max(0.0).sqrt();
        polyline_length += dx.norm();
    }
    Ok(WavefrontMeasure {
        t,
        perimeter,
        euclid_perimeter: TAU * t,
        polyline_length,
    })
}
