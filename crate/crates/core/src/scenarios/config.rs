//! Scenario configuration: JSON schema, validation and the bundled experiments.

use std::f64::consts::{FRAC_PI_4, TAU};
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::geodesics::IntegratorSettings;
use crate::{Error, Point3, Result, Vec3};

/// Ray origins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Source {
    Point { position: Point3 },
    /// Seeds equally spaced from `start` to `end`, both included.
    Segment { start: Point3, end: Point3 },
    /// Seeds equally spaced in angle on a circle parallel to the xy-plane.
    Ring { center: Point3, radius: f64 },
}

/// Initial directions (Euclidean; speeds are fixed by the constraint).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Directions {
    /// `n` directions at angles phase + 2πk/n in the plane orthogonal to `normal`.
    PlanarFan { n: usize, normal: Vec3, phase: f64 },
    /// The same direction at each of `n` seeds of an extended source.
    Parallel { n: usize, direction: Vec3 },
    /// `n` directions at Euclidean angle `half_angle` from `axis`, azimuths phase + 2πk/n.
    Cone { n: usize, axis: Vec3, half_angle: f64, phase: f64 },
}

impl Directions {
    pub fn count(&self) -> usize {
        match *self {
            Directions::PlanarFan { n, .. }
            | Directions::Parallel { n, .. }
            | Directions::Cone { n, .. } => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    #[serde(default = "defaults::rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "defaults::abs_tol")]
    pub abs_tol: f64,
    #[serde(default = "defaults::h_init")]
    pub h_init: f64,
    #[serde(default = "defaults::h_min")]
    pub h_min: f64,
    #[serde(default = "defaults::h_max")]
    pub h_max: f64,
}

mod defaults {
    use crate::geodesics::IntegratorSettings;
    pub fn rel_tol() -> f64 {
        IntegratorSettings::default().rel_tol
    }
    pub fn abs_tol() -> f64 {
        IntegratorSettings::default().abs_tol
    }
    pub fn h_init() -> f64 {
        IntegratorSettings::default().h_init
    }
    pub fn h_min() -> f64 {
        IntegratorSettings::default().h_min
    }
    pub fn h_max() -> f64 {
        IntegratorSettings::default().h_max
    }
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        let d = IntegratorSettings::default();
        Self {
            rel_tol: d.rel_tol,
            abs_tol: d.abs_tol,
            h_init: d.h_init,
            h_min: d.h_min,
            h_max: d.h_max,
        }
    }
}

impl IntegratorConfig {
    pub fn settings(&self, t_end: f64) -> IntegratorSettings {
        IntegratorSettings {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            h_init: self.h_init,
            h_min: self.h_min,
            h_max: self.h_max,
            t_end,
        }
    }
}

/// Output paths, relative to the working directory of the caller.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectories_csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics_json: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub source: Source,
    pub directions: Directions,
    pub t_end: f64,
    pub integrator: IntegratorConfig,
    pub outputs: Outputs,
}

// ---- wire format ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    name: String,
    source: RawTagged,
    directions: RawDirections,
    t_end: f64,
    #[serde(default)]
    integrator: IntegratorConfig,
    #[serde(default)]
    outputs: Outputs,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTagged {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default)]
    params: Value,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDirections {
    #[serde(rename = "type")]
    kind: String,
    n: usize,
    #[serde(default)]
    params: Value,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointParams {
    position: [f64; 3],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentParams {
    start: [f64; 3],
    end: [f64; 3],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RingParams {
    center: [f64; 3],
    radius: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FanParams {
    #[serde(default = "z_axis")]
    normal: [f64; 3],
    #[serde(default)]
    phase: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParallelParams {
    direction: [f64; 3],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeParams {
    axis: [f64; 3],
    half_angle: f64,
    #[serde(default)]
    phase: f64,
}

fn z_axis() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

fn arr(v: &Vec3) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

fn params<T: DeserializeOwned>(value: &Value, prefix: &str) -> Result<T> {
    let value = if value.is_null() {
        Value::Object(Default::default())
    } else {
        value.clone()
    };
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = if inner == "." {
            prefix.to_string()
        } else {
            format!("{prefix}.{inner}")
        };
        Error::config(path, e.into_inner().to_string())
    })
}

impl ScenarioConfig {
    /// Parses and validates a JSON config; errors carry the offending field path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::config(path, e.into_inner().to_string())
        })?;

        let source = match raw.source.kind.as_str() {
            "point" => {
                let p: PointParams = params(&raw.source.params, "source.params")?;
                Source::Point {
                    position: p.position.into(),
                }
            }
            "segment" => {
                let p: SegmentParams = params(&raw.source.params, "source.params")?;
                Source::Segment {
                    start: p.start.into(),
                    end: p.end.into(),
                }
            }
            "ring" => {
                let p: RingParams = params(&raw.source.params, "source.params")?;
                Source::Ring {
                    center: p.center.into(),
                    radius: p.radius,
                }
            }
            other => {
                return Err(Error::config(
                    "source.type",
                    format!("unknown source type `{other}`, expected point, segment or ring"),
                ))
            }
        };
        let n = raw.directions.n;
        let directions = match raw.directions.kind.as_str() {
            "planar_fan" => {
                let p: FanParams = params(&raw.directions.params, "directions.params")?;
                Directions::PlanarFan {
                    n,
                    normal: p.normal.into(),
                    phase: p.phase,
                }
            }
            "parallel" => {
                let p: ParallelParams = params(&raw.directions.params, "directions.params")?;
                Directions::Parallel {
                    n,
                    direction: p.direction.into(),
                }
            }
            "cone" => {
                let p: ConeParams = params(&raw.directions.params, "directions.params")?;
                Directions::Cone {
                    n,
                    axis: p.axis.into(),
                    half_angle: p.half_angle,
                    phase: p.phase,
                }
            }
            other => {
                return Err(Error::config(
                    "directions.type",
                    format!("unknown direction type `{other}`, expected planar_fan, parallel or cone"),
                ))
            }
        };
        let cfg = ScenarioConfig {
            name: raw.name,
            source,
            directions,
            t_end: raw.t_end,
            integrator: raw.integrator,
            outputs: raw.outputs,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        let (kind, params) = match self.source {
            Source::Point { position } => ("point", serde_json::to_value(PointParams { position: arr(&position) })),
            Source::Segment { start, end } => (
                "segment",
                serde_json::to_value(SegmentParams {
                    start: arr(&start),
                    end: arr(&end),
                }),
            ),
            Source::Ring { center, radius } => (
                "ring",
                serde_json::to_value(RingParams {
                    center: arr(&center),
                    radius,
                }),
            ),
        };
        let source = RawTagged {
            kind: kind.into(),
            params: params.expect("plain data serialises"),
        };
        let (kind, params) = match self.directions {
            Directions::PlanarFan { normal, phase, .. } => (
                "planar_fan",
                serde_json::to_value(FanParams {
                    normal: arr(&normal),
                    phase,
                }),
            ),
            Directions::Parallel { direction, .. } => (
                "parallel",
                serde_json::to_value(ParallelParams {
                    direction: arr(&direction),
                }),
            ),
            Directions::Cone {
                axis,
                half_angle,
                phase,
                ..
            } => (
                "cone",
                serde_json::to_value(ConeParams {
                    axis: arr(&axis),
                    half_angle,
                    phase,
                }),
            ),
        };
        let raw = RawConfig {
            name: self.name.clone(),
            source,
            directions: RawDirections {
                kind: kind.into(),
                n: self.directions.count(),
                params: params.expect("plain data serialises"),
            },
            t_end: self.t_end,
            integrator: self.integrator,
            outputs: self.outputs.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("plain data serialises")
    }

    pub fn validate(&self) -> Result<()> {
        let finite3 = |v: &Vec3| v.iter().all(|c| c.is_finite());
        let nonzero = |v: &Vec3| finite3(v) && v.norm() > 0.0;
        match self.source {
            Source::Point { position } => {
                if !finite3(&position) {
                    return Err(Error::config("source.params.position", "must be finite"));
                }
            }
            Source::Segment { start, end } => {
                if !(finite3(&start) && finite3(&end)) {
                    return Err(Error::config("source.params", "endpoints must be finite"));
                }
                if start == end {
                    return Err(Error::config("source.params.end", "segment endpoints must differ"));
                }
            }
            Source::Ring { center, radius } => {
                if !finite3(&center) {
                    return Err(Error::config("source.params.center", "must be finite"));
                }
                if !(radius.is_finite() && radius > 0.0) {
                    return Err(Error::config("source.params.radius", "must be positive"));
                }
            }
        }
        if self.directions.count() < 1 {
            return Err(Error::config("directions.n", "need at least one ray"));
        }
        let extended = !matches!(self.source, Source::Point { .. });
        match self.directions {
            Directions::PlanarFan { normal, phase, .. } => {
                if !nonzero(&normal) {
                    return Err(Error::config("directions.params.normal", "must be finite and nonzero"));
                }
                if !phase.is_finite() {
                    return Err(Error::config("directions.params.phase", "must be finite"));
                }
            }
            Directions::Parallel { direction, .. } => {
                if !nonzero(&direction) {
                    return Err(Error::config("directions.params.direction", "must be finite and nonzero"));
                }
            }
            Directions::Cone {
                axis,
                half_angle,
                phase,
                ..
            } => {
                if !nonzero(&axis) {
                    return Err(Error::config("directions.params.axis", "must be finite and nonzero"));
                }
                if !(half_angle > 0.0 && half_angle < std::f64::consts::PI) {
                    return Err(Error::config("directions.params.half_angle", "must lie in (0, π)"));
                }
                if !phase.is_finite() {
                    return Err(Error::config("directions.params.phase", "must be finite"));
                }
            }
        }
        match (extended, &self.directions) {
            (true, Directions::Parallel { .. }) | (false, Directions::PlanarFan { .. } | Directions::Cone { .. }) => {}
            (true, _) => {
                return Err(Error::config(
                    "directions.type",
                    "segment and ring sources take parallel directions",
                ))
            }
            (false, _) => {
                return Err(Error::config(
                    "directions.type",
                    "a point source takes planar_fan or cone directions",
                ))
            }
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::config("t_end", "must be finite and positive"));
        }
        self.integrator
            .settings(self.t_end)
            .validate()
            .map_err(|e| Error::config("integrator", e.to_string()))
    }

    pub fn settings(&self) -> IntegratorSettings {
        self.integrator.settings(self.t_end)
    }

    pub fn is_planar_fan(&self) -> bool {
        matches!(self.directions, Directions::PlanarFan { .. })
    }

    /// Initial positions and Euclidean unit directions, in seed order.
    pub fn seeds(&self) -> Vec<(Point3, Vec3)> {
        let n = self.directions.count();
        let positions: Vec<Point3> = match self.source {
            Source::Point { position } => vec![position; n],
            Source::Segment { start, end } => {
                if n == 1 {
                    vec![(start + end) * 0.5]
                } else {
                    (0..n)
                        .map(|k| start + (end - start) * (k as f64 / (n - 1) as f64))
                        .collect()
                }
            }
            Source::Ring { center, radius } => (0..n)
                .map(|k| {
                    let a = TAU * k as f64 / n as f64;
                    center + Vec3::new(radius * a.cos(), radius * a.sin(), 0.0)
                })
                .collect(),
        };
        let dirs: Vec<Vec3> = match self.directions {
            Directions::PlanarFan { normal, phase, .. } => {
                let (e1, e2) = frame(&normal);
                (0..n)
                    .map(|k| {
                        let a = phase + TAU * k as f64 / n as f64;
                        e1 * a.cos() + e2 * a.sin()
                    })
                    .collect()
            }
            Directions::Parallel { direction, .. } => vec![direction.normalize(); n],
            Directions::Cone {
                axis,
                half_angle,
                phase,
                ..
            } => {
                let a = axis.normalize();
                let (e1, e2) = frame(&a);
                let (s, c) = half_angle.sin_cos();
                (0..n)
                    .map(|k| {
                        let p = phase + TAU * k as f64 / n as f64;
                        a * c + (e1 * p.cos() + e2 * p.sin()) * s
                    })
                    .collect()
            }
        };
        positions.into_iter().zip(dirs).collect()
    }
}

/// Orthonormal pair spanning the plane orthogonal to `axis`; (x̂, ŷ) when the axis is along z.
fn frame(axis: &Vec3) -> (Vec3, Vec3) {
    let a = axis.normalize();
    if a[0] == 0.0 && a[1] == 0.0 {
        return (Vec3::x(), Vec3::y());
    }
    let e1 = Vec3::z().cross(&a).normalize();
    (e1, a.cross(&e1))
}

fn outputs(stem: &str) -> Outputs {
    Outputs {
        trajectories_csv: Some(format!("{stem}_trajectories.csv").into()),
        diagnostics_json: Some(format!("{stem}_diagnostics.json").into()),
    }
}

/// Planar fan of `n` rays from (3, 0, 0) in the plane z = 0.
pub fn build_fig2(n: usize, t_end: f64) -> ScenarioConfig {
    ScenarioConfig {
        name: "fig2".into(),
        source: Source::Point {
            position: Point3::new(3.0, 0.0, 0.0),
        },
        directions: Directions::PlanarFan {
            n,
            normal: Vec3::z(),
            phase: 0.0,
        },
        t_end,
        integrator: IntegratorConfig::default(),
        outputs: outputs("fig2"),
    }
}

/// Narrow parallel pencil aimed at the core ring from x = 3 in the plane z = 0.
pub fn build_fig3() -> ScenarioConfig {
    ScenarioConfig {
        name: "fig3".into(),
        source: Source::Segment {
            start: Point3::new(3.0, -0.5, 0.0),
            end: Point3::new(3.0, 0.5, 0.0),
        },
        directions: Directions::Parallel {
            n: 11,
            direction: -Vec3::x(),
        },
        t_end: 6.0,
        integrator: IntegratorConfig::default(),
        outputs: outputs("fig3"),
    }
}

/// Parallel rays along −x from the segment x = 5, −5 ≤ y ≤ 5, z = 0.
pub fn build_fig4(n: usize, t_end: f64) -> ScenarioConfig {
    ScenarioConfig {
        name: "fig4".into(),
        source: Source::Segment {
            start: Point3::new(5.0, -5.0, 0.0),
            end: Point3::new(5.0, 5.0, 0.0),
        },
        directions: Directions::Parallel {
            n,
            direction: -Vec3::x(),
        },
        t_end,
        integrator: IntegratorConfig::default(),
        outputs: outputs("fig4"),
    }
}

/// Parallel rays along −x from the segment x = 5, y = 0, −5 ≤ z ≤ 5.
pub fn build_fig5(n: usize, t_end: f64) -> ScenarioConfig {
    ScenarioConfig {
        name: "fig5".into(),
        source: Source::Segment {
            start: Point3::new(5.0, 0.0, -5.0),
            end: Point3::new(5.0, 0.0, 5.0),
        },
        directions: Directions::Parallel {
            n,
            direction: -Vec3::x(),
        },
        t_end,
        integrator: IntegratorConfig::default(),
        outputs: outputs("fig5"),
    }
}

/// Cone of `n` rays from (0, 0, 5) at Euclidean angle π/4 around −z.
pub fn build_fig6(n: usize) -> ScenarioConfig {
    build_fig6_with(n, FRAC_PI_4, 15.0)
}

pub fn build_fig6_with(n: usize, half_angle: f64, t_end: f64) -> ScenarioConfig {
    ScenarioConfig {
        name: "fig6".into(),
        source: Source::Point {
            position: Point3::new(0.0, 0.0, 5.0),
        },
        directions: Directions::Cone {
            n,
            axis: -Vec3::z(),
            half_angle,
            phase: 0.0,
        },
        t_end,
        integrator: IntegratorConfig::default(),
        outputs: outputs("fig6"),
    }
}

/// `n` rays on the circle of radius 1 at height z = 5, all moving along −z.
pub fn build_fig7(n: usize) -> ScenarioConfig {
    build_fig7_with(n, 1.0, 15.0)
}

pub fn build_fig7_with(n: usize, radius: f64, t_end: f64) -> ScenarioConfig {
    ScenarioConfig {
        name: "fig7".into(),
        source: Source::Ring {
            center: Point3::new(0.0, 0.0, 5.0),
            radius,
        },
        directions: Directions::Parallel {
            n,
            direction: -Vec3::z(),
        },
        t_end,
        integrator: IntegratorConfig::default(),
        outputs: outputs("fig7"),
    }
}

/// The bundled experiments by name.
pub fn builtin(name: &str) -> Option<ScenarioConfig> {
    Some(match name {
        "fig2" => build_fig2(314, 8.0),
        "fig3" => build_fig3(),
        "fig4" => build_fig4(200, 15.0),
        "fig5" => build_fig5(200, 15.0),
        "fig6" => build_fig6(12),
        "fig7" => build_fig7(12),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err_path(text: &str) -> String {
        match ScenarioConfig::from_json(text) {
            Err(Error::Config { path, .. }) => path,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn round_trip_through_json() {
        for name in ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7"] {
            let cfg = builtin(name).unwrap();
            let back = ScenarioConfig::from_json(&cfg.to_json()).unwrap();
            assert_eq!(cfg, back, "{name}");
        }
    }

    #[test]
    fn fig2_defaults() {
        let cfg = build_fig2(314, 8.0);
        let seeds = cfg.seeds();
        assert_eq!(seeds.len(), 314);
        assert_eq!(cfg.t_end, 8.0);
        assert!(seeds.iter().all(|(p, d)| *p == Point3::new(3.0, 0.0, 0.0) && d[2] == 0.0));
    }

    #[test]
    fn segment_seeds_equally_spaced() {
        let seeds = build_fig4(200, 15.0).seeds();
        assert_eq!(seeds[0].0, Point3::new(5.0, -5.0, 0.0));
        assert_eq!(seeds[199].0, Point3::new(5.0, 5.0, 0.0));
        let gap = 10.0 / 199.0;
        for w in seeds.windows(2) {
            assert!(((w[1].0 - w[0].0).norm() - gap).abs() < 1e-12);
        }
        assert!(build_fig5(200, 15.0).seeds().iter().all(|(p, _)| p[1] == 0.0));
    }

    #[test]
    fn cone_geometry() {
        let seeds = build_fig6(12).seeds();
        for (k, (_, d)) in seeds.iter().enumerate() {
            let angle = d.angle(&-Vec3::z());
            assert!((angle - FRAC_PI_4).abs() < 1e-12);
            let az = d[1].atan2(d[0]).rem_euclid(TAU);
            assert!((az - TAU * k as f64 / 12.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ring_seeds() {
        let seeds = build_fig7(12).seeds();
        for (p, d) in &seeds {
            assert!(((p - Point3::new(0.0, 0.0, 5.0)).norm() - 1.0).abs() < 1e-15);
            assert_eq!(*d, -Vec3::z());
        }
    }

    #[test]
    fn error_paths_name_the_field() {
        let base = build_fig2(4, 1.0).to_json();
        let v: Value = serde_json::from_str(&base).unwrap();

        let mut bad = v.clone();
        bad["integrator"]["rel_tol"] = Value::String("x".into());
        assert_eq!(err_path(&bad.to_string()), "integrator.rel_tol");

        let mut bad = v.clone();
        bad["source"]["params"]["position"] = serde_json::json!([1, 2]);
        assert!(err_path(&bad.to_string()).starts_with("source.params.position"));

        let mut bad = v.clone();
        bad["directions"]["n"] = serde_json::json!(0);
        assert_eq!(err_path(&bad.to_string()), "directions.n");

        let mut bad = v.clone();
        bad["t_end"] = serde_json::json!(-1.0);
        assert_eq!(err_path(&bad.to_string()), "t_end");

        let mut bad = v.clone();
        bad["source"]["type"] = Value::String("plane".into());
        assert_eq!(err_path(&bad.to_string()), "source.type");

        let mut bad = v;
        bad["extra"] = serde_json::json!(1);
        assert!(ScenarioConfig::from_json(&bad.to_string()).is_err());
    }

    #[test]
    fn incompatible_source_and_directions() {
        let mut cfg = build_fig4(3, 1.0);
        cfg.directions = Directions::PlanarFan {
            n: 3,
            normal: Vec3::z(),
            phase: 0.0,
        };
        assert!(matches!(cfg.validate(), Err(Error::Config { .. })));
    }

    #[test]
    fn degenerate_segment_rejected() {
        let mut cfg = build_fig4(3, 1.0);
        cfg.source = Source::Segment {
            start: Point3::zeros(),
            end: Point3::zeros(),
        };
        assert!(cfg.validate().is_err());
    }
}
