//! Classical RK4 with step-doubling error control.

use nalgebra::Vector6;
use serde::{Deserialize, Serialize};

use crate::geodesics::rhs::{Geometry, GeodesicState};
use crate::{Error, Point3, Result, Vec3};

/// Largest tolerated |m_ij ẋ^i ẋ^j − 1| before a ray is aborted.
pub const MAX_DRIFT: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub t_end: f64,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-8,
            h_init: 1e-2,
            h_min: 1e-8,
            h_max: 0.1,
            t_end: 1.0,
        }
    }
}

impl IntegratorSettings {
    pub fn with_t_end(t_end: f64) -> Self {
        Self {
            t_end,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("h_init", self.h_init),
            ("h_min", self.h_min),
            ("h_max", self.h_max),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.h_min <= self.h_init && self.h_init <= self.h_max) {
            return Err(Error::InvalidInput(format!(
                "need h_min <= h_init <= h_max, got {} / {} / {}",
                self.h_min, self.h_init, self.h_max
            )));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "t_end must be finite and >= 0, got {}",
                self.t_end
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: GeodesicState,
    /// m_ij ẋ^i ẋ^j − 1
    pub drift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AbortReason {
    StepUnderflow,
    Constraint,
    /// The acceleration could not be evaluated (e.g. finite-difference failure).
    Rhs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum TrajectoryStatus {
    Completed,
    Aborted { reason: AbortReason, t: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RayTrajectory {
    /// One entry per accepted step, starting with the initial state.
    pub samples: Vec<Sample>,
    pub status: TrajectoryStatus,
}

impl RayTrajectory {
    pub fn is_completed(&self) -> bool {
        self.status == TrajectoryStatus::Completed
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory holds at least the initial sample")
    }

    pub fn max_abs_drift(&self) -> f64 {
        self.samples.iter().map(|s| s.drift.abs()).fold(0.0, f64::max)
    }

    pub fn t_span(&self) -> (f64, f64) {
        (self.samples[0].t, self.last().t)
    }

    /// Cubic Hermite interpolation of position (with velocity as slope) and the
    /// derivative of that cubic for velocity. `None` outside the sampled span.
    pub fn state_at(&self, t: f64) -> Option<GeodesicState> {
        let (t0, t1) = self.t_span();
        if !(t >= t0 && t <= t1) {
            return None;
        }
        let i = match self.samples.partition_point(|s| s.t <= t) {
            0 => 0,
            n if n >= self.samples.len() => return Some(self.last().state),
            n => n - 1,
        };
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        let h = b.t - a.t;
        let s = (t - a.t) / h;
        let (p0, p1) = (a.state.position, b.state.position);
        let (m0, m1) = (a.state.velocity * h, b.state.velocity * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let pos = p0 * (2.0 * s3 - 3.0 * s2 + 1.0)
            + m0 * (s3 - 2.0 * s2 + s)
            + p1 * (-2.0 * s3 + 3.0 * s2)
            + m1 * (s3 - s2);
        let vel = (p0 * (6.0 * s2 - 6.0 * s)
            + m0 * (3.0 * s2 - 4.0 * s + 1.0)
            + p1 * (-6.0 * s2 + 6.0 * s)
            + m1 * (3.0 * s2 - 2.0 * s))
            / h;
        Some(GeodesicState::new(pos, vel))
    }

    pub fn position_at(&self, t: f64) -> Option<Point3> {
        self.state_at(t).map(|s| s.position)
    }
}

type Y = Vector6<f64>;

fn pack(s: &GeodesicState) -> Y {
    let (p, v) = (s.position, s.velocity);
    Y::new(p[0], p[1], p[2], v[0], v[1], v[2])
}

fn unpack(y: &Y) -> GeodesicState {
    GeodesicState::new(Point3::new(y[0], y[1], y[2]), Vec3::new(y[3], y[4], y[5]))
}

fn deriv<G: Geometry + ?Sized>(g: &G, y: &Y) -> Result<Y> {
    let p = Point3::new(y[0], y[1], y[2]);
    let v = Vec3::new(y[3], y[4], y[5]);
    let a = g.acceleration(&p, &v)?;
    Ok(Y::new(v[0], v[1], v[2], a[0], a[1], a[2]))
}

fn rk4_y<G: Geometry + ?Sized>(g: &G, y: &Y, h: f64) -> Result<Y> {
    let k1 = deriv(g, y)?;
    let k2 = deriv(g, &(y + k1 * (0.5 * h)))?;
    let k3 = deriv(g, &(y + k2 * (0.5 * h)))?;
    let k4 = deriv(g, &(y + k3 * h))?;
    Ok(y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0))
}

/// One classical RK4 step of the first-order system (ẋ, v̇) = (v, a(x, v)).
pub fn rk4_step<G: Geometry + ?Sized>(g: &G, s: &GeodesicState, h: f64) -> Result<GeodesicState> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!("step must be positive, got {h}")));
    }
    rk4_y(g, &pack(s), h).map(|y| unpack(&y))
}

/// Fixed-step RK4 up to `t_end` with `ceil(t_end / h)` equal steps.
pub fn integrate_fixed<G: Geometry + ?Sized>(
    g: &G,
    s0: &GeodesicState,
    h: f64,
    t_end: f64,
) -> Result<GeodesicState> {
    let n = (t_end / h).ceil().max(1.0) as usize;
    let h = t_end / n as f64;
    let mut y = pack(s0);
    for _ in 0..n {
        y = rk4_y(g, &y, h)?;
    }
    Ok(unpack(&y))
}

fn drift<G: Geometry + ?Sized>(g: &G, y: &Y) -> f64 {
    let s = unpack(y);
    g.norm_sq(&s.position, &s.velocity) - 1.0
}

/// Error ratio of a step, ≤ 1 when acceptable.
///
/// Position and velocity are measured with Euclidean norms so the test is
/// invariant under rotations of the initial data.
fn error_ratio(y_old: &Y, y_new: &Y, diff: &Y, cfg: &IntegratorSettings) -> f64 {
    let block = |v: &Y, i: usize| v.fixed_rows::<3>(i).norm();
    let mut worst: f64 = 0.0;
    for i in [0, 3] {
        let scale = cfg.abs_tol + cfg.rel_tol * block(y_old, i).max(block(y_new, i));
        worst = worst.max(block(diff, i) / 15.0 / scale);
    }
    worst
}

/// Adaptive integration from t = 0 to `cfg.t_end`.
///
/// Each step of size h is compared against two steps of h/2; the estimate
/// |y_{h/2,h/2} − y_h| / 15 must fall within abs_tol + rel_tol |y|. The two
/// half steps are kept. Samples are stored at every accepted step together
/// with the constraint drift, which is monitored but never projected out.
pub fn integrate<G: Geometry + ?Sized>(
    g: &G,
    s0: &GeodesicState,
    cfg: &IntegratorSettings,
) -> Result<RayTrajectory> {
    cfg.validate()?;
    let mut y = pack(s0);
    let mut t = 0.0;
    let mut samples = vec![Sample {
        t,
        state: *s0,
        drift: drift(g, &y),
    }];
    let mut h = cfg.h_init;
    let abort = |samples: Vec<Sample>, reason, t| RayTrajectory {
        samples,
        status: TrajectoryStatus::Aborted { reason, t },
    };

    while t < cfg.t_end {
        let remaining = cfg.t_end - t;
        let last_step = h >= remaining;
        let step = if last_step { remaining } else { h };

        let attempt = (|| -> Result<(Y, Y)> {
            let full = rk4_y(g, &y, step)?;
            let half = rk4_y(g, &y, 0.5 * step)?;
            Ok((full, rk4_y(g, &half, 0.5 * step)?))
        })();
        let (full, two_half) = match attempt {
            Ok(v) => v,
            Err(_) => return Ok(abort(samples, AbortReason::Rhs, t)),
        };
        let ratio = error_ratio(&y, &two_half, &(two_half - full), cfg);
        let factor = if !ratio.is_finite() {
            0.2
        } else if ratio == 0.0 {
            5.0
        } else {
            (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
        };

        if ratio <= 1.0 {
            t = if last_step { cfg.t_end } else { t + step };
            y = two_half;
            let d = drift(g, &y);
            samples.push(Sample {
                t,
                state: unpack(&y),
                drift: d,
            });
            if !(d.abs() <= MAX_DRIFT) {
                return Ok(abort(samples, AbortReason::Constraint, t));
            }
            if !last_step {
                h = (h * factor).clamp(cfg.h_min, cfg.h_max);
            }
        } else {
            // a short final step below h_min is allowed to retry at its own size
            if step <= cfg.h_min {
                return Ok(abort(samples, AbortReason::StepUnderflow, t));
            }
            h = (step * factor).clamp(cfg.h_min, cfg.h_max);
        }
    }
    Ok(RayTrajectory {
        samples,
        status: TrajectoryStatus::Completed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesics::rhs::{normalize_velocity, ClosedFormGeometry, FlatGeometry};

    fn ray(p: Point3, d: Vec3) -> GeodesicState {
        GeodesicState::new(p, normalize_velocity(&p, &d).unwrap())
    }

    #[test]
    fn settings_validation() {
        assert!(IntegratorSettings::default().validate().is_ok());
        let bad = IntegratorSettings {
            h_min: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = IntegratorSettings {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn zero_span_keeps_initial_sample() {
        let s = ray(Point3::new(3.0, 0.0, 0.0), Vec3::new(-1.0, 0.0, 0.0));
        let tr = integrate(&ClosedFormGeometry, &s, &IntegratorSettings::with_t_end(0.0)).unwrap();
        assert_eq!(tr.samples.len(), 1);
        assert!(tr.is_completed());
    }

    #[test]
    fn zero_velocity_is_fixed_point() {
        let s = GeodesicState::new(Point3::new(1.0, 2.0, 3.0), Vec3::zeros());
        assert_eq!(rk4_step(&ClosedFormGeometry, &s, 0.1).unwrap(), s);
    }

    #[test]
    fn axial_ray_stays_on_axis() {
        let mut s = ray(Point3::new(0.0, 0.0, 5.0), Vec3::new(0.0, 0.0, -1.0));
        for _ in 0..100 {
            s = rk4_step(&ClosedFormGeometry, &s, 0.05).unwrap();
            assert!(s.position[0].abs() < 1e-12 && s.position[1].abs() < 1e-12);
        }
    }

    #[test]
    fn flat_lines_are_exact_and_interpolate() {
        let s = GeodesicState::new(Point3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 0.6, 0.8));
        let tr = integrate(&FlatGeometry, &s, &IntegratorSettings::with_t_end(2.0)).unwrap();
        assert!(tr.is_completed());
        assert!((tr.last().t - 2.0).abs() < 1e-15);
        let mid = tr.position_at(1.234).unwrap();
        assert!((mid - Point3::new(1.0, 0.6 * 1.234, 0.8 * 1.234)).norm() < 1e-12);
        assert!(tr.position_at(2.5).is_none());
    }

    #[test]
    fn times_strictly_increase() {
        let s = ray(Point3::new(3.0, 0.0, 0.0), Vec3::new(-1.0, 0.2, 0.0));
        let tr = integrate(&ClosedFormGeometry, &s, &IntegratorSettings::with_t_end(3.0)).unwrap();
        assert!(tr.samples.windows(2).all(|w| w[1].t > w[0].t));
        assert!(tr.max_abs_drift() < 1e-6);
    }

    #[test]
    fn bad_step_rejected() {
        let s = ray(Point3::zeros(), Vec3::new(1.0, 0.0, 0.0));
        assert!(rk4_step(&ClosedFormGeometry, &s, 0.0).is_err());
    }
}
