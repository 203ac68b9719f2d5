//! Preimage loops of the torus ansatz and their Gauss linking number.

use std::f64::consts::{PI, TAU};
use std::io::{self, Write};

use crate::hopf_map::ansatz::{AnsatzConfig, SpherePoint};
use crate::hopf_map::chart::{toroidal_to_cartesian, ToroidalPoint};
use crate::{Error, Point3, Result};

const MIN_SAMPLES: usize = 8;
const MIN_SEGMENTS: usize = 64;
const MAX_LEVELS: usize = 6;
const CONVERGENCE: f64 = 1e-3;

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Closed polyline φ⁻¹(target) with `samples` segments; the last point repeats the first.
///
/// The preimage lies on the torus η = f⁻¹(R) and follows aθ + bψ = Φ, traced as
/// θ = θ₀ + b s, ψ = ψ₀ − a s for s ∈ [0, 2π]. For coprime (a, b) this is one
/// closed (b, a) torus knot; other windings split into several components and are refused.
pub fn preimage_curve(cfg: &AnsatzConfig, target: SpherePoint, samples: usize) -> Result<Vec<Point3>> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    if target.is_pole() {
        return Err(Error::DegenerateTarget(format!(
            "preimage of a pole (R={}) is the z-axis or the core ring",
            target.r
        )));
    }
    let (a, b) = (cfg.a, cfg.b);
    if gcd(a.unsigned_abs(), b.unsigned_abs()) != 1 {
        return Err(Error::InvalidInput(format!(
            "windings ({a}, {b}) are not coprime; the preimage is not a single loop"
        )));
    }
    let eta = cfg.profile.inverse(target.r).ok_or_else(|| {
        Error::InvalidInput(format!("profile does not reach R={}", target.r))
    })?;
    let (theta0, psi0) = if a != 0 {
        (target.phi / a as f64, 0.0)
    } else {
        (0.0, target.phi / b as f64)
    };
    let mut pts = Vec::with_capacity(samples + 1);
    for k in 0..samples {
        let s = TAU * k as f64 / samples as f64;
        let p = ToroidalPoint::new(eta, theta0 + b as f64 * s, psi0 - a as f64 * s)?;
        pts.push(toroidal_to_cartesian(&p)?);
    }
    pts.push(pts[0]);
    Ok(pts)
}

fn segments(c: &[Point3]) -> impl Iterator<Item = (Point3, Point3)> + '_ {
    c.windows(2).map(|w| ((w[0] + w[1]) * 0.5, w[1] - w[0]))
}

fn gauss_sum(c1: &[Point3], c2: &[Point3]) -> f64 {
    let s2: Vec<_> = segments(c2).collect();
    let mut total = 0.0;
    for (m1, d1) in segments(c1) {
        for (m2, d2) in &s2 {
            let r = m1 - m2;
            let n = r.norm();
            total += r.dot(&d1.cross(d2)) / (n * n * n);
        }
    }
    total / (4.0 * PI)
}

fn subdivide(c: &[Point3]) -> Vec<Point3> {
    let mut out = Vec::with_capacity(2 * c.len());
    for w in c.windows(2) {
        out.push(w[0]);
        out.push((w[0] + w[1]) * 0.5);
    }
    out.push(*c.last().unwrap());
    out
}

fn min_distance(c1: &[Point3], c2: &[Point3]) -> f64 {
    c1.iter()
        .flat_map(|p| c2.iter().map(move |q| (p - q).norm()))
        .fold(f64::INFINITY, f64::min)
}

fn max_segment(c: &[Point3]) -> f64 {
    c.windows(2).map(|w| (w[1] - w[0]).norm()).fold(0.0, f64::max)
}

fn check_closed(c: &[Point3], name: &str) -> Result<()> {
    if c.len() < MIN_SEGMENTS + 1 {
        return Err(Error::InvalidInput(format!(
            "{name} has {} segments, need at least {MIN_SEGMENTS}",
            c.len().saturating_sub(1)
        )));
    }
    let gap = (c[0] - c[c.len() - 1]).norm();
    if gap > 1e-10 * (1.0 + c[0].norm()) {
        return Err(Error::InvalidInput(format!("{name} is not closed (gap {gap:e})")));
    }
    Ok(())
}

/// Gauss linking integral of two closed polylines, midpoint rule over segment pairs.
///
/// The curves are first subdivided (at most three times) until no segment is
/// longer than their minimum separation; if that fails they are too close for
/// the midpoint rule. Subdivision then continues until successive estimates
/// change by less than 1e-3.
pub fn linking_number(c1: &[Point3], c2: &[Point3]) -> Result<f64> {
    check_closed(c1, "first curve")?;
    check_closed(c2, "second curve")?;
    let (mut a, mut b) = (c1.to_vec(), c2.to_vec());
    for level in 0.. {
        let threshold = max_segment(&a).max(max_segment(&b));
        let dmin = min_distance(&a, &b);
        if dmin >= threshold {
            break;
        }
        if level == 3 {
            return Err(Error::CurvesTooClose {
                min_distance: dmin,
                threshold,
            });
        }
        a = subdivide(&a);
        b = subdivide(&b);
    }
    let mut prev = gauss_sum(&a, &b);
    let mut change = f64::INFINITY;
    for _ in 0..MAX_LEVELS {
        a = subdivide(&a);
        b = subdivide(&b);
        let next = gauss_sum(&a, &b);
        change = (next - prev).abs();
        prev = next;
        if change < CONVERGENCE {
            return Ok(next);
        }
    }
    Err(Error::LinkingNotConverged {
        levels: MAX_LEVELS,
        last_change: change,
    })
}

/// Linking number of two generic preimages (R = f(1), Φ = 0.3 and R = f(0.6), Φ = 2).
pub fn preimage_linking(cfg: &AnsatzConfig, samples: usize) -> Result<f64> {
    let t1 = SpherePoint {
        r: cfg.profile.value(1.0),
        phi: 0.3,
    };
    let t2 = SpherePoint {
        r: cfg.profile.value(0.6),
        phi: 2.0,
    };
    let c1 = preimage_curve(cfg, t1, samples)?;
    let c2 = preimage_curve(cfg, t2, samples)?;
    linking_number(&c1, &c2)
}

/// Writes a polyline as CSV with columns index,x,y,z.
pub fn write_curve_csv<W: Write>(mut out: W, curve: &[Point3]) -> io::Result<()> {
    writeln!(out, "index,x,y,z")?;
    for (i, p) in curve.iter().enumerate() {
        writeln!(out, "{i},{},{},{}", p[0], p[1], p[2])?;
    }
    Ok(())
}
