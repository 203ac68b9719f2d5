//! Trajectory CSV and diagnostics JSON exports.

use std::io::{self, Write};

use crate::scenarios::bundle::BundleResult;

pub const TRAJECTORY_HEADER: &str = "ray_id,t,x,y,z,vx,vy,vz,drift";

/// One row per accepted step of every ray, rays in seed order. Numbers use the
/// shortest decimal form that parses back to the same f64.
pub fn write_trajectories_csv<W: Write>(mut out: W, result: &BundleResult) -> io::Result<()> {
    writeln!(out, "{TRAJECTORY_HEADER}")?;
    for (id, tr) in result.trajectories.iter().enumerate() {
        for s in &tr.samples {
            let (p, v) = (s.state.position, s.state.velocity);
            writeln!(
                out,
                "{id},{},{},{},{},{},{},{},{}",
                s.t, p[0], p[1], p[2], v[0], v[1], v[2], s.drift
            )?;
        }
    }
    out.flush()
}

pub fn write_diagnostics_json<W: Write>(mut out: W, result: &BundleResult) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, &result.diagnostics)?;
    writeln!(out)?;
    out.flush()
}
