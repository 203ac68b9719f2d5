//! Declarative ray-bundle experiments, their execution and diagnostics.

mod bundle;
mod config;
mod output;

pub use bundle::{
    bundle_spread, focal_points, run, run_with, wavefront_measure, wavefront_measure_in, AbortCounts,
    BundleResult, Diagnostics, FocalPoint, SpreadSample, WavefrontMeasure, FOCAL_DT, MAX_ABORT_FRACTION,
};
pub use config::{
    build_fig2, build_fig3, build_fig4, build_fig5, build_fig6, build_fig6_with, build_fig7, build_fig7_with,
    builtin, Directions, IntegratorConfig, Outputs, ScenarioConfig, Source,
};
pub use output::{write_diagnostics_json, write_trajectories_csv, TRAJECTORY_HEADER};
