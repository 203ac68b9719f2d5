//! `hopflens`: command-line access to the effective metric, curvature, ray
//! tracing, scenarios, Hopf charge and the validation battery.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage or input error,
//! 3 degraded result (too many aborted rays).

mod fmt;
mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use hopflens::effective_geometry::{
    inv_metric_matrix, inv_metric_toroidal, metric_matrix, ricci_scalar, HopfionMetric,
};
use hopflens::geodesics::{
    integrate, normalize_velocity_in, ChristoffelGeometry, ClosedFormGeometry, GeodesicState, Geometry,
    IntegratorSettings, TrajectoryStatus,
};
use hopflens::hopf_map::{
    hopf_charge_whitehead, linking_number, preimage_curve, write_curve_csv, AnsatzConfig, SpherePoint,
    ToroidalPoint,
};
use hopflens::scenarios::{self, ScenarioConfig};
use hopflens::validation::run_validation;
use hopflens::Point3;

use fmt::g15;

#[derive(Parser)]
#[command(name = "hopflens", version, about = "Rays and effective geometry around a Hopf soliton")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the effective metric (or its inverse) at a point.
    Metric(MetricArgs),
    /// Ricci scalar at a point or on a cubic grid.
    Ricci(RicciArgs),
    /// Trace a single ray.
    Geodesic(GeodesicArgs),
    /// Run a ray-bundle scenario.
    Scenario(ScenarioArgs),
    /// Hopf charge of the torus ansatz.
    Charge(ChargeArgs),
    /// Run the cross-validation battery.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct MetricArgs {
    /// Cartesian point x,y,z (or η,θ,ψ with --toroidal).
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    at: [f64; 3],
    /// Print the reciprocal metric m^ij instead of m_ij.
    #[arg(long)]
    inverse: bool,
    /// Read the point as toroidal η,θ,ψ and print components in that chart.
    #[arg(long)]
    toroidal: bool,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("where").required(true).args(["at", "grid"]))]
struct RicciArgs {
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    at: Option<[f64; 3]>,
    /// Cube [min,max]³ sampled with n points per axis: min,max,n.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    grid: Option<Grid>,
    /// Write the grid CSV here instead of standard output.
    #[arg(long, requires = "grid")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct IntegratorArgs {
    #[arg(long, default_value_t = IntegratorSettings::default().rel_tol)]
    rel_tol: f64,
    #[arg(long, default_value_t = IntegratorSettings::default().abs_tol)]
    abs_tol: f64,
    #[arg(long, default_value_t = IntegratorSettings::default().h_init)]
    h_init: f64,
    #[arg(long, default_value_t = IntegratorSettings::default().h_min)]
    h_min: f64,
    #[arg(long, default_value_t = IntegratorSettings::default().h_max)]
    h_max: f64,
}

#[derive(Args)]
struct GeodesicArgs {
    /// Start point x,y,z.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    from: [f64; 3],
    /// Initial direction; rescaled to unit effective speed.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    dir: [f64; 3],
    #[arg(long, default_value_t = 8.0)]
    t_end: f64,
    /// Use finite-difference Christoffel symbols instead of the closed form.
    #[arg(long)]
    christoffel: bool,
    /// Trajectory CSV (t,x,y,z,vx,vy,vz,drift).
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    integrator: IntegratorArgs,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("which").required(true).args(["config", "builtin"]))]
struct ScenarioArgs {
    /// Scenario JSON file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// A bundled scenario: fig2 … fig7.
    #[arg(long)]
    builtin: Option<String>,
    /// Directory that relative output paths are resolved against.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ChargeArgs {
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    a: i32,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    b: i32,
    /// Also compute the linking number of two preimage loops.
    #[arg(long)]
    linking: bool,
    /// Points per preimage loop.
    #[arg(long, default_value_t = 128)]
    samples: usize,
    /// Write the two preimage loops as <prefix>_1.csv and <prefix>_2.csv.
    #[arg(long, requires = "linking")]
    curves: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Also write the report as JSON to this file.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy)]
struct Grid {
    min: f64,
    max: f64,
    n: usize,
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got `{s}`"));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        let v: f64 = p.trim().parse().map_err(|_| format!("`{p}` is not a number"))?;
        if !v.is_finite() {
            return Err(format!("`{p}` is not finite"));
        }
        *o = v;
    }
    Ok(out)
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected min,max,n, got `{s}`"));
    }
    let num = |p: &str| -> Result<f64, String> {
        p.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("`{p}` is not a finite number"))
    };
    let (min, max) = (num(parts[0])?, num(parts[1])?);
    let n: usize = parts[2].trim().parse().map_err(|_| format!("`{}` is not a count", parts[2]))?;
    if n < 2 {
        return Err("grid needs n >= 2".into());
    }
    if !(max > min) {
        return Err("grid needs max > min".into());
    }
    Ok(Grid { min, max, n })
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: 2, error }
    }
}

impl From<hopflens::Error> for Failure {
    fn from(e: hopflens::Error) -> Self {
        anyhow::Error::new(e).into()
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        anyhow::Error::new(e).into()
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Metric(a) => cmd_metric(a),
        Command::Ricci(a) => cmd_ricci(a),
        Command::Geodesic(a) => cmd_geodesic(a),
        Command::Scenario(a) => cmd_scenario(a),
        Command::Charge(a) => cmd_charge(a),
        Command::Validate(a) => cmd_validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn print_matrix(m: &nalgebra::Matrix3<f64>) {
    for i in 0..3 {
        let row: Vec<String> = (0..3).map(|j| g15(m[(i, j)])).collect();
        println!("{}", row.join(" "));
    }
}

fn cmd_metric(a: MetricArgs) -> CmdResult {
    let m = if a.toroidal {
        let p = ToroidalPoint::new(a.at[0], a.at[1], a.at[2])?;
        let inv = *inv_metric_toroidal(&AnsatzConfig::q1(), &p)?.matrix();
        if a.inverse {
            inv
        } else {
            inv.try_inverse()
                .ok_or_else(|| anyhow!("toroidal reciprocal metric is singular here"))?
        }
    } else {
        let x = Point3::from(a.at);
        if a.inverse {
            inv_metric_matrix(&x)
        } else {
            metric_matrix(&x)
        }
    };
    print_matrix(&m);
    Ok(())
}

fn cmd_ricci(a: RicciArgs) -> CmdResult {
    if let Some(p) = a.at {
        println!("{}", g15(ricci_scalar(&Point3::from(p))));
        return Ok(());
    }
    let grid = a.grid.expect("clap enforces --at or --grid");
    let coord = |i: usize| grid.min + (grid.max - grid.min) * i as f64 / (grid.n - 1) as f64;
    let write = |w: &mut dyn Write| -> std::io::Result<()> {
        writeln!(w, "x,y,z,R")?;
        for i in 0..grid.n {
            for j in 0..grid.n {
                for k in 0..grid.n {
                    let (x, y, z) = (coord(i), coord(j), coord(k));
                    writeln!(w, "{x},{y},{z},{}", ricci_scalar(&Point3::new(x, y, z)))?;
                }
            }
        }
        Ok(())
    };
    match &a.output {
        Some(path) => output::write_atomic(path, write)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = std::io::BufWriter::new(stdout.lock());
            write(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn cmd_geodesic(a: GeodesicArgs) -> CmdResult {
    let settings = IntegratorSettings {
        rel_tol: a.integrator.rel_tol,
        abs_tol: a.integrator.abs_tol,
        h_init: a.integrator.h_init,
        h_min: a.integrator.h_min,
        h_max: a.integrator.h_max,
        t_end: a.t_end,
    };
    settings.validate()?;
    if let Some(p) = &a.output {
        output::check_parent(p)?;
    }
    let g: &dyn Geometry = if a.christoffel {
        &ChristoffelGeometry(HopfionMetric)
    } else {
        &ClosedFormGeometry
    };
    let x = Point3::from(a.from);
    let v = normalize_velocity_in(g, &x, &Point3::from(a.dir))?;
    let tr = integrate(g, &GeodesicState::new(x, v), &settings)?;

    if let Some(path) = &a.output {
        output::write_atomic(path, |w| {
            writeln!(w, "t,x,y,z,vx,vy,vz,drift")?;
            for s in &tr.samples {
                let (p, v) = (s.state.position, s.state.velocity);
                writeln!(w, "{},{},{},{},{},{},{},{}", s.t, p[0], p[1], p[2], v[0], v[1], v[2], s.drift)?;
            }
            Ok(())
        })?;
    }
    let last = tr.last();
    let p = last.state.position;
    println!(
        "t={} position={},{},{} steps={} max_drift={}",
        g15(last.t),
        g15(p[0]),
        g15(p[1]),
        g15(p[2]),
        tr.samples.len() - 1,
        g15(tr.max_abs_drift())
    );
    match tr.status {
        TrajectoryStatus::Completed => Ok(()),
        TrajectoryStatus::Aborted { reason, t } => Err(Failure {
            code: 3,
            error: anyhow!("ray aborted at t={} ({reason:?})", g15(t)),
        }),
    }
}

fn resolve(out_dir: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        out_dir.join(p)
    }
}

fn cmd_scenario(a: ScenarioArgs) -> CmdResult {
    let cfg = match (&a.config, &a.builtin) {
        (Some(path), _) => ScenarioConfig::from_json(&output::read_to_string(path)?)
            .with_context(|| format!("invalid scenario {}", path.display()))?,
        (None, Some(name)) => scenarios::builtin(name).ok_or_else(|| anyhow!("unknown scenario `{name}`"))?,
        (None, None) => unreachable!("clap enforces --config or --builtin"),
    };
    let csv = cfg.outputs.trajectories_csv.as_ref().map(|p| resolve(&a.out_dir, p));
    let json = cfg.outputs.diagnostics_json.as_ref().map(|p| resolve(&a.out_dir, p));
    for p in csv.iter().chain(json.iter()) {
        output::check_parent(p)?;
    }

    let result = scenarios::run(&cfg)?;
    if let Some(p) = &csv {
        output::write_atomic(p, |w| scenarios::write_trajectories_csv(w, &result))?;
    }
    if let Some(p) = &json {
        output::write_atomic(p, |w| scenarios::write_diagnostics_json(w, &result))?;
    }
    let d = &result.diagnostics;
    println!(
        "scenario={} rays={} completed={} aborted={} focal_points={} max_drift={}",
        if cfg.name.is_empty() { "-" } else { &cfg.name },
        d.rays,
        d.completed,
        d.aborted,
        d.focal_points.len(),
        g15(d.max_abs_drift)
    );
    for f in &d.focal_points {
        println!(
            "focal t={} centroid={},{},{} spread={}",
            g15(f.t),
            g15(f.centroid[0]),
            g15(f.centroid[1]),
            g15(f.centroid[2]),
            g15(f.spread)
        );
    }
    if d.degraded {
        return Err(Failure {
            code: 3,
            error: anyhow!("{} of {} rays aborted", d.aborted, d.rays),
        });
    }
    Ok(())
}

fn cmd_charge(a: ChargeArgs) -> CmdResult {
    if a.a == 0 && a.b == 0 {
        return Err(anyhow!("windings a and b cannot both be zero").into());
    }
    let cfg = AnsatzConfig::with_sinh(a.a, a.b);
    let q = hopf_charge_whitehead(&cfg)?;
    println!(
        "whitehead={} error_estimate={} expected={}",
        g15(q.value),
        g15(q.error_estimate),
        cfg.charge()
    );
    if a.linking {
        let t1 = SpherePoint {
            r: cfg.profile.value(1.0),
            phi: 0.3,
        };
        let t2 = SpherePoint {
            r: cfg.profile.value(0.6),
            phi: 2.0,
        };
        let c1 = preimage_curve(&cfg, t1, a.samples)?;
        let c2 = preimage_curve(&cfg, t2, a.samples)?;
        if let Some(prefix) = &a.curves {
            for (k, c) in [(1, &c1), (2, &c2)] {
                let mut name = prefix.as_os_str().to_owned();
                name.push(format!("_{k}.csv"));
                output::write_atomic(Path::new(&name), |w| write_curve_csv(w, c))?;
            }
        }
        println!("linking={}", g15(linking_number(&c1, &c2)?));
    }
    Ok(())
}

fn cmd_validate(a: ValidateArgs) -> CmdResult {
    if let Some(p) = &a.json {
        output::check_parent(p)?;
    }
    let report = run_validation();
    print!("{}", report.to_text());
    if let Some(p) = &a.json {
        let json = report.to_json();
        output::write_atomic(p, |w| writeln!(w, "{json}"))?;
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            error: anyhow!("validation failed"),
        })
    }
}
