use std::f64::consts::TAU;

use hopflens::geodesics::{ClosedFormGeometry, Geometry};
use hopflens::scenarios::{
    build_fig2, build_fig6, build_fig7, run, wavefront_measure, write_trajectories_csv, ScenarioConfig,
};
use nalgebra::Rotation3;

#[test]
fn fig2_seeds_have_unit_speed() {
    let cfg = build_fig2(314, 8.0);
    for (x, d) in cfg.seeds() {
        let v = hopflens::geodesics::normalize_velocity(&x, &d).unwrap();
        assert!((ClosedFormGeometry.norm_sq(&x, &v) - 1.0).abs() < 1e-14);
    }
}

#[test]
fn fig2_rays_toward_minus_x_stay_flat_at_small_times() {
    let cfg = build_fig2(314, 0.5);
    let r = run(&cfg).unwrap();
    // ray 157 starts along −x; its neighbours are 1.15° away
    for k in 156..=158 {
        let (_, d) = cfg.seeds()[k];
        assert!(d[0] < -0.999);
        let z = r.trajectories[k]
            .samples
            .iter()
            .map(|s| s.state.position[2].abs())
            .fold(0.0, f64::max);
        assert!(z < 1e-3, "ray {k}: {z}");
    }
}

#[test]
fn small_t_wavefront_is_euclidean() {
    let r = run(&build_fig2(314, 0.05)).unwrap();
    let w = wavefront_measure(&r, 0.01).unwrap();
    assert!((w.ratio() - 1.0).abs() < 0.01, "{}", w.ratio());
}

#[test]
fn perimeter_converges_under_fan_refinement() {
    let a = run(&build_fig2(314, 8.0)).unwrap();
    let b = run(&build_fig2(628, 8.0)).unwrap();
    for t in [2.0, 4.0, 6.0, 8.0] {
        let (pa, pb) = (wavefront_measure(&a, t).unwrap(), wavefront_measure(&b, t).unwrap());
        let rel = (pa.perimeter - pb.perimeter).abs() / pb.perimeter;
        assert!(rel < 5e-3, "t={t}: {rel}");
        assert_eq!(pa.euclid_perimeter, TAU * t);
    }
}

fn rotation_symmetry(cfg: &ScenarioConfig) -> f64 {
    let r = run(cfg).unwrap();
    let rot = Rotation3::from_axis_angle(&nalgebra::Vector3::z_axis(), TAU / 12.0);
    let n = r.trajectories.len();
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let (a, b) = (&r.trajectories[k], &r.trajectories[(k + 1) % n]);
        for i in 0..=150 {
            let t = cfg.t_end * i as f64 / 150.0;
            worst = worst.max((rot * a.position_at(t).unwrap() - b.position_at(t).unwrap()).norm());
        }
    }
    worst
}

#[test]
fn fig6_bundle_is_rotation_symmetric() {
    let w = rotation_symmetry(&build_fig6(12));
    assert!(w < 1e-6, "{w}");
}

#[test]
fn fig7_bundle_is_rotation_symmetric() {
    let w = rotation_symmetry(&build_fig7(12));
    assert!(w < 1e-6, "{w}");
}

#[test]
fn runs_are_bit_identical() {
    let cfg = build_fig7(12);
    let csv = |cfg: &ScenarioConfig| {
        let mut buf = Vec::new();
        write_trajectories_csv(&mut buf, &run(cfg).unwrap()).unwrap();
        buf
    };
    assert!(csv(&cfg) == csv(&cfg));
}

#[test]
fn bundled_configs_match_builders() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7"] {
        let text = std::fs::read_to_string(dir.join(format!("{name}.json"))).unwrap();
        let cfg = ScenarioConfig::from_json(&text).unwrap();
        let built = hopflens::scenarios::builtin(name).unwrap();
        assert_eq!(cfg.source, built.source, "{name}");
        assert_eq!(cfg.directions, built.directions, "{name}");
        assert_eq!(cfg.t_end, built.t_end, "{name}");
    }
}
