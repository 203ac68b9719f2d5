use std::f64::consts::PI;

use hopflens::effective_geometry::{
    inv_metric_cartesian, inv_metric_matrix, inv_metric_toroidal, lorentzian_check, metric_matrix, principal_symbol,
    proportionality, reciprocal_from_strain, ricci_scalar, ricci_scalar_numeric, toroidal_to_cartesian_tensor,
    Covector4, StrainEigenvalues,
};
use hopflens::hopf_map::{cartesian_to_toroidal, strain, AnsatzConfig, ToroidalPoint};
use hopflens::{Error, Point3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point(rng: &mut ChaCha8Rng, w: f64) -> Point3 {
    Point3::new(rng.gen_range(-w..w), rng.gen_range(-w..w), rng.gen_range(-w..w))
}

#[test]
fn closed_form_matches_strain_construction() {
    let cfg = AnsatzConfig::q1();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..200 {
        let x = random_point(&mut rng, 4.0);
        let built = reciprocal_from_strain(&cfg, &x).unwrap();
        let (c, resid) = proportionality(&inv_metric_cartesian(&x), &built);
        assert!(resid < 1e-8, "{x:?}: {resid}");
        assert!((c - 1.0).abs() < 1e-8, "{x:?}: factor {c}");
    }
}

#[test]
fn toroidal_pushforward_matches_cartesian() {
    let cfg = AnsatzConfig::q1();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let p = ToroidalPoint::new(rng.gen_range(0.05..4.0), rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI))
            .unwrap();
        let t = toroidal_to_cartesian_tensor(&p, &inv_metric_toroidal(&cfg, &p).unwrap()).unwrap();
        let x = p.to_cartesian().unwrap();
        let (_, resid) = proportionality(&inv_metric_cartesian(&x), &t);
        assert!(resid < 1e-8, "{p:?}: {resid}");
    }
}

#[test]
fn toroidal_sample_symmetric_positive_definite() {
    let p = ToroidalPoint::new(1.0, PI / 2.0, 0.0).unwrap();
    let t = inv_metric_toroidal(&AnsatzConfig::q1(), &p).unwrap();
    let m = t.matrix();
    assert_eq!(m, &m.transpose());
    assert!(t.is_positive_definite());
}

#[test]
fn metric_times_inverse_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..1000 {
        let x = random_point(&mut rng, 10.0);
        let d = metric_matrix(&x) * inv_metric_matrix(&x) - nalgebra::Matrix3::identity();
        assert!(d.amax() < 1e-10, "{x:?}");
    }
}

#[test]
fn metric_positive_definite() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..10_000 {
        let x = random_point(&mut rng, 10.0);
        let ev = metric_matrix(&x).symmetric_eigenvalues();
        assert!(ev.min() > 0.0, "{x:?}: {ev}");
    }
}

#[test]
fn curvature_oracle_on_grid() {
    for i in 0..5 {
        for j in 0..5 {
            for k in 0..5 {
                let c = |n: usize| -3.0 + 1.5 * n as f64;
                let x = Point3::new(c(i), c(j), c(k));
                let exact = ricci_scalar(&x);
                let fd = ricci_scalar_numeric(&x).unwrap();
                assert!((fd - exact).abs() <= 1e-3 * exact.abs().max(1e-3), "{x:?}: {fd} vs {exact}");
            }
        }
    }
    assert!((ricci_scalar_numeric(&Point3::zeros()).unwrap() + 2.0).abs() < 1e-3);
}

#[test]
fn symbol_factorises_at_random_pairs() {
    let cfg = AnsatzConfig::q1();
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..100 {
        let x = random_point(&mut rng, 3.0);
        let k = Covector4::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let s = principal_symbol(&cfg, &x, &k).unwrap();
        let (d, f) = (s.determinant(), s.factorized_determinant());
        assert!((d - f).abs() <= 1e-10 * d.abs().max(f.abs()), "{x:?} {k:?}: {d} vs {f}");
    }
}

#[test]
fn symbol_on_axis_is_degenerate() {
    let k = Covector4::new(1.0, 0.0, 0.0, 1.0);
    let r = principal_symbol(&AnsatzConfig::q1(), &Point3::new(0.0, 0.0, 2.0), &k);
    assert!(matches!(r, Err(Error::DegenerateTarget(_))));
}

#[test]
fn static_strain_is_always_lorentzian() {
    let cfg = AnsatzConfig::q1();
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for _ in 0..1000 {
        let x = random_point(&mut rng, 5.0);
        let s = strain(&cfg, &x).unwrap();
        let report = lorentzian_check(&StrainEigenvalues::from(&s)).unwrap();
        assert!(report.lorentzian, "{x:?}: {report:?}");
        let d = report.diagonal.unwrap();
        assert!((d[0] + 1.0).abs() < 1e-12);
    }
}

#[test]
fn pushforward_needs_off_axis_point() {
    let p = cartesian_to_toroidal(&Point3::new(0.0, 0.0, 3.0)).unwrap();
    assert!(inv_metric_toroidal(&AnsatzConfig::q1(), &p).is_err());
}
