use std::f64::consts::PI;

use num_complex::Complex64;
use qpgreen::series::{g3d_eigen, SeriesControl};
use qpgreen::*;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn node_value_matches_series() {
    let p = Params3D::new(1.0, 0.1, 0.2, 128);
    let t = prepare3d(&p).unwrap();
    let x = [0.5 * PI, 0.5 * PI, 0.3];
    let g = g3d_eigen(x, 1.0, 0.1, 0.2, &SeriesControl::default()).unwrap();
    assert!(rel(t.eval(x).unwrap(), g) < 1e-6);
}

#[test]
fn grid_is_even_in_x3_index() {
    let t = prepare3d(&Params3D::new(5.0, 0.1, 0.2, 16)).unwrap();
    let g = t.grid();
    let m = 32i64;
    let scale = g.max_abs();
    for i in 0..m {
        for j in 0..m {
            for l in 1..m {
                assert!((g.get(&[i, j, l]) - g.get(&[i, j, m - l])).norm() < 1e-12 * scale);
            }
        }
    }
}

#[test]
fn origin_node_self_converges() {
    let v: Vec<Complex64> = [32, 64, 128]
        .iter()
        .map(|&n| {
            let z = prepare3d(&Params3D::new(5.0, 0.1, 0.2, n)).unwrap().grid().get(&[0, 0, 0]);
            assert!(z.re.is_finite() && z.im.is_finite());
            z
        })
        .collect();
    assert!((v[2] - v[1]).norm() < (v[1] - v[0]).norm(), "{v:?}");
}

#[test]
fn quasi_periodicity_and_delegation() {
    let (k, a1, a2) = (5.0, 0.1, 0.2);
    let t = prepare3d(&Params3D::new(k, a1, a2, 16)).unwrap();
    let x = [0.3, -0.4, 0.2];
    let g = t.eval(x).unwrap();
    let s1 = t.eval([x[0] + 2.0 * PI, x[1], x[2]]).unwrap();
    let s2 = t.eval([x[0], x[1] - 4.0 * PI, x[2]]).unwrap();
    assert!((s1 - Complex64::from_polar(1.0, 2.0 * PI * a1) * g).norm() < 1e-13 * g.norm());
    assert!((s2 - Complex64::from_polar(1.0, -4.0 * PI * a2) * g).norm() < 1e-13 * g.norm());

    let y = [0.0, 1.5, 0.7];
    assert_eq!(t.eval(y).unwrap(), g3d_eigen(y, k, a1, a2, &t.series).unwrap());
    assert!(matches!(t.eval([2.0 * PI, 0.0, 0.0]), Err(Error::EvalAtSource)));
}

#[test]
fn evaluation_is_even_in_x3() {
    let t = prepare3d(&Params3D::new(5.0, 0.1, 0.2, 32)).unwrap();
    for x in [[0.03, 0.03, 0.1], [1.0, -2.0, 0.37], [-0.5, 0.2, 0.55]] {
        let a = t.eval(x).unwrap();
        let b = t.eval([x[0], x[1], -x[2]]).unwrap();
        assert!(rel(b, a) < 1e-4, "{x:?}");
    }
}

#[test]
fn wood_anomaly_is_rejected() {
    assert!(matches!(prepare3d(&Params3D::new(1.0, 0.0, 0.0, 8)), Err(Error::WoodAnomaly { .. })));
}

#[test]
fn table_roundtrips_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let t = prepare3d(&Params3D::new(5.0, 0.1, 0.2, 8)).unwrap();
    let path = dir.path().join("g3.qpt");
    t.save(&path).unwrap();
    let back = GreenTable3D::load(&path).unwrap();
    assert_eq!(back.params(), t.params());
    assert_eq!(back.grid().data(), t.grid().data());
    assert!(matches!(MaxwellTable::load(&path), Err(Error::Format(_))));
}

#[test]
fn execution_modes_agree() {
    let p = Params3D::new(5.0, 0.1, 0.2, 16);
    let a = qpgreen::helm3d::prepare3d_with(&p, FhatMethod::Radial, Exec::Sequential).unwrap();
    let b = qpgreen::helm3d::prepare3d_with(&p, FhatMethod::Radial, Exec::Parallel).unwrap();
    assert_eq!(a.grid().data(), b.grid().data());
}
