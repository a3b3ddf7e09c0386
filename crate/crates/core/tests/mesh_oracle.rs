use catenoid::flux::EndConfiguration;
use catenoid::mesh::{mesh_surface, MeshOptions};
use catenoid::symmetric::symmetric_configuration;
use catenoid::{Error, Execution, C64};

/// Primitive of `u·v` with `u = Σ α_j/(z − q_j)`, `v = Σ β_j/(z − q_j)`, by partial fractions.
fn primitive(q: &[C64], alpha: &[C64], beta: &[C64], z: C64) -> C64 {
    let n = q.len();
    let mut out = C64::new(0.0, 0.0);
    for j in 0..n {
        let mut c = C64::new(0.0, 0.0);
        for k in (0..n).filter(|&k| k != j) {
            c += (alpha[j] * beta[k] + beta[j] * alpha[k]) / (q[j] - q[k]);
        }
        out += -alpha[j] * beta[j] / (z - q[j]) + c * (z - q[j]).ln();
    }
    out
}

fn analytic_position(cfg: &EndConfiguration, z: C64, z0: C64) -> [f64; 3] {
    let s2: Vec<C64> = cfg.p.iter().zip(&cfg.b).map(|(p, b)| p * b).collect();
    let g = |a: &[C64], b: &[C64]| primitive(&cfg.q, a, b, z) - primitive(&cfg.q, a, b, z0);
    let (g11, g22, g12) = (g(&cfg.b, &cfg.b), g(&s2, &s2), g(&cfg.b, &s2));
    let i = C64::new(0.0, 1.0);
    [((g11 - g22) * 0.5).re * 2.0, (i * (g11 + g22) * 0.5).re * 2.0, g12.re * 2.0]
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    (0..3).map(|k| (a[k] - b[k]).powi(2)).sum::<f64>().sqrt()
}

#[test]
fn vertices_match_partial_fractions() {
    for (m, r) in [(3, 2.0), (4, 0.5)] {
        let (cfg, _) = symmetric_configuration(m, r).unwrap();
        let mesh = mesh_surface(&cfg, &MeshOptions { rings: 6, radial: 12, ..MeshOptions::default() }).unwrap();
        assert!(mesh.vertices.len() > mesh.grid_size / 2, "{} of {}", mesh.vertices.len(), mesh.grid_size);
        let scale = mesh.vertices.iter().map(|v| dist(*v, [0.0; 3])).fold(1.0, f64::max);
        for (v, z) in mesh.vertices.iter().zip(&mesh.parameters) {
            let want = analytic_position(&cfg, *z, mesh.base_point);
            assert!(dist(*v, want) < 1e-8 * scale, "m={m} z={z}: {v:?} vs {want:?}");
        }
    }
}

#[test]
fn shared_points_converge() {
    let (cfg, _) = symmetric_configuration(3, 2.0).unwrap();
    let coarse = mesh_surface(&cfg, &MeshOptions { rings: 6, radial: 16, ..MeshOptions::default() }).unwrap();
    let fine = mesh_surface(&cfg, &MeshOptions { rings: 12, radial: 32, ..MeshOptions::default() }).unwrap();
    let mut shared = 0;
    for (v, z) in coarse.vertices.iter().zip(&coarse.parameters) {
        if let Some(k) = fine.parameters.iter().position(|w| (w - z).norm() < 1e-12) {
            assert!(dist(*v, fine.vertices[k]) < 1e-6, "at {z}");
            shared += 1;
        }
    }
    assert!(shared > 50, "{shared}");
}

#[test]
fn obj_is_deterministic_across_execution() {
    let (cfg, _) = symmetric_configuration(3, 2.0).unwrap();
    let a = mesh_surface(&cfg, &MeshOptions { execution: Execution::Sequential, ..MeshOptions::default() }).unwrap();
    let b = mesh_surface(&cfg, &MeshOptions { execution: Execution::Parallel, ..MeshOptions::default() }).unwrap();
    assert_eq!(a.to_obj(), b.to_obj());
    assert_eq!(a.vertices.len() + a.dropped, a.grid_size);
    assert!(a.groups.iter().all(|g| !g.faces.is_empty()));
    let names: Vec<&str> = a.groups.iter().map(|g| g.name.as_str()).collect();
    assert_eq!(names, ["core", "end_1", "end_2", "end_3", "end_4"]);
}

#[test]
fn branched_configuration_is_refused() {
    let (mut cfg, _) = symmetric_configuration(3, 2.0).unwrap();
    // b = 0 at the last end: P and Q drop to a common root structure
    let n = cfg.n();
    cfg.b[n - 1] = C64::new(0.0, 0.0);
    assert!(matches!(mesh_surface(&cfg, &MeshOptions::default()), Err(Error::Branched(_))));
}
