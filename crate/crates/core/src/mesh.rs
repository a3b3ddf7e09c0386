//! Surface sampling by integrating `∂x` along grid edges, and OBJ export.
//!
//! The parameter domain is covered by one annulus around each end and a polar
//! core disk. Every grid edge that keeps clear of the ends is integrated by
//! composite Gauss–Legendre; vertex positions are accumulated along a
//! breadth-first spanning tree rooted at the base point. Zero monodromy makes
//! the result independent of the tree.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flux::{min_separation, spinor_data, EndConfiguration, SpinorData};
use crate::linalg::C64;
use crate::par::Execution;

/// 8-point Gauss–Legendre rule on `[−1, 1]`.
const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_2,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

const MAX_PANELS: usize = 1 << 14;
/// Base point must keep this distance from ends and zeros of `Q`.
const BASE_CLEARANCE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshOptions {
    /// Rings per annulus and per core disk.
    pub rings: usize,
    /// Angular samples per ring.
    pub radial: usize,
    /// Relative tolerance of each edge integral.
    pub tol: f64,
    pub execution: Execution,
}

impl Default for MeshOptions {
    fn default() -> Self {
        Self { rings: 12, radial: 32, tol: 1e-9, execution: Execution::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshGroup {
    pub name: String,
    /// Polygons as indices into `Mesh::vertices`.
    pub faces: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    /// Parameter value of each vertex.
    pub parameters: Vec<C64>,
    pub groups: Vec<MeshGroup>,
    pub base_point: C64,
    /// Candidate grid points before dropping.
    pub grid_size: usize,
    /// Grid points dropped for lying next to an end or being unreachable.
    pub dropped: usize,
}

/// Composite Gauss–Legendre integral of `∂x` over the segment `[a, b]`,
/// doubling the panel count until two successive values agree to `tol`.
pub fn integrate_segment(spinor: &SpinorData, a: C64, b: C64, tol: f64) -> [C64; 3] {
    let rule = |panels: usize| {
        let h = (b - a) / panels as f64;
        let mut acc = [C64::new(0.0, 0.0); 3];
        for k in 0..panels {
            let mid = a + h * (k as f64 + 0.5);
            for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
                let v = spinor.dx(mid + h * (0.5 * x));
                for (t, c) in acc.iter_mut().zip(v) {
                    *t += c * (0.5 * w) * h;
                }
            }
        }
        acc
    };
    let mut panels = 1;
    let mut prev = rule(panels);
    while panels < MAX_PANELS {
        panels *= 2;
        let next = rule(panels);
        let diff = prev.iter().zip(&next).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        let size = next.iter().map(|x| x.norm()).fold(0.0, f64::max);
        prev = next;
        if diff <= tol * (1.0 + size) {
            break;
        }
    }
    prev
}

fn segment_distance(a: C64, b: C64, p: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (a + d * t - p).norm()
}

/// Centroid of the ends, moved off ends and zeros of `Q` when too close.
/// It must also stay outside every annulus, or the core would lose its root.
fn base_point(config: &EndConfiguration, spinor: &SpinorData, r_out: &[f64]) -> Result<C64> {
    let n = config.n() as f64;
    let centroid = config.q.iter().sum::<C64>() / n;
    let mut avoid: Vec<(C64, f64)> = config.q.iter().zip(r_out).map(|(z, r)| (*z, r.max(BASE_CLEARANCE))).collect();
    if spinor.q_poly.degree() > 0 {
        avoid.extend(spinor.q_poly.roots()?.into_iter().map(|z| (z, BASE_CLEARANCE)));
    }
    let clear = |z: C64| avoid.iter().all(|(a, r)| (z - a).norm() >= *r);
    if clear(centroid) {
        return Ok(centroid);
    }
    let step = 0.25 * min_separation(&config.q).min(1.0);
    for ring in 1..=16 {
        for k in 0..12 {
            let z = centroid + C64::from_polar(step * ring as f64, 0.1 + std::f64::consts::TAU * k as f64 / 12.0);
            if clear(z) {
                return Ok(z);
            }
        }
    }
    Err(Error::Argument("no admissible base point near the centroid".into()))
}

struct Grid {
    z: Vec<C64>,
    edges: Vec<(usize, usize)>,
    groups: Vec<(String, Vec<Vec<usize>>)>,
}

impl Grid {
    fn push(&mut self, z: C64) -> usize {
        self.z.push(z);
        self.z.len() - 1
    }
}

/// Adds a polar patch: `rings × radial` points at `center + r_k e^{iθ_s}`.
/// Returns the node index table `[ring][spoke]`.
fn polar_patch(grid: &mut Grid, center: C64, radii: &[f64], radial: usize, phase: f64) -> Vec<Vec<usize>> {
    let table: Vec<Vec<usize>> = radii
        .iter()
        .map(|&r| (0..radial).map(|s| grid.push(center + C64::from_polar(r, phase + std::f64::consts::TAU * s as f64 / radial as f64))).collect())
        .collect();
    for (k, ring) in table.iter().enumerate() {
        for s in 0..radial {
            grid.edges.push((ring[s], ring[(s + 1) % radial]));
            if k + 1 < table.len() {
                grid.edges.push((ring[s], table[k + 1][s]));
            }
        }
    }
    table
}

fn quads(table: &[Vec<usize>], radial: usize) -> Vec<Vec<usize>> {
    let mut faces = Vec::new();
    for k in 0..table.len().saturating_sub(1) {
        for s in 0..radial {
            let t = (s + 1) % radial;
            faces.push(vec![table[k][s], table[k][t], table[k + 1][t], table[k + 1][s]]);
        }
    }
    faces
}

/// Samples the surface of a non-branched configuration.
pub fn mesh_surface(config: &EndConfiguration, options: &MeshOptions) -> Result<Mesh> {
    let (rings, radial) = (options.rings, options.radial);
    if rings < 2 || radial < 3 {
        return Err(Error::Argument(format!("grid needs rings >= 2 and radial >= 3, got {rings} x {radial}")));
    }
    if !(options.tol > 0.0) {
        return Err(Error::Argument("integration tolerance must be positive".into()));
    }
    let spinor = spinor_data(config)?;
    if !spinor.is_unbranched() {
        return Err(Error::Branched(format!(
            "max degree {} (needs {}), normalized resultant {:.3e}",
            spinor.max_degree,
            config.n() - 1,
            spinor.normalized_resultant
        )));
    }
    let n = config.n();
    let q = &config.q;
    let nearest: Vec<f64> =
        (0..n).map(|j| (0..n).filter(|&k| k != j).map(|k| (q[k] - q[j]).norm()).fold(f64::INFINITY, f64::min)).collect();
    let r_out: Vec<f64> = nearest.iter().map(|d| 0.4 * d).collect();
    let z0 = base_point(config, &spinor, &r_out)?;
    let r_in: Vec<f64> = r_out.iter().map(|r| r / 20.0).collect();
    let clearance: Vec<f64> = r_in.iter().map(|r| 0.5 * r).collect();

    let mut grid = Grid { z: Vec::new(), edges: Vec::new(), groups: Vec::new() };
    let root = grid.push(z0);

    let core_radius = q.iter().map(|z| (z - z0).norm()).fold(0.0, f64::max) + r_out.iter().cloned().fold(0.0, f64::max);
    let core_radii: Vec<f64> = (1..=rings).map(|k| core_radius * k as f64 / rings as f64).collect();
    let core = polar_patch(&mut grid, z0, &core_radii, radial, 0.0);
    for s in 0..radial {
        grid.edges.push((root, core[0][s]));
    }
    let mut core_faces: Vec<Vec<usize>> = (0..radial).map(|s| vec![root, core[0][s], core[0][(s + 1) % radial]]).collect();
    core_faces.extend(quads(&core, radial));
    grid.groups.push(("core".to_string(), core_faces));
    let core_nodes: Vec<usize> = std::iter::once(root).chain(core.iter().flatten().copied()).collect();

    for j in 0..n {
        let ratio = r_in[j] / r_out[j];
        let radii: Vec<f64> = (0..rings).map(|k| r_out[j] * ratio.powf(k as f64 / (rings - 1) as f64)).collect();
        let table = polar_patch(&mut grid, q[j], &radii, radial, 0.0);
        // tie the outer ring to the core at the nearest core node
        for &node in &table[0] {
            let z = grid.z[node];
            let hub = core_nodes
                .iter()
                .copied()
                .filter(|&c| (0..n).all(|k| (grid.z[c] - q[k]).norm() >= r_out[k]))
                .min_by(|&a, &b| (grid.z[a] - z).norm().total_cmp(&(grid.z[b] - z).norm()).then(a.cmp(&b)));
            if let Some(h) = hub {
                grid.edges.push((node, h));
            }
        }
        grid.groups.push((format!("end_{}", j + 1), quads(&table, radial)));
    }

    // Core nodes inside an annulus are superseded by it; annulus nodes are never dropped here.
    let total = grid.z.len();
    let first_annulus = 1 + rings * radial;
    let mut keep: Vec<bool> = (0..total)
        .map(|i| {
            let z = grid.z[i];
            if i < first_annulus {
                (0..n).all(|k| (z - q[k]).norm() >= r_out[k])
            } else {
                (0..n).all(|k| (z - q[k]).norm() >= r_in[k] * 0.999)
            }
        })
        .collect();

    let clear_edges: Vec<(usize, usize)> = grid
        .edges
        .iter()
        .copied()
        .filter(|&(a, b)| keep[a] && keep[b] && (0..n).all(|k| segment_distance(grid.z[a], grid.z[b], q[k]) >= clearance[k]))
        .collect();
    let integrals = options.execution.map(&clear_edges, |&(a, b)| integrate_segment(&spinor, grid.z[a], grid.z[b], options.tol));

    let mut adjacency: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); total];
    for (e, &(a, b)) in clear_edges.iter().enumerate() {
        adjacency[a].push((b, e, true));
        adjacency[b].push((a, e, false));
    }
    let mut value: Vec<Option<[C64; 3]>> = vec![None; total];
    value[root] = Some([C64::new(0.0, 0.0); 3]);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let base = value[u].expect("visited");
        for &(v, e, forward) in &adjacency[u] {
            if value[v].is_none() {
                let sign = if forward { 1.0 } else { -1.0 };
                let mut next = base;
                for (t, c) in next.iter_mut().zip(integrals[e]) {
                    *t += c * sign;
                }
                value[v] = Some(next);
                queue.push_back(v);
            }
        }
    }
    for (k, v) in keep.iter_mut().zip(&value) {
        *k &= v.is_some();
    }

    let mut index = vec![usize::MAX; total];
    let mut vertices = Vec::new();
    let mut parameters = Vec::new();
    for i in 0..total {
        if keep[i] {
            index[i] = vertices.len();
            let v = value[i].expect("reached");
            vertices.push(v.map(|c| 2.0 * c.re));
            parameters.push(grid.z[i]);
        }
    }
    let groups = grid
        .groups
        .into_iter()
        .map(|(name, faces)| MeshGroup {
            name,
            faces: faces.into_iter().filter(|f| f.iter().all(|&i| keep[i])).map(|f| f.into_iter().map(|i| index[i]).collect()).collect(),
        })
        .collect();
    let dropped = total - vertices.len();
    if dropped > 0 {
        log::info!("dropped {dropped} of {total} grid points next to ends");
    }
    Ok(Mesh { vertices, parameters, groups, base_point: z0, grid_size: total, dropped })
}

impl Mesh {
    /// Wavefront OBJ text; one object per group.
    pub fn to_obj(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} vertices", self.vertices.len());
        for v in &self.vertices {
            let _ = writeln!(out, "v {:.12e} {:.12e} {:.12e}", v[0], v[1], v[2]);
        }
        for g in &self.groups {
            let _ = writeln!(out, "o {}", g.name);
            for f in &g.faces {
                out.push('f');
                for i in f {
                    let _ = write!(out, " {}", i + 1);
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn face_count(&self) -> usize {
        self.groups.iter().map(|g| g.faces.len()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let s: f64 = GL_NODES.iter().zip(GL_WEIGHTS).map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
        assert!((GL_WEIGHTS.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn segment_distance_cases() {
        let (a, b) = (C64::new(0.0, 0.0), C64::new(2.0, 0.0));
        assert!((segment_distance(a, b, C64::new(1.0, 1.0)) - 1.0).abs() < 1e-15);
        assert!((segment_distance(a, b, C64::new(3.0, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_four_ends() {
        let (cfg, _) = crate::symmetric::symmetric_configuration(3, 2.0).unwrap();
        let opts = MeshOptions { rings: 6, radial: 12, ..Default::default() };
        let mesh = mesh_surface(&cfg, &opts).unwrap();
        assert_eq!(mesh.vertices.len() + mesh.dropped, mesh.grid_size);
        assert!(mesh.dropped < mesh.grid_size / 4, "{} of {}", mesh.dropped, mesh.grid_size);
        assert_eq!(mesh.groups.len(), 5);
        assert!(mesh.groups.iter().all(|g| !g.faces.is_empty()));
        let seq = mesh_surface(&cfg, &MeshOptions { execution: Execution::Sequential, ..opts }).unwrap();
        assert_eq!(mesh.to_obj(), seq.to_obj());
    }
}
