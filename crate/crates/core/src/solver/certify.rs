use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::flux::{
    end_residue, interaction_matrix, min_separation, spinor_data, system_residuals, EndConfiguration, FluxData, BRANCH_TOL,
};
use crate::linalg::vec_norm;

pub const KERNEL_TOL: f64 = 1e-9;
pub const REALNESS_TOL: f64 = 1e-9;
pub const MONODROMY_TOL: f64 = 1e-8;
pub const PARALLEL_TOL: f64 = 1e-6;
pub const RATIO_SPREAD_TOL: f64 = 1e-6;
pub const FLUX_SUM_TOL: f64 = 1e-8;

/// One named comparison of a measured quantity with its bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub bound: f64,
}

impl Check {
    /// Passes when `measured < bound`.
    pub fn below(name: &str, measured: f64, bound: f64) -> Self {
        Self { name: name.to_string(), passed: measured < bound && measured.is_finite(), measured, bound }
    }

    /// Passes when `measured > bound`.
    pub fn above(name: &str, measured: f64, bound: f64) -> Self {
        Self { name: name.to_string(), passed: measured > bound && measured.is_finite(), measured, bound }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl SolutionReport {
    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm3(a: [f64; 3]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a.iter().zip(&b).map(|(x, y)| x * y).sum()
}

/// Recomputes every residual and geometric check of a candidate solution.
///
/// Contour radius for the residues is a quarter of the smallest end separation.
pub fn certify_solution(config: &EndConfiguration, target: &FluxData) -> Result<SolutionReport> {
    let n = config.n();
    let mut checks = Vec::new();

    let res = system_residuals(config);
    let a = interaction_matrix(&config.p, &config.q)?;
    let bn = vec_norm(&config.b);
    let kernel_scale = (a.frobenius_norm() * bn * bn).max(f64::MIN_POSITIVE);
    checks.push(Check::below("kernel-residual", res.r_x_norm() / kernel_scale, KERNEL_TOL));
    checks.push(Check::below("real-weights", res.imaginary_ratio(), REALNESS_TOL));

    let spinor = spinor_data(config)?;
    let degree_ok = spinor.max_degree == n as isize - 1;
    checks.push(Check::above("unbranched", if degree_ok { spinor.normalized_resultant } else { 0.0 }, BRANCH_TOL));

    let radius = 0.25 * min_separation(&config.q);
    let residues = (0..n).map(|j| end_residue(&spinor, j, radius)).collect::<Result<Vec<_>>>()?;
    let flux_scale = residues.iter().map(|r| norm3(r.flux)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let monodromy = residues.iter().map(|r| norm3(r.monodromy)).fold(0.0, f64::max) / flux_scale;
    checks.push(Check::below("monodromy", monodromy, MONODROMY_TOL));

    let normals = target.normals();
    let same_n = normals.len() == n;
    let parallel = if same_n {
        residues
            .iter()
            .zip(&normals)
            .map(|(r, v)| {
                let f = norm3(r.flux);
                if f == 0.0 {
                    f64::INFINITY
                } else {
                    (norm3(cross(r.flux, *v)) / f).asin()
                }
            })
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    checks.push(Check::below("flux-parallel", parallel, PARALLEL_TOL));

    let spread = if same_n {
        let ratios: Vec<f64> = residues.iter().zip(&target.ends).map(|(r, e)| dot3(r.flux, e.v) / e.a).collect();
        let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let size = ratios.iter().map(|x| x.abs()).fold(0.0, f64::max);
        if size == 0.0 {
            f64::INFINITY
        } else {
            (hi - lo) / size
        }
    } else {
        f64::INFINITY
    };
    checks.push(Check::below("weight-ratio-spread", spread, RATIO_SPREAD_TOL));

    let mut total = [0.0; 3];
    for r in &residues {
        for (t, x) in total.iter_mut().zip(r.flux) {
            *t += x;
        }
    }
    let mass: f64 = residues.iter().map(|r| norm3(r.flux)).sum::<f64>().max(f64::MIN_POSITIVE);
    checks.push(Check::below("flux-sum", norm3(total) / mass, FLUX_SUM_TOL));

    let passed = checks.iter().all(|c| c.passed);
    Ok(SolutionReport { checks, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetric::symmetric_configuration;

    #[test]
    fn symmetric_family_certifies() {
        let (cfg, data) = symmetric_configuration(4, 2.0).unwrap();
        let rep = certify_solution(&cfg, &data).unwrap();
        assert!(rep.passed, "{:?}", rep.checks);
    }

    #[test]
    fn perturbed_kernel_is_named() {
        let (mut cfg, data) = symmetric_configuration(4, 2.0).unwrap();
        cfg.b[0] *= 1.1;
        let rep = certify_solution(&cfg, &data).unwrap();
        assert!(rep.failures().contains(&"kernel-residual"));
    }
}
