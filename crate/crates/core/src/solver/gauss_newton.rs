use serde::{Deserialize, Serialize};

use super::certify::{certify_solution, SolutionReport};
use super::normalize::normalize_with_kernel;
use crate::error::{Error, Result};
use crate::flux::{
    genericity_certificate, interaction_matrix, kernel_vector, min_separation, EndConfiguration, FluxData,
    GenericityCertificate, Variant,
};
use crate::linalg::{relative_rank, ComplexMatrix, Svd, C64, RANK_FACTOR};
use crate::par::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub max_iters: usize,
    pub tol: f64,
    /// Backtracking factor.
    pub damping: f64,
    /// Smallest backtracking step before giving up.
    pub min_step: f64,
    /// Central-difference step of the Jacobian.
    pub fd_step: f64,
    /// Singular values below `rcond·σ_max` are dropped in the least-squares step.
    pub rcond: f64,
    pub execution: Execution,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { max_iters: 50, tol: 1e-10, damping: 0.5, min_step: 1e-8, fd_step: 1e-6, rcond: 1e-12, execution: Execution::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverProblem {
    pub target: FluxData,
    /// Stereographic normals of the target; held fixed.
    pub p: Vec<C64>,
    pub seed: EndConfiguration,
    pub options: SolverOptions,
}

impl SolverProblem {
    /// Validates the target and derives `p`; the seed's own `p` is ignored.
    pub fn new(target: FluxData, seed: EndConfiguration, options: SolverOptions) -> Result<Self> {
        target.validate(1e-9, 1e-9 * target.weight_mass().max(1.0))?;
        let p = target.stereographic_normals()?;
        if seed.n() != p.len() {
            return Err(Error::Dimension(format!("target has {} ends, seed has {}", p.len(), seed.n())));
        }
        if min_separation(&seed.q) <= 1e-10 {
            return Err(Error::Argument("seed positions coincide".into()));
        }
        Ok(Self { target, p, seed, options })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolverStatus {
    Converged,
    /// Iteration budget exhausted or no descent step found.
    Diverged,
    /// Converged residual, but `rank A_p < n − 1` at the output.
    DegenerateKernel,
    /// Converged residual, but the non-branch or flux checks failed.
    CertificateFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverResult {
    pub config: EndConfiguration,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub status: SolverStatus,
    /// Target-weight multiplier `s` with `a_implied = s·a_target`.
    pub scale: f64,
    pub report: Option<SolutionReport>,
    pub certificate: Option<GenericityCertificate>,
}

/// Real unknowns `[q re/im interleaved, b re/im interleaved, s]`.
struct System<'a> {
    p: &'a [C64],
    a: Vec<f64>,
}

impl System<'_> {
    fn n(&self) -> usize {
        self.p.len()
    }

    fn unpack(&self, x: &[f64]) -> (Vec<C64>, Vec<C64>, f64) {
        let n = self.n();
        let q = (0..n).map(|j| C64::new(x[2 * j], x[2 * j + 1])).collect();
        let b = (0..n).map(|j| C64::new(x[2 * n + 2 * j], x[2 * n + 2 * j + 1])).collect();
        (q, b, x[4 * n])
    }

    fn pack(q: &[C64], b: &[C64], s: f64) -> Vec<f64> {
        q.iter().chain(b).flat_map(|z| [z.re, z.im]).chain(std::iter::once(s)).collect()
    }

    /// `[r_x, a_implied − s·a, q₁ − 1, q_n, q_{n−1} + q_{n−2}]`, real parts then imaginary parts.
    fn residual(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        let (q, b, s) = self.unpack(x);
        let p = self.p;
        let mut out = Vec::with_capacity(2 * n + 3);
        for j in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for k in (0..n).filter(|&k| k != j) {
                acc += b[k] * (p[j].conj() * p[k] + 1.0) / (q[j] - q[k]);
            }
            out.push(b[j] * acc);
        }
        for j in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for k in (0..n).filter(|&k| k != j) {
                acc += b[k] * (p[j] - p[k]) / (q[j] - q[k]);
            }
            out.push(b[j] * acc - s * self.a[j]);
        }
        out.push(q[0] - 1.0);
        out.push(q[n - 1]);
        out.push(q[n - 2] + q[n - 3]);
        out.iter().map(|z| z.re).chain(out.iter().map(|z| z.im)).collect()
    }

    fn jacobian(&self, x: &[f64], h: f64, exec: Execution) -> ComplexMatrix {
        let cols = exec.map_range(x.len(), |i| {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += h;
            xm[i] -= h;
            let (fp, fm) = (self.residual(&xp), self.residual(&xm));
            fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h)).collect::<Vec<f64>>()
        });
        ComplexMatrix::from_fn(cols[0].len(), x.len(), |r, c| C64::new(cols[c][r], 0.0))
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Least-squares fit of `s` in `a_implied ≈ s·a`.
fn initial_scale(p: &[C64], q: &[C64], b: &[C64], a: &[f64]) -> f64 {
    let cfg = EndConfiguration { p: p.to_vec(), q: q.to_vec(), b: b.to_vec() };
    let implied = crate::flux::system_residuals(&cfg).a_implied;
    let num: f64 = implied.iter().zip(a).map(|(x, w)| x.re * w).sum();
    let den: f64 = a.iter().map(|w| w * w).sum();
    num / den
}

/// Gauss–Newton with backtracking on the real-ified system, seeded from the
/// normalized seed configuration.
pub fn solve(problem: &SolverProblem) -> Result<SolverResult> {
    let opts = problem.options;
    let p = &problem.p;
    let n = p.len();
    if n < 3 {
        return Err(Error::Argument(format!("inverse problem needs at least three ends, got {n}")));
    }
    let (q0, b0) = normalize_with_kernel(&problem.seed.q, &problem.seed.b)?;
    let sys = System { p, a: problem.target.weights() };
    // (b, s) and (cb, c²s) solve the same system; fix |s| = 1 at the seed so
    // the residual is measured at the scale of the target weights
    let s0 = initial_scale(p, &q0, &b0, &sys.a);
    if !s0.is_finite() {
        return Err(Error::Argument(format!("seed gives a non-finite weight scale {s0}")));
    }
    let mut x = if s0 != 0.0 {
        let b0: Vec<C64> = b0.iter().map(|x| x / s0.abs().sqrt()).collect();
        System::pack(&q0, &b0, s0.signum())
    } else {
        log::warn!("seed implies zero weights");
        System::pack(&q0, &b0, 0.0)
    };
    let mut f = sys.residual(&x);
    let mut r = norm(&f);
    let mut iterations = 0;
    let mut stalled = false;
    while r >= opts.tol && iterations < opts.max_iters {
        iterations += 1;
        let j = sys.jacobian(&x, opts.fd_step, opts.execution);
        let rhs: Vec<C64> = f.iter().map(|v| C64::new(-v, 0.0)).collect();
        let dx: Vec<f64> = Svd::new(&j).solve(&rhs, opts.rcond).iter().map(|z| z.re).collect();
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, d)| a + t * d).collect();
            let ft = sys.residual(&trial);
            let rt = norm(&ft);
            if rt < r {
                x = trial;
                f = ft;
                r = rt;
                break;
            }
            t *= opts.damping;
            if t < opts.min_step {
                stalled = true;
                break;
            }
        }
        log::debug!("gauss-newton iteration {iterations}: residual {r:.3e}, step {t:.3e}");
        if stalled {
            break;
        }
    }

    let (q, b, s) = sys.unpack(&x);
    let config = EndConfiguration { p: p.clone(), q, b };
    if r >= opts.tol {
        return Ok(SolverResult {
            config,
            residual_norm: r,
            iterations,
            converged: false,
            status: SolverStatus::Diverged,
            scale: s,
            report: None,
            certificate: None,
        });
    }
    let kernel_ok = interaction_matrix(&config.p, &config.q)
        .map(|a| relative_rank(&a, RANK_FACTOR) == n - 1)
        .unwrap_or(false)
        && kernel_vector(&config.p, &config.q).is_ok();
    let report = certify_solution(&config, &problem.target)?;
    let status = if !kernel_ok {
        SolverStatus::DegenerateKernel
    } else if !report.passed {
        SolverStatus::CertificateFailed
    } else {
        SolverStatus::Converged
    };
    let certificate = (n >= 4).then(|| genericity_certificate(&config.p, &config.q, None, Variant::Standard));
    Ok(SolverResult {
        config,
        residual_norm: r,
        iterations,
        converged: status == SolverStatus::Converged,
        status,
        scale: s,
        report: Some(report),
        certificate,
    })
}

/// Multiplies weight `index` by `factor` and re-projects onto the balanced subspace.
pub fn perturb_weight(data: &FluxData, index: usize, factor: f64) -> Result<FluxData> {
    if index >= data.n() {
        return Err(Error::Argument(format!("end {index} out of range for {} ends", data.n())));
    }
    let mut out = data.clone();
    out.ends[index].a *= factor;
    Ok(out.project_balanced()?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetric::symmetric_configuration;

    #[test]
    fn exact_target_is_a_fixed_point() {
        let (cfg, data) = symmetric_configuration(4, 2.0).unwrap();
        let prob = SolverProblem::new(data, cfg, SolverOptions::default()).unwrap();
        let res = solve(&prob).unwrap();
        assert!(res.converged, "{:?}", res.status);
        assert!(res.iterations <= 2, "{} {}", res.iterations, res.residual_norm);
        assert!(res.residual_norm < 1e-12);
    }

    #[test]
    fn one_percent_perturbation() {
        let (cfg, data) = symmetric_configuration(4, 2.0).unwrap();
        let target = perturb_weight(&data, 0, 1.01).unwrap();
        let prob = SolverProblem::new(target, cfg, SolverOptions::default()).unwrap();
        let res = solve(&prob).unwrap();
        assert!(res.converged, "{:?} {:?}", res.status, res.report);
        assert!(res.residual_norm < 1e-9);
    }

    #[test]
    fn continuation_seed_reaches_perturbed_target() {
        let (_, data) = symmetric_configuration(4, 2.0).unwrap();
        let seed = crate::symmetric::continuation_step(4, 2.0, C64::new(0.01, 0.0)).unwrap().config;
        let target = perturb_weight(&data, 0, 1.01).unwrap();
        let res = solve(&SolverProblem::new(target, seed, SolverOptions::default()).unwrap()).unwrap();
        assert!(res.converged, "{:?} {:?}", res.status, res.report);
        assert!(res.residual_norm < 1e-9 && res.iterations <= 50);
    }

    #[test]
    fn coincident_normals_fail() {
        use crate::flux::FluxEnd;
        let ends = vec![
            FluxEnd { v: [1.0, 0.0, 0.0], a: 1.0 },
            FluxEnd { v: [1.0, 0.0, 0.0], a: 1.0 },
            FluxEnd { v: [-1.0, 0.0, 0.0], a: 2.0 },
        ];
        let data = FluxData::new(ends).unwrap();
        let c = |re: f64, im: f64| C64::new(re, im);
        let seed = EndConfiguration::new(vec![c(1.0, 0.0); 3], vec![c(1.0, 0.0), c(-1.0, 0.5), c(0.0, 0.0)], vec![c(1.0, 0.0); 3]).unwrap();
        let res = solve(&SolverProblem::new(data, seed, SolverOptions::default()).unwrap()).unwrap();
        assert!(!res.converged);
    }
}
