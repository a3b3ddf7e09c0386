use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, Context};
use catenoid::flux::{kernel_vector, system_residuals, EndConfiguration, FluxData, FluxEnd, GenericityCertificate};
use catenoid::io::{parse_configuration, parse_flux_data, to_json};
use catenoid::mesh::{mesh_surface, MeshOptions};
use catenoid::solver::{certify_solution, solve as run_solver, SolutionReport, SolverOptions, SolverProblem, SolverStatus};
use catenoid::symmetric::{base_point, SymmetricFamily};
use catenoid::verify::{run, VerifyOptions};
use catenoid::Execution;
use serde::Serialize;

use crate::manifest::{digest, CheckOutcome, RunManifest};
use crate::{classify, Failure};

/// Targets farther than this from balanced are rejected rather than projected.
const PROJECTION_LIMIT: f64 = 1e-6;
const UNIT_TOL: f64 = 1e-9;

type Outcome = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(Failure::Input)
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).with_context(|| format!("writing {}", path.display())).map_err(Failure::Input)
}

fn json<T: Serialize>(value: &T) -> std::result::Result<String, Failure> {
    to_json(value).map(|mut s| {
        s.push('\n');
        s
    }).map_err(classify)
}

pub fn verify(m_max: usize, tol: Option<f64>, only: Option<String>, out: Option<&Path>, execution: Execution) -> Outcome {
    let start = Instant::now();
    let options = VerifyOptions { m_max, tol, only, execution };
    let report = run(&options).map_err(classify)?;
    let checks: Vec<CheckOutcome> = report
        .checks
        .into_iter()
        .map(|c| CheckOutcome {
            criterion: c.criterion,
            group: c.group,
            name: c.name,
            passed: c.passed,
            measured: c.measured,
            bound: c.bound,
            note: c.note,
        })
        .collect();
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| format!("{}/{}", c.group, c.name)).collect();
    println!("{} of {} checks passed", checks.len() - failed.len(), checks.len());
    for f in &failed {
        println!("FAILED {f}");
    }
    let canonical = serde_json::json!({ "m_max": options.m_max, "tol": options.tol, "only": options.only });
    let manifest = RunManifest {
        command: "verify".into(),
        input_digest: digest(canonical.to_string().as_bytes()),
        tolerance_overrides: tol.map(|t| BTreeMap::from([("tol".to_string(), t)])).unwrap_or_default(),
        passed: failed.is_empty(),
        checks,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    if let Some(path) = out {
        write(path, &json(&manifest)?)?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Math(anyhow!("{} check(s) failed", failed.len())))
    }
}

#[derive(Serialize)]
struct Residuals {
    r_x_norm: f64,
    imaginary_ratio: f64,
}

#[derive(Serialize)]
struct SymmetricOutput<'a> {
    m: usize,
    r: f64,
    #[serde(flatten)]
    config: &'a EndConfiguration,
    ends: &'a [FluxEnd],
    residuals: Residuals,
    certificate: SolutionReport,
}

pub fn symmetric(m: usize, r: f64, out: &Path) -> Outcome {
    let family = SymmetricFamily::new(m, r).map_err(classify)?;
    let config = family.configuration();
    let data = family.flux_data();
    let res = system_residuals(&config);
    let report = certify_solution(&config, &data).map_err(classify)?;
    let passed = report.passed;
    let doc = SymmetricOutput {
        m,
        r,
        config: &config,
        ends: &data.ends,
        residuals: Residuals { r_x_norm: res.r_x_norm(), imaginary_ratio: res.imaginary_ratio() },
        certificate: report,
    };
    write(out, &json(&doc)?)?;
    println!("weights {:?}", data.weights());
    if passed {
        Ok(())
    } else {
        Err(Failure::Math(anyhow!("symmetric configuration failed certification")))
    }
}

/// Validates unit normals and balance, projecting small imbalances away.
fn load_target(path: &Path) -> std::result::Result<(FluxData, f64), Failure> {
    let data = parse_flux_data(&read(path)?).map_err(classify)?;
    let exact = 1e-9 * data.weight_mass().max(1.0);
    data.validate(UNIT_TOL, f64::INFINITY).map_err(classify)?;
    let imbalance = data.imbalance();
    if imbalance <= exact {
        return Ok((data, 0.0));
    }
    if imbalance > PROJECTION_LIMIT {
        return Err(Failure::Input(anyhow!("target is unbalanced by {imbalance:.3e} (limit {PROJECTION_LIMIT:e})")));
    }
    let (projected, norm) = data.project_balanced().map_err(classify)?;
    log::info!("projected target onto balanced weights, correction {norm:.3e}");
    Ok((projected, norm))
}

/// Base-point positions with the adjugate column of the target's matrix.
fn default_seed(target: &FluxData) -> std::result::Result<EndConfiguration, Failure> {
    let p = target.stereographic_normals().map_err(classify)?;
    let q = base_point(p.len() - 1);
    let b = kernel_vector(&p, &q).map_err(classify)?;
    EndConfiguration::new(p, q, b).map_err(classify)
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    #[serde(flatten)]
    config: &'a EndConfiguration,
    ends: &'a [FluxEnd],
    projection: f64,
    residual_norm: f64,
    iterations: usize,
    converged: bool,
    status: SolverStatus,
    scale: f64,
    report: &'a Option<SolutionReport>,
    certificate: &'a Option<GenericityCertificate>,
}

pub fn solve(target: &Path, seed: Option<&Path>, from_symmetric: Option<(usize, f64)>, out: &Path, execution: Execution) -> Outcome {
    let (data, projection) = load_target(target)?;
    let seed = match (seed, from_symmetric) {
        (Some(path), _) => parse_configuration(&read(path)?).map_err(classify)?,
        (None, Some((m, r))) => SymmetricFamily::new(m, r).map_err(classify)?.configuration(),
        (None, None) => default_seed(&data)?,
    };
    let problem = SolverProblem::new(data, seed, SolverOptions { execution, ..SolverOptions::default() }).map_err(classify)?;
    let result = run_solver(&problem).map_err(classify)?;
    let doc = SolveOutput {
        config: &result.config,
        ends: &problem.target.ends,
        projection,
        residual_norm: result.residual_norm,
        iterations: result.iterations,
        converged: result.converged,
        status: result.status,
        scale: result.scale,
        report: &result.report,
        certificate: &result.certificate,
    };
    write(out, &json(&doc)?)?;
    println!("{:?} after {} iterations, residual {:.3e}", result.status, result.iterations, result.residual_norm);
    if result.converged {
        Ok(())
    } else {
        let failed = result.report.as_ref().map(|r| r.failures().join(", ")).unwrap_or_default();
        Err(Failure::Math(anyhow!("solver status {:?} {failed}", result.status)))
    }
}

pub fn mesh(config: &Path, rings: usize, radial: usize, out: &Path, execution: Execution) -> Outcome {
    let config = parse_configuration(&read(config)?).map_err(classify)?;
    let mesh = mesh_surface(&config, &MeshOptions { rings, radial, execution, ..MeshOptions::default() }).map_err(classify)?;
    if mesh.dropped > 0 {
        eprintln!("warning: dropped {} of {} grid points", mesh.dropped, mesh.grid_size);
    }
    write(out, &mesh.to_obj())?;
    println!("{} vertices, {} faces", mesh.vertices.len(), mesh.face_count());
    Ok(())
}
