use catenoid::flux::{inverse_stereographic, system_residuals, EndConfiguration, FluxData, FluxEnd};
use catenoid::solver::{
    certify_solution, normalize_configuration, perturb_weight, solve, SolverOptions, SolverProblem, SolverStatus,
};
use catenoid::symmetric::{continuation_step, symmetric_configuration};
use catenoid::{Execution, C64};

fn run(target: FluxData, seed: EndConfiguration) -> catenoid::solver::SolverResult {
    solve(&SolverProblem::new(target, seed, SolverOptions::default()).unwrap()).unwrap()
}

fn max_gap(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn implied_target(cfg: &EndConfiguration) -> FluxData {
    let a = system_residuals(cfg).a_implied;
    let ends = cfg.p.iter().zip(&a).map(|(p, w)| FluxEnd { v: inverse_stereographic(*p), a: w.re }).collect();
    FluxData { ends }
}

#[test]
fn weights_are_projective() {
    let (cfg, data) = symmetric_configuration(4, 2.0).unwrap();
    let target = perturb_weight(&data, 2, 0.99).unwrap();
    let mut scaled = target.clone();
    for e in &mut scaled.ends {
        e.a *= 3.5;
    }
    let a = run(target, cfg.clone());
    let b = run(scaled, cfg);
    assert!(a.converged && b.converged);
    assert!(max_gap(&normalize_configuration(&a.config.q).unwrap(), &normalize_configuration(&b.config.q).unwrap()) < 1e-8);
}

#[test]
fn solution_is_fixed_under_its_own_weights() {
    let (cfg, data) = symmetric_configuration(4, 2.0).unwrap();
    let first = run(perturb_weight(&data, 0, 1.01).unwrap(), cfg);
    assert!(first.converged);
    let again = run(implied_target(&first.config), first.config.clone());
    assert!(again.converged);
    let (x, y) = (normalize_configuration(&first.config.q).unwrap(), normalize_configuration(&again.config.q).unwrap());
    assert!(max_gap(&x, &y) < 1e-8);
}

#[test]
fn converged_solutions_are_valid() {
    let (_, data) = symmetric_configuration(5, 2.0).unwrap();
    let seed = continuation_step(5, 4.0, C64::new(0.01, 0.0)).unwrap().config;
    let res = run(perturb_weight(&data, 1, 1.01).unwrap(), seed);
    assert_eq!(res.status, SolverStatus::Converged, "{} {} {:?}", res.residual_norm, res.iterations, res.report);
    let kernel = system_residuals(&res.config).r_x_norm();
    assert!(kernel < 1e-9 * res.scale.abs().max(1.0), "{kernel}");
    assert!(res.report.as_ref().unwrap().passed);
}

#[test]
fn sequential_and_parallel_agree() {
    let (cfg, data) = symmetric_configuration(4, 2.0).unwrap();
    let target = perturb_weight(&data, 0, 1.01).unwrap();
    let mut opts = SolverOptions { execution: Execution::Sequential, ..SolverOptions::default() };
    let a = solve(&SolverProblem::new(target.clone(), cfg.clone(), opts).unwrap()).unwrap();
    opts.execution = Execution::Parallel;
    let b = solve(&SolverProblem::new(target, cfg, opts).unwrap()).unwrap();
    assert_eq!(a.config, b.config);
    assert_eq!(a.iterations, b.iterations);
}

#[test]
fn certify_names_broken_kernel() {
    let (mut cfg, data) = symmetric_configuration(4, 2.0).unwrap();
    assert!(certify_solution(&cfg, &data).unwrap().passed);
    cfg.b[0] *= 1.1;
    let report = certify_solution(&cfg, &data).unwrap();
    assert!(!report.passed);
    assert!(report.failures().contains(&"kernel-residual"));
}
