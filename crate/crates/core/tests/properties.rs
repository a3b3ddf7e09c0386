use catenoid::flux::{
    inverse_stereographic, kernel_vector, min_separation, stereographic, system_residuals, EndConfiguration,
};
use catenoid::io::{from_json, parse_configuration, to_json};
use catenoid::linalg::{adjugate, determinant, inverse};
use catenoid::solver::{normalize_configuration, normalize_with_kernel};
use catenoid::verify::{equivalence_case, equivalence_sides};
use catenoid::{ComplexMatrix, C64};
use proptest::prelude::*;

fn complex(range: f64) -> impl Strategy<Value = C64> {
    (-range..range, -range..range).prop_map(|(re, im)| C64::new(re, im))
}

fn square(max: usize) -> impl Strategy<Value = ComplexMatrix> {
    (2..=max).prop_flat_map(|n| {
        prop::collection::vec(complex(2.0), n * n).prop_map(move |v| ComplexMatrix::from_vec(n, n, v).unwrap())
    })
}

fn points(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec(complex(2.0), n).prop_filter("separated", |q| min_separation(q) > 0.05)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn adjugate_times_matrix_is_determinant(a in square(8)) {
        let n = a.rows();
        let adj = adjugate(&a).unwrap();
        let det = determinant(&a).unwrap();
        let want = ComplexMatrix::identity(n).scale(det);
        let bound = 1e-12 * a.frobenius_norm() * adj.frobenius_norm();
        prop_assert!((&adj * &a).max_abs_diff(&want) <= bound);
        prop_assert!((&a * &adj).max_abs_diff(&want) <= bound);
    }

    #[test]
    fn adjugate_is_scaled_inverse(a in square(8)) {
        let n = a.rows();
        let det = determinant(&a).unwrap();
        prop_assume!(det.norm() > 1e-3 * a.frobenius_norm().powi(n as i32) / (n as f64).powi(n as i32));
        let adj = adjugate(&a).unwrap();
        let scaled = inverse(&a).unwrap().scale(det);
        prop_assert!(adj.max_abs_diff(&scaled) <= 1e-10 * adj.max_abs());
    }

    #[test]
    fn normalization_meets_constraints(q in (4usize..=8).prop_flat_map(points)) {
        let n = q.len();
        let w = match normalize_configuration(&q) {
            Ok(w) => w,
            Err(_) => return Ok(()),
        };
        let big = w.iter().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assume!(big < 1e6);
        prop_assert!((w[0] - 1.0).norm() < 1e-12);
        prop_assert!(w[n - 1].norm() < 1e-12);
        prop_assert!((w[n - 2] + w[n - 3]).norm() < 1e-10 * big);
        let again = normalize_configuration(&w).unwrap();
        for (x, y) in w.iter().zip(&again) {
            prop_assert!((x - y).norm() < 1e-9 * big);
        }
    }

    #[test]
    fn normalization_keeps_implied_weights(
        (p, q) in (4usize..=7).prop_flat_map(|n| (prop::collection::vec(complex(2.0), n), points(n)))
    ) {
        let b = kernel_vector(&p, &q).unwrap();
        let (w, nb) = match normalize_with_kernel(&q, &b) {
            Ok(x) => x,
            Err(_) => return Ok(()),
        };
        prop_assume!(w.iter().all(|z| z.norm() < 1e4));
        let before = system_residuals(&EndConfiguration { p: p.clone(), q, b });
        let after = system_residuals(&EndConfiguration { p, q: w, b: nb });
        let scale = before.a_implied.iter().map(|a| a.norm()).fold(0.0, f64::max);
        for (x, y) in before.a_implied.iter().zip(&after.a_implied) {
            prop_assert!((x - y).norm() <= 1e-8 * scale);
        }
    }

    #[test]
    fn configuration_json_is_bit_identical(
        raw in (3usize..=6).prop_flat_map(|n| prop::collection::vec(any::<(f64, f64)>(), 3 * n))
    ) {
        prop_assume!(raw.iter().all(|(a, b)| a.is_finite() && b.is_finite()));
        let n = raw.len() / 3;
        let z: Vec<C64> = raw.iter().map(|&(a, b)| C64::new(a, b)).collect();
        let cfg = EndConfiguration { p: z[..n].to_vec(), q: z[n..2 * n].to_vec(), b: z[2 * n..].to_vec() };
        let back = parse_configuration(&to_json(&cfg).unwrap()).unwrap();
        for (x, y) in cfg.p.iter().chain(&cfg.q).chain(&cfg.b).zip(back.p.iter().chain(&back.q).chain(&back.b)) {
            prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
            prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        let twice: EndConfiguration = from_json(&to_json(&back).unwrap()).unwrap();
        prop_assert_eq!(to_json(&twice).unwrap(), to_json(&back).unwrap());
    }

    #[test]
    fn stereographic_round_trip(theta in 1e-6f64..std::f64::consts::PI, phi in 0.0..std::f64::consts::TAU) {
        let v = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
        let back = inverse_stereographic(stereographic(v).unwrap());
        for k in 0..3 {
            prop_assert!((v[k] - back[k]).abs() < 1e-12);
        }
    }
}

#[test]
fn equivalence_holds_on_generated_cases() {
    for i in 0..100 {
        let cfg = equivalence_case(17, i).unwrap();
        let (left, right) = equivalence_sides(&cfg, 1e-9);
        assert_eq!(left, right, "case {i}");
    }
}
