use crate::error::{Error, Result};
use crate::linalg::C64;

const DEGENERACY_TOL: f64 = 1e-12;

/// Möbius normalization `q₁ = 1`, `q_n = 0`, `q_{n−1} + q_{n−2} = 0`.
///
/// Two steps: the affine map `u = (z − q_n)/(q₁ − q_n)`, then
/// `w = λu/((λ−1)u + 1)`, which fixes 0 and 1 and is solved in closed form for
/// `λ = 1 − (u_a + u_b)/(2 u_a u_b)` so that `w_a + w_b = 0`.
pub fn normalize_configuration(q: &[C64]) -> Result<Vec<C64>> {
    Ok(normalize_map(q)?.0)
}

/// Normalized positions together with the matching kernel coefficients.
///
/// The kernel coefficients pick up the factor `λ − (λ−1)w` of the inverse map's
/// denominator and a constant `1/√(λ(q₁ − q_n))`, so that the implied weights are
/// unchanged.
pub fn normalize_with_kernel(q: &[C64], b: &[C64]) -> Result<(Vec<C64>, Vec<C64>)> {
    if b.len() != q.len() {
        return Err(Error::Dimension(format!("{} positions but {} kernel coefficients", q.len(), b.len())));
    }
    let (w, lambda) = normalize_map(q)?;
    let one = C64::new(1.0, 0.0);
    let c = (lambda * (q[0] - q[q.len() - 1])).sqrt().inv();
    let b = b.iter().zip(&w).map(|(bj, wj)| bj * (lambda - (lambda - one) * wj) * c).collect();
    Ok((w, b))
}

fn normalize_map(q: &[C64]) -> Result<(Vec<C64>, C64)> {
    let n = q.len();
    if n < 3 {
        return Err(Error::Normalization(format!("needs at least three ends, got {n}")));
    }
    let scale = q.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let span = q[0] - q[n - 1];
    if span.norm() <= DEGENERACY_TOL * scale {
        return Err(Error::Normalization("q_1 coincides with q_n".into()));
    }
    let one = C64::new(1.0, 0.0);
    let u: Vec<C64> = q.iter().map(|z| (z - q[n - 1]) / span).collect();
    let (ua, ub) = (u[n - 2], u[n - 3]);
    if ua.norm() <= DEGENERACY_TOL || ub.norm() <= DEGENERACY_TOL {
        return Err(Error::Normalization("a pinned end coincides with q_n".into()));
    }
    let lambda = one - (ua + ub) / (ua * ub * 2.0);
    if lambda.norm() <= DEGENERACY_TOL {
        return Err(Error::Normalization("the pinned pair is symmetric about 1/2; no Möbius map separates it".into()));
    }
    let mut w = Vec::with_capacity(n);
    for (j, uj) in u.iter().enumerate() {
        let den = (lambda - one) * uj + one;
        if den.norm() <= DEGENERACY_TOL * (1.0 + ((lambda - one) * uj).norm()) {
            return Err(Error::Normalization(format!("end {j} is sent to infinity")));
        }
        w.push(lambda * uj / den);
    }
    // exact values for the pinned coordinates
    w[0] = one;
    w[n - 1] = C64::new(0.0, 0.0);
    Ok((w, lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetric::base_point;

    fn constraints(q: &[C64]) -> f64 {
        let n = q.len();
        [(q[0] - 1.0).norm(), q[n - 1].norm(), (q[n - 2] + q[n - 3]).norm()].into_iter().fold(0.0, f64::max)
    }

    #[test]
    fn normalized_input_is_fixed() {
        let q = vec![C64::new(1.0, 0.0), C64::new(0.3, 0.7), C64::new(-2.0, 0.5), C64::new(2.0, -0.5), C64::new(0.0, 0.0)];
        let w = normalize_configuration(&q).unwrap();
        for (a, b) in q.iter().zip(&w) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn base_point_meets_constraints() {
        let w = normalize_configuration(&base_point(4)).unwrap();
        assert!(constraints(&w) < 1e-12);
    }

    #[test]
    fn scaling_is_quotiented() {
        let q = base_point(5);
        let cq: Vec<C64> = q.iter().map(|z| z * C64::new(2.0, -1.5)).collect();
        let (a, b) = (normalize_configuration(&q).unwrap(), normalize_configuration(&cq).unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn coincident_pin_rejected() {
        let q = vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        assert!(matches!(normalize_configuration(&q), Err(Error::Normalization(_))));
    }

    #[test]
    fn implied_weights_are_invariant() {
        use crate::flux::system_residuals;
        use crate::symmetric::symmetric_configuration;
        let (cfg, _) = symmetric_configuration(5, 1.5).unwrap();
        let (w, b) = normalize_with_kernel(&cfg.q, &cfg.b).unwrap();
        let moved = crate::flux::EndConfiguration { p: cfg.p.clone(), q: w, b };
        let (before, after) = (system_residuals(&cfg), system_residuals(&moved));
        assert!(after.r_x_norm() < 1e-12);
        for (x, y) in before.a_implied.iter().zip(&after.a_implied) {
            assert!((x - y).norm() < 1e-12 * x.norm());
        }
    }
}
