//! The quadratic potential `(λ₁u₁ - λ₂u₂)² + (λ₂u₁)² = uᵗ M_λ u` and its
//! diagonalization into principal axes.

use crate::error::{Error, Result};

/// The representation parameter `λ = (λ₁, λ₂)` with `λ₂ ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambda {
    lambda1: f64,
    lambda2: f64,
}

impl Lambda {
    pub fn new(lambda1: f64, lambda2: f64) -> Result<Self> {
        if !lambda1.is_finite() || !lambda2.is_finite() {
            return Err(Error::InvalidParameter("lambda must be finite".into()));
        }
        if lambda2 == 0.0 {
            return Err(Error::InvalidParameter(
                "lambda2 must be nonzero (the λ₂ = 0 strata carry no oscillator spectrum)".into(),
            ));
        }
        Ok(Self { lambda1, lambda2 })
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }
}

/// `M_λ` together with its eigenvalues `μ±` and the orthogonal diagonalizer.
///
/// `rotation` has unit eigenvector columns for `(μ₊, μ₋)` in that order;
/// `rotationᵀ · m_matrix · rotation = diag(μ₊, μ₋)`. Principal-axis
/// coordinates are `u' = rotationᵀ u`.
#[derive(Debug, Clone, Copy)]
pub struct QuadFormDiag {
    pub m_matrix: [[f64; 2]; 2],
    pub mu_plus: f64,
    pub mu_minus: f64,
    pub rotation: [[f64; 2]; 2],
}

/// Closed-form eigenvalue `μ_ε,λ = ½(λ₁² + 2λ₂² + ε|λ₁|√(λ₁² + 4λ₂²))`.
pub fn mu(lambda: Lambda, sign: f64) -> f64 {
    let (l1, l2) = (lambda.lambda1(), lambda.lambda2());
    let disc = l1.abs() * (l1 * l1 + 4.0 * l2 * l2).sqrt();
    0.5 * (l1 * l1 + 2.0 * l2 * l2 + sign * disc)
}

/// Build `M_λ` and diagonalize it.
pub fn diagonalize(lambda: Lambda) -> QuadFormDiag {
    let (l1, l2) = (lambda.lambda1(), lambda.lambda2());
    let m_matrix = [[l1 * l1 + l2 * l2, -l1 * l2], [-l1 * l2, l2 * l2]];
    let mu_plus = mu(lambda, 1.0);
    let mu_minus = mu(lambda, -1.0);

    // λ₁ = 0 leaves M_λ = λ₂²·I; any rotation works, pick the identity so the
    // map is continuous through the degenerate point.
    let rotation = if l1 == 0.0 {
        [[1.0, 0.0], [0.0, 1.0]]
    } else {
        let col_plus = eigenvector(&m_matrix, mu_plus);
        // the second column is the exact perpendicular of the first, so the
        // rotation stays orthogonal even when μ± nearly coincide
        let col_minus = sign_fix([-col_plus[1], col_plus[0]]);
        [
            [col_plus[0], col_minus[0]],
            [col_plus[1], col_minus[1]],
        ]
    };

    QuadFormDiag {
        m_matrix,
        mu_plus,
        mu_minus,
        rotation,
    }
}

// Unit eigenvector of a symmetric 2x2 matrix for eigenvalue mu, with the
// first nonzero entry made positive.
fn eigenvector(m: &[[f64; 2]; 2], mu: f64) -> [f64; 2] {
    // (M - mu I) v = 0: two candidate row solutions; take the better
    // conditioned one.
    let cand_a = [m[0][1], mu - m[0][0]];
    let cand_b = [mu - m[1][1], m[1][0]];
    let na = cand_a[0].hypot(cand_a[1]);
    let nb = cand_b[0].hypot(cand_b[1]);
    let (v, n) = if na >= nb { (cand_a, na) } else { (cand_b, nb) };
    sign_fix([v[0] / n, v[1] / n])
}

fn sign_fix(mut v: [f64; 2]) -> [f64; 2] {
    let lead = if v[0].abs() > 1e-300 { v[0] } else { v[1] };
    if lead < 0.0 {
        v[0] = -v[0];
        v[1] = -v[1];
    }
    v
}

/// Principal-axis coordinates `u' = rotationᵀ u`, so that
/// `uᵗ M_λ u = μ₊ u₁'² + μ₋ u₂'²`.
pub fn to_principal_axes(diag: &QuadFormDiag, u: [f64; 2]) -> [f64; 2] {
    let r = &diag.rotation;
    [
        r[0][0] * u[0] + r[1][0] * u[1],
        r[0][1] * u[0] + r[1][1] * u[1],
    ]
}
