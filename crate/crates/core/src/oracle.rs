//! Independent finite-difference referee for the oscillator spectrum.
//!
//! The operator `-Δ + (λ₁u₁ - λ₂u₂)² + (λ₂u₁)²` is discretized with the
//! five-point Dirichlet Laplacian on `[-R,R]²` and its lowest eigenvalues
//! are found by shift-invert Lanczos (conjugate-gradient solves against the
//! sparse matrix, never formed explicitly). Nothing here touches the
//! closed-form spectrum, so agreement is meaningful evidence.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::eigensystem;
use crate::error::{Error, Result};
use crate::quadform::Lambda;

/// Discretized eigenproblem on `[-R,R]²` with `n_points` subintervals per
/// axis (so `n_points - 1` interior points and mesh `h = 2R/n_points`).
#[derive(Debug, Clone, Copy)]
pub struct FdProblem {
    pub lambda: Lambda,
    pub half_width: f64,
    pub n_points: usize,
    pub n_eigs: usize,
}

/// Converged Ritz data of the discretized operator.
#[derive(Debug, Clone)]
pub struct FdSolution {
    /// Lowest eigenvalues, ascending, with multiplicity.
    pub eigenvalues: Vec<f64>,
    /// Ritz vector of the lowest eigenvalue on the interior grid
    /// (row-major, sign-fixed so its largest entry is positive).
    pub ground_state: Vec<f64>,
    /// Interior points per axis.
    pub interior: usize,
}

struct Discretization {
    m: usize,
    inv_h2: f64,
    diag: Vec<f64>,
}

impl Discretization {
    fn new(p: &FdProblem) -> Result<Self> {
        if p.n_points < 8 || p.n_points % 2 != 0 {
            return Err(Error::InvalidParameter(
                "finite-difference resolution must be even and at least 8".into(),
            ));
        }
        if !(p.half_width > 0.0) || !p.half_width.is_finite() {
            return Err(Error::InvalidParameter(
                "finite-difference box half-width must be positive".into(),
            ));
        }
        let m = p.n_points - 1;
        let h = 2.0 * p.half_width / p.n_points as f64;
        let inv_h2 = h.powi(-2);
        let (l1, l2) = (p.lambda.lambda1(), p.lambda.lambda2());
        let mut diag = Vec::with_capacity(m * m);
        for i in 0..m {
            let u1 = -p.half_width + (i + 1) as f64 * h;
            for j in 0..m {
                let u2 = -p.half_width + (j + 1) as f64 * h;
                let a = l1 * u1 - l2 * u2;
                let b = l2 * u1;
                diag.push(a * a + b * b + 4.0 * inv_h2);
            }
        }
        Ok(Discretization { m, inv_h2, diag })
    }

    fn dim(&self) -> usize {
        self.m * self.m
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let m = self.m;
        for i in 0..m {
            for j in 0..m {
                let k = i * m + j;
                let mut acc = self.diag[k] * x[k];
                if i > 0 {
                    acc -= self.inv_h2 * x[k - m];
                }
                if i + 1 < m {
                    acc -= self.inv_h2 * x[k + m];
                }
                if j > 0 {
                    acc -= self.inv_h2 * x[k - 1];
                }
                if j + 1 < m {
                    acc -= self.inv_h2 * x[k + 1];
                }
                out[k] = acc;
            }
        }
    }

    /// Jacobi-preconditioned conjugate gradients for `A x = b`.
    fn solve(&self, b: &[f64], x: &mut Vec<f64>) -> Result<()> {
        let n = self.dim();
        x.clear();
        x.resize(n, 0.0);
        let mut r = b.to_vec();
        let mut z: Vec<f64> = r.iter().zip(&self.diag).map(|(ri, di)| ri / di).collect();
        let mut p = z.clone();
        let mut ap = vec![0.0; n];
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let b_norm = b.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
        let tol = 1e-12 * b_norm;
        for _ in 0..20_000 {
            self.apply(&p, &mut ap);
            let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
            if pap <= 0.0 {
                return Err(Error::Convergence(
                    "conjugate gradients met a non-positive curvature direction".into(),
                ));
            }
            let alpha = rz / pap;
            for k in 0..n {
                x[k] += alpha * p[k];
                r[k] -= alpha * ap[k];
            }
            if r.iter().map(|v| v * v).sum::<f64>().sqrt() < tol {
                return Ok(());
            }
            for k in 0..n {
                z[k] = r[k] / self.diag[k];
            }
            let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_new / rz;
            rz = rz_new;
            for k in 0..n {
                p[k] = z[k] + beta * p[k];
            }
        }
        Err(Error::Convergence(
            "conjugate gradients stalled before reaching the residual target".into(),
        ))
    }
}

fn deterministic_start(n: usize) -> Vec<f64> {
    // 64-bit LCG so the referee needs no randomness source and reruns are
    // bit-identical
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    (0..n)
        .map(|_| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Lowest `n_eigs` eigenvalues of the discretized operator by shift-invert
/// Lanczos with full reorthogonalization.
pub fn fd_eigenvalues(p: &FdProblem) -> Result<FdSolution> {
    if p.n_eigs == 0 {
        return Err(Error::InvalidParameter(
            "at least one eigenvalue must be requested".into(),
        ));
    }
    let disc = Discretization::new(p)?;
    let dim = disc.dim();
    let max_steps = (8 * p.n_eigs + 40).min(dim).min(160);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_steps);
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut v = deterministic_start(dim);
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    basis.push(v);
    let mut w = Vec::new();
    let mut previous: Option<Vec<f64>> = None;
    for step in 0..max_steps {
        disc.solve(&basis[step], &mut w)?;
        let alpha = dot(&w, &basis[step]);
        alphas.push(alpha);
        // full reorthogonalization, twice, to keep Ritz values clean
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                for k in 0..dim {
                    w[k] -= c * b[k];
                }
            }
        }
        let beta = norm(&w);
        if beta < 1e-13 {
            break;
        }
        if step + 1 < max_steps {
            betas.push(beta);
            basis.push(w.iter().map(|x| x / beta).collect());
        }
        if (step + 1) % 10 == 0 || step + 1 == max_steps {
            let thetas = top_ritz_values(&alphas, &betas, p.n_eigs);
            if let Some(prev) = &previous {
                if thetas.len() == p.n_eigs
                    && prev.len() == p.n_eigs
                    && thetas
                        .iter()
                        .zip(prev)
                        .all(|(a, b)| (a - b).abs() < 1e-13 * a.abs())
                {
                    break;
                }
            }
            previous = Some(thetas);
        }
    }
    let steps = alphas.len();
    if steps < p.n_eigs {
        return Err(Error::Convergence(
            "Lanczos broke down before enough Ritz pairs formed".into(),
        ));
    }
    let mut tri = DMatrix::zeros(steps, steps);
    for i in 0..steps {
        tri[(i, i)] = alphas[i];
        if i + 1 < steps {
            tri[(i, i + 1)] = betas[i];
            tri[(i + 1, i)] = betas[i];
        }
    }
    let eig = SymmetricEigen::new(tri);
    let mut order: Vec<usize> = (0..steps).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut eigenvalues = Vec::with_capacity(p.n_eigs);
    for &idx in order.iter().take(p.n_eigs) {
        let theta = eig.eigenvalues[idx];
        if theta <= 0.0 {
            return Err(Error::Convergence(
                "shift-invert produced a non-positive Ritz value".into(),
            ));
        }
        eigenvalues.push(1.0 / theta);
    }
    let mut ground = vec![0.0; dim];
    let top = order[0];
    for (j, b) in basis.iter().take(steps).enumerate() {
        let c = eig.eigenvectors[(j, top)];
        for k in 0..dim {
            ground[k] += c * b[k];
        }
    }
    let peak = ground
        .iter()
        .cloned()
        .fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
    if peak < 0.0 {
        ground.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(FdSolution {
        eigenvalues,
        ground_state: ground,
        interior: disc.m,
    })
}

fn top_ritz_values(alphas: &[f64], betas: &[f64], count: usize) -> Vec<f64> {
    let k = alphas.len();
    let mut tri = DMatrix::zeros(k, k);
    for i in 0..k {
        tri[(i, i)] = alphas[i];
        if i + 1 < k && i < betas.len() {
            tri[(i, i + 1)] = betas[i];
            tri[(i + 1, i)] = betas[i];
        }
    }
    let eig = SymmetricEigen::new(tri);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    vals.truncate(count);
    vals
}

/// Side-by-side comparison of the closed-form spectrum with the
/// finite-difference referee, Richardson-extrapolated from resolutions
/// `n` and `2n` (the five-point scheme is second order, so the
/// extrapolation `(4ν_{h/2} - ν_h)/3` removes the leading error term).
#[derive(Debug, Clone)]
pub struct FdComparison {
    pub lambda: Lambda,
    pub closed_form: Vec<f64>,
    pub refined: Vec<f64>,
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
}

pub fn fd_compare(
    lambda: Lambda,
    mode_count: usize,
    half_width: f64,
    n_coarse: usize,
) -> Result<FdComparison> {
    let coarse = fd_eigenvalues(&FdProblem {
        lambda,
        half_width,
        n_points: n_coarse,
        n_eigs: mode_count,
    })?;
    let fine = fd_eigenvalues(&FdProblem {
        lambda,
        half_width,
        n_points: 2 * n_coarse,
        n_eigs: mode_count,
    })?;
    let refined: Vec<f64> = coarse
        .eigenvalues
        .iter()
        .zip(&fine.eigenvalues)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect();
    let closed_form: Vec<f64> = eigensystem::enumerate_spectrum(lambda, mode_count)?
        .iter()
        .map(|p| p.eigenvalue)
        .collect();
    let deviations: Vec<f64> = refined
        .iter()
        .zip(&closed_form)
        .map(|(r, c)| (r - c).abs())
        .collect();
    let max_deviation = deviations.iter().cloned().fold(0.0, f64::max);
    Ok(FdComparison {
        lambda,
        closed_form,
        refined,
        deviations,
        max_deviation,
    })
}
