//! Self-contained verification suites, each producing a [`RunReport`] with
//! pass/fail tolerance checks. They re-measure the key identities of the
//! library at runtime so deployments can be sanity-checked in place.

use num_complex::Complex64;

use crate::eigensystem::{self, ModeIndex};
use crate::error::{Error, Result};
use crate::grid::{Axis, GridFunction};
use crate::group::{self, NElement, RepKind};
use crate::hermite;
use crate::kernels::{self, Scaling};
use crate::oracle;
use crate::quadform::{self, Lambda};
use crate::report::{Check, RunReport, Value};
use crate::spectral;
use crate::transforms;

pub const SUITE_NAMES: &[&str] = &[
    "hermite",
    "quadform",
    "eigenresidual",
    "intertwiner",
    "mehler",
    "fd",
    "spectralres",
];

/// Runs one suite by name.
pub fn run_suite(name: &str) -> Result<RunReport> {
    match name {
        "hermite" => suite_hermite(),
        "quadform" => suite_quadform(),
        "eigenresidual" => suite_eigenresidual(),
        "intertwiner" => suite_intertwiner(),
        "mehler" => suite_mehler(),
        "fd" => suite_fd(),
        "spectralres" => suite_spectralres(),
        other => Err(Error::InvalidParameter(format!(
            "unknown suite '{other}'; available: {}",
            SUITE_NAMES.join(", ")
        ))),
    }
}

fn lam(l1: f64, l2: f64) -> Lambda {
    Lambda::new(l1, l2).expect("suite parameters are valid")
}

fn diff_norm(a: &GridFunction, b: &GridFunction) -> f64 {
    let mut d = a.clone();
    d.add_scaled(Complex64::new(-1.0, 0.0), b);
    d.norm()
}

/// Orthonormality of the Hermite functions through degree 30, integrated
/// exactly by Gauss quadrature.
pub fn suite_hermite() -> Result<RunReport> {
    let mut report = RunReport::new("verify hermite");
    report.parameter("max_degree", 30).parameter("nodes", 80);
    let nodes = hermite::gauss_hermite_nodes(80)?;
    let mut worst = 0.0f64;
    for a in 0..=30usize {
        for b in a..=30usize {
            let mut acc = 0.0;
            for &(x, w) in &nodes {
                acc += w * hermite::orthonormal_poly(a, x)? * hermite::orthonormal_poly(b, x)?;
            }
            let expect = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((acc - expect).abs());
        }
    }
    report.result("max_gram_deviation", Value::Number(worst));
    report.check(Check::below("orthonormality", worst, 1e-10));
    Ok(report)
}

/// Exactness of the 2×2 diagonalization: residual of `RᵀMR - diag(μ₊,μ₋)`
/// and the determinant identity `μ₊μ₋ = λ₂⁴`.
pub fn suite_quadform() -> Result<RunReport> {
    let mut report = RunReport::new("verify quadform");
    let samples = [
        (0.0, 1.0),
        (1.0, 1.0),
        (2.0, -1.0),
        (0.5, 2.0),
        (-3.0, 0.25),
        (1e-8, 1.0),
    ];
    let mut worst_offdiag = 0.0f64;
    let mut worst_det = 0.0f64;
    for &(l1, l2) in &samples {
        let lambda = lam(l1, l2);
        let d = quadform::diagonalize(lambda);
        let m = d.m_matrix;
        let r = d.rotation;
        // RᵀMR entry (0,1)
        let mut entry = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                entry += r[i][0] * m[i][j] * r[j][1];
            }
        }
        worst_offdiag = worst_offdiag.max(entry.abs());
        let det_err = (d.mu_plus * d.mu_minus - l2.powi(4)).abs() / l2.powi(4);
        worst_det = worst_det.max(det_err);
    }
    report.result("max_offdiagonal", Value::Number(worst_offdiag));
    report.result("max_determinant_error", Value::Number(worst_det));
    report.check(Check::below("diagonalization", worst_offdiag, 1e-10));
    report.check(Check::below("determinant_identity", worst_det, 1e-12));
    Ok(report)
}

/// Grid residual of the oscillator eigenpairs under the differentiated
/// representation.
pub fn suite_eigenresidual() -> Result<RunReport> {
    let mut report = RunReport::new("verify eigenresidual");
    let lambda = lam(1.0, 1.0);
    report.parameter("lambda1", 1.0).parameter("lambda2", 1.0);
    let ax = Axis::new(96, 9.0)?;
    let d = quadform::diagonalize(lambda);
    let mut worst = 0.0f64;
    for (mp, mm) in [(0, 0), (1, 0), (0, 1), (2, 2)] {
        let mode = ModeIndex::new(mp, mm)?;
        let h = GridFunction::from_fn(vec![ax, ax], |c| {
            Complex64::new(
                eigensystem::eigenfunction_from_diag(&d, mode, [c[0], c[1]]).unwrap_or(f64::NAN),
                0.0,
            )
        })?;
        let applied = group::sublaplacian(lambda, RepKind::Pi, &h)?;
        let mut expect = h.clone();
        expect.scale(Complex64::new(eigensystem::eigenvalue_from_diag(&d, mode), 0.0));
        worst = worst.max(diff_norm(&applied, &expect) / h.norm());
    }
    report.result("max_relative_residual", Value::Number(worst));
    report.check(Check::below("eigen_residual", worst, 1e-6));
    Ok(report)
}

/// The intertwining identity `T π_λ(n) = ρ_λ(n) T` over deterministic group
/// elements.
pub fn suite_intertwiner() -> Result<RunReport> {
    let mut report = RunReport::new("verify intertwiner");
    let lambda = lam(1.0, 1.0);
    let ax = Axis::self_dual(1.0, 64)?;
    let h = GridFunction::from_fn(vec![ax, ax], |p| {
        let env = (-0.5 * (p[0] * p[0] + p[1] * p[1])).exp();
        Complex64::new(env * (1.0 + 0.3 * p[0]), env * 0.2 * p[1])
    })?;
    let th = transforms::intertwiner_t(lambda, &h)?;
    let elements = [
        NElement { v: [0.4, -0.3, 0.2, 0.5], z: [0.1, -0.7] },
        NElement { v: [-0.6, 0.5, -0.1, 0.3], z: [0.9, 0.2] },
        NElement { v: [0.2, 0.2, 0.6, -0.4], z: [-0.3, 0.8] },
    ];
    let mut worst = 0.0f64;
    for n in &elements {
        let lhs = transforms::intertwiner_t(lambda, &group::rep_pi(lambda, n, &h)?)?;
        let rhs = group::rep_rho(lambda, n, &th)?;
        worst = worst.max(diff_norm(&lhs, &rhs) / h.norm());
    }
    let unitarity = (th.norm() - h.norm()).abs() / h.norm();
    report.result("max_intertwining_residual", Value::Number(worst));
    report.result("unitarity_defect", Value::Number(unitarity));
    report.check(Check::below("intertwining", worst, 1e-6));
    report.check(Check::below("unitarity", unitarity, 1e-10));
    Ok(report)
}

/// Closed-form heat kernel against its eigenfunction series, plus the
/// rescaling selection.
pub fn suite_mehler() -> Result<RunReport> {
    let mut report = RunReport::new("verify mehler");
    let mut worst = 0.0f64;
    for &mu in &[0.4, 1.0, 2.3] {
        for &t in &[0.5, 1.0, 2.0] {
            for &(x, y) in &[(0.0, 0.0), (0.8, -0.6), (1.5, 1.1)] {
                let k = kernels::mehler_k(t, mu, x, y)?;
                let series = kernels::mehler_k_series(t, mu, x, y, 1e-13)?;
                worst = worst.max((k - series).abs() / series.abs().max(1e-12));
            }
        }
    }
    let selected = kernels::select_scaling(0.5, 2.0)?;
    report.result("max_series_deviation", Value::Number(worst));
    report.result(
        "selected_scaling",
        Value::Text(format!("{selected:?}")),
    );
    report.check(Check::below("kernel_vs_series", worst, 1e-6));
    report.check(Check {
        name: "square_root_scaling_selected".into(),
        pass: selected == Scaling::SqrtMu,
        measured: if selected == Scaling::SqrtMu { 0.0 } else { 1.0 },
        tolerance: 0.0,
    });
    Ok(report)
}

/// Closed-form spectrum against the finite-difference referee.
pub fn suite_fd() -> Result<RunReport> {
    let mut report = RunReport::new("verify fd");
    report.parameter("resolutions", "64/128").parameter("half_width", 8.0);
    let mut worst = 0.0f64;
    for &(l1, l2) in &[(0.0, 1.0), (1.0, 1.0)] {
        let cmp = oracle::fd_compare(lam(l1, l2), 3, 8.0, 64)?;
        report.result(
            format!("refined_({l1},{l2})"),
            Value::Numbers(cmp.refined.clone()),
        );
        worst = worst.max(cmp.max_deviation);
    }
    report.result("max_deviation", Value::Number(worst));
    report.check(Check::below("fd_agreement", worst, 1e-3));
    Ok(report)
}

/// Diagonal action of the operator on spectral coefficients.
pub fn suite_spectralres() -> Result<RunReport> {
    let mut report = RunReport::new("verify spectralres");
    let lambda2 = 1.0;
    let ax = Axis::self_dual(lambda2, 40)?;
    let at = Axis::new(32, 8.0)?;
    let freq = at.conjugate(1.0)?;
    let mut lambda1 = Vec::new();
    let mut slices = Vec::new();
    for l1 in freq.points() {
        lambda1.push(l1);
        let w = if l1.abs() <= 1.5 { (-l1 * l1).exp() } else { 0.0 };
        slices.push(GridFunction::from_fn(vec![ax, ax], |c| {
            let env = w * (-0.5 * (c[0] * c[0] + c[1] * c[1])).exp();
            Complex64::new(env, env * 0.2 * c[0])
        })?);
    }
    let pf = transforms::PartialFourier {
        lambda1,
        slices,
        accuracy_warning: None,
    };
    let f = transforms::partial_fourier_inverse(&pf, at)?;
    let lf = spectral::heisenberg_oscillator(lambda2, &f)?;
    let cf = spectral::coefficients(&f, lambda2, 6)?;
    let clf = spectral::coefficients(&lf, lambda2, 6)?;
    let mut worst = 0.0f64;
    let mut significant = 0usize;
    for k in 0..cf.lambda1.len() {
        for j in 0..cf.modes.len() {
            let c = cf.coefficients[k][j];
            if c.norm() < 1e-6 {
                continue;
            }
            let nu = cf.eigenvalues[k][j];
            let dev = (clf.coefficients[k][j] / c - Complex64::new(nu, 0.0)).norm() / nu;
            worst = worst.max(dev);
            significant += 1;
        }
    }
    report.result("significant_coefficients", Value::Number(significant as f64));
    report.result("max_relative_deviation", Value::Number(worst));
    report.check(Check::below("diagonal_action", worst, 1e-4));
    report.check(Check {
        name: "coverage".into(),
        pass: significant >= 30,
        measured: significant as f64,
        tolerance: 30.0,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        for name in SUITE_NAMES {
            let report = run_suite(name).unwrap();
            assert!(
                report.all_passed(),
                "suite {name} failed: {:?}",
                report.checks
            );
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(
            run_suite("nonsense"),
            Err(Error::InvalidParameter(_))
        ));
    }
}
