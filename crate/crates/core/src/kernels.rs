//! Heat kernels: the Mehler kernel of the harmonic oscillator, its
//! rescalings `K_{t,μ}` for the oscillators `-d²/du² + μu²`, the product
//! kernel `κ_{t,λ}` of the two-dimensional model, and heat-semigroup
//! application in both the `π_λ` and `ρ_λ` realizations.
//!
//! Two candidate rescalings of the Mehler kernel are implemented; the
//! eigenfunction series for `K_{t,μ}` serves as an independent referee and
//! [`select_scaling`] picks the one that reproduces it.

use num_complex::Complex64;

use crate::eigensystem::{self, ModeIndex};
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::hermite;
use crate::quadform::{self, Lambda, QuadFormDiag};
use crate::transforms;

/// Times at or below this are rejected: the kernel concentrates towards a
/// delta and the closed form loses all relative accuracy in `1 - e^{-4t}`.
pub const HEAT_TIME_FLOOR: f64 = 1e-8;

/// Hard cap on eigen-expansion size before giving up with a truncation error.
const EXPANSION_MODE_CAP: usize = 10_000;

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t <= HEAT_TIME_FLOOR {
        return Err(Error::NearDelta {
            t,
            threshold: HEAT_TIME_FLOOR,
        });
    }
    Ok(())
}

/// Heat kernel of `-d²/dx² + x²` at time `t`:
/// `Q_t(x,y) = π^{-1/2}(1-e^{-4t})^{-1/2} e^{-F_t(x,y)}` with
/// `F_t = (1-e^{-4t})^{-1} [ (1+e^{-4t})(x²+y²)/2 - 2e^{-2t}xy ]`.
pub fn mehler_q(t: f64, x: f64, y: f64) -> Result<f64> {
    check_time(t)?;
    let e2 = (-2.0 * t).exp();
    let e4 = e2 * e2;
    let denom = 1.0 - e4;
    let f = (0.5 * (1.0 + e4) * (x * x + y * y) - 2.0 * e2 * x * y) / denom;
    Ok((std::f64::consts::PI * denom).sqrt().recip() * (-f).exp())
}

/// How the unit-frequency kernel is rescaled to frequency `μ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scaling {
    /// `K_{t,μ}(x,y) = μ^{1/4} e^{-t√μ} Q_{t√μ}(μ^{1/4}x, μ^{1/4}y)`
    SqrtMu,
    /// `K_{t,μ}(x,y) = √μ e^{-tμ} Q_{tμ}(√μ x, √μ y)`
    LinearMu,
}

/// Heat kernel of `-d²/du² + μu²`, shifted so the ground eigenvalue is
/// weighted `e^{-t√μ}`; uses the scaling selected by the eigen-series
/// referee.
pub fn mehler_k(t: f64, mu: f64, x: f64, y: f64) -> Result<f64> {
    mehler_k_with(Scaling::SqrtMu, t, mu, x, y)
}

/// `K_{t,μ}` under an explicit choice of rescaling.
pub fn mehler_k_with(scaling: Scaling, t: f64, mu: f64, x: f64, y: f64) -> Result<f64> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "oscillator frequency μ must be positive, got {mu}"
        )));
    }
    match scaling {
        Scaling::SqrtMu => {
            let s = mu.sqrt();
            let a = mu.powf(0.25);
            Ok(a * (-t * s).exp() * mehler_q(t * s, a * x, a * y)?)
        }
        Scaling::LinearMu => {
            let s = mu.sqrt();
            Ok(s * (-t * mu).exp() * mehler_q(t * mu, s * x, s * y)?)
        }
    }
}

/// Eigenfunction series
/// `Σ_m e^{-t√μ(2m+1)} μ^{1/8}ĥ_m(μ^{1/4}x) · μ^{1/8}ĥ_m(μ^{1/4}y)`,
/// truncated once the geometric tail bound drops below `tol`.
pub fn mehler_k_series(t: f64, mu: f64, x: f64, y: f64, tol: f64) -> Result<f64> {
    check_time(t)?;
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "oscillator frequency μ must be positive, got {mu}"
        )));
    }
    let s = mu.sqrt();
    let a = mu.powf(0.25);
    let ratio = (-2.0 * t * s).exp();
    let mut sum = 0.0;
    for m in 0..=hermite::DEGREE_CAP {
        let hm_x = hermite::hermite_function(m, a * x, true)?;
        let hm_y = hermite::hermite_function(m, a * y, true)?;
        let weight = (-t * s * (2 * m + 1) as f64).exp();
        sum += a * weight * hm_x * hm_y;
        // |ĥ_m| ≤ π^{-1/4}, so the tail is below a·weight·ratio/(1-ratio)
        let tail = a * weight * ratio / (1.0 - ratio);
        if tail < tol {
            return Ok(sum);
        }
    }
    Err(Error::Truncation {
        bound: a * (-t * s * (2 * hermite::DEGREE_CAP + 3) as f64).exp() / (1.0 - ratio),
        tolerance: tol,
    })
}

/// Decides which rescaling of the Mehler kernel agrees with the
/// eigenfunction series at frequency `mu`. The two candidates coincide at
/// `μ = 1`, so that frequency is rejected.
pub fn select_scaling(t: f64, mu: f64) -> Result<Scaling> {
    check_time(t)?;
    if (mu - 1.0).abs() < 1e-3 {
        return Err(Error::Domain(
            "scaling candidates coincide at μ = 1; pick a frequency away from 1".into(),
        ));
    }
    let probes = [(0.0, 0.0), (0.4, -0.3), (1.1, 0.7), (-0.8, 0.2)];
    let mut worst = [0.0f64; 2];
    for &(x, y) in &probes {
        let reference = mehler_k_series(t, mu, x, y, 1e-12)?;
        let scale = reference.abs().max(1e-30);
        let sqrt_dev = (mehler_k_with(Scaling::SqrtMu, t, mu, x, y)? - reference).abs() / scale;
        let lin_dev = (mehler_k_with(Scaling::LinearMu, t, mu, x, y)? - reference).abs() / scale;
        worst[0] = worst[0].max(sqrt_dev);
        worst[1] = worst[1].max(lin_dev);
    }
    match (worst[0] < 1e-6, worst[1] < 1e-6) {
        (true, false) if worst[1] > 1e-2 => Ok(Scaling::SqrtMu),
        (false, true) if worst[0] > 1e-2 => Ok(Scaling::LinearMu),
        _ => Err(Error::Internal(format!(
            "scaling selection inconclusive: deviations {:.3e} and {:.3e}",
            worst[0], worst[1]
        ))),
    }
}

/// Product heat kernel of `dπ_λ(𝓛)` in principal-axis coordinates:
/// `κ_{t,λ}(u,v) = K_{t,μ₊}(u₁',v₁') K_{t,μ₋}(u₂',v₂')`.
pub fn kernel_kappa(lambda: Lambda, t: f64, u: [f64; 2], v: [f64; 2]) -> Result<f64> {
    kernel_kappa_from_diag(&quadform::diagonalize(lambda), t, u, v)
}

/// [`kernel_kappa`] with a precomputed diagonalization.
pub fn kernel_kappa_from_diag(
    diag: &QuadFormDiag,
    t: f64,
    u: [f64; 2],
    v: [f64; 2],
) -> Result<f64> {
    let up = quadform::to_principal_axes(diag, u);
    let vp = quadform::to_principal_axes(diag, v);
    Ok(mehler_k(t, diag.mu_plus, up[0], vp[0])? * mehler_k(t, diag.mu_minus, up[1], vp[1])?)
}

/// Heat kernel of the Schrödinger realization,
/// `Q_{t,λ}((x₀,y₀),(x,y)) = (|λ₂|/2π) e^{iλ₁(x₀y₀ - xy)/2}
///   ∬ e^{iλ₂(y₂ y - y₀ y₁)} κ_{t,λ}((x₀,y₁),(x,y₂)) dy₁ dy₂`,
/// evaluated by tensor trapezoid quadrature over the Gaussian support of κ.
pub fn kernel_q_rho(lambda: Lambda, t: f64, p: [f64; 2], q: [f64; 2]) -> Result<Complex64> {
    check_time(t)?;
    let diag = quadform::diagonalize(lambda);
    let l1 = lambda.lambda1();
    let l2 = lambda.lambda2();
    let (x0, y0) = (p[0], p[1]);
    let (x, y) = (q[0], q[1]);
    // κ decays like a Gaussian of width ~ μ∓^{-1/4} around the origin
    let width = diag.mu_plus.min(diag.mu_minus).powf(-0.25);
    let r = 9.0 * width.max(1.0);
    let n = 160usize;
    let h = 2.0 * r / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j1 in 0..n {
        let y1 = -r + (j1 as f64 + 0.5) * h;
        for j2 in 0..n {
            let y2 = -r + (j2 as f64 + 0.5) * h;
            let kappa = kernel_kappa_from_diag(&diag, t, [x0, y1], [x, y2])?;
            acc += Complex64::from_polar(kappa, l2 * (y2 * y - y0 * y1));
        }
    }
    acc *= h * h * l2.abs() / (2.0 * std::f64::consts::PI);
    Ok(acc * Complex64::from_polar(1.0, 0.5 * l1 * (x0 * y0 - x * y)))
}

/// How the heat semigroup is applied to a grid function.
#[derive(Debug, Clone, Copy)]
pub enum HeatMethod {
    /// Project on oscillator eigenfunctions, damp by `e^{-tν}`, resum.
    /// Fails with a truncation error if the spectral tail cannot be pushed
    /// below `tolerance`.
    EigenExpansion { tolerance: f64 },
    /// Quadrature against the product kernel `κ_{t,λ}` (O(n⁴)).
    Kernel,
}

/// `e^{-t dπ_λ(𝓛)} f` on a 2-D grid.
pub fn heat_apply_pi(
    lambda: Lambda,
    t: f64,
    f: &GridFunction,
    method: HeatMethod,
) -> Result<GridFunction> {
    check_time(t)?;
    if f.dim() != 2 {
        return Err(Error::InvalidParameter(
            "heat semigroup expects a 2-D grid".into(),
        ));
    }
    match method {
        HeatMethod::EigenExpansion { tolerance } => heat_eigen_expansion(lambda, t, f, tolerance),
        HeatMethod::Kernel => heat_kernel_quadrature(lambda, t, f),
    }
}

fn heat_eigen_expansion(
    lambda: Lambda,
    t: f64,
    f: &GridFunction,
    tolerance: f64,
) -> Result<GridFunction> {
    if !(tolerance > 0.0) {
        return Err(Error::InvalidParameter(
            "eigen-expansion tolerance must be positive".into(),
        ));
    }
    let diag = quadform::diagonalize(lambda);
    let mut count = 64usize;
    let pairs = loop {
        let pairs = eigensystem::enumerate_spectrum(lambda, count)?;
        let tail = (-t * pairs.last().unwrap().eigenvalue).exp();
        if tail < tolerance {
            break pairs;
        }
        if count >= EXPANSION_MODE_CAP {
            return Err(Error::Truncation {
                bound: tail,
                tolerance,
            });
        }
        count = (count * 2).min(EXPANSION_MODE_CAP);
    };
    let mut out = GridFunction::zeros(f.axes().to_vec())?;
    for pair in &pairs {
        let basis = eigenfunction_grid(&diag, pair.mode, f)?;
        let coeff = f.inner(&basis) * (-t * pair.eigenvalue).exp();
        out.add_scaled(coeff, &basis);
    }
    Ok(out)
}

fn eigenfunction_grid(
    diag: &QuadFormDiag,
    mode: ModeIndex,
    like: &GridFunction,
) -> Result<GridFunction> {
    GridFunction::from_fn(like.axes().to_vec(), |c| {
        Complex64::new(
            eigensystem::eigenfunction_from_diag(diag, mode, [c[0], c[1]]).unwrap_or(f64::NAN),
            0.0,
        )
    })
}

fn heat_kernel_quadrature(lambda: Lambda, t: f64, f: &GridFunction) -> Result<GridFunction> {
    let diag = quadform::diagonalize(lambda);
    let (ax0, ax1) = (f.axes()[0], f.axes()[1]);
    let (n0, n1) = (ax0.len(), ax1.len());
    let vol = f.cell_volume();
    let p0: Vec<f64> = ax0.points().collect();
    let p1: Vec<f64> = ax1.points().collect();
    let mut out = GridFunction::zeros(f.axes().to_vec())?;
    for i0 in 0..n0 {
        for i1 in 0..n1 {
            let u = [p0[i0], p1[i1]];
            let mut acc = Complex64::new(0.0, 0.0);
            for j0 in 0..n0 {
                for j1 in 0..n1 {
                    let kappa = kernel_kappa_from_diag(&diag, t, u, [p0[j0], p1[j1]])?;
                    acc += kappa * f.values()[j0 * n1 + j1];
                }
            }
            out.values_mut()[i0 * n1 + i1] = acc * vol;
        }
    }
    Ok(out)
}

/// `e^{-t} of the oscillator in the Schrödinger realization, computed as
/// `T ∘ e^{-t dπ_λ(𝓛)} ∘ T⁻¹`.
pub fn heat_apply_rho(
    lambda: Lambda,
    t: f64,
    f: &GridFunction,
    method: HeatMethod,
) -> Result<GridFunction> {
    let h = transforms::intertwiner_t_inverse(lambda, f)?;
    let evolved = heat_apply_pi(lambda, t, &h, method)?;
    transforms::intertwiner_t(lambda, &evolved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Axis;
    use approx::assert_relative_eq;

    fn lam(l1: f64, l2: f64) -> Lambda {
        Lambda::new(l1, l2).unwrap()
    }

    #[test]
    fn near_delta_time_is_rejected() {
        assert!(matches!(
            mehler_q(1e-9, 0.0, 0.0),
            Err(Error::NearDelta { .. })
        ));
        assert!(matches!(
            mehler_k(0.0, 2.0, 0.0, 0.0),
            Err(Error::NearDelta { .. })
        ));
    }

    #[test]
    fn mehler_q_symmetric_and_positive() {
        for &t in &[0.05, 0.5, 3.0] {
            for &(x, y) in &[(0.0, 0.0), (1.3, -0.4), (-2.0, 2.5)] {
                let a = mehler_q(t, x, y).unwrap();
                let b = mehler_q(t, y, x).unwrap();
                assert!(a > 0.0);
                assert_relative_eq!(a, b, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn mehler_q_long_time_limit() {
        // t → ∞: Q_t → π^{-1/2} e^{-(x²+y²)/2} (ground-state projector)
        for &(x, y) in &[(0.0, 0.0), (1.0, -1.0), (0.7, 2.0)] {
            let q = mehler_q(25.0, x, y).unwrap();
            let expect =
                std::f64::consts::PI.sqrt().recip() * (-0.5 * (x * x + y * y)).exp();
            assert_relative_eq!(q, expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn mehler_q_semigroup() {
        // ∫ Q_s(x,z) Q_t(z,y) dz = Q_{s+t}(x,y)
        let (s, t) = (0.3, 0.7);
        let n = 600;
        let r = 12.0;
        let h = 2.0 * r / n as f64;
        for &(x, y) in &[(0.2, -0.5), (1.0, 1.0)] {
            let mut acc = 0.0;
            for j in 0..n {
                let z = -r + (j as f64 + 0.5) * h;
                acc += mehler_q(s, x, z).unwrap() * mehler_q(t, z, y).unwrap();
            }
            acc *= h;
            assert_relative_eq!(acc, mehler_q(s + t, x, y).unwrap(), max_relative = 1e-10);
        }
    }

    #[test]
    fn scaled_kernel_matches_eigen_series() {
        for &mu in &[1.0, 2.3, 0.4] {
            for &t in &[0.5, 1.0, 2.0] {
                for &(x, y) in &[(0.0, 0.0), (0.8, -0.6), (1.5, 1.1)] {
                    let k = mehler_k(t, mu, x, y).unwrap();
                    let series = mehler_k_series(t, mu, x, y, 1e-13).unwrap();
                    assert!(
                        (k - series).abs() <= 1e-10 * series.abs().max(1e-12),
                        "μ={mu} t={t} ({x},{y}): {k} vs {series}"
                    );
                }
            }
        }
    }

    #[test]
    fn scaling_selection_prefers_square_root() {
        for &(t, mu) in &[(0.5, 2.0), (1.0, 0.3), (0.7, 5.0)] {
            assert_eq!(select_scaling(t, mu).unwrap(), Scaling::SqrtMu);
        }
        assert!(matches!(select_scaling(0.5, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn kappa_trace_matches_eigenvalue_sum() {
        // ∫ κ(u,u) du = 1/(4 sinh(t√μ₊) sinh(t√μ₋))
        let lamv = lam(1.0, 1.0);
        let d = quadform::diagonalize(lamv);
        let t = 0.8;
        let n = 240;
        let r = 9.0;
        let h = 2.0 * r / n as f64;
        let mut acc = 0.0;
        for j0 in 0..n {
            for j1 in 0..n {
                let u = [-r + (j0 as f64 + 0.5) * h, -r + (j1 as f64 + 0.5) * h];
                acc += kernel_kappa(lamv, t, u, u).unwrap();
            }
        }
        acc *= h * h;
        let expect =
            0.25 / ((t * d.mu_plus.sqrt()).sinh() * (t * d.mu_minus.sqrt()).sinh());
        assert_relative_eq!(acc, expect, max_relative = 1e-9);
    }

    fn eigen_grid(lambda: Lambda, mode: ModeIndex, axes: Vec<Axis>) -> GridFunction {
        let d = quadform::diagonalize(lambda);
        GridFunction::from_fn(axes, |c| {
            Complex64::new(
                eigensystem::eigenfunction_from_diag(&d, mode, [c[0], c[1]]).unwrap(),
                0.0,
            )
        })
        .unwrap()
    }

    #[test]
    fn heat_damps_eigenfunctions() {
        let lamv = lam(1.0, 1.0);
        let ax = Axis::new(72, 9.0).unwrap();
        let t = 0.6;
        for (mp, mm) in [(0, 0), (1, 2), (3, 1)] {
            let mode = ModeIndex::new(mp, mm).unwrap();
            let h = eigen_grid(lamv, mode, vec![ax, ax]);
            let nu = eigensystem::eigenvalue(lamv, mode);
            for method in [
                HeatMethod::EigenExpansion { tolerance: 1e-12 },
                HeatMethod::Kernel,
            ] {
                let evolved = heat_apply_pi(lamv, t, &h, method).unwrap();
                let mut expect = h.clone();
                expect.scale(Complex64::new((-t * nu).exp(), 0.0));
                let mut diff = evolved.clone();
                diff.add_scaled(Complex64::new(-1.0, 0.0), &expect);
                assert!(
                    diff.norm() < 1e-8,
                    "mode ({mp},{mm}) {method:?}: residual {}",
                    diff.norm()
                );
            }
        }
    }

    #[test]
    fn heat_methods_agree_on_generic_data() {
        let lamv = lam(0.5, -1.5);
        let ax = Axis::new(56, 8.0).unwrap();
        let f = GridFunction::from_fn(vec![ax, ax], |c| {
            let env = (-0.4 * (c[0] * c[0] + c[1] * c[1])).exp();
            Complex64::new(env * (1.0 + 0.5 * c[0]), env * 0.3 * c[1])
        })
        .unwrap();
        let a = heat_apply_pi(lamv, 0.7, &f, HeatMethod::EigenExpansion { tolerance: 1e-12 })
            .unwrap();
        let b = heat_apply_pi(lamv, 0.7, &f, HeatMethod::Kernel).unwrap();
        let mut diff = a.clone();
        diff.add_scaled(Complex64::new(-1.0, 0.0), &b);
        assert!(diff.norm() < 1e-8 * f.norm(), "paths differ by {}", diff.norm());
    }

    #[test]
    fn heat_contracts_by_spectral_bottom() {
        let lamv = lam(1.0, 1.0);
        let nu_min = eigensystem::eigenvalue(lamv, ModeIndex::new(0, 0).unwrap());
        let ax = Axis::new(64, 8.0).unwrap();
        let f = GridFunction::from_fn(vec![ax, ax], |c| {
            Complex64::new((-0.5 * (c[0] * c[0] + c[1] * c[1])).exp() * c[0], 0.1)
        })
        .unwrap();
        let t = 0.9;
        let evolved =
            heat_apply_pi(lamv, t, &f, HeatMethod::EigenExpansion { tolerance: 1e-12 }).unwrap();
        assert!(evolved.norm() <= (-t * nu_min).exp() * f.norm() * (1.0 + 1e-9));
    }

    #[test]
    fn semigroup_property_on_grid() {
        let lamv = lam(1.0, 1.0);
        let ax = Axis::new(56, 8.0).unwrap();
        let f = GridFunction::from_fn(vec![ax, ax], |c| {
            Complex64::new((-0.5 * (c[0] * c[0] + c[1] * c[1])).exp(), 0.0)
        })
        .unwrap();
        let method = HeatMethod::EigenExpansion { tolerance: 1e-13 };
        let two_step = heat_apply_pi(
            lamv,
            0.4,
            &heat_apply_pi(lamv, 0.3, &f, method).unwrap(),
            method,
        )
        .unwrap();
        let one_step = heat_apply_pi(lamv, 0.7, &f, method).unwrap();
        let mut diff = two_step.clone();
        diff.add_scaled(Complex64::new(-1.0, 0.0), &one_step);
        assert!(diff.norm() < 1e-10 * f.norm());
    }

    #[test]
    fn schroedinger_side_damps_transported_eigenfunctions() {
        let lamv = lam(1.0, 1.0);
        let ax = Axis::self_dual(1.0, 64).unwrap();
        let t = 0.5;
        for (mp, mm) in [(0, 0), (2, 1)] {
            let mode = ModeIndex::new(mp, mm).unwrap();
            let h = eigen_grid(lamv, mode, vec![ax, ax]);
            let th = transforms::intertwiner_t(lamv, &h).unwrap();
            let evolved = heat_apply_rho(
                lamv,
                t,
                &th,
                HeatMethod::EigenExpansion { tolerance: 1e-12 },
            )
            .unwrap();
            let nu = eigensystem::eigenvalue(lamv, mode);
            let mut expect = th.clone();
            expect.scale(Complex64::new((-t * nu).exp(), 0.0));
            let mut diff = evolved.clone();
            diff.add_scaled(Complex64::new(-1.0, 0.0), &expect);
            assert!(diff.norm() < 1e-8, "mode ({mp},{mm}): {}", diff.norm());
        }
    }

    #[test]
    fn pointwise_rho_kernel_matches_operator() {
        // (Q_{t,λ} f)(p) = Σ_q Q_{t,λ}(p,q) f(q) h² reproduces the
        // transported heat operator at sample points
        let lamv = lam(1.0, 1.0);
        let ax = Axis::self_dual(1.0, 48).unwrap();
        let t = 0.8;
        let f = GridFunction::from_fn(vec![ax, ax], |c| {
            let env = (-0.5 * (c[0] * c[0] + c[1] * c[1])).exp();
            Complex64::new(env, env * 0.4 * c[0])
        })
        .unwrap();
        let evolved = heat_apply_rho(
            lamv,
            t,
            &f,
            HeatMethod::EigenExpansion { tolerance: 1e-12 },
        )
        .unwrap();
        let vol = f.cell_volume();
        let pts: Vec<f64> = ax.points().collect();
        let n = ax.len();
        for &(i0, i1) in &[(n / 2, n / 2), (n / 2 + 3, n / 2 - 2)] {
            let p = [pts[i0], pts[i1]];
            let mut acc = Complex64::new(0.0, 0.0);
            for j0 in 0..n {
                for j1 in 0..n {
                    let q = [pts[j0], pts[j1]];
                    acc += kernel_q_rho(lamv, t, p, q).unwrap() * f.values()[j0 * n + j1];
                }
            }
            acc *= vol;
            let want = evolved.values()[i0 * n + i1];
            assert!(
                (acc - want).norm() < 1e-6,
                "kernel application at {p:?}: {acc} vs {want}"
            );
        }
    }
}
