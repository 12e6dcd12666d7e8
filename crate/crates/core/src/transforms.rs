//! The partial Fourier transform in the central variable of `H₁` and the
//! unitary intertwiner `T = T₁T₂` between `π_λ` and `ρ_λ`.
//!
//! `T` maps a function of `(x,z)` to
//! `√(|λ₂|/2π) e^{iλ₁xy/2} ∫ e^{-iλ₂yz} h(x,z) dz`, realized as a scaled
//! FFT along the second axis. The output `y`-grid is the conjugate of the
//! input `z`-grid under the scale `λ₂`; on a self-dual grid
//! (see [`Axis::self_dual`](crate::grid::Axis::self_dual)) input and output
//! grids coincide.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Axis, GridFunction};
use crate::quadform::Lambda;

/// Boundary-decay ratio above which the transform flags its result.
const DECAY_WARN_RATIO: f64 = 1e-8;

/// Slices of `𝓕_{λ₁} f` over a family of λ₁ values.
#[derive(Debug, Clone)]
pub struct PartialFourier {
    pub lambda1: Vec<f64>,
    /// One 2-D grid function over `(x, y)` per λ₁ sample.
    pub slices: Vec<GridFunction>,
    /// Set when `f` does not decay at the t-boundary and the quadrature is
    /// therefore suspect.
    pub accuracy_warning: Option<String>,
}

fn decay_warning(f: &GridFunction, axis: usize) -> Option<String> {
    let ratio = f.boundary_ratio(axis);
    (ratio >= DECAY_WARN_RATIO).then(|| {
        format!("boundary magnitude ratio {ratio:.3e} on axis {axis} exceeds {DECAY_WARN_RATIO:.0e}")
    })
}

/// `𝓕_{λ₁} f(x,y) = ∫ e^{-iλ₁t} f(x,y,t) dt` at all canonical FFT
/// frequencies of the t-axis, in one FFT pass.
pub fn partial_fourier_central_fft(f: &GridFunction) -> Result<PartialFourier> {
    if f.dim() != 3 {
        return Err(Error::InvalidParameter(
            "partial Fourier transform expects a 3-D grid over (x, y, t)".into(),
        ));
    }
    let warning = decay_warning(f, 2);
    let hat = f.centered_transform(2, 1.0, 1.0)?;
    let freq_axis = hat.axes()[2];
    let lambda1: Vec<f64> = freq_axis.points().collect();
    let slices = split_last_axis(&hat)?;
    Ok(PartialFourier {
        lambda1,
        slices,
        accuracy_warning: warning,
    })
}

/// `𝓕_{λ₁} f` at an explicit list of λ₁ values, by direct quadrature in t.
pub fn partial_fourier_central(f: &GridFunction, lambda1_samples: &[f64]) -> Result<PartialFourier> {
    if f.dim() != 3 {
        return Err(Error::InvalidParameter(
            "partial Fourier transform expects a 3-D grid over (x, y, t)".into(),
        ));
    }
    let warning = decay_warning(f, 2);
    let t_axis = f.axes()[2];
    let (nx, ny, nt) = (f.axes()[0].len(), f.axes()[1].len(), t_axis.len());
    let ht = t_axis.spacing();
    let mut slices = Vec::with_capacity(lambda1_samples.len());
    for &l1 in lambda1_samples {
        let mut vals = vec![Complex64::new(0.0, 0.0); nx * ny];
        for (it, &t) in t_axis.points().collect::<Vec<_>>().iter().enumerate() {
            let phase = Complex64::from_polar(ht, -l1 * t);
            for ix in 0..nx {
                for iy in 0..ny {
                    vals[ix * ny + iy] += phase * f.values()[(ix * ny + iy) * nt + it];
                }
            }
        }
        slices.push(GridFunction::new(vec![f.axes()[0], f.axes()[1]], vals)?);
    }
    Ok(PartialFourier {
        lambda1: lambda1_samples.to_vec(),
        slices,
        accuracy_warning: warning,
    })
}

/// Inverse of [`partial_fourier_central_fft`]: reassembles the 3-D grid
/// function on the given t-axis from FFT-frequency slices.
pub fn partial_fourier_inverse(pf: &PartialFourier, t_axis: Axis) -> Result<GridFunction> {
    let freq_axis = t_axis.conjugate(1.0)?;
    if pf.lambda1.len() != freq_axis.len() {
        return Err(Error::Resampling(format!(
            "{} λ₁ slices cannot be paired with a t-axis of {} points",
            pf.lambda1.len(),
            t_axis.len()
        )));
    }
    for (have, want) in pf.lambda1.iter().zip(freq_axis.points()) {
        if (have - want).abs() > 1e-9 * (1.0 + want.abs()) {
            return Err(Error::Resampling(
                "λ₁ samples are not the canonical FFT frequencies of the t-axis".into(),
            ));
        }
    }
    let joined = join_last_axis(&pf.slices, freq_axis)?;
    joined.centered_inverse_transform(2, 1.0, 1.0 / (2.0 * std::f64::consts::PI))
}

fn split_last_axis(f: &GridFunction) -> Result<Vec<GridFunction>> {
    let (nx, ny, nt) = (f.axes()[0].len(), f.axes()[1].len(), f.axes()[2].len());
    let mut out = Vec::with_capacity(nt);
    for it in 0..nt {
        let mut vals = Vec::with_capacity(nx * ny);
        for ixy in 0..nx * ny {
            vals.push(f.values()[ixy * nt + it]);
        }
        out.push(GridFunction::new(vec![f.axes()[0], f.axes()[1]], vals)?);
    }
    Ok(out)
}

fn join_last_axis(slices: &[GridFunction], last: Axis) -> Result<GridFunction> {
    let (nx, ny) = (slices[0].axes()[0].len(), slices[0].axes()[1].len());
    let nt = last.len();
    let mut vals = vec![Complex64::new(0.0, 0.0); nx * ny * nt];
    for (it, s) in slices.iter().enumerate() {
        for ixy in 0..nx * ny {
            vals[ixy * nt + it] = s.values()[ixy];
        }
    }
    GridFunction::new(vec![slices[0].axes()[0], slices[0].axes()[1], last], vals)
}

/// The intertwiner `T`: maps `h(x,z)` to
/// `√(|λ₂|/2π) e^{iλ₁xy/2} ∫ e^{-iλ₂yz} h(x,z) dz` on the conjugate y-grid.
pub fn intertwiner_t(lambda: Lambda, h: &GridFunction) -> Result<GridFunction> {
    if h.dim() != 2 {
        return Err(Error::InvalidParameter(
            "intertwiner expects a 2-D grid".into(),
        ));
    }
    let l2 = lambda.lambda2();
    let amp = (l2.abs() / (2.0 * std::f64::consts::PI)).sqrt();
    let mut out = h.centered_transform(1, l2, amp)?;
    let half_l1 = 0.5 * lambda.lambda1();
    out.map_with_coords(|c, v| v * Complex64::from_polar(1.0, half_l1 * c[0] * c[1]));
    Ok(out)
}

/// Inverse intertwiner: `T⁻¹f(x,z) = √(|λ₂|/2π) ∫ e^{iλ₂yz} e^{-iλ₁xy/2} f(x,y) dy`.
pub fn intertwiner_t_inverse(lambda: Lambda, f: &GridFunction) -> Result<GridFunction> {
    if f.dim() != 2 {
        return Err(Error::InvalidParameter(
            "intertwiner expects a 2-D grid".into(),
        ));
    }
    let l2 = lambda.lambda2();
    let amp = (l2.abs() / (2.0 * std::f64::consts::PI)).sqrt();
    let half_l1 = 0.5 * lambda.lambda1();
    let mut tmp = f.clone();
    tmp.map_with_coords(|c, v| v * Complex64::from_polar(1.0, -half_l1 * c[0] * c[1]));
    tmp.centered_inverse_transform(1, l2, amp)
}

/// Checks that two grids share axes to within round-off; several pipelines
/// (spectral coefficients, eigen-transport) require the self-dual setup in
/// which `T` preserves the grid.
pub fn require_same_axes(a: &GridFunction, b: &GridFunction) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Resampling("grid dimensions differ".into()));
    }
    for (ax, bx) in a.axes().iter().zip(b.axes()) {
        if ax.len() != bx.len()
            || (ax.half_width() - bx.half_width()).abs() > 1e-9 * ax.half_width()
        {
            return Err(Error::Resampling(format!(
                "incompatible grids: {} points over ±{} vs {} points over ±{}",
                ax.len(),
                ax.half_width(),
                bx.len(),
                bx.half_width()
            )));
        }
    }
    Ok(())
}
