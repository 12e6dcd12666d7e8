//! Uniform symmetric grids and sampled complex functions on them.
//!
//! An [`Axis`] spans `[-R, R)` with an even number of points `x_j = -R + j h`,
//! `h = 2R/n`, so 0 is always a grid point and the FFT conventions below are
//! exact on band-limited periodic data. A [`GridFunction`] is a row-major
//! complex array over one to three axes and carries all the discrete
//! calculus used by the representation and transform modules: trapezoidal
//! inner products, band-limited translation, spectral differentiation, and
//! centered Fourier transforms in the continuum normalization.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    n: usize,
    half_width: f64,
}

impl Axis {
    pub fn new(n: usize, half_width: f64) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "axis length must be even and >= 2, got {n}"
            )));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "axis half-width must be positive and finite, got {half_width}"
            )));
        }
        Ok(Self { n, half_width })
    }

    /// Grid whose `√|λ₂|`-scaled Fourier transform lands back on the same
    /// grid: `|λ₂| h² n = 2π`. This makes the intertwiner an endomorphism of
    /// the sampled function space.
    pub fn self_dual(lambda2: f64, n: usize) -> Result<Self> {
        if lambda2 == 0.0 {
            return Err(Error::InvalidParameter("lambda2 must be nonzero".into()));
        }
        let h = (2.0 * std::f64::consts::PI / (lambda2.abs() * n as f64)).sqrt();
        Axis::new(n, 0.5 * h * n as f64)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.point(j))
    }

    /// The conjugate axis under the centered transform with scale `c`:
    /// spacing `2π/(n h c)`.
    pub fn conjugate(&self, c: f64) -> Result<Axis> {
        let h_out = 2.0 * std::f64::consts::PI / (self.n as f64 * self.spacing() * c.abs());
        Axis::new(self.n, 0.5 * h_out * self.n as f64)
    }
}

#[derive(Debug, Clone)]
pub struct GridFunction {
    axes: Vec<Axis>,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(axes: Vec<Axis>, values: Vec<Complex64>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 3 {
            return Err(Error::InvalidParameter(format!(
                "grids must have 1..=3 axes, got {}",
                axes.len()
            )));
        }
        let expect: usize = axes.iter().map(Axis::len).product();
        if values.len() != expect {
            return Err(Error::InvalidParameter(format!(
                "value length {} does not match grid size {expect}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidParameter(
                "grid values must be finite".into(),
            ));
        }
        Ok(Self { axes, values })
    }

    pub fn zeros(axes: Vec<Axis>) -> Result<Self> {
        let n: usize = axes.iter().map(Axis::len).product();
        Self::new(axes, vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn from_fn(axes: Vec<Axis>, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let dims: Vec<usize> = axes.iter().map(Axis::len).collect();
        let total: usize = dims.iter().product();
        let mut values = Vec::with_capacity(total);
        let mut coords = vec![0.0f64; axes.len()];
        let mut index = vec![0usize; axes.len()];
        for _ in 0..total {
            for (d, &i) in index.iter().enumerate() {
                coords[d] = axes[d].point(i);
            }
            values.push(f(&coords));
            // row-major odometer
            for d in (0..axes.len()).rev() {
                index[d] += 1;
                if index[d] < dims[d] {
                    break;
                }
                index[d] = 0;
            }
        }
        Self::new(axes, values)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// Cell volume of the trapezoidal/Riemann quadrature.
    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(Axis::spacing).product()
    }

    /// `(f, g) = ∫ f ḡ`, approximated on the grid.
    pub fn inner(&self, other: &GridFunction) -> Complex64 {
        debug_assert_eq!(self.values.len(), other.values.len());
        let s: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum();
        s * self.cell_volume()
    }

    pub fn norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (s * self.cell_volume()).sqrt()
    }

    pub fn scale(&mut self, c: Complex64) {
        for v in &mut self.values {
            *v *= c;
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, c: Complex64, other: &GridFunction) {
        debug_assert_eq!(self.values.len(), other.values.len());
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += c * b;
        }
    }

    /// `self += w(coords) · other`, pointwise.
    pub fn add_weighted(&mut self, other: &GridFunction, w: impl Fn(&[f64]) -> Complex64) {
        debug_assert_eq!(self.values.len(), other.values.len());
        let dims: Vec<usize> = self.axes.iter().map(Axis::len).collect();
        let mut coords = vec![0.0f64; self.axes.len()];
        let mut index = vec![0usize; self.axes.len()];
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            for (d, &i) in index.iter().enumerate() {
                coords[d] = self.axes[d].point(i);
            }
            *a += w(&coords) * b;
            for d in (0..dims.len()).rev() {
                index[d] += 1;
                if index[d] < dims[d] {
                    break;
                }
                index[d] = 0;
            }
        }
    }

    /// Pointwise update with access to the coordinates.
    pub fn map_with_coords(&mut self, f: impl Fn(&[f64], Complex64) -> Complex64) {
        let dims: Vec<usize> = self.axes.iter().map(Axis::len).collect();
        let mut coords = vec![0.0f64; self.axes.len()];
        let mut index = vec![0usize; self.axes.len()];
        for v in &mut self.values {
            for (d, &i) in index.iter().enumerate() {
                coords[d] = self.axes[d].point(i);
            }
            *v = f(&coords, *v);
            for d in (0..dims.len()).rev() {
                index[d] += 1;
                if index[d] < dims[d] {
                    break;
                }
                index[d] = 0;
            }
        }
    }

    /// Largest |value| on the two boundary slices of `axis`, relative to the
    /// overall maximum. Used for decay warnings.
    pub fn boundary_ratio(&self, axis: usize) -> f64 {
        let dims: Vec<usize> = self.axes.iter().map(Axis::len).collect();
        let mut max_all = 0.0f64;
        let mut max_bd = 0.0f64;
        self.visit_lines(axis, |line| {
            for (j, v) in line.iter().enumerate() {
                let a = v.norm();
                max_all = max_all.max(a);
                if j == 0 || j == dims[axis] - 1 {
                    max_bd = max_bd.max(a);
                }
            }
        });
        if max_all == 0.0 {
            0.0
        } else {
            max_bd / max_all
        }
    }

    fn strides(&self) -> Vec<usize> {
        let dims: Vec<usize> = self.axes.iter().map(Axis::len).collect();
        let mut strides = vec![1usize; dims.len()];
        for d in (0..dims.len().saturating_sub(1)).rev() {
            strides[d] = strides[d + 1] * dims[d + 1];
        }
        strides
    }

    fn visit_lines(&self, axis: usize, mut f: impl FnMut(&[Complex64])) {
        let dims: Vec<usize> = self.axes.iter().map(Axis::len).collect();
        let strides = self.strides();
        let n = dims[axis];
        let outer: usize = self.values.len() / n;
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for o in 0..outer {
            let base = line_base(o, axis, &dims, &strides);
            for (j, lv) in line.iter_mut().enumerate() {
                *lv = self.values[base + j * strides[axis]];
            }
            f(&line);
        }
    }

    /// Apply `f` to every 1-D line along `axis`, in place.
    pub fn map_lines(&mut self, axis: usize, mut f: impl FnMut(&mut [Complex64])) {
        let dims: Vec<usize> = self.axes.iter().map(Axis::len).collect();
        let strides = self.strides();
        let n = dims[axis];
        let outer: usize = self.values.len() / n;
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for o in 0..outer {
            let base = line_base(o, axis, &dims, &strides);
            for (j, lv) in line.iter_mut().enumerate() {
                *lv = self.values[base + j * strides[axis]];
            }
            f(&mut line);
            for (j, lv) in line.iter().enumerate() {
                self.values[base + j * strides[axis]] = *lv;
            }
        }
    }

    /// Band-limited translation: returns samples of `x ↦ f(x + a)` along
    /// `axis`, via a Fourier shift on the periodic extension.
    pub fn translate(&self, axis: usize, a: f64) -> GridFunction {
        let n = self.axes[axis].len();
        let h = self.axes[axis].spacing();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let mut out = self.clone();
        let scale = 1.0 / n as f64;
        out.map_lines(axis, |line| {
            fwd.process(line);
            for (k, v) in line.iter_mut().enumerate() {
                let omega = std_freq(k, n, h);
                *v *= Complex64::from_polar(1.0, omega * a);
            }
            inv.process(line);
            for v in line.iter_mut() {
                *v *= scale;
            }
        });
        out
    }

    /// Spectral derivative of the given order along `axis`.
    pub fn spectral_derivative(&self, axis: usize, order: u32) -> GridFunction {
        let n = self.axes[axis].len();
        let h = self.axes[axis].spacing();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let mut out = self.clone();
        let scale = 1.0 / n as f64;
        out.map_lines(axis, |line| {
            fwd.process(line);
            for (k, v) in line.iter_mut().enumerate() {
                // zero the unmatched Nyquist mode for odd derivatives
                if order % 2 == 1 && k == n / 2 {
                    *v = Complex64::new(0.0, 0.0);
                    continue;
                }
                let omega = std_freq(k, n, h);
                *v *= Complex64::new(0.0, omega).powu(order);
            }
            inv.process(line);
            for v in line.iter_mut() {
                *v *= scale;
            }
        });
        out
    }

    /// Centered Fourier transform along `axis` in the integral convention:
    /// `G(v_k) = amp · h Σ_j e^{-i s v_k x_j} f(x_j)`, with the output axis
    /// spacing `2π/(n h |s|)`. Negative `s` flips the output ordering.
    pub fn centered_transform(&self, axis: usize, s: f64, amp: f64) -> Result<GridFunction> {
        if s == 0.0 || !s.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "transform scale must be nonzero and finite, got {s}"
            )));
        }
        let n = self.axes[axis].len();
        let h = self.axes[axis].spacing();
        let out_axis = self.axes[axis].conjugate(s)?;
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        // e^{-iπn/2} for even n is ±1
        let corner = if n % 4 == 0 { 1.0 } else { -1.0 };
        let pre = amp * h * corner;
        let mut out = self.clone();
        out.map_lines(axis, |line| {
            for (j, v) in line.iter_mut().enumerate() {
                if j % 2 == 1 {
                    *v = -*v;
                }
            }
            fwd.process(line);
            for (k, v) in line.iter_mut().enumerate() {
                let sgn = if k % 2 == 1 { -pre } else { pre };
                *v *= sgn;
            }
            if s < 0.0 {
                // G(v) at scale s<0 equals the |s| transform evaluated at -v
                let copy = line.to_vec();
                for (k, v) in line.iter_mut().enumerate() {
                    *v = copy[(n - k) % n];
                }
            }
        });
        out.axes[axis] = out_axis;
        Ok(out)
    }

    /// Inverse of [`centered_transform`](Self::centered_transform):
    /// `f(x_j) = amp · h_v Σ_k e^{+i s v_k x_j} G(v_k)`.
    pub fn centered_inverse_transform(&self, axis: usize, s: f64, amp: f64) -> Result<GridFunction> {
        // e^{+isvx} forward in the conjugate variable is the s' = -s forward
        // transform read from the v-side
        self.centered_transform(axis, -s, amp)
    }
}

fn line_base(outer: usize, axis: usize, dims: &[usize], strides: &[usize]) -> usize {
    let mut rem = outer;
    let mut base = 0usize;
    for d in (0..dims.len()).rev() {
        if d == axis {
            continue;
        }
        let i = rem % dims[d];
        rem /= dims[d];
        base += i * strides[d];
    }
    base
}

/// Standard FFT frequency layout: `k < n/2 → k·2π/(nh)`, else negative.
fn std_freq(k: usize, n: usize, h: f64) -> f64 {
    let kk = if k < n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    };
    kk * 2.0 * std::f64::consts::PI / (n as f64 * h)
}
