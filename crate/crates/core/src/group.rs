//! The Heisenberg group `H₁`, the six-dimensional two-step nilpotent group
//! `N`, their Lie-algebra structure, the unitary representations `ρ_λ`,
//! `π_λ`, `π_{λ₁,ω}` acting on sampled functions, and the coadjoint-orbit
//! classifier.
//!
//! Grid translations inside the representations use band-limited Fourier
//! shifts; derivatives in the infinitesimal actions are spectral.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::quadform::Lambda;

/// Tolerance below which a λ component counts as zero in the orbit
/// classifier; floating-point inputs near a stratum boundary must classify
/// deterministically.
pub const ORBIT_ZERO_TOL: f64 = 1e-12;

/// Allowed translation overhang, as a fraction of the axis half-width.
const TRANSLATION_MARGIN: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H1Element {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

/// `(x,y,t)(x',y',t') = (x+x', y+y', t+t'+(xy'-x'y)/2)`.
pub fn h1_multiply(a: H1Element, b: H1Element) -> H1Element {
    H1Element {
        x: a.x + b.x,
        y: a.y + b.y,
        t: a.t + b.t + 0.5 * (a.x * b.y - b.x * a.y),
    }
}

pub fn h1_inverse(a: H1Element) -> H1Element {
    H1Element {
        x: -a.x,
        y: -a.y,
        t: -a.t,
    }
}

/// Element of `N` in exponential coordinates: `v = (x₁, y₁, x₂, y₂)` in the
/// generating layer, `z = (z₁, z₂)` in the center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NElement {
    pub v: [f64; 4],
    pub z: [f64; 2],
}

impl NElement {
    pub fn identity() -> Self {
        NElement {
            v: [0.0; 4],
            z: [0.0; 2],
        }
    }

    pub fn inverse(&self) -> Self {
        NElement {
            v: [-self.v[0], -self.v[1], -self.v[2], -self.v[3]],
            z: [-self.z[0], -self.z[1]],
        }
    }
}

/// Group law of `N`.
pub fn n_multiply(a: NElement, b: NElement) -> NElement {
    let [x1, y1, x2, y2] = a.v;
    let [xp1, yp1, xp2, yp2] = b.v;
    NElement {
        v: [x1 + xp1, y1 + yp1, x2 + xp2, y2 + yp2],
        z: [
            a.z[0] + b.z[0] + 0.5 * (x1 * yp1 - xp1 * y1),
            a.z[1] + b.z[1] + 0.5 * (x1 * xp2 - x2 * xp1) + 0.5 * (y1 * yp2 - y2 * yp1),
        ],
    }
}

/// Element of the Lie algebra 𝔫 with coordinates on `(X₁,Y₁,X₂,Y₂,T₁,T₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraElement(pub [f64; 6]);

/// Bilinear extension of `[X₁,Y₁]=T₁`, `[X₁,X₂]=[Y₁,Y₂]=T₂`; the result
/// lies in the center.
pub fn bracket(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement {
    let a = a.0;
    let b = b.0;
    let t1 = a[0] * b[1] - a[1] * b[0];
    let t2 = (a[0] * b[2] - a[2] * b[0]) + (a[1] * b[3] - a[3] * b[1]);
    AlgebraElement([0.0, 0.0, 0.0, 0.0, t1, t2])
}

/// Linear form `ℓ = (ω, λ)` on 𝔫; unlike [`Lambda`], `λ₂ = 0` is allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearForm {
    pub omega: [f64; 4],
    pub lambda: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    Generic,
    Intermediate,
    Character,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitRepresentative {
    pub kind: OrbitKind,
    pub form: LinearForm,
}

/// Matrix of `j_z` on the basis `(X₁,Y₁,X₂,Y₂)`; its determinant is `z₂⁴`.
pub fn jz_matrix(z: [f64; 2]) -> [[f64; 4]; 4] {
    let (z1, z2) = (z[0], z[1]);
    [
        [0.0, z1, z2, 0.0],
        [-z1, 0.0, 0.0, z2],
        [-z2, 0.0, 0.0, 0.0],
        [0.0, -z2, 0.0, 0.0],
    ]
}

/// Coadjoint action: `ℓ ∘ Ad(n⁻¹) = (ω + j_λ(v₀), λ)`.
pub fn coadjoint_act(ell: LinearForm, n: NElement) -> LinearForm {
    let j = jz_matrix(ell.lambda);
    let mut omega = ell.omega;
    for (row, w) in j.iter().zip(omega.iter_mut()) {
        *w += row.iter().zip(n.v.iter()).map(|(a, b)| a * b).sum::<f64>();
    }
    LinearForm {
        omega,
        lambda: ell.lambda,
    }
}

/// Canonical orbit representative of `ℓ`, per the three strata:
/// generic (`λ₂ ≠ 0`), intermediate (`λ₂ = 0, λ₁ ≠ 0`), character (`λ = 0`).
pub fn classify_orbit(ell: LinearForm) -> OrbitRepresentative {
    let l1 = if ell.lambda[0].abs() <= ORBIT_ZERO_TOL {
        0.0
    } else {
        ell.lambda[0]
    };
    let l2 = if ell.lambda[1].abs() <= ORBIT_ZERO_TOL {
        0.0
    } else {
        ell.lambda[1]
    };
    if l2 != 0.0 {
        OrbitRepresentative {
            kind: OrbitKind::Generic,
            form: LinearForm {
                omega: [0.0; 4],
                lambda: [l1, l2],
            },
        }
    } else if l1 != 0.0 {
        // range(j_λ) = span{X₁,Y₁}, so only the X₂,Y₂ components survive
        OrbitRepresentative {
            kind: OrbitKind::Intermediate,
            form: LinearForm {
                omega: [0.0, 0.0, ell.omega[2], ell.omega[3]],
                lambda: [l1, 0.0],
            },
        }
    } else {
        OrbitRepresentative {
            kind: OrbitKind::Character,
            form: LinearForm {
                omega: ell.omega,
                lambda: [0.0, 0.0],
            },
        }
    }
}

fn check_translation(f: &GridFunction, axis: usize, shift: f64) -> Result<()> {
    let r = f.axes()[axis].half_width();
    if shift.abs() > TRANSLATION_MARGIN * r {
        return Err(Error::Domain(format!(
            "translation {shift} exceeds the padding margin {} of axis {axis}",
            TRANSLATION_MARGIN * r
        )));
    }
    Ok(())
}

/// `ρ_λ(v,z)` acting on a 2-D grid function over `(x,y)`.
pub fn rep_rho(lambda: Lambda, n: &NElement, f: &GridFunction) -> Result<GridFunction> {
    if f.dim() != 2 {
        return Err(Error::InvalidParameter("rep_rho expects a 2-D grid".into()));
    }
    let [x1, y1, x2, y2] = n.v;
    let [z1, z2] = n.z;
    check_translation(f, 0, x1)?;
    check_translation(f, 1, y1)?;
    let (l1, l2) = (lambda.lambda1(), lambda.lambda2());
    let mut out = f.translate(0, x1).translate(1, y1);
    out.map_with_coords(|c, v| {
        let (x, y) = (c[0], c[1]);
        let phase = l1 * (z1 + 0.5 * (x * y1 - x1 * y))
            + l2 * (z2 + x * x2 + y * y2 + 0.5 * x1 * x2 + 0.5 * y1 * y2);
        v * Complex64::from_polar(1.0, phase)
    });
    Ok(out)
}

/// `π_λ(v,z)` acting on a 2-D grid function over `(u₁,u₂)`.
///
/// The translated argument is `h(u₁+x₁, u₂+y₂)`; this is the reading under
/// which `π_λ` is a homomorphism.
pub fn rep_pi(lambda: Lambda, n: &NElement, f: &GridFunction) -> Result<GridFunction> {
    if f.dim() != 2 {
        return Err(Error::InvalidParameter("rep_pi expects a 2-D grid".into()));
    }
    let [x1, y1, x2, y2] = n.v;
    let [t1, t2] = n.z;
    check_translation(f, 0, x1)?;
    check_translation(f, 1, y2)?;
    let (l1, l2) = (lambda.lambda1(), lambda.lambda2());
    let mut out = f.translate(0, x1).translate(1, y2);
    out.map_with_coords(|c, v| {
        let (u1, u2) = (c[0], c[1]);
        let phase = l1 * (t1 + u1 * y1 + 0.5 * x1 * y1)
            + l2 * (t2 + u1 * x2 - u2 * y1 + 0.5 * x1 * x2 - 0.5 * y1 * y2);
        v * Complex64::from_polar(1.0, phase)
    });
    Ok(out)
}

/// `π_{λ₁,ω}(v,z)` for the intermediate stratum, acting on a 1-D grid
/// function. `omega` holds the `(X₂, Y₂)` components of ω.
pub fn rep_pi_intermediate(
    lambda1: f64,
    omega: [f64; 2],
    n: &NElement,
    f: &GridFunction,
) -> Result<GridFunction> {
    if lambda1 == 0.0 {
        return Err(Error::InvalidParameter("lambda1 must be nonzero".into()));
    }
    if f.dim() != 1 {
        return Err(Error::InvalidParameter(
            "rep_pi_intermediate expects a 1-D grid".into(),
        ));
    }
    let [x1, y1, x2, y2] = n.v;
    let t1 = n.z[0];
    check_translation(f, 0, x1)?;
    let pairing = omega[0] * x2 + omega[1] * y2;
    let mut out = f.translate(0, x1);
    out.map_with_coords(|c, v| {
        let phase = lambda1 * (t1 + c[0] * y1 + 0.5 * x1 * y1) + pairing;
        v * Complex64::from_polar(1.0, phase)
    });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisElement {
    X1,
    Y1,
    X2,
    Y2,
    T1,
    T2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    Rho,
    Pi,
}

/// Infinitesimal action `dρ_λ` / `dπ_λ` of a basis element on a 2-D grid
/// function.
pub fn infinitesimal(
    lambda: Lambda,
    basis: BasisElement,
    rep: RepKind,
    f: &GridFunction,
) -> Result<GridFunction> {
    if f.dim() != 2 {
        return Err(Error::InvalidParameter(
            "infinitesimal expects a 2-D grid".into(),
        ));
    }
    let (l1, l2) = (lambda.lambda1(), lambda.lambda2());
    let i = Complex64::new(0.0, 1.0);
    let scaled = |g: &GridFunction, w: fn(&[f64], f64, f64) -> f64, l1: f64, l2: f64| {
        let mut out = g.clone();
        out.map_with_coords(|c, v| v * i * w(c, l1, l2));
        out
    };
    let out = match (rep, basis) {
        (RepKind::Rho, BasisElement::X1) => {
            let mut d = f.spectral_derivative(0, 1);
            d.add_weighted(f, |c| -i * 0.5 * l1 * c[1]);
            d
        }
        (RepKind::Rho, BasisElement::Y1) => {
            let mut d = f.spectral_derivative(1, 1);
            d.add_weighted(f, |c| i * 0.5 * l1 * c[0]);
            d
        }
        (RepKind::Rho, BasisElement::X2) => scaled(f, |c, _, l2| l2 * c[0], l1, l2),
        (RepKind::Rho, BasisElement::Y2) => scaled(f, |c, _, l2| l2 * c[1], l1, l2),
        (RepKind::Pi, BasisElement::X1) => f.spectral_derivative(0, 1),
        (RepKind::Pi, BasisElement::Y1) => {
            scaled(f, |c, l1, l2| l1 * c[0] - l2 * c[1], l1, l2)
        }
        (RepKind::Pi, BasisElement::X2) => scaled(f, |c, _, l2| l2 * c[0], l1, l2),
        (RepKind::Pi, BasisElement::Y2) => f.spectral_derivative(1, 1),
        (_, BasisElement::T1) => {
            let mut out = f.clone();
            out.scale(i * l1);
            out
        }
        (_, BasisElement::T2) => {
            let mut out = f.clone();
            out.scale(i * l2);
            out
        }
    };
    Ok(out)
}

/// `dπ_λ(𝓛) f = (-∂²_{u₁} - ∂²_{u₂} + (λ₁u₁ - λ₂u₂)² + (λ₂u₁)²) f`,
/// derivatives taken spectrally.
pub fn sublaplacian_pi(lambda: Lambda, f: &GridFunction) -> Result<GridFunction> {
    if f.dim() != 2 {
        return Err(Error::InvalidParameter(
            "sublaplacian_pi expects a 2-D grid".into(),
        ));
    }
    let (l1, l2) = (lambda.lambda1(), lambda.lambda2());
    let d1 = f.spectral_derivative(0, 2);
    let d2 = f.spectral_derivative(1, 2);
    let mut out = f.clone();
    out.map_with_coords(|c, v| {
        let (u1, u2) = (c[0], c[1]);
        let pot = (l1 * u1 - l2 * u2).powi(2) + (l2 * u1).powi(2);
        v * pot
    });
    out.add_scaled(Complex64::new(-1.0, 0.0), &d1);
    out.add_scaled(Complex64::new(-1.0, 0.0), &d2);
    Ok(out)
}

/// `-Σ_A d(rep)(A)² f` over the generating layer `A ∈ {X₁,Y₁,X₂,Y₂}`,
/// assembled from [`infinitesimal`].
pub fn sublaplacian(lambda: Lambda, rep: RepKind, f: &GridFunction) -> Result<GridFunction> {
    let mut acc = GridFunction::zeros(f.axes().to_vec())?;
    for basis in [
        BasisElement::X1,
        BasisElement::Y1,
        BasisElement::X2,
        BasisElement::Y2,
    ] {
        let once = infinitesimal(lambda, basis, rep, f)?;
        let twice = infinitesimal(lambda, basis, rep, &once)?;
        acc.add_scaled(Complex64::new(-1.0, 0.0), &twice);
    }
    Ok(acc)
}
