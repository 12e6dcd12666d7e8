//! Closed-form eigenvalues `ν_λ,m` and eigenfunctions `h_λ,m` of the
//! diagonalized oscillator `-Δ + uᵗ M_λ u`.

use crate::error::{Error, Result};
use crate::hermite;
use crate::quadform::{self, Lambda, QuadFormDiag};

/// Mode index `m = (m₊, m₋) ∈ ℕ²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex {
    pub m_plus: usize,
    pub m_minus: usize,
}

impl ModeIndex {
    pub fn new(m_plus: usize, m_minus: usize) -> Result<Self> {
        if m_plus > hermite::DEGREE_CAP || m_minus > hermite::DEGREE_CAP {
            return Err(Error::UnsupportedDegree {
                degree: m_plus.max(m_minus),
                cap: hermite::DEGREE_CAP,
            });
        }
        Ok(Self { m_plus, m_minus })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EigenPair {
    pub lambda: Lambda,
    pub mode: ModeIndex,
    pub eigenvalue: f64,
}

/// `ν_λ,m = √μ₊ (2m₊+1) + √μ₋ (2m₋+1)`.
pub fn eigenvalue(lambda: Lambda, mode: ModeIndex) -> f64 {
    let d = quadform::diagonalize(lambda);
    eigenvalue_from_diag(&d, mode)
}

pub fn eigenvalue_from_diag(diag: &QuadFormDiag, mode: ModeIndex) -> f64 {
    diag.mu_plus.sqrt() * (2.0 * mode.m_plus as f64 + 1.0)
        + diag.mu_minus.sqrt() * (2.0 * mode.m_minus as f64 + 1.0)
}

/// The `count` smallest eigenvalues with their modes, sorted ascending,
/// ties broken by lexicographic mode order.
pub fn enumerate_spectrum(lambda: Lambda, count: usize) -> Result<Vec<EigenPair>> {
    if count == 0 || count > 10_000 {
        return Err(Error::InvalidParameter(format!(
            "count must lie in 1..=10000, got {count}"
        )));
    }
    let d = quadform::diagonalize(lambda);
    let (sp, sm) = (d.mu_plus.sqrt(), d.mu_minus.sqrt());

    // grow a candidate box until it certainly contains the `count` smallest
    let mut cap = 2 * count + 2;
    loop {
        let bound_plus = ((cap as f64) / (2.0 * sp)).ceil() as usize + 1;
        let bound_minus = ((cap as f64) / (2.0 * sm)).ceil() as usize + 1;
        let mut pairs: Vec<EigenPair> = Vec::new();
        for mp in 0..=bound_plus.min(hermite::DEGREE_CAP) {
            for mm in 0..=bound_minus.min(hermite::DEGREE_CAP) {
                let mode = ModeIndex {
                    m_plus: mp,
                    m_minus: mm,
                };
                pairs.push(EigenPair {
                    lambda,
                    mode,
                    eigenvalue: eigenvalue_from_diag(&d, mode),
                });
            }
        }
        pairs.sort_by(|a, b| {
            a.eigenvalue
                .total_cmp(&b.eigenvalue)
                .then(a.mode.cmp(&b.mode))
        });
        if pairs.len() >= count && pairs[count - 1].eigenvalue <= cap as f64 {
            pairs.truncate(count);
            return Ok(pairs);
        }
        cap *= 2;
    }
}

/// Unit-L²-norm eigenfunction value at `u`:
/// `(μ₊μ₋)^{1/8} ĥ_{m₊}(μ₊^{1/4} u₁') ĥ_{m₋}(μ₋^{1/4} u₂')`.
pub fn eigenfunction(lambda: Lambda, mode: ModeIndex, u: [f64; 2]) -> Result<f64> {
    let d = quadform::diagonalize(lambda);
    eigenfunction_from_diag(&d, mode, u)
}

pub fn eigenfunction_from_diag(diag: &QuadFormDiag, mode: ModeIndex, u: [f64; 2]) -> Result<f64> {
    let up = quadform::to_principal_axes(diag, u);
    let a_plus = diag.mu_plus.powf(0.25);
    let a_minus = diag.mu_minus.powf(0.25);
    let norm = (diag.mu_plus * diag.mu_minus).powf(0.125);
    Ok(norm
        * hermite::hermite_function(mode.m_plus, a_plus * up[0], true)?
        * hermite::hermite_function(mode.m_minus, a_minus * up[1], true)?)
}
