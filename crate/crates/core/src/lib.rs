//! Spectral theory of the Heisenberg oscillator `L + λ₂²(x²+y²)` on the
//! Heisenberg group `H₁`.
//!
//! The library provides:
//! - stable Hermite polynomial/function evaluation and Gauss–Hermite
//!   quadrature ([`hermite`]),
//! - diagonalization of the quadratic potential ([`quadform`]) and the
//!   resulting closed-form eigenvalues/eigenfunctions ([`eigensystem`]),
//! - the six-dimensional nilpotent group `N`, its representations and
//!   coadjoint-orbit classification ([`group`]),
//! - the partial Fourier transform in the central variable and the unitary
//!   intertwiner between the two representation models ([`transforms`]),
//! - Mehler-type heat kernels and heat-semigroup application ([`kernels`]),
//! - spectral coefficients and the spectral resolution ([`spectral`]),
//! - an independent finite-difference eigensolver used as ground truth
//!   ([`oracle`]),
//! - named verification suites producing machine-readable reports
//!   ([`verify`], [`report`]).

pub mod eigensystem;
pub mod error;
pub mod grid;
pub mod group;
pub mod hermite;
pub mod kernels;
pub mod oracle;
pub mod quadform;
pub mod report;
pub mod spectral;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use quadform::{Lambda, QuadFormDiag};
