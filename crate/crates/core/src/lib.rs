//! Spectral Galerkin solver for the spatially homogeneous Landau equation
//! with Maxwellian molecules.
//!
//! The fluctuation `g` around the Maxwellian is expanded in the joint
//! eigenbasis `φ_{n,l,m}` of the harmonic oscillator and the sphere
//! Laplacian. In that basis the linearized collision operator is diagonal and
//! the bilinear operator couples shell `k = 2n+l` only to shells `k-1` and
//! `k-2` through a handful of driver modes, so the nonlinear evolution on the
//! orthogonal complement of the collision invariants reduces to a linear
//! cascade that can be solved in closed form.
//!
//! Module map:
//!
//! - [`specfun`]: Gamma, Laguerre, Legendre, spherical harmonics, quadrature.
//! - [`basis`]: mode indexing, eigenfunctions, projections, Shubin and
//!   Gelfand-Shilov norms, coefficient CSV files.
//! - [`coupling`]: Gaunt integrals, coupling coefficients, the precomputed
//!   [`coupling::CouplingTensor`] and its disk cache.
//! - [`operator`]: linear and bilinear operators in coefficient space plus
//!   Fourier-side and moment-integral oracles.
//! - [`solver`]: exact shell cascade, ETD-RK4 / RK4 integrators, diagnostics.
//! - [`cli`]: run configuration, initial data, batch runs and `verify`.

pub mod basis;
pub mod cli;
pub mod coupling;
mod error;
pub mod operator;
pub mod solver;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;
