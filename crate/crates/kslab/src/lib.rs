//! Numerical laboratory for the Cauchy and Kerzman-Stein operators on
//! planar curves.
//!
//! The crate discretizes the Kerzman-Stein operator A = C - C* (the skew
//! part of the Cauchy transform) on closed piecewise-C1 boundaries and
//! open curve systems, and verifies its spectral structure at desk scale:
//!
//! * the exact spectrum i[-sup phi, sup phi] of a symmetric wedge, with
//!   phi(xi) = sinh[xi(pi - 2 theta)]/cosh(xi pi);
//! * the essential spectrum of a cornered region, determined by the
//!   sharpest corner alone;
//! * comb-shaped curve families whose operator norm grows like sqrt(n)
//!   while every piece stays smooth;
//! * the Cauchy/Szego projection identities C = C_0 + I/2 and
//!   S = C (I + A)^{-1} on smooth closed curves;
//! * residual and perturbation bounds for graphs x + i(M|x| + p(x)) under
//!   C1 perturbation of p.
//!
//! Assembly is data-parallel over matrix columns when the `parallel`
//! feature (default) is enabled; every entry is a pure function of node
//! data, so results are identical between the parallel and sequential
//! paths.

pub mod comb;
pub mod error;
pub mod geometry;
pub mod kernels;
pub mod linalg;
pub mod mesh;
pub mod perturb;
pub mod projections;
pub mod quadrature;
pub mod spectra;

pub use error::{KsError, Result};
