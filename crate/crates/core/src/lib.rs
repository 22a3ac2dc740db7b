//! Spectral computations for half-line Stark operators `-d^2/dx^2 + x + q(x)`
//! on `[0, inf)` with the boundary condition `phi'(0) = b * phi(0)`.
//!
//! The crate provides the numerical building blocks end to end: Airy function
//! evaluation and zeros ([`airy`]), envelope weights ([`weights`]), the
//! unperturbed fundamental system ([`basis`]), decaying potentials with
//! weighted norms ([`potential`]), a Picard/Volterra series solver
//! ([`volterra`]), a backward-shooting eigensolver ([`shoot`]), and sharp
//! asymptotic predictors for eigenvalues and norming constants ([`asym`]).
//!
//! Everything is `no_std`-compatible (with `alloc`); I/O, file formats, and
//! the command-line front end live in the companion `stark-spectra` crate.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(a <= tol)` guards reject NaN along with out-of-range values; the
// positive comparisons clippy suggests would wave NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Stage loops in the RK and quadrature kernels index several arrays in
// lockstep at a fixed dimension; zipped iterators read worse there.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod airy;
pub mod asym;
pub mod basis;
pub mod ode;
pub mod potential;
pub mod quad;
pub mod roots;
pub mod shoot;
pub mod volterra;
pub mod weights;

#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
