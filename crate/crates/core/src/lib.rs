//! Numerical toolkit for random Hermite series of the harmonic oscillator
//! `H = -Δ + |x|²`.
//!
//! The crate is split along the lines of the computation:
//!
//! - [`special_fn`]: overflow-safe Hermite and Laguerre functions, radial
//!   eigenfunctions and the uniform Laguerre envelope.
//! - [`spectral`]: eigenvalue buckets, coefficient rules, coefficient-space
//!   norms and summability conditions, the spectral function.
//! - [`random_series`]: counter-based noise, sampled partial sums, sup norms,
//!   moduli of continuity and the Monte Carlo sup-norm experiments.
//! - [`lp_analysis`]: `L^p` norms of radial Hermite functions, log-log rate
//!   fits, the critical convergence exponent and the square function.
//! - [`experiments`]: configuration, orchestration and CSV/JSON reports used
//!   by the `verify` binary.

pub mod error;
pub mod experiments;
pub mod lp_analysis;
pub mod quadrature;
pub mod random_series;
pub mod special_fn;
pub mod spectral;
pub mod stats;

pub use error::{Error, Result};
