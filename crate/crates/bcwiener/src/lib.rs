//! Bicomplex Wiener-algebra toolkit.
//!
//! Numerical building blocks for matrix-valued functions on the bicomplex
//! unit "circle" ∂𝕂 = { e^{it} e^{js} }:
//!
//! * [`bicomplex`]: scalar algebra in cartesian and idempotent form,
//!   conjugations, norms, boundary points;
//! * [`bcmatrix`]: bicomplex matrices, positivity, and the ♯-symmetric
//!   complex embedding of doubled size;
//! * [`series`]: truncated Laurent (Wiener) series with evaluation,
//!   ring operations, causal projections, and DFT coefficient recovery;
//! * [`spectral`]: Wiener inversion and spectral factorization, through
//!   the idempotent channels or the ♯-symmetric complex route;
//! * [`realization`]: rational functions as state-space realizations,
//!   Riesz projections, Fourier coefficients, and the Stein equation;
//! * [`superosc`]: superoscillatory sequences and band-limited
//!   approximation of Wiener elements;
//! * [`jsonio`]: the JSON wire formats used by the `bcw` command-line
//!   tool.
//!
//! Values are immutable and operations are pure functions, safe to share
//! across threads; grid sweeps parallelize internally via rayon.

pub mod bcmatrix;
pub mod bicomplex;
pub mod cmatrix;
mod error;
pub mod jsonio;
pub mod realization;
pub mod series;
pub mod spectral;
pub mod superosc;

pub use error::{Error, Result};
