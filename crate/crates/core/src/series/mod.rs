//! Fourier–Chebyshev sequence spaces: coefficient containers, weighted
//! ℓ¹ norms, products and the structural operators.

mod cheb;
pub mod dct;
mod fourier;
mod fourier_cheb;
mod params;
mod symmetry;

pub use cheb::ChebSeries;
pub use dct::cheb_transform;
pub use fourier::FourierSlice;
pub use fourier_cheb::{cplx_abs, FourierCheb};
pub use params::{tail_derivative_bound, Domain, NormParams, Rational, Weights};
pub use symmetry::{Kind, Parity, SymClass};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("parameter [{lo}, {hi}] outside the domain [{dlo}, {dhi}]")]
    OmegaOutOfDomain { lo: f64, hi: f64, dlo: f64, dhi: f64 },
    #[error("weight ν = {0} must exceed 1")]
    NuTooSmall(f64),
    #[error("{0}")]
    Format(String),
}
