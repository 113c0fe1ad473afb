//! Rigorous scalar arithmetic: intervals, elementary functions and the
//! [`Scalar`] abstraction shared by float and interval code paths.

mod elementary;
mod interval;
mod scalar;

pub use elementary::{cbrt, cos, cos_pi_frac, exp_phase, int_pow, pi, sin, sqrt3};
pub use interval::{prod_up, quot_up, root_up, sum_up, Interval};
pub use scalar::{Cplx, Scalar};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RigorError {
    #[error("invalid interval endpoints [{lo}, {hi}]")]
    InvalidEndpoints { lo: f64, hi: f64 },
    #[error("division by an interval containing zero: [{lo}, {hi}]")]
    DivisionByZero { lo: f64, hi: f64 },
    #[error("square root of an interval with negative lower bound {lo}")]
    NegativeSqrt { lo: f64 },
}
