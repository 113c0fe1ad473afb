//! Validated numerics for the equal-mass three-body choreography branch
//! joining the Lagrange triangle to the figure eight.

pub mod matrix;
pub mod rigor;
pub mod model;
pub mod io;
pub mod orbit;
pub mod prover;
pub mod series;
pub mod shape;
pub mod solver;

pub use rigor::{Cplx, Interval, RigorError, Scalar};
