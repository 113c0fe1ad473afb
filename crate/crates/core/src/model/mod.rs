//! The zero-finding map of the desingularized choreography problem, its
//! linearization and the symmetry operators.

pub mod jacobian;
pub mod layout;
pub mod residual;
pub mod state;

pub use jacobian::{jacobian_slice, Linearization};
pub use layout::{Basis, Entry, Field, Layout, Slices, FIELDS};
pub use residual::{residual_conforms, residual_slice, Point};
pub use state::State;
