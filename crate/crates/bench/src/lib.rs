//! Fixtures shared by the benchmarks.

use choreo::series::{Domain, NormParams, Rational};
use choreo::solver::{continue_branch, BranchCandidate, NewtonOptions};

/// A continued branch over `domain` at `ν = 11/10`.
pub fn branch(k: usize, n: usize, domain: Domain) -> BranchCandidate {
    let p = NormParams::new(Rational::new(11, 10).unwrap(), k, n).unwrap();
    continue_branch(&p, domain, &NewtonOptions::default()).expect("continuation")
}
