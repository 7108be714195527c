//! Randomized oracle-equivalence checks and the benchmark sweep, shared by
//! the command-line front end and the test suites.

pub mod bench;
pub mod check;

/// `|a - b| <= tol * max(|a|, |b|)`, with exact equality required at zero.
pub fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}
