//! Geometry of the quantum angle on complex projective space.
//!
//! The crate computes and classifies alpha-sets (all lines at a fixed quantum
//! angle from a given set), double-alpha-sets, circles and highly symmetric
//! sets, and Wigner symmetries, and checks every closed form against an
//! independent brute-force oracle.

// `!(x > y)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alphasets;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod projspace;
pub mod suites;
pub mod symmetric_sets;
pub mod tol;
pub mod wigner;

pub use error::{Error, Result};
pub use linalg::{UnitVector, C64};
pub use projspace::{
    canonical_line, canonical_pair_form, canonical_triple_form, is_collinear, quantum_angle, Angle, Line,
    PairCanonicalForm, TripleCanonicalForm,
};
