//! Orbit hypergraphs of split symmetric spaces, their harmonic functions,
//! and the Steinberg distinction verdicts they encode, checked against a
//! dual group criterion.

#![allow(clippy::needless_range_loop)]

pub mod linalg;
pub mod root_system;
pub mod involution;
pub mod hypergraph;
pub mod cyclotomic;
pub mod affine;
pub mod dual_group;
pub mod catalog;
pub mod random;
pub mod checks;
pub mod cli;
