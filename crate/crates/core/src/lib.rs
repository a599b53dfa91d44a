//! Construction and verification toolkit for balanced monotone 3-SAT.
//!
//! The crate builds the enforcer gadgets and the unsatisfiable instance of
//! Monotone 3-SAT-(2,2), runs the reductions into that class and the
//! monotonization pipelines for balanced ∀∃ 3-SAT, solves the
//! always-satisfiable NAE special case constructively, and re-runs the local
//! search used to mine gadgets. Everything is checkable with the embedded
//! CDCL solver and DRUP checker.

pub mod formula;
pub mod gadgets;
pub mod generate;
pub mod golden;
pub mod miner;
pub mod nae;
pub mod qbf;
pub mod reduction;
pub mod sat;
pub mod selftest;
