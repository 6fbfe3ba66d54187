//! Dense-matrix oracle shared with the core crate's unit tests.

pub use gqht::*;

#[path = "../../../core/src/oracle.rs"]
pub mod oracle;
