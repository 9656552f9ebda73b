//! Criticality of semilinear variational systems via scaling symmetries.
//!
//! The crate decides whether a dilation is a variational symmetry of a
//! Lagrangian, solves for the scaling weights and the critical exponents,
//! and assembles Pokhozhaev-type identities from the Noether identity.

pub mod analysis;
pub mod catalog;
pub mod cli;
pub mod dsl;
pub mod expr;
pub mod jet;
pub mod model;
pub mod noether;
pub mod numcheck;
pub mod report;
pub mod scaling;
