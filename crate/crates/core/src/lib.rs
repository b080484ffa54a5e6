//! Jacobi–Sobolev orthogonal polynomials.
//!
//! Builds the monic polynomials orthogonal with respect to a Jacobi measure
//! plus discrete derivative masses outside `(-1, 1)`, their ladder operators
//! and second-order differential equation, and classifies the zero
//! configuration as a critical point of a logarithmic energy.

pub mod electrostatics;
pub mod error;
pub mod jacobi;
pub mod ladder;
pub mod numkernel;
pub mod sobolev;

pub use error::{Error, Result};
