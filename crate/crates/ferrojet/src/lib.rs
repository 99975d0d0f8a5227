//! Numerical toolkit for axisymmetric solitary waves on a ferrofluid jet
//! surrounding a current-carrying wire.

pub mod specfun;
pub mod magnetisation;
pub mod spectrum;
pub mod coefficients;
pub mod reduced;
pub mod profiles;
pub mod verify;

mod banded;
