//! CHSH tests on individual bits of photon counts.
//!
//! A two-mode squeezed vacuum is prepared, each mode gets a local
//! displacement or squeeze, and both photon numbers are read out. The `y`-th
//! binary digit of each count is treated as a ±1 outcome, and the CHSH
//! combination `S` of four such settings is compared with the local bound 2.
//!
//! - [`analytic`]: closed-form count probabilities and whole grids
//! - [`fock`]: brute-force truncated Fock-space states, used as the oracle
//! - [`bitcorr`]: bit correlators of a joint count distribution
//! - [`chsh`]: `S` for setting quads, scans along `J` and maximisation
//! - [`lie`]: the operator reordering identities behind the closed forms
//! - [`cli`]: configuration, output formats and verification suites of the
//!   `bitbell` binary

pub mod analytic;
pub mod bitcorr;
pub mod chsh;
pub mod cli;
pub mod error;
pub mod fock;
pub mod lie;
pub mod linalg;

pub use error::{Error, Result};
