//! Reproducing kernels of Paley-Wiener spaces with prescribed imaginary
//! zeros, the Krein μ-functions attached to them, and the nonlinear system
//! and Painlevé VI equation obeyed by the arithmetic-progression case.
//!
//! Everything is evaluated in software-extended precision controlled by a
//! [`PrecisionCtx`]. Identity checks produce [`ResidualReport`] records.
#![no_std]

extern crate alloc;

pub mod detid;
pub mod error;
pub mod krein;
pub mod numerics;
pub mod painleve;
pub mod pwspace;
pub mod report;
pub mod wronskian;

pub use error::{Error, Result};
pub use numerics::{Complex, Matrix, PrecisionCtx, Rational, Real};
pub use report::{ResidualReport, ToleranceMode, C64};
