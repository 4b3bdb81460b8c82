//! Scalars, dense linear algebra, finite differences and quadrature.

mod complex;
mod ctx;
pub mod exact;
mod fd;
mod jet;
mod matrix;
mod quad;
mod real;

pub use complex::Complex;
pub use ctx::PrecisionCtx;
pub use exact::{det_exact, nullspace_exact, Rational};
pub use fd::{fd_derivative, DerivOrder, Derivative};
pub use jet::Jet;
pub use matrix::{det, solve, LuFactors, Matrix, Scalar, Solved};
pub use quad::{quad_nd, quad_product, GaussLegendre, Quadrature};
pub use real::Real;
