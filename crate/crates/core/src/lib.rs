//! Finite sections of classical operators on Hilbert space and their square
//! roots: the shift and its square, analytic Toeplitz operators, the Volterra
//! operator and the compressed shift it is unitarily equivalent to,
//! `½(S + S*)`, the Hilbert matrix and the Cesàro matrix.
//!
//! [`verify`] turns each operator identity into a residual report on
//! truncations; [`suite`] runs the full set of checks.

pub mod cli;
pub mod error;
pub mod matrixcore;
pub mod operators;
pub mod quadrature;
pub mod roots;
pub mod series;
pub mod suite;
pub mod verify;

pub use error::{Error, Result};
pub use matrixcore::ComplexMatrix;
pub use series::PowerSeries;
