//! Recursive ("ladder") quantum circuits and the classical transforms they realize.
//!
//! The crate is organized bottom-up:
//!
//! * [`numerics`]: dense complex matrices and state vectors (row-major, qubit 1 is the
//!   most significant bit of every basis label).
//! * [`gates`]: single- and two-qubit gate constructors and the gate-set config language.
//! * [`circuit`]: ladder circuit construction, gate-streamed application and dense
//!   realization.
//! * [`transforms`]: DFT, radix-2 FFT, twiddle diagonals and the matrix recursion.
//! * [`analysis`]: sparsity, global-phase equivalence, gate-count audits, norms and
//!   timing reports.
//!
//! Data-parallel loops run on rayon when the `parallel` feature is enabled (the default).
//! Every such loop also has a sequential path selected through [`Execution`].

pub mod analysis;
pub mod circuit;
mod error;
mod exec;
pub mod gates;
pub mod numerics;
pub mod report;
pub mod transforms;

pub use error::{Error, Result};
pub use exec::Execution;
pub use numerics::{Complex, DenseMatrix, StateVector, Tolerance};
