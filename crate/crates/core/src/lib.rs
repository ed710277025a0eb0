//! Orthogonal polynomials on the unit circle parameterized by a real sequence
//! `c_n` and a positive chain sequence `d_n`.
//!
//! The crate converts between that parameterization and Verblunsky
//! coefficients, evaluates the associated polynomial families, locates the
//! zeros of the para-orthogonal polynomials, builds the discrete measures
//! they generate, and computes the full spectral picture for periodic
//! coefficients.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bijection;
pub mod chain;
pub mod error;
pub mod example;
pub mod io;
pub mod measure;
pub mod periodic;
pub mod poly;
pub mod quad;
pub mod transforms;
pub mod zeros;

pub use bijection::{pair_to_verblunsky, tau_from_c, verblunsky_to_pair, SequencePair, VerblunskySequence};
pub use chain::{ChainSequence, MaximalOptions, MaximalParameters};
pub use error::{Error, Result};
pub use num_complex::Complex64;
