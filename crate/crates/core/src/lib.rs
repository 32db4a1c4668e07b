//! Multiresolution analysis on the p-adic line with finite, exact-indexed
//! computations on coset grids.
//!
//! Points of `ℤ[1/p]` are exact ([`PAdicRational`]); locally constant,
//! compactly supported functions are vectors over coset grids
//! ([`TestFunction`]). Scaling functions are built from masks
//! ([`TrigPolynomial`]) through the finite product formula, certified
//! ([`mra`]), extended to dyadic wavelets ([`wavelet`]) and measured as frames
//! ([`frame`]). [`oracle`] holds the independent reference computations.

pub mod error;
pub mod fft;
pub mod fixtures;
pub mod frame;
pub mod grid;
pub mod io;
pub mod linalg;
pub mod mask;
pub mod mra;
pub mod oracle;
pub mod padic;
pub mod wavelet;

pub use error::{Error, Result};
pub use grid::{CosetGrid, TestFunction};
pub use mask::TrigPolynomial;
pub use mra::{MraReport, Scaling};
pub use padic::{enumerate_shifts, PAdicRational, RootOfUnity, Valuation};
