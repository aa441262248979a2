//! Exact computer algebra for commutative rings of partial differential
//! operators.
//!
//! The crate is layered: exact scalars, polynomials, truncated power series
//! and windowed Laurent series at the bottom ([`scalar`], [`poly`],
//! [`series`], [`laurent`]); differential operators and their symbols in
//! [`diffop`]; and the analyses built on top ([`spectral`], [`schur`],
//! [`glue`], [`cmtools`]). [`selftest`] holds the end-to-end checks that the
//! `pdo selftest` command and the acceptance test run.

pub mod cmtools;
pub mod diffop;
pub mod error;
pub mod exec;
pub mod glue;
pub mod graded;
pub mod json;
pub mod laurent;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod schur;
pub mod selftest;
pub mod series;
pub mod spectral;
pub mod upoly;

pub use diffop::{DiffOp, OrderKind, Precision, SymbolPoly};
pub use error::{Error, Result};
pub use exec::Strategy;
pub use laurent::{UTLaurent, Window};
pub use poly::{Exponent, Poly};
pub use scalar::Scalar;
pub use series::TruncatedSeries;
