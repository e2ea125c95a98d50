//! Period mappings of real biextensions on punctured Riemann surfaces.
//!
//! The crate has two halves. The exact half (`qi`, `linalg`, `hodge`)
//! computes periods of framed real biextensions over ℚ(i) by the dual-and-
//! split recipe. The analytic half (`elliptic`, `surface`, `greens`, `quad`,
//! `chen`, `period`, `pushforward`, `series`) realises the period mapping
//! q ↦ Ψ_p(q) of truncated path torsors on the punctured sphere and torus,
//! scans its zero locus, and pushes it through monodromy Hodge maps.

pub mod chen;
pub mod elliptic;
pub mod error;
pub mod greens;
pub mod hodge;
pub mod hodge_io;
pub mod linalg;
pub mod period;
pub mod pushforward;
pub mod qi;
pub mod quad;
pub mod registry;
pub mod series;
pub mod surface;

pub use error::{AnalyticError, HodgeError};
