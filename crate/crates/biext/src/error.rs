//! Error types shared across the crate.
//!
//! `HodgeError` covers the exact-arithmetic side (filtrations, framings, the
//! period recipe); `AnalyticError` covers the numerical side (surfaces,
//! quadrature, Green functions, scans).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HodgeError {
    #[error("not a pure Hodge structure: bigrading ranks sum to {found}, ambient dimension is {ambient}")]
    NotPure { found: usize, ambient: usize },
    #[error("subspace is not conjugation stable")]
    NotConjugationStable,
    #[error("invalid filtration: {0}")]
    BadFiltration(String),
    #[error("weights outside the supported Ext range: k = {k} \u{2264} e \u{2212} 3 with e = {e}")]
    ExtOutsideRange { e: i64, k: i64 },
    #[error("framing mismatch: {0}")]
    FramingMismatch(String),
    #[error("graded real Hodge data does not split: {0}")]
    GradedNotSplit(String),
    #[error("biextension invariant violated: {0}")]
    BadBiextension(String),
    #[error("period recipe failed: {0}")]
    Recipe(String),
}

#[derive(Debug, Error)]
pub enum AnalyticError {
    #[error("quadrature did not converge after {max_depth} bisections (last interval error {last_err:e})")]
    NonConvergence { max_depth: u32, last_err: f64 },
    #[error("evaluation at {at} is within {dist:e} of the pole at {pole}")]
    PoleProximity { at: String, pole: String, dist: f64 },
    #[error("paths do not share endpoints: {0}")]
    EndpointMismatch(String),
    #[error("point {0} coincides with a puncture")]
    AtPuncture(String),
    #[error("need at least {needed} sample points, got {got}")]
    NotEnoughSamples { needed: usize, got: usize },
    #[error("Gr^W_{{-2}} of the path torsor vanishes for this surface; the graded fiber is empty")]
    GradedFiberEmpty,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("truncation orders differ: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("punctures x_0 and x_{k} coincide")]
    CoincidentPoles { k: usize },
    #[error("form is not closed: {0}")]
    NotClosed(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
