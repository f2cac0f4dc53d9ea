//! Computational homological algebra on finite ringed poset sites:
//! deformations of strictly perfect complexes across square-zero ring
//! extensions, their obstruction classes, determinant lines and trace maps,
//! together with machine checks of the compatibility
//! tr(omega(E)) = omega(det E) and its torsor/automorphism refinements.

pub mod zlin;

pub mod ring;

pub mod module;

pub mod complex;

pub mod site;

pub mod cechhom;

pub mod detline;

pub mod trace;

pub mod deform;

pub mod corpus;

pub mod serial;

pub mod report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ring axiom `{axiom}` fails at generators {witness:?}")]
    RingAxiom { axiom: &'static str, witness: Vec<usize> },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("ring mismatch")]
    RingMismatch,
    #[error("site mismatch: {0}")]
    SiteMismatch(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("ring is not local")]
    NotLocal,
    #[error("complex is not strictly perfect")]
    NotStrictlyPerfect,
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("sequence is not exact")]
    NotExact,
    #[error("enumeration bound exceeded ({0} elements)")]
    TooLarge(u128),
    #[error("search budget exceeded")]
    BudgetExceeded,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Default guardrail for exhaustive enumerations.
pub const DEFAULT_MAX_ELEMENTS: u128 = 1 << 20;
