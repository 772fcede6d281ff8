//! Exact point counts, zeta functions and trace-cohomology checks for
//! varieties over finite fields.
//!
//! The pieces, bottom up:
//!
//! * [`field`]: `GF(p^k)` with deterministic modulus choice.
//! * [`variety`]: projective varieties from JSON and exact counts `N_r`.
//! * [`series`]: exact power series and Padé reconstruction over `Q`.
//! * [`zeta`]: factored zeta functions from counts or eigenvalues.
//! * [`quadratic`], [`trace`]: real quadratic numbers, trace modules and
//!   Frobenius data.
//! * [`weil`]: the identity checks and the report type.
//! * [`cm`]: Grössencharacter values for CM elliptic curves.
//! * [`pipeline`]: end-to-end analyses used by the command-line tool.

pub mod cm;
pub mod field;
pub mod pipeline;
pub mod quadratic;
pub mod series;
pub mod table;
pub mod trace;
pub mod variety;
pub mod weil;
pub mod zeta;

use thiserror::Error;

/// Any failure, tagged with the module it came from.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field: {0}")]
    Field(#[from] field::FieldError),
    #[error("variety: {0}")]
    Variety(#[from] variety::VarietyError),
    #[error("series: {0}")]
    Series(#[from] series::SeriesError),
    #[error("zeta: {0}")]
    Zeta(#[from] zeta::ZetaError),
    #[error("quadratic: {0}")]
    Quadratic(#[from] quadratic::QuadraticError),
    #[error("trace: {0}")]
    Trace(#[from] trace::TraceError),
    #[error("weil: {0}")]
    Weil(#[from] weil::WeilError),
    #[error("cm: {0}")]
    Cm(#[from] cm::CmError),
    #[error("input: {0}")]
    Input(String),
}

impl Error {
    /// Process exit status: 3 for budget overruns, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Variety(variety::VarietyError::EnumerationTooLarge { .. })
            | Error::Field(field::FieldError::EnumerationTooLarge { .. }) => 3,
            _ => 2,
        }
    }
}
