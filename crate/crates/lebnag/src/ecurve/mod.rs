//! Elliptic curves over F_q and records of rational elliptic curves.

mod count;
mod minimal;
mod records;

pub use count::{trace_of_frobenius, trace_with_ctx, CountCtx, CurveFq};
pub use minimal::{c_invariants, discriminant, kraus_valid, minimal_c4c6, model_from_c4c6, semistable_conductor, CInvariants};
pub use records::{a_ell, ingest_curves, ingest_curves_str, parse_record_line, CurveRecord};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EcurveError {
    #[error("singular curve over F_{0}")]
    Singular(u64),
    #[error("bad reduction at {prime} (ord_p(N) = {ord_n})")]
    BadReduction { prime: u64, ord_n: u32 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("record {label}: {msg}")]
    Validation { label: String, msg: String },
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("no Hecke data for {label} at {ell}")]
    MissingHecke { label: String, ell: u64 },
    #[error("additive reduction at {0}, not a semistable curve")]
    Additive(u64),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
