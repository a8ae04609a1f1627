use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("axiom violation [{law}]: {witness}")]
    AxiomViolation { law: String, witness: String },

    #[error("not a chain map: {0}")]
    NotAChainMap(String),

    #[error("functor is not fully faithful: {0}")]
    NotFullyFaithful(String),

    #[error("morphism is not strict: {0}")]
    NotStrict(String),

    #[error("guarantee exceeded: {0}")]
    GuaranteeExceeded(String),

    #[error("unknown lemma id: {0}")]
    UnknownLemma(String),

    #[error("parse error at {at}: {msg}")]
    ParseError { at: String, msg: String },
}

impl Error {
    pub fn axiom(law: &str, witness: impl Into<String>) -> Self {
        Error::AxiomViolation {
            law: law.to_string(),
            witness: witness.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
