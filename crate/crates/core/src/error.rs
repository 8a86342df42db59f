use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Arithmetic outside the domain of an operation (e.g. inverting zero).
    #[error("domain error: {0}")]
    Domain(String),

    /// An argument violates the documented precondition of an operation.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A structural claim failed: the computed object does not have the
    /// shape it was constructed to have.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("group closure exceeded {bound} elements")]
    ClosureBound { bound: usize },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("malformed structure table: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
