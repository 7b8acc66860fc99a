use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input violates a documented precondition or type invariant.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The transient has not reached thermal equilibrium, so a steady-state
    /// resistance would be meaningless.
    #[error(
        "transient not in equilibrium: relative change {relative_change:.3e} over the last decade \
         exceeds {threshold:.1e}"
    )]
    NotSettled { relative_change: f64, threshold: f64 },

    /// The continued-fraction expansion produced a non-positive element.
    #[error("numerical breakdown at Cauer stage {stage}: {detail}")]
    NumericalBreakdown { stage: usize, detail: String },

    #[error("{what} is not tabulated")]
    NotTabulated { what: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
