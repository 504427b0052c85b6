use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A coefficient (or the RLS inverse matrix) became NaN or infinite.
    #[error("numerical divergence at sample {sample}")]
    NumericalDivergence { sample: u64 },

    /// The RLS gain denominator `lambda + x^T P x` fell below 1e-300.
    #[error("gain denominator underflow at sample {sample}")]
    DenominatorUnderflow { sample: u64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// SNR requested with a zero-power noise component.
    #[error("degenerate SNR: noise power is zero")]
    DegenerateSnr,
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }
}
