use thiserror::Error;

/// Everything that can go wrong in an exact or sampled computation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Odd exponents where the formula needs even ones.
    #[error("parity error: {0}")]
    Parity(String),

    /// An argument outside the domain of a formula (e.g. `n` too small).
    #[error("domain error: {0}")]
    Domain(String),

    /// A size limit (pairing enumeration degree, oracle degree) was hit.
    #[error("resource limit exceeded: {what} (limit {limit})")]
    Resource { what: String, limit: usize },

    /// The Gram matrix `G_kn` has no inverse at this `n`.
    #[error("gram-singular at n={n} (k={k})")]
    GramSingular { k: usize, n: u32 },

    /// Mismatched shapes or out-of-range arguments supplied by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub fn parity(msg: impl Into<String>) -> Self {
        Error::Parity(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    /// True for the two "ran out of room" kinds: resource caps and singular Gram matrices.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. } | Error::GramSingular { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
