//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by model evaluation, posterior updates, design selection,
/// metrics, and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    #[error("invalid {name}: {message}")]
    Invalid { name: &'static str, message: String },

    #[error("all likelihoods are zero after observing design {design}, outcome {outcome}")]
    ZeroTotalWeight { design: String, outcome: String },

    #[error("particle weights underflowed at step {step}")]
    WeightUnderflow { step: usize },

    #[error("matrix is not positive definite in {context}")]
    NotPositiveDefinite { context: &'static str },

    #[error("rank-deficient design matrix for degree {degree}")]
    RankDeficient { degree: usize },

    #[error("replay design sequence exhausted at step {t} (sequence length {len})")]
    ReplayExhausted { t: usize, len: usize },

    #[error("infinite divergence: model probability {p_model} against true probability {p_true}")]
    InfiniteDivergence { p_true: f64, p_model: f64 },

    #[error("reference risk must be positive, got {value}")]
    NonPositiveRisk { value: f64 },

    #[error("rank correlation undefined: zero rank variance")]
    DegenerateRanks,

    #[error("non-finite log density at design {design}")]
    NonFiniteRisk { design: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("replication {replication}, arm {arm}, step {t}: {source}")]
    Annotated {
        replication: usize,
        arm: String,
        t: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Attach replication/arm/step context to an error bubbling out of a
    /// simulation loop.
    pub fn annotate(self, replication: usize, arm: &str, t: usize) -> Error {
        Error::Annotated {
            replication,
            arm: arm.to_string(),
            t,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
