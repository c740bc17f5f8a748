//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by the beamforming library.
#[derive(Debug, Error)]
pub enum Error {
    /// Steering angle outside the physically unambiguous sector of a ULA.
    #[error("angle {theta_deg}° is outside the open interval (0°, 180°)")]
    AngleOutOfRange { theta_deg: f64 },

    /// Invalid configuration value; `field` names the offending parameter.
    #[error("invalid {field}: {message}")]
    Config { field: String, message: String },

    /// A covariance estimate could not be inverted; retry with larger loading.
    #[error("{context} is numerically singular; increase the diagonal loading")]
    SingularMatrix { context: &'static str },

    /// The presumed steering vector has no energy in the initial subspace.
    #[error("degenerate initialization: presumed steering vector has no energy in the initial subspace")]
    DegenerateInitialization,

    /// The projected steering vector vanished; the SOI is invisible in the subspace.
    #[error("degenerate subspace: projected steering vector is numerically zero")]
    DegenerateSubspace,

    /// Gram-Schmidt found a column numerically inside the span of its predecessors.
    #[error("projection matrix is rank deficient at column {column}")]
    RankDeficient { column: usize },

    /// A weight vector was zero (or non-finite) where a direction is required.
    #[error("weight vector is zero or non-finite")]
    ZeroWeight,

    /// Failure inside one Monte-Carlo run, annotated with the run index.
    #[error("run {run}: {source}")]
    RunFailure {
        run: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Annotate an error with the Monte-Carlo run index it occurred in.
    pub fn in_run(self, run: usize) -> Self {
        Error::RunFailure {
            run,
            source: Box::new(self),
        }
    }

    /// True for errors caused by invalid user input rather than numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config { .. } | Error::AngleOutOfRange { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
