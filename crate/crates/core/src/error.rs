use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("integral {integral} did not converge: refinement disagreement {relative:.3e} (relative) exceeds {tolerance:.1e}")]
    NonConvergence {
        integral: &'static str,
        relative: f64,
        tolerance: f64,
    },

    #[error("degenerate model: {0}")]
    DegenerateModel(String),

    #[error("time bin {0} outside {{0, 1, 2}} (units of tau)")]
    InvalidTimeBin(i32),

    #[error("survivor sum is not a real function of alpha+beta: {0}")]
    NonRealCoefficient(String),

    #[error("survivor {label} has an unclassified kernel")]
    UnclassifiedKernel { label: String },

    #[error("grid of {nodes} nodes/axis exceeds the cap of {cap} for {dims}-D direct sums")]
    GridTooLarge {
        nodes: usize,
        cap: usize,
        dims: usize,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
