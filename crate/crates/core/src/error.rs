use thiserror::Error;

/// Errors raised by the kernels, solvers and experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    Asymmetric { asymmetry: f64 },

    #[error("degenerate constraint pair: r is parallel to the all-ones vector")]
    DegenerateConstraints,

    #[error("infeasible set: {0}")]
    InfeasibleSet(String),

    #[error("no feasible point found after {rounds} alternating-projection rounds")]
    NoFeasiblePoint { rounds: usize },

    #[error("line search exceeded the backtracking ceiling ({backtracks} > {ceiling}); check the Lipschitz constant or the proximal mapping")]
    BacktrackCeiling { backtracks: usize, ceiling: usize },

    #[error("iterate norm {norm:e} exceeded the ceiling {ceiling:e}")]
    Unbounded { norm: f64, ceiling: f64 },

    #[error("initial point is outside the domain of P0")]
    OutsideDomain,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
