use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid velocity count q = {0}: must be odd and at least 3")]
    InvalidVelocityCount(usize),
    #[error("invalid ratio tuple: {0}")]
    InvalidRatios(String),
    #[error("singular moment matrix: ratios contain repeated entries")]
    SingularMatrix,
    #[error("no real solution: {0}")]
    NoRealSolution(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("vacuum is generated by the initial states")]
    Vacuum,
    #[error("Riemann solver did not converge after {0} iterations")]
    NoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
