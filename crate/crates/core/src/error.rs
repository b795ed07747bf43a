use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular (pivot {pivot:e} at column {column})")]
    SingularMatrix { column: usize, pivot: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("steady-state equation has no root for delta_r = {delta_r}, gamma_r = {gamma_r}")]
    NoRoot { delta_r: f64, gamma_r: f64 },

    #[error("no convergence after {iterations} iterations (last excitation {last_excitation})")]
    NoConvergence { iterations: usize, last_excitation: f64 },

    #[error("fluctuation matrix is singular at omega = {omega:e} rad/s")]
    PoleAtOmega { omega: f64 },

    #[error("drift matrix is not Hurwitz stable")]
    UnstableDrift,

    #[error("vectorized Lyapunov system is singular")]
    SingularSystem,

    #[error("covariance matrix is not physical: {0}")]
    InvalidCovariance(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
