use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds tolerance {tol:.1e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error(
        "quadrature did not converge at t = {t}: estimated error {estimate:.3e} \
         exceeds target {target:.3e} after {panels} panels"
    )]
    QuadratureNotConverged {
        t: f64,
        estimate: f64,
        target: f64,
        panels: usize,
    },

    #[error(
        "step size dt = {dt} too coarse: dt * max(epsilon, delta, omega_c) = {product:.3} \
             must be < 0.5; reduce dt to at most {suggested:.3e}"
    )]
    StepSizeTooCoarse {
        dt: f64,
        product: f64,
        suggested: f64,
    },

    #[error("time {t} outside covered range [0, {t_max}]")]
    TimeOutOfRange { t: f64, t_max: f64 },

    #[error("at tau = {tau}: {source}")]
    AtTau {
        tau: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wrap an error with the sweep point at which it occurred.
    pub fn at_tau(self, tau: f64) -> Self {
        Error::AtTau {
            tau,
            source: Box::new(self),
        }
    }
}
