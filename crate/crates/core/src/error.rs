use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge: estimated error {achieved:e} above requested {requested:e}")]
    NonConvergence {
        what: &'static str,
        achieved: f64,
        requested: f64,
    },

    #[error("singular point at lambda = {lambda}: |denominator| = {denom:e}")]
    SingularPoint { lambda: Complex64, denom: f64 },

    #[error("lambda = {0} lies on the unit circle where sign(|lambda|^2 - 1) is undefined")]
    Boundary(Complex64),

    #[error("finite-difference stencil at lambda = {lambda} with step {step:e} crosses an excluded band")]
    Stencil { lambda: Complex64, step: f64 },

    #[error("invalid integration path: {0}")]
    Path(String),

    #[error("omega_ff vanishes at lambda = {lambda} (|omega| = {omega:e})")]
    DivisionByZeroOmega { lambda: Complex64, omega: f64 },

    #[error("seed rejected: {check} residual {residual:e} exceeds {threshold:e}")]
    SeedInvalid {
        check: String,
        residual: f64,
        threshold: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),
}
