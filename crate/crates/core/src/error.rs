use thiserror::Error;

/// Errors raised by the library.
///
/// Everything except [`Error::InternalConsistency`] and
/// [`Error::UnconfirmedWitness`] is a validation or
/// precondition failure caused by the input.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("group factor sizes must be positive, got {0:?}")]
    InvalidFactors(Vec<u64>),

    #[error("element has {found} components but the group has {expected} factors")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("exponent {value} out of range for factor of size {modulus}")]
    ExponentOutOfRange { value: i64, modulus: u64 },

    #[error("set {0} is not inverse-closed")]
    NotInverseClosed(&'static str),

    #[error("set {0} contains the identity")]
    ContainsIdentity(&'static str),

    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),

    #[error("invalid family parameters: {0}")]
    Family(String),

    #[error("cyclotomic values live in different rings (N = {left} vs N = {right})")]
    ModulusMismatch { left: usize, right: usize },

    #[error("spectrum not integral")]
    SpectrumNotIntegral,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("transfer paths disagree: spectral {spectral:.12}, oracle {oracle:.12}")]
    InternalConsistency { spectral: f64, oracle: f64 },

    #[error("witnessing time not confirmed: |H| = {magnitude:.12}")]
    UnconfirmedWitness { magnitude: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
