use thiserror::Error;

use crate::formula::Family;

/// Errors raised by multivector arithmetic and the determinant methods.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaError {
    #[error("unsupported signature ({p},{q}): need 1 <= p+q <= 6")]
    UnsupportedSignature { p: usize, q: usize },

    #[error("signature mismatch: G({0},{1}) vs G({2},{3})")]
    SignatureMismatch(usize, usize, usize, usize),

    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },

    #[error("grade {grade} out of range for n = {n}")]
    GradeOutOfRange { grade: usize, n: usize },

    #[error("triangle operation index {j} out of range 1..={m}")]
    DeltaOutOfRange { j: u8, m: u8 },

    #[error("operation requires n <= {max}, got n = {n}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("multivector is not invertible: Det = {det}")]
    NotInvertible { det: String },

    #[error("ordered solution set is not generic: Det(v_{k}) = 0")]
    NotGeneric { k: usize },

    #[error("{context}: result has non-scalar part (grade {grade})")]
    NonScalar { context: String, grade: usize },

    #[error("no {family} formula for n = {n}; available: {}", names(.available))]
    UnknownFormula {
        n: usize,
        family: Family,
        available: Vec<Family>,
    },

    #[error("no formula named {name:?} for n = {n}")]
    UnknownFormulaName { n: usize, name: String },

    #[error("unknown method {0:?}")]
    UnknownMethod(String),

    #[error("formula evaluation failed: {0}")]
    MalformedFormula(String),

    #[error("interpolation is ill-conditioned (residual {residual:e})")]
    IllConditioned { residual: f64 },

    #[error("matrix determinant has non-real value: imaginary part {imag}")]
    NonRealDeterminant { imag: String },

    #[error("representation self-check failed: {0}")]
    RepresentationCheck(String),

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
}

fn names(fams: &[Family]) -> String {
    fams.iter().map(|f| f.name()).collect::<Vec<_>>().join(", ")
}

pub type Result<T> = std::result::Result<T, GaError>;
