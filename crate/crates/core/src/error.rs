use thiserror::Error;

use crate::dsl::{EvalError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: t_min={t_min}, t_max={t_max}, n_points={n_points} (need t_max > t_min and n_points >= 2)")]
    InvalidGrid { t_min: f64, t_max: f64, n_points: usize },

    #[error("operands live on different grids")]
    GridMismatch,

    #[error("sample count {found} does not match grid size {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("kernel evaluation failed at (t'={t_prime}, t={t}): {message}")]
    KernelEvaluation { t_prime: f64, t: f64, message: String },

    #[error("function evaluation failed at t={t}: {message}")]
    FunctionEvaluation { t: f64, message: String },

    #[error("node index {index} outside grid of {n_points} points")]
    NodeOutOfRange { index: usize, n_points: usize },

    #[error("T carries a delta coefficient of modulus {modulus:e}, above the floor {floor:e}")]
    DeltaResidue { modulus: f64, floor: f64 },

    #[error("a sum kernel needs at least one component")]
    EmptySumKernel,

    #[error("invalid component order {0:?}: expected a permutation of the component indices")]
    InvalidOrder(Vec<usize>),

    #[error("kernel must be delta-free, found delta coefficient {0}")]
    NotDeltaFree(String),

    #[error("{0}")]
    Invalid(String),

    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("{path}: syntax error {source}")]
    Expression { path: String, source: ParseError },

    #[error("{path}: {source}")]
    Evaluation { path: String, source: EvalError },

    #[error("{path}: unknown parameter `{name}`{hint}")]
    MissingParameter { path: String, name: String, hint: String },

    #[error("{path}: {source}")]
    InProblem { path: String, source: Box<Error> },
}
