//! Error type shared by the numerical modules.

use thiserror::Error;

/// Errors produced by grid construction, coefficient algebra, matrix
/// generation and the solver.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum HfError {
    #[error("invalid grid: need t_end > 0 and m >= 1, got t_end = {t_end}, m = {m}")]
    InvalidGrid { t_end: f64, m: usize },

    #[error("sampling produced a non-finite value at node {node} (t = {t})")]
    NonFiniteSample { node: usize, t: f64 },

    #[error("t = {t} is outside the grid domain [0, {t_end}]")]
    OutOfDomain { t: f64, t_end: f64 },

    #[error("grid mismatch: operands live on different grids")]
    GridMismatch,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("gamma is defined for positive arguments only, got {x}")]
    GammaDomain { x: f64 },

    #[error("integration order must lie in (0, 50], got {alpha}")]
    OrderRange { alpha: f64 },

    #[error("negative base {base} raised to non-integer exponent {exponent} at node {node}")]
    NegativeBase { base: f64, exponent: f64, node: usize },

    #[error("node {node}: scalar iteration did not converge within {max_iter} iterations (last step {last_step:e})")]
    NoConvergence { node: usize, max_iter: u32, last_step: f64 },

    #[error("node {node}: coefficient equation is singular (unit slope in the implicit part)")]
    SingularNode { node: usize },

    #[error("quadrature tolerance {tol:e} not reached: estimated error {estimate:e}")]
    QuadratureAccuracy { tol: f64, estimate: f64 },

    #[error("invalid problem: {reason}")]
    InvalidProblem { reason: String },

    #[error("expression evaluation failed: {0}")]
    Eval(#[from] crate::expr::EvalError),
}
