//! Piecewise-linear hybrid-function calculus for fractional-order problems.
//!
//! A function on `[0, T]` is represented on a uniform grid by a pair of
//! coefficient vectors: per-subinterval base values (sample-and-hold part)
//! and per-subinterval increments (right-handed triangular ramp part).
//! Together they encode the piecewise-linear interpolant of the function's
//! node values. On this representation the crate provides:
//!
//! - [`basis`]: the grid/coefficient types and their algebra (sampling,
//!   evaluation, products, powers),
//! - [`opmat`]: one-shot upper-triangular Toeplitz operational matrices that
//!   map the coefficients of a function to the coefficients of its
//!   Riemann-Liouville fractional integral of arbitrary positive order,
//! - [`solver`]: a forward-substitution collocation solver for multi-order
//!   fractional differential equations (Caputo derivatives) built on those
//!   matrices,
//! - [`expr`]: a small expression language for coefficients, forcing terms
//!   and reference solutions,
//! - [`oracle`]: independent ground truth (closed forms and singularity-aware
//!   quadrature) plus a suite of benchmark problems with known solutions.
//!
//! # Example
//!
//! Fractionally integrate `f(t) = t` to order 1/2 on an 8-interval grid:
//!
//! ```
//! use hfm::basis::{Grid, HfPair};
//! use hfm::opmat::frac_integrate;
//!
//! let grid = Grid::new(1.0, 8).unwrap();
//! let f = HfPair::sample(&grid, |t| t).unwrap();
//! let jf = frac_integrate(&f, 0.5).unwrap();
//! // exact: Gamma(2) t^1.5 / Gamma(2.5)
//! let exact = |t: f64| t.powf(1.5) / hfm::opmat::gamma(2.5).unwrap();
//! for (i, v) in jf.node_values().iter().enumerate() {
//!     let t = grid.node(i);
//!     assert!((v - exact(t)).abs() < 1e-14);
//! }
//! ```

pub mod basis;
pub mod error;
pub mod expr;
pub mod opmat;
pub mod oracle;
pub mod solver;

pub use basis::{Grid, HfPair};
pub use error::HfError;
pub use expr::Expr;
pub use opmat::{frac_integrate, gamma, OpMatSet, UtToeplitz};
pub use oracle::{builtin_cases, ExactCase};
pub use solver::{solve, residual, FdeProblem, Solution, SolverOptions, Term};
