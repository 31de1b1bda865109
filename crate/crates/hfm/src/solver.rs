//! Forward-substitution collocation solver for multi-order fractional
//! differential equations in Caputo form,
//!
//! ```text
//! D^alpha y(t) = sum_k b_k(t) * (D^beta_k y(t))^p_k + g(t),   y^(s)(0) given.
//! ```
//!
//! The highest derivative `u = D^alpha y` is expanded in the hybrid-function
//! basis. Every lower-order derivative is `J^(alpha - beta_k) u` and is
//! expressed through the operational matrices; products and powers follow the
//! node-value rules of [`crate::basis`]. Equating the step and ramp
//! coefficients yields, per node, one explicit equation for the base
//! coefficient (the matrices mapping onto base coefficients are strictly
//! upper triangular) and one scalar equation for the increment coefficient,
//! solved exactly when linear and by damped fixed-point iteration otherwise.
//!
//! Nonzero initial conditions are folded by the substitution
//! `y = v + ic(t)`, `ic(t) = sum_s y^(s)(0) t^s / s!`: the unknown `v` has
//! homogeneous conditions and each derivative picks up the known Caputo
//! derivative of `ic`, which is sampled and carried alongside the matrix
//! part of the term.

use std::sync::Arc;

use crate::basis::{checked_pow, Grid, HfPair};
use crate::error::HfError;
use crate::expr::Expr;
use crate::opmat::{self, OpMatSet};

/// Orders closer to the highest order than this gap are treated as the
/// highest order itself (identity operator instead of a matrix set).
const IDENTITY_GAP: f64 = 1e-12;

/// One right-hand-side term `coeff(t) * (D^beta y)^power`.
///
/// `beta = 0` acts on `y` itself; `power = 1` is a plain linear term.
#[derive(Debug, Clone)]
pub struct Term {
    pub coeff: Expr,
    pub beta: f64,
    pub power: f64,
}

impl Term {
    /// Linear term `coeff(t) * D^beta y`.
    pub fn linear(coeff: Expr, beta: f64) -> Term {
        Term {
            coeff,
            beta,
            power: 1.0,
        }
    }

    /// Generalized term `coeff(t) * (D^beta y)^power`.
    pub fn with_power(coeff: Expr, beta: f64, power: f64) -> Term {
        Term { coeff, beta, power }
    }
}

/// A validated multi-order problem on `[0, t_end]`.
#[derive(Debug, Clone)]
pub struct FdeProblem {
    alpha: f64,
    terms: Vec<Term>,
    forcing: Expr,
    init: Vec<f64>,
    t_end: f64,
}

impl FdeProblem {
    /// Validate and normalize a problem definition.
    ///
    /// Requirements: `0 < alpha <= 50`, every term order in `[0, alpha)`,
    /// `init` holding exactly `ceil(alpha)` values `y^(s)(0)`, and a positive
    /// `t_end`. Terms are stored sorted by descending order.
    pub fn new(
        alpha: f64,
        terms: Vec<Term>,
        forcing: Expr,
        init: Vec<f64>,
        t_end: f64,
    ) -> Result<FdeProblem, HfError> {
        if !(alpha > 0.0 && alpha <= opmat::MAX_ORDER) {
            return Err(HfError::OrderRange { alpha });
        }
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(HfError::InvalidProblem {
                reason: format!("t_end must be positive and finite, got {t_end}"),
            });
        }
        let n = alpha.ceil() as usize;
        if init.len() != n {
            return Err(HfError::InvalidProblem {
                reason: format!(
                    "need {n} initial values y^(s)(0) for order {alpha}, got {}",
                    init.len()
                ),
            });
        }
        if init.iter().any(|v| !v.is_finite()) {
            return Err(HfError::InvalidProblem {
                reason: "initial values must be finite".into(),
            });
        }
        for term in &terms {
            if !(term.beta >= 0.0 && term.beta < alpha) {
                return Err(HfError::InvalidProblem {
                    reason: format!(
                        "term order {} must lie in [0, {alpha})",
                        term.beta
                    ),
                });
            }
            if !term.power.is_finite() {
                return Err(HfError::InvalidProblem {
                    reason: "term power must be finite".into(),
                });
            }
            if alpha - term.beta < IDENTITY_GAP && term.power != 1.0 {
                return Err(HfError::InvalidProblem {
                    reason: format!(
                        "a term of order within {IDENTITY_GAP:e} of the highest order must be linear"
                    ),
                });
            }
        }
        let mut terms = terms;
        terms.sort_by(|a, b| b.beta.total_cmp(&a.beta));
        Ok(FdeProblem {
            alpha,
            terms,
            forcing,
            init,
            t_end,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Terms sorted by descending order.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn forcing(&self) -> &Expr {
        &self.forcing
    }

    /// Initial values `y^(s)(0)`, `s = 0..ceil(alpha)`.
    pub fn init(&self) -> &[f64] {
        &self.init
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }
}

/// Scalar-solve controls for the per-node increment equation.
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Stopping tolerance on the fixed-point step, scaled by `1 + |x|`.
    pub tol: f64,
    /// Hard iteration cap per node.
    pub max_iter: u32,
    /// Relaxation factor once damping engages.
    pub damping: f64,
    /// Number of undamped iterations before damping engages.
    pub damp_after: u32,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-13,
            max_iter: 100,
            damping: 0.5,
            damp_after: 20,
        }
    }
}

/// Per-solve measurements.
#[derive(Debug, Clone)]
pub struct Diagnostics {
    /// Scalar-solve evaluations per node (1 everywhere for linear problems).
    pub iterations: Vec<u32>,
    /// Max-norm defect of the equation re-evaluated at the nodes.
    pub residual: f64,
}

impl Diagnostics {
    pub fn max_iterations(&self) -> u32 {
        self.iterations.iter().copied().max().unwrap_or(0)
    }
}

/// Solver output: the expanded highest derivative and the reconstructed
/// unknown.
#[derive(Debug, Clone)]
pub struct Solution {
    pub grid: Grid,
    /// Expansion of `D^alpha y`.
    pub u: HfPair,
    /// Reconstruction `y = J^alpha u + ic`, node-exact in the initial values.
    pub y: HfPair,
    pub diagnostics: Diagnostics,
}

struct PreparedTerm {
    b_cs: Vec<f64>,
    b_ct: Vec<f64>,
    known_cs: Vec<f64>,
    known_ct: Vec<f64>,
    /// `None` when the term order is within [`IDENTITY_GAP`] of the highest
    /// order, in which case the derivative is the expansion itself.
    mats: Option<Arc<OpMatSet>>,
    power: f64,
}

struct Prepared {
    grid: Grid,
    g_cs: Vec<f64>,
    g_ct: Vec<f64>,
    terms: Vec<PreparedTerm>,
    mats_alpha: Arc<OpMatSet>,
    ic: HfPair,
}

fn sample_expr(expr: &Expr, grid: &Grid) -> Result<HfPair, HfError> {
    let mut values = Vec::with_capacity(grid.m() + 1);
    for i in 0..=grid.m() {
        values.push(expr.eval(grid.node(i))?);
    }
    HfPair::from_node_values(grid, &values)
}

/// Caputo derivative of order `beta` of the initial-condition polynomial,
/// as a list of `(exponent, scale)` monomials: integer powers below
/// `ceil(beta)` vanish, the rest turn into `init[s] t^(s-beta) / Gamma(s-beta+1)`.
fn ic_derivative_monomials(init: &[f64], beta: f64) -> Result<Vec<(f64, f64)>, HfError> {
    let start = beta.ceil() as usize;
    let mut parts = Vec::new();
    for (s, &ys) in init.iter().enumerate().skip(start) {
        let exponent = s as f64 - beta;
        let scale = ys / opmat::gamma(exponent + 1.0)?;
        parts.push((exponent, scale));
    }
    Ok(parts)
}

fn sample_monomials(parts: &[(f64, f64)], grid: &Grid) -> Result<HfPair, HfError> {
    HfPair::sample(grid, |t| {
        parts
            .iter()
            .map(|&(e, s)| if s == 0.0 { 0.0 } else { s * t.powf(e) })
            .sum()
    })
}

impl Prepared {
    fn new(problem: &FdeProblem, grid: &Grid) -> Result<Prepared, HfError> {
        let g = sample_expr(&problem.forcing, grid)?;
        let mut terms = Vec::with_capacity(problem.terms.len());
        for term in &problem.terms {
            let b = sample_expr(&term.coeff, grid)?;
            let known =
                sample_monomials(&ic_derivative_monomials(&problem.init, term.beta)?, grid)?;
            let gap = problem.alpha - term.beta;
            let mats = if gap < IDENTITY_GAP {
                None
            } else {
                Some(opmat::build_cached(gap, grid)?)
            };
            terms.push(PreparedTerm {
                b_cs: b.cs().to_vec(),
                b_ct: b.ct().to_vec(),
                known_cs: known.cs().to_vec(),
                known_ct: known.ct().to_vec(),
                mats,
                power: term.power,
            });
        }
        let mats_alpha = opmat::build_cached(problem.alpha, grid)?;
        let ic = sample_monomials(&ic_derivative_monomials(&problem.init, 0.0)?, grid)?;
        Ok(Prepared {
            grid: *grid,
            g_cs: g.cs().to_vec(),
            g_ct: g.ct().to_vec(),
            terms,
            mats_alpha,
            ic,
        })
    }

    /// Node-by-node solution of the two coefficient equations.
    fn forward_substitute(
        &self,
        opts: &SolverOptions,
    ) -> Result<(Vec<f64>, Vec<f64>, Vec<u32>), HfError> {
        let m = self.grid.m();
        let nt = self.terms.len();
        let mut cs_u = vec![0.0; m];
        let mut ct_u = vec![0.0; m];
        let mut iterations = vec![0u32; m];
        let mut w_left = vec![0.0; nt];
        let mut nonlin: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(nt);

        for j in 0..m {
            // base coefficient: everything on the right involves strictly
            // upper-triangular matrices, so only indices < j contribute
            let mut rhs = self.g_cs[j];
            let mut id_slope = 0.0;
            for (k, term) in self.terms.iter().enumerate() {
                match &term.mats {
                    Some(mats) => {
                        let pss = mats.pss.first_row();
                        let pts = mats.pts.first_row();
                        let mut conv = 0.0;
                        for i in 0..j {
                            conv += cs_u[i] * pss[j - i] + ct_u[i] * pts[j - i];
                        }
                        let wl = conv + term.known_cs[j];
                        w_left[k] = wl;
                        rhs += term.b_cs[j] * checked_pow(wl, term.power, j)?;
                    }
                    None => {
                        // identity term: base value depends on the unknown
                        // itself, linearly (validated at construction)
                        rhs += term.b_cs[j] * term.known_cs[j];
                        id_slope += term.b_cs[j];
                    }
                }
            }
            let base = rhs / (1.0 - id_slope);
            if !base.is_finite() {
                return Err(HfError::SingularNode { node: j });
            }
            cs_u[j] = base;
            for (k, term) in self.terms.iter().enumerate() {
                if term.mats.is_none() {
                    w_left[k] = base + term.known_cs[j];
                }
            }

            // increment coefficient: the diagonal entries of the increment
            // matrices and the right-node value of each power make this a
            // scalar equation in x = ct_u[j]
            let mut lin = self.g_ct[j];
            let mut slope = 0.0;
            nonlin.clear();
            for (k, term) in self.terms.iter().enumerate() {
                let (c_known, diag) = match &term.mats {
                    Some(mats) => {
                        let pst = mats.pst.first_row();
                        let ptt = mats.ptt.first_row();
                        let mut conv = cs_u[j] * pst[0];
                        for i in 0..j {
                            conv += cs_u[i] * pst[j - i] + ct_u[i] * ptt[j - i];
                        }
                        (conv + term.known_ct[j], ptt[0])
                    }
                    None => (term.known_ct[j], 1.0),
                };
                let b_right = term.b_cs[j] + term.b_ct[j];
                if term.power == 1.0 {
                    lin += b_right * c_known + term.b_ct[j] * w_left[k];
                    slope += b_right * diag;
                } else {
                    // b_right * ((w + c + diag x)^p - w^p) + b_ct * w^p
                    let wp = checked_pow(w_left[k], term.power, j)?;
                    lin += (term.b_ct[j] - b_right) * wp;
                    nonlin.push((b_right, w_left[k] + c_known, diag, term.power));
                }
            }
            let denom = 1.0 - slope;
            let (x, count) = if nonlin.is_empty() {
                let x = lin / denom;
                if !x.is_finite() {
                    return Err(HfError::SingularNode { node: j });
                }
                (x, 1)
            } else {
                self.fixed_point(j, lin, denom, &nonlin, opts)?
            };
            ct_u[j] = x;
            iterations[j] = count;
        }
        Ok((cs_u, ct_u, iterations))
    }

    /// Damped fixed-point solve of
    /// `x = (lin + sum amp * (base + slope x)^p) / denom`.
    fn fixed_point(
        &self,
        node: usize,
        lin: f64,
        denom: f64,
        nonlin: &[(f64, f64, f64, f64)],
        opts: &SolverOptions,
    ) -> Result<(f64, u32), HfError> {
        let eval = |x: f64| -> Result<f64, HfError> {
            let mut acc = lin;
            for &(amp, base, slope, power) in nonlin {
                acc += amp * checked_pow(base + slope * x, power, node)?;
            }
            let v = acc / denom;
            if v.is_nan() {
                return Err(HfError::SingularNode { node });
            }
            Ok(v)
        };
        let mut x = eval(0.0)?;
        let mut count: u32 = 1;
        loop {
            if count >= opts.max_iter {
                return Err(HfError::NoConvergence {
                    node,
                    max_iter: opts.max_iter,
                    last_step: f64::INFINITY,
                });
            }
            let gx = eval(x)?;
            let next = if count >= opts.damp_after {
                x + opts.damping * (gx - x)
            } else {
                gx
            };
            count += 1;
            let step = (next - x).abs();
            if !next.is_finite() {
                return Err(HfError::NoConvergence {
                    node,
                    max_iter: opts.max_iter,
                    last_step: step,
                });
            }
            x = next;
            if step <= opts.tol * (1.0 + x.abs()) {
                return Ok((x, count));
            }
        }
    }

    /// `y = J^alpha u + ic`.
    fn reconstruct(&self, u: &HfPair) -> Result<HfPair, HfError> {
        opmat::integrate_with(u, &self.mats_alpha)?.add(&self.ic)
    }

    /// Max-norm defect of the equation over all node values, with every
    /// operator evaluated in the expansion domain.
    fn residual_of(&self, u: &HfPair) -> Result<f64, HfError> {
        let m = self.grid.m();
        let lhs = u.node_values();
        let mut rhs: Vec<f64> = Vec::with_capacity(m + 1);
        rhs.extend_from_slice(&self.g_cs);
        rhs.push(self.g_cs[m - 1] + self.g_ct[m - 1]);
        for term in &self.terms {
            let known = HfPair::from_coeffs(
                &self.grid,
                term.known_cs.clone(),
                term.known_ct.clone(),
            )?;
            let w = match &term.mats {
                Some(mats) => opmat::integrate_with(u, mats)?.add(&known)?,
                None => u.add(&known)?,
            };
            let w_nodes = w.node_values();
            for (j, rv) in rhs.iter_mut().enumerate() {
                let b = if j < m {
                    term.b_cs[j]
                } else {
                    term.b_cs[m - 1] + term.b_ct[m - 1]
                };
                *rv += b * checked_pow(w_nodes[j], term.power, j.min(m - 1))?;
            }
        }
        Ok(lhs
            .iter()
            .zip(&rhs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// Solve `problem` on an `m`-subinterval grid.
///
/// Returns the expanded highest derivative, the reconstructed unknown and
/// per-node diagnostics. Fails if a coefficient or the forcing cannot be
/// evaluated at a node, if a nonlinear scalar solve does not converge
/// (naming the node), or if a power hits a negative base with a fractional
/// exponent.
pub fn solve(
    problem: &FdeProblem,
    m: usize,
    opts: &SolverOptions,
) -> Result<Solution, HfError> {
    let grid = Grid::new(problem.t_end, m)?;
    let prep = Prepared::new(problem, &grid)?;
    let (cs_u, ct_u, iterations) = prep.forward_substitute(opts)?;
    let u = HfPair::from_coeffs(&grid, cs_u, ct_u)?;
    let y = prep.reconstruct(&u)?;
    let residual = prep.residual_of(&u)?;
    Ok(Solution {
        grid,
        u,
        y,
        diagnostics: Diagnostics {
            iterations,
            residual,
        },
    })
}

/// Re-evaluate the defect of `sol` against `problem` (max norm over nodes).
pub fn residual(problem: &FdeProblem, sol: &Solution) -> Result<f64, HfError> {
    let prep = Prepared::new(problem, &sol.grid)?;
    prep.residual_of(&sol.u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use approx::assert_relative_eq;

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn homogeneous_problem_is_zero() {
        for alpha in [0.4, 1.0, 1.3, 2.0, 3.7] {
            let n = alpha.ceil() as usize;
            let problem = FdeProblem::new(
                alpha,
                vec![],
                parse("0").unwrap(),
                vec![0.0; n],
                1.0,
            )
            .unwrap();
            for m in [1usize, 4, 17] {
                let sol = solve(&problem, m, &opts()).unwrap();
                assert!(sol.y.node_values().iter().all(|&v| v == 0.0));
                assert_eq!(sol.diagnostics.residual, 0.0);
            }
        }
    }

    #[test]
    fn pure_integration_with_initial_values() {
        // D^2 y = 2 with y(0) = 1, y'(0) = -1 gives y = t^2 - t + 1
        let problem = FdeProblem::new(
            2.0,
            vec![],
            parse("2").unwrap(),
            vec![1.0, -1.0],
            1.0,
        )
        .unwrap();
        let sol = solve(&problem, 10, &opts()).unwrap();
        for (i, v) in sol.y.node_values().iter().enumerate() {
            let t = sol.grid.node(i);
            assert_relative_eq!(*v, t * t - t + 1.0, max_relative = 1e-14, epsilon = 1e-15);
        }
        assert_eq!(sol.y.evaluate(0.0).unwrap(), 1.0);
    }

    #[test]
    fn linear_problem_solves_without_iteration() {
        let problem = FdeProblem::new(
            2.0,
            vec![
                Term::linear(parse("-1").unwrap(), 0.5),
                Term::linear(parse("-1").unwrap(), 0.0),
            ],
            parse("t^3 + 6*t + 3.2/gamma(0.5)*t^2.5").unwrap(),
            vec![0.0, 0.0],
            1.0,
        )
        .unwrap();
        let sol = solve(&problem, 10, &opts()).unwrap();
        assert!(sol.diagnostics.iterations.iter().all(|&n| n == 1));
        let max_err = sol
            .y
            .node_values()
            .iter()
            .enumerate()
            .map(|(i, v)| (v - sol.grid.node(i).powi(3)).abs())
            .fold(0.0, f64::max);
        assert!(max_err <= 1e-11, "max node error {max_err:e}");
        assert!(sol.diagnostics.residual <= 1e-12);
    }

    #[test]
    fn nonlinear_cubic_term_converges() {
        // D^2 y = -y^3 + 2t + (t^3/3)^3, y(0) = y'(0) = 0; exact y = t^3/3
        let problem = FdeProblem::new(
            2.0,
            vec![Term::with_power(parse("-1").unwrap(), 0.0, 3.0)],
            parse("2*t + (t^3/3)^3").unwrap(),
            vec![0.0, 0.0],
            1.0,
        )
        .unwrap();
        let sol = solve(&problem, 10, &opts()).unwrap();
        for (i, v) in sol.y.node_values().iter().enumerate() {
            let t = sol.grid.node(i);
            assert_relative_eq!(*v, t.powi(3) / 3.0, max_relative = 1e-12, epsilon = 1e-14);
        }
        assert!(sol.diagnostics.max_iterations() > 1);
        assert!(sol.diagnostics.residual <= 1e-12);
    }

    #[test]
    fn near_highest_order_term_uses_identity() {
        // order gap below the identity threshold: D y = 0.5 D^(1-eps) y + 1
        // behaves as u = 0.5 u + 1, so y = 2t
        let problem = FdeProblem::new(
            1.0,
            vec![Term::linear(parse("0.5").unwrap(), 1.0 - 1e-13)],
            parse("1").unwrap(),
            vec![0.0],
            1.0,
        )
        .unwrap();
        let sol = solve(&problem, 8, &opts()).unwrap();
        for (i, v) in sol.y.node_values().iter().enumerate() {
            assert_relative_eq!(*v, 2.0 * sol.grid.node(i), max_relative = 1e-13, epsilon = 1e-15);
        }
    }

    #[test]
    fn near_highest_order_nonlinear_is_rejected() {
        let err = FdeProblem::new(
            1.0,
            vec![Term::with_power(parse("1").unwrap(), 1.0 - 1e-14, 2.0)],
            parse("1").unwrap(),
            vec![0.0],
            1.0,
        )
        .unwrap_err();
        assert!(matches!(err, HfError::InvalidProblem { .. }));
    }

    #[test]
    fn validation_rejects_bad_problems() {
        let zero = parse("0").unwrap();
        // wrong initial-value count
        assert!(FdeProblem::new(2.5, vec![], zero.clone(), vec![0.0], 1.0).is_err());
        // term order not below the highest order
        assert!(FdeProblem::new(
            1.0,
            vec![Term::linear(zero.clone(), 1.0)],
            zero.clone(),
            vec![0.0],
            1.0
        )
        .is_err());
        // negative term order
        assert!(FdeProblem::new(
            1.0,
            vec![Term::linear(zero.clone(), -0.5)],
            zero.clone(),
            vec![0.0],
            1.0
        )
        .is_err());
        // out-of-range highest order
        assert!(FdeProblem::new(0.0, vec![], zero.clone(), vec![], 1.0).is_err());
        assert!(FdeProblem::new(50.5, vec![], zero.clone(), vec![0.0; 51], 1.0).is_err());
        // bad t_end
        assert!(FdeProblem::new(1.0, vec![], zero, vec![0.0], 0.0).is_err());
    }

    #[test]
    fn terms_are_sorted_descending() {
        let zero = parse("0").unwrap();
        let p = FdeProblem::new(
            3.0,
            vec![
                Term::linear(zero.clone(), 0.5),
                Term::linear(zero.clone(), 2.5),
                Term::linear(zero.clone(), 1.0),
            ],
            zero,
            vec![0.0; 3],
            1.0,
        )
        .unwrap();
        let betas: Vec<f64> = p.terms().iter().map(|t| t.beta).collect();
        assert_eq!(betas, vec![2.5, 1.0, 0.5]);
    }

    #[test]
    fn divergent_fixed_point_names_the_node() {
        // huge cubic feedback at the first node
        let problem = FdeProblem::new(
            0.1,
            vec![Term::with_power(parse("100").unwrap(), 0.0, 3.0)],
            parse("1").unwrap(),
            vec![0.0],
            1.0,
        )
        .unwrap();
        match solve(&problem, 2, &opts()) {
            Err(HfError::NoConvergence { node, .. }) => assert_eq!(node, 0),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn negative_base_with_fractional_power_is_domain_error() {
        // y(0) = -1 makes the y-term base negative at the first node
        let problem = FdeProblem::new(
            1.0,
            vec![Term::with_power(parse("1").unwrap(), 0.0, 0.5)],
            parse("0").unwrap(),
            vec![-1.0],
            1.0,
        )
        .unwrap();
        match solve(&problem, 4, &opts()) {
            Err(HfError::NegativeBase { node, .. }) => assert_eq!(node, 0),
            other => panic!("expected negative-base error, got {other:?}"),
        }
    }

    #[test]
    fn sampling_error_reports_failing_expression() {
        // coefficient 1/(t - 0.5) blows up at an interior node
        let problem = FdeProblem::new(
            1.0,
            vec![Term::linear(parse("1/(t - 0.5)").unwrap(), 0.0)],
            parse("0").unwrap(),
            vec![0.0],
            1.0,
        )
        .unwrap();
        assert!(matches!(
            solve(&problem, 4, &opts()),
            Err(HfError::Eval(_))
        ));
    }

    #[test]
    fn residual_of_returned_solution_matches_public_entry() {
        let problem = FdeProblem::new(
            1.5,
            vec![Term::linear(parse("-1").unwrap(), 0.5)],
            parse("t + 1").unwrap(),
            vec![0.0, 0.0],
            1.0,
        )
        .unwrap();
        let sol = solve(&problem, 16, &opts()).unwrap();
        let r = residual(&problem, &sol).unwrap();
        assert_eq!(r, sol.diagnostics.residual);
        assert!(r <= 1e-13);
    }
}
