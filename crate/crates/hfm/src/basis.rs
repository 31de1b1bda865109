//! Uniform grid and hybrid-function coefficient pairs.
//!
//! A hybrid-function pair stores, per subinterval `[ih, (i+1)h)`, a base
//! value `cs[i]` (sample-and-hold component) and an increment `ct[i]`
//! (right-handed triangular ramp component). The represented function on
//! that subinterval is `cs[i] + ct[i] * (t - ih)/h`. A pair obtained by
//! sampling a function carries `cs[i] = f(ih)` and `ct[i] = f((i+1)h) - f(ih)`,
//! i.e. the piecewise-linear interpolant of the node values; pairs produced
//! by operational matrices need not satisfy the sampling relation.

use crate::error::HfError;

/// Uniform subdivision of `[0, t_end]` into `m` subintervals of width `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    t_end: f64,
    m: usize,
    h: f64,
}

impl Grid {
    /// Build a grid over `[0, t_end]` with `m >= 1` subintervals.
    pub fn new(t_end: f64, m: usize) -> Result<Grid, HfError> {
        if !(t_end > 0.0) || !t_end.is_finite() || m == 0 {
            return Err(HfError::InvalidGrid { t_end, m });
        }
        Ok(Grid {
            t_end,
            m,
            h: t_end / m as f64,
        })
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Step width `t_end / m`.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Position of node `i` for `i` in `0..=m`. The last node is exactly
    /// `t_end` (computing `m * h` in floating point may land an ulp off).
    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i <= self.m);
        if i == self.m {
            self.t_end
        } else {
            i as f64 * self.h
        }
    }
}

/// Coefficient pair of a hybrid-function expansion on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct HfPair {
    grid: Grid,
    cs: Vec<f64>,
    ct: Vec<f64>,
}

impl HfPair {
    /// Expand `f` on `grid` from its `m + 1` node values.
    ///
    /// Errors with the offending node index if `f` is non-finite at a node.
    pub fn sample(grid: &Grid, f: impl Fn(f64) -> f64) -> Result<HfPair, HfError> {
        let values: Vec<f64> = (0..=grid.m).map(|i| f(grid.node(i))).collect();
        Self::from_node_values(grid, &values)
    }

    /// Build the pair interpolating the given `m + 1` node values.
    pub fn from_node_values(grid: &Grid, values: &[f64]) -> Result<HfPair, HfError> {
        if values.len() != grid.m + 1 {
            return Err(HfError::LengthMismatch {
                expected: grid.m + 1,
                got: values.len(),
            });
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(HfError::NonFiniteSample {
                    node: i,
                    t: grid.node(i),
                });
            }
        }
        let cs = values[..grid.m].to_vec();
        let ct = (0..grid.m).map(|i| values[i + 1] - values[i]).collect();
        Ok(HfPair {
            grid: *grid,
            cs,
            ct,
        })
    }

    /// Assemble a pair directly from coefficient vectors of length `m`.
    pub fn from_coeffs(grid: &Grid, cs: Vec<f64>, ct: Vec<f64>) -> Result<HfPair, HfError> {
        if cs.len() != grid.m {
            return Err(HfError::LengthMismatch {
                expected: grid.m,
                got: cs.len(),
            });
        }
        if ct.len() != grid.m {
            return Err(HfError::LengthMismatch {
                expected: grid.m,
                got: ct.len(),
            });
        }
        Ok(HfPair {
            grid: *grid,
            cs,
            ct,
        })
    }

    /// The zero function on `grid`.
    pub fn zero(grid: &Grid) -> HfPair {
        HfPair {
            grid: *grid,
            cs: vec![0.0; grid.m],
            ct: vec![0.0; grid.m],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Sample-and-hold coefficients (`m` base values).
    pub fn cs(&self) -> &[f64] {
        &self.cs
    }

    /// Triangular-ramp coefficients (`m` increments).
    pub fn ct(&self) -> &[f64] {
        &self.ct
    }

    /// Value of the expansion at `t` in `[0, t_end]`.
    ///
    /// Exact node hits return the stored node value; `t = t_end` returns the
    /// right-endpoint limit `cs[m-1] + ct[m-1]` even though subinterval
    /// supports are half-open.
    pub fn evaluate(&self, t: f64) -> Result<f64, HfError> {
        let grid = &self.grid;
        if !(0.0..=grid.t_end).contains(&t) {
            return Err(HfError::OutOfDomain {
                t,
                t_end: grid.t_end,
            });
        }
        let m = grid.m;
        let s = t / grid.h;
        let near = s.round();
        if near >= 0.0 && near <= m as f64 {
            let i = near as usize;
            if t == grid.node(i) {
                return Ok(if i == m {
                    self.cs[m - 1] + self.ct[m - 1]
                } else {
                    self.cs[i]
                });
            }
        }
        let i = (s.floor() as usize).min(m - 1);
        let theta = s - i as f64;
        Ok(self.cs[i] + self.ct[i] * theta)
    }

    /// The `m + 1` node values `[cs[0], .., cs[m-1], cs[m-1] + ct[m-1]]`.
    ///
    /// For sampled pairs these are the original samples; for general pairs
    /// they are the right-continuous values at the nodes plus the right
    /// endpoint limit.
    pub fn node_values(&self) -> Vec<f64> {
        let m = self.grid.m;
        let mut v = Vec::with_capacity(m + 1);
        v.extend_from_slice(&self.cs);
        v.push(self.cs[m - 1] + self.ct[m - 1]);
        v
    }

    /// Pointwise sum of two expansions on the same grid.
    pub fn add(&self, other: &HfPair) -> Result<HfPair, HfError> {
        self.check_grid(other)?;
        Ok(HfPair {
            grid: self.grid,
            cs: zip_with(&self.cs, &other.cs, |a, b| a + b),
            ct: zip_with(&self.ct, &other.ct, |a, b| a + b),
        })
    }

    /// Product rule in the hybrid-function domain: element-wise on the
    /// coefficients,
    /// `cs = p.cs .* q.cs`, `ct = p.cs .* q.ct + p.ct .* q.cs + p.ct .* q.ct`.
    ///
    /// Exact at node values; between nodes it is the piecewise-linear
    /// interpolation of the product.
    pub fn multiply(&self, other: &HfPair) -> Result<HfPair, HfError> {
        self.check_grid(other)?;
        let cs = zip_with(&self.cs, &other.cs, |a, b| a * b);
        let ct = (0..self.cs.len())
            .map(|i| {
                self.cs[i] * other.ct[i] + self.ct[i] * other.cs[i] + self.ct[i] * other.ct[i]
            })
            .collect();
        Ok(HfPair {
            grid: self.grid,
            cs,
            ct,
        })
    }

    /// Power rule: raises the node values to the exponent `n` and
    /// re-interpolates. Node values are `cs[i]` per subinterval plus the
    /// right endpoint limit for the last one.
    ///
    /// Negative node values with non-integer `n` are a domain error naming
    /// the node.
    pub fn power(&self, n: f64) -> Result<HfPair, HfError> {
        if n == 1.0 {
            return Ok(self.clone());
        }
        let nodes = self.node_values();
        let mut powered = Vec::with_capacity(nodes.len());
        for (i, &y) in nodes.iter().enumerate() {
            powered.push(checked_pow(y, n, i)?);
        }
        HfPair::from_node_values(&self.grid, &powered)
    }

    fn check_grid(&self, other: &HfPair) -> Result<(), HfError> {
        if self.grid != other.grid {
            return Err(HfError::GridMismatch);
        }
        Ok(())
    }
}

/// `base^n` with the domain checks the power rule needs.
pub(crate) fn checked_pow(base: f64, n: f64, node: usize) -> Result<f64, HfError> {
    if base < 0.0 && n.fract() != 0.0 {
        return Err(HfError::NegativeBase {
            base,
            exponent: n,
            node,
        });
    }
    let v = base.powf(n);
    if !v.is_finite() {
        return Err(HfError::NonFiniteSample {
            node,
            t: f64::NAN,
        });
    }
    Ok(v)
}

fn zip_with(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

/// Which pair of basis families an orthogonality integral refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerProductKind {
    /// sample-and-hold against sample-and-hold
    Ss,
    /// triangular against triangular
    Tt,
    /// sample-and-hold against triangular
    St,
}

/// Analytic value of the basis orthogonality integral over `[0, t_end]`.
///
/// Supports of distinct indices are disjoint, so every off-diagonal integral
/// vanishes; the diagonal values are `h`, `h/3` and `h/2` respectively.
pub fn inner_product(i: usize, j: usize, grid: &Grid, kind: InnerProductKind) -> f64 {
    assert!(i < grid.m && j < grid.m, "basis index out of range");
    if i != j {
        return 0.0;
    }
    match kind {
        InnerProductKind::Ss => grid.h,
        InnerProductKind::Tt => grid.h / 3.0,
        InnerProductKind::St => grid.h / 2.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn grid_rejects_degenerate_input() {
        assert!(Grid::new(0.0, 4).is_err());
        assert!(Grid::new(-1.0, 4).is_err());
        assert!(Grid::new(1.0, 0).is_err());
        let g = Grid::new(1.0, 10).unwrap();
        assert_eq!(g.h(), 0.1);
        assert_eq!(g.node(10), 1.0);
    }

    #[test]
    fn sample_linear_is_exact() {
        let g = Grid::new(1.0, 4).unwrap();
        let p = HfPair::sample(&g, |t| t).unwrap();
        assert_eq!(p.cs(), &[0.0, 0.25, 0.5, 0.75]);
        assert_eq!(p.ct(), &[0.25, 0.25, 0.25, 0.25]);
    }

    #[test]
    fn sample_zero_function() {
        let g = Grid::new(2.0, 7).unwrap();
        let p = HfPair::sample(&g, |_| 0.0).unwrap();
        assert!(p.cs().iter().all(|&c| c == 0.0));
        assert!(p.ct().iter().all(|&d| d == 0.0));
    }

    #[test]
    fn sample_cubic_nodes() {
        let g = Grid::new(1.0, 8).unwrap();
        let p = HfPair::sample(&g, |t| t * t * t).unwrap();
        assert_eq!(p.cs()[2], 0.015625);
        assert_eq!(p.ct()[2], 0.037109375);
    }

    #[test]
    fn sample_reports_bad_node() {
        let g = Grid::new(1.0, 4).unwrap();
        let err = HfPair::sample(&g, |t| 1.0 / (t - 0.5)).unwrap_err();
        assert_eq!(
            err,
            HfError::NonFiniteSample { node: 2, t: 0.5 }
        );
    }

    #[test]
    fn evaluate_at_nodes_and_between() {
        let g = Grid::new(1.0, 4).unwrap();
        let p = HfPair::sample(&g, |t| t * t).unwrap();
        assert_eq!(p.evaluate(0.5).unwrap(), 0.25);
        // midpoint of the third subinterval: average of 0.0625 and 0.25
        assert_eq!(p.evaluate(0.375).unwrap(), 0.15625);
        // right endpoint returns the limit from the left
        assert_eq!(p.evaluate(1.0).unwrap(), 1.0);
        let z = HfPair::zero(&g);
        assert_eq!(z.evaluate(0.7).unwrap(), 0.0);
        assert!(matches!(
            p.evaluate(1.5),
            Err(HfError::OutOfDomain { .. })
        ));
        assert!(p.evaluate(-0.1).is_err());
    }

    #[test]
    fn evaluate_is_piecewise_linear() {
        let g = Grid::new(1.0, 5).unwrap();
        let p = HfPair::sample(&g, |t| (3.0 * t).sin()).unwrap();
        for i in 0..5 {
            for theta in [0.1, 0.37, 0.5, 0.93] {
                let t = (i as f64 + theta) * g.h();
                let want = p.cs()[i] + theta * p.ct()[i];
                assert_relative_eq!(p.evaluate(t).unwrap(), want, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn multiply_matches_sampled_product() {
        let g = Grid::new(1.0, 4).unwrap();
        let f = HfPair::sample(&g, |t| t).unwrap();
        let q = HfPair::sample(&g, |t| t * t).unwrap();
        let fq = f.multiply(&q).unwrap();
        let want = HfPair::sample(&g, |t| t * (t * t)).unwrap();
        for i in 0..4 {
            assert_relative_eq!(fq.cs()[i], want.cs()[i], max_relative = 1e-15);
            assert_relative_eq!(fq.ct()[i], want.ct()[i], max_relative = 1e-14, epsilon = 1e-16);
        }
    }

    #[test]
    fn multiply_identity_and_zero() {
        let g = Grid::new(1.0, 6).unwrap();
        let p = HfPair::sample(&g, |t| 2.0 - 0.5 * t * t).unwrap();
        let unit = HfPair::sample(&g, |_| 1.0).unwrap();
        assert_eq!(p.multiply(&unit).unwrap(), p);
        let zero = HfPair::zero(&g);
        assert_eq!(p.multiply(&zero).unwrap(), zero);
    }

    #[test]
    fn multiply_rejects_grid_mismatch() {
        let a = HfPair::zero(&Grid::new(1.0, 4).unwrap());
        let b = HfPair::zero(&Grid::new(1.0, 5).unwrap());
        assert_eq!(a.multiply(&b).unwrap_err(), HfError::GridMismatch);
    }

    #[test]
    fn power_matches_sampled_cube() {
        let g = Grid::new(1.0, 8).unwrap();
        let p = HfPair::sample(&g, |t| t).unwrap().power(3.0).unwrap();
        let want = HfPair::sample(&g, |t| t.powf(3.0)).unwrap();
        for i in 0..8 {
            assert_relative_eq!(p.cs()[i], want.cs()[i], max_relative = 1e-15);
        }
    }

    #[test]
    fn power_exponent_one_is_identity() {
        let g = Grid::new(1.0, 5).unwrap();
        let p = HfPair::sample(&g, |t| t * t - t).unwrap();
        assert_eq!(p.power(1.0).unwrap(), p);
    }

    #[test]
    fn power_of_cubic_third() {
        // node values of (t^3/3)^3 at the base nodes
        let g = Grid::new(1.0, 8).unwrap();
        let p = HfPair::sample(&g, |t| t * t * t / 3.0).unwrap();
        let cubed = p.power(3.0).unwrap();
        for i in 0..8 {
            let y = g.node(i).powi(3) / 3.0;
            assert_relative_eq!(cubed.cs()[i], y.powi(3), max_relative = 1e-15);
        }
    }

    #[test]
    fn power_rejects_negative_base_with_fractional_exponent() {
        let g = Grid::new(1.0, 4).unwrap();
        let p = HfPair::sample(&g, |t| t - 0.6).unwrap();
        match p.power(0.5).unwrap_err() {
            HfError::NegativeBase { node, .. } => assert_eq!(node, 0),
            other => panic!("unexpected error {other:?}"),
        }
        // integer exponents on negative bases are fine
        assert!(p.power(3.0).is_ok());
    }

    #[test]
    fn inner_products_analytic() {
        let g = Grid::new(1.0, 8).unwrap();
        let h = g.h();
        assert_eq!(inner_product(3, 3, &g, InnerProductKind::Ss), h);
        assert_eq!(inner_product(3, 3, &g, InnerProductKind::Tt), h / 3.0);
        assert_eq!(inner_product(3, 3, &g, InnerProductKind::St), h / 2.0);
        assert_eq!(inner_product(2, 5, &g, InnerProductKind::Ss), 0.0);
        assert_eq!(inner_product(0, 1, &g, InnerProductKind::Tt), 0.0);
        assert_eq!(inner_product(7, 6, &g, InnerProductKind::St), 0.0);
    }

    /// Composite Simpson on one subinterval; the integrands are at most
    /// quadratic there, so Simpson is exact up to rounding.
    fn simpson_product(g: &Grid, i: usize, j: usize, kind: InnerProductKind) -> f64 {
        let h = g.h();
        let s = |k: usize, t: f64| {
            let lo = k as f64 * h;
            if t >= lo && t < lo + h {
                1.0
            } else {
                0.0
            }
        };
        let tri = |k: usize, t: f64| {
            let lo = k as f64 * h;
            if t >= lo && t < lo + h {
                (t - lo) / h
            } else {
                0.0
            }
        };
        let f = |t: f64| match kind {
            InnerProductKind::Ss => s(i, t) * s(j, t),
            InnerProductKind::Tt => tri(i, t) * tri(j, t),
            InnerProductKind::St => s(i, t) * tri(j, t),
        };
        let mut total = 0.0;
        for k in 0..g.m() {
            let a = k as f64 * h;
            // keep the right endpoint inside the half-open support
            let b = a + h * (1.0 - 1e-12);
            let mid = 0.5 * (a + b);
            total += (b - a) / 6.0 * (f(a) + 4.0 * f(mid) + f(b));
        }
        total
    }

    #[test]
    fn inner_products_match_quadrature() {
        for m in [1usize, 2, 8] {
            let g = Grid::new(1.0, m).unwrap();
            for i in 0..m {
                for j in 0..m {
                    for kind in [InnerProductKind::Ss, InnerProductKind::Tt, InnerProductKind::St]
                    {
                        let analytic = inner_product(i, j, &g, kind);
                        let quad = simpson_product(&g, i, j, kind);
                        assert!(
                            (analytic - quad).abs() < 1e-12,
                            "m={m} i={i} j={j} {kind:?}: {analytic} vs {quad}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn node_values_round_trip() {
        let g = Grid::new(1.0, 6).unwrap();
        let p = HfPair::sample(&g, |t| 1.0 + 0.5 * t * t).unwrap();
        let v = p.node_values();
        let q = HfPair::from_node_values(&g, &v).unwrap();
        assert_eq!(p.cs(), q.cs());
        for i in 0..6 {
            assert_relative_eq!(p.ct()[i], q.ct()[i], max_relative = 1e-13, epsilon = 1e-16);
        }
    }
}
