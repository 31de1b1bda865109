//! One-shot operational matrices of fractional integration.
//!
//! For a grid of `m` subintervals the Riemann-Liouville integral of order
//! `alpha` maps the hybrid-function basis onto itself through four
//! upper-triangular Toeplitz matrices: step-to-step, step-to-ramp,
//! ramp-to-step and ramp-to-ramp. Each matrix is fully described by its
//! first row, and applying the set to a coefficient pair integrates the
//! expansion in a single pass.
//!
//! First-row entries are the exact node values of the fractionally
//! integrated unit step / unit ramp at integer lags, so the node values of
//! an integrated expansion are exact up to rounding. For `alpha = 1` the
//! rows collapse to the classical one-shot integration matrices
//! `h * [0 1 1 ..]`, `h * [1 0 0 ..]`, `h/2 * [0 1 1 ..]`, `h/2 * [1 0 0 ..]`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::basis::{Grid, HfPair};
use crate::error::HfError;

/// Largest integration order accepted by [`build`]; keeps every internal
/// gamma evaluation inside the high-accuracy range.
pub const MAX_ORDER: f64 = 50.0;

// ---------------------------------------------------------------------------
// gamma
// ---------------------------------------------------------------------------

// Lanczos rational approximation, g = 6.024680040776729583740234375,
// 13 terms (the standard double-precision coefficient set; relative error
// of the sum is below 1.2e-17). Arrays are ordered constant term first; the
// denominator is z(z+1)...(z+11).
const LANCZOS_G: f64 = 6.024680040776729583740234375;

const LANCZOS_NUM: [f64; 13] = [
    23531376880.410759688572007674451636754734846804940,
    42919803642.649098768957899047001988850926355848959,
    35711959237.355668049440185451547166705960488635843,
    17921034426.037209699919755754458931112671403265390,
    6039542586.3520280050642916443072979210699388420708,
    1439720407.3117216736632230727949123939715485786772,
    248874557.86205415651146038641322942321632125127801,
    31426415.585400194380614231628318205362874684987640,
    2876370.6289353724412254090516208496135991145378768,
    186056.26539522349504029498971604569928220784236328,
    8071.6720023658162106380029022722506138218516325024,
    210.82427775157934587250973392071336271166969580291,
    2.5066282746310002701649081771338373386264310793408,
];

const LANCZOS_DEN: [f64; 13] = [
    0.0, 39916800.0, 120543840.0, 150917976.0, 105258076.0, 45995730.0, 13339535.0, 2637558.0,
    357423.0, 32670.0, 1925.0, 66.0, 1.0,
];

fn horner(coeffs: &[f64], z: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}

fn lanczos_gamma(z: f64) -> f64 {
    let sum = horner(&LANCZOS_NUM, z) / horner(&LANCZOS_DEN, z);
    let zgh = z + LANCZOS_G - 0.5;
    sum * zgh.powf(z - 0.5) * (-zgh).exp()
}

/// Gamma function for positive arguments.
///
/// Exact for integer arguments that fit a factorial product; elsewhere the
/// Lanczos approximation keeps the relative error well below 1e-14 on
/// `(0, 50]`. Non-positive or NaN input is a domain error.
pub fn gamma(x: f64) -> Result<f64, HfError> {
    if !(x > 0.0) {
        return Err(HfError::GammaDomain { x });
    }
    if x > 171.7 {
        return Ok(f64::INFINITY);
    }
    if x.fract() == 0.0 {
        // factorial product; exact in f64 up to 18!, within an ulp beyond
        let n = x as u64;
        let mut acc = 1.0;
        for k in 2..n {
            acc *= k as f64;
        }
        return Ok(acc);
    }
    if x < 0.5 {
        // reflection keeps the Lanczos argument at 0.5 or above
        let s = (std::f64::consts::PI * x).sin();
        return Ok(std::f64::consts::PI / (s * lanczos_gamma(1.0 - x)));
    }
    Ok(lanczos_gamma(x))
}

// ---------------------------------------------------------------------------
// matrices
// ---------------------------------------------------------------------------

/// Upper-triangular Toeplitz matrix stored as its first row: entry `(i, j)`
/// is `first_row[j - i]` for `j >= i` and zero below the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct UtToeplitz {
    first_row: Vec<f64>,
}

impl UtToeplitz {
    pub fn new(first_row: Vec<f64>) -> UtToeplitz {
        assert!(!first_row.is_empty(), "matrix dimension must be positive");
        UtToeplitz { first_row }
    }

    /// Matrix dimension (the length of the first row).
    pub fn dim(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[f64] {
        &self.first_row
    }

    /// Entry `(i, j)` of the expanded matrix.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.dim() && j < self.dim(), "index out of range");
        if j >= i {
            self.first_row[j - i]
        } else {
            0.0
        }
    }
}

/// Row-vector times matrix: `result[j] = sum_{i <= j} coeffs[i] * first_row[j - i]`.
pub fn apply_row(coeffs: &[f64], mat: &UtToeplitz) -> Result<Vec<f64>, HfError> {
    if coeffs.len() != mat.dim() {
        return Err(HfError::LengthMismatch {
            expected: mat.dim(),
            got: coeffs.len(),
        });
    }
    let row = mat.first_row();
    let out = (0..coeffs.len())
        .map(|j| (0..=j).map(|i| coeffs[i] * row[j - i]).sum())
        .collect();
    Ok(out)
}

/// The four integration matrices for one order and one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OpMatSet {
    pub alpha: f64,
    pub grid: Grid,
    /// step basis, value part (strictly upper triangular)
    pub pss: UtToeplitz,
    /// step basis, increment part
    pub pst: UtToeplitz,
    /// ramp basis, value part (strictly upper triangular)
    pub pts: UtToeplitz,
    /// ramp basis, increment part
    pub ptt: UtToeplitz,
}

/// Node value coefficient of the order-`alpha` integral of a unit step at
/// integer lag `k`: `k^alpha - (k-1)^alpha`, evaluated in a
/// cancellation-stable form for large lags.
pub(crate) fn step_value(k: f64, alpha: f64) -> f64 {
    if alpha == 1.0 {
        return 1.0;
    }
    if k <= 8.0 {
        k.powf(alpha) - (k - 1.0).powf(alpha)
    } else {
        -k.powf(alpha) * f64::exp_m1(alpha * f64::ln_1p(-1.0 / k))
    }
}

/// Node value coefficient of the order-`alpha` integral of a unit ramp at
/// integer lag `k`: `k^(alpha+1) - (k-1)^alpha (k + alpha)`, stable form for
/// large lags.
pub(crate) fn ramp_value(k: f64, alpha: f64) -> f64 {
    if alpha == 1.0 {
        return 1.0;
    }
    if k <= 8.0 {
        k.powf(alpha + 1.0) - (k - 1.0).powf(alpha) * (k + alpha)
    } else {
        k.powf(alpha) * (-(k + alpha) * f64::exp_m1(alpha * f64::ln_1p(-1.0 / k)) - alpha)
    }
}

/// Generate the four operational matrices for order `alpha` on `grid`.
///
/// The order must lie in `(0, MAX_ORDER]`. Increment rows are built as
/// differences of consecutive value coefficients, so the telescoping
/// identities between value and increment entries hold exactly.
pub fn build(alpha: f64, grid: &Grid) -> Result<OpMatSet, HfError> {
    if !(alpha > 0.0 && alpha <= MAX_ORDER) {
        return Err(HfError::OrderRange { alpha });
    }
    let m = grid.m();
    let h = grid.h();
    let fac_s = h.powf(alpha) / gamma(alpha + 1.0)?;
    let fac_t = h.powf(alpha) / gamma(alpha + 2.0)?;

    // value coefficients at lags 1..=m; one beyond the row length so the
    // last increment entry has its forward difference
    let sv: Vec<f64> = (1..=m).map(|k| step_value(k as f64, alpha)).collect();
    let tv: Vec<f64> = (1..=m).map(|k| ramp_value(k as f64, alpha)).collect();

    let mut pss = vec![0.0; m];
    let mut pst = vec![0.0; m];
    let mut pts = vec![0.0; m];
    let mut ptt = vec![0.0; m];
    pst[0] = fac_s;
    ptt[0] = fac_t;
    for k in 1..m {
        pss[k] = fac_s * sv[k - 1];
        pst[k] = fac_s * (sv[k] - sv[k - 1]);
        pts[k] = fac_t * tv[k - 1];
        ptt[k] = fac_t * (tv[k] - tv[k - 1]);
    }

    Ok(OpMatSet {
        alpha,
        grid: *grid,
        pss: UtToeplitz::new(pss),
        pst: UtToeplitz::new(pst),
        pts: UtToeplitz::new(pts),
        ptt: UtToeplitz::new(ptt),
    })
}

#[derive(Hash, PartialEq, Eq)]
struct CacheKey {
    alpha_bits: u64,
    m: usize,
    h_bits: u64,
}

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<OpMatSet>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<OpMatSet>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// [`build`] with a process-wide cache keyed by the exact bits of
/// `(alpha, m, h)`; repeated requests for the same order and grid share one
/// matrix set.
pub fn build_cached(alpha: f64, grid: &Grid) -> Result<Arc<OpMatSet>, HfError> {
    let key = CacheKey {
        alpha_bits: alpha.to_bits(),
        m: grid.m(),
        h_bits: grid.h().to_bits(),
    };
    if let Some(hit) = cache().lock().unwrap().get(&key) {
        return Ok(Arc::clone(hit));
    }
    let mats = Arc::new(build(alpha, grid)?);
    cache()
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| Arc::clone(&mats));
    Ok(mats)
}

/// Riemann-Liouville fractional integral of order `alpha` of an expansion,
/// computed through the cached operational matrices of its grid.
pub fn frac_integrate(p: &HfPair, alpha: f64) -> Result<HfPair, HfError> {
    let mats = build_cached(alpha, p.grid())?;
    integrate_with(p, &mats)
}

/// As [`frac_integrate`] but with an already-built matrix set.
pub fn integrate_with(p: &HfPair, mats: &OpMatSet) -> Result<HfPair, HfError> {
    if *p.grid() != mats.grid {
        return Err(HfError::GridMismatch);
    }
    let from_s = apply_row(p.cs(), &mats.pss)?;
    let from_t = apply_row(p.ct(), &mats.pts)?;
    let cs: Vec<f64> = from_s.iter().zip(&from_t).map(|(a, b)| a + b).collect();
    let from_s = apply_row(p.cs(), &mats.pst)?;
    let from_t = apply_row(p.ct(), &mats.ptt)?;
    let ct: Vec<f64> = from_s.iter().zip(&from_t).map(|(a, b)| a + b).collect();
    HfPair::from_coeffs(p.grid(), cs, ct)
}
