//! The `T_n` sequence and the estimate of `λ = sup_n ||T_n||`.
//!
//! With `P = V V*` (`V` an orthonormal basis of `R(A*)`) and
//! `K = V* D V` Hermitian PSD, `S_n = I/n + K` on `R(P)`, so
//! `T_n = B* (I/n + Λ)^{-1} B` in the eigenbasis `K = W Λ W*` with
//! `B = W* V* D (I - P)`. Every `T_n` comes from one eigendecomposition.
//!
//! `T_n` is Loewner-increasing in `n`: `S_n` decreases, so its inverse
//! increases. A bounded sequence therefore creeps up to its limit, and the
//! stopping rule has to tell that creep apart from unbounded growth. Once
//! `n d_min >= SATURATION` (`d_min` the least nonzero eigenvalue of `K`) the
//! bounded part is within `1/SATURATION` of its limit in relative terms,
//! while any component in `N(K)` still grows linearly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore;
use crate::matrix::{ComplexMatrix, C64};
use crate::tolerance::ToleranceConfig;

/// Default last index of the doubling schedule.
pub const DEFAULT_N_MAX: u64 = 1 << 40;

const SATURATION: f64 = 1e3;
const GROWTH_RATIO: f64 = 1.5;
const GROWTH_STREAK: usize = 3;
/// Per-doubling decay of increments that counts as geometric convergence.
const DECAY_RATIO: f64 = 0.75;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum LambdaEstimate {
    /// `value` estimates `λ`. `n` is where the schedule stopped.
    Converged { value: f64, n: u64 },
    /// Linear growth detected after saturation.
    Divergent { n: u64, last_norm: f64 },
    /// Schedule exhausted without a clear verdict.
    Unresolved { n: u64, last_norm: f64 },
}

impl LambdaEstimate {
    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Converged { .. })
    }

    pub fn is_resolved(&self) -> bool {
        !matches!(self, Self::Unresolved { .. })
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Converged { value, .. } => Some(*value),
            _ => None,
        }
    }
}

/// `T_n` for all `n` at once, in the compressed eigenbasis.
#[derive(Debug, Clone)]
pub struct TnOperator {
    factor: ComplexMatrix,
    eigenvalues: Vec<f64>,
}

impl TnOperator {
    /// Fails unless `R(C) ⊆ R(A)` and `DP` is Hermitian PSD.
    pub fn new(a: &ComplexMatrix, c: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        if a.shape() != c.shape() || !a.is_square() {
            return Err(Error::ShapeMismatch {
                op: "tn_sequence",
                left: a.shape(),
                right: c.shape(),
            });
        }
        if !matcore::range_inclusion(a, c, tol)? {
            return Err(Error::PreconditionFailed("R(C) is not contained in R(A)".into()));
        }
        let d = &matcore::pinv(a, tol) * c;
        let dec = matcore::svd(a, tol);
        let v = dec.row_space_basis();
        let p = &v * &v.adjoint();
        let dp = &d * &p;
        if !matcore::is_psd(&dp, tol) {
            return Err(Error::PreconditionFailed("DP is not Hermitian PSD".into()));
        }
        let complement = &ComplexMatrix::identity(a.cols()) - &p;
        let k = &(&v.adjoint() * &d) * &v;
        let eig = matcore::eigh(&k.hermitian_part())?;
        // Relative to ||D||, not to K: K can be pure rounding noise.
        let cutoff = tol.rank_rtol * d.op_norm();
        let eigenvalues = eig
            .values
            .iter()
            .map(|&x| if x > cutoff { x } else { 0.0 })
            .collect();
        let factor = &(&(&eig.vectors.adjoint() * &v.adjoint()) * &d) * &complement;
        Ok(Self {
            factor,
            eigenvalues,
        })
    }

    /// Least nonzero eigenvalue of the compressed `DP`.
    pub fn smallest_positive(&self) -> Option<f64> {
        self.eigenvalues
            .iter()
            .copied()
            .filter(|&x| x > 0.0)
            .min_by(f64::total_cmp)
    }

    pub fn matrix(&self, n: u64) -> ComplexMatrix {
        let inv_n = 1.0 / n as f64;
        let b = &self.factor;
        let scaled = ComplexMatrix::from_fn(b.rows(), b.cols(), |i, j| {
            b.get(i, j) / C64::new(inv_n + self.eigenvalues[i], 0.0)
        });
        &b.adjoint() * &scaled
    }

    pub fn norm(&self, n: u64) -> f64 {
        self.matrix(n).op_norm()
    }
}

fn schedule(n_max: u64) -> impl Iterator<Item = u64> {
    std::iter::successors(Some(1u64), |&n| n.checked_mul(2)).take_while(move |&n| n <= n_max.max(1))
}

/// `(n, ||T_n||)` for `n = 1, 2, 4, ...` up to `n_max`.
pub fn tn_sequence(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    n_max: u64,
    tol: &ToleranceConfig,
) -> Result<Vec<(u64, f64)>> {
    let op = TnOperator::new(a, c, tol)?;
    Ok(schedule(n_max).map(|n| (n, op.norm(n))).collect())
}

/// Estimates `λ` along the doubling schedule.
///
/// Converged when a doubling changes the norm by less than
/// `residual_atol (1 + norm)`. Divergent when, past saturation, the norm
/// grows by at least `1.5x` on three consecutive doublings. If `n_max` is
/// reached first, increments that keep halving past saturation count as
/// convergence (the value adds the geometric tail); anything else is
/// unresolved.
pub fn lambda_diagnostic(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    n_max: u64,
    tol: &ToleranceConfig,
) -> Result<LambdaEstimate> {
    let op = TnOperator::new(a, c, tol)?;
    let saturated_at = op.smallest_positive().map_or(1.0, |d| SATURATION / d);

    let mut points = schedule(n_max);
    let first = points.next().unwrap_or(1);
    let mut prev = op.norm(first);
    let mut last_n = first;
    let mut prev_step: Option<f64> = None;
    let mut decaying = 0usize;
    let mut streak = 0usize;

    for n in points {
        let cur = op.norm(n);
        let step = (cur - prev).abs();
        last_n = n;
        if step <= tol.residual_atol * (1.0 + cur) {
            return Ok(LambdaEstimate::Converged { value: cur, n });
        }
        let saturated = n as f64 >= saturated_at;
        if saturated && prev > 0.0 && cur >= GROWTH_RATIO * prev {
            streak += 1;
            if streak >= GROWTH_STREAK {
                return Ok(LambdaEstimate::Divergent { n, last_norm: cur });
            }
        } else {
            streak = 0;
        }
        match prev_step {
            Some(p) if saturated && step <= DECAY_RATIO * p => decaying += 1,
            _ => decaying = 0,
        }
        prev_step = Some(step);
        prev = cur;
    }

    if decaying >= GROWTH_STREAK {
        // Remaining increments sum to about the last one.
        let tail = prev_step.unwrap_or(0.0);
        return Ok(LambdaEstimate::Converged {
            value: prev + tail,
            n: last_n,
        });
    }
    Ok(LambdaEstimate::Unresolved {
        n: last_n,
        last_norm: prev,
    })
}
