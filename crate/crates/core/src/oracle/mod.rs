//! Brute-force cross-checks for the solver. Everything here goes through
//! its own Jacobi eigensolver and normal equations rather than the SVD
//! and eigen routes that the solver's decisions use.

pub mod generate;
pub mod jacobi;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::douglas;
use crate::error::{Error, Result};
use crate::matcore;
use crate::matrix::{ComplexMatrix, C64};
use crate::tolerance::ToleranceConfig;

pub use generate::{Instance, InstanceKind, RankPolicy, TrialSpec, DEFAULT_SEED};

/// Agreement threshold between oracle and solver.
pub const AGREEMENT_TOL: f64 = 1e-8;
/// Relative eigenvalue cutoff for the normal equations.
const NORMAL_CUTOFF: f64 = 1e-12;
/// Relative floor for the search's PSD test. Stricter than the solver's so
/// that large search parameters cannot pass off a near-miss as positive.
const SEARCH_PSD_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LsqSolution {
    pub x: ComplexMatrix,
    /// `||AX - C||_F`.
    pub residual: f64,
}

/// Minimum-norm least-squares solution from `A*A X = A*C`, with `A*A`
/// inverted on its dominant eigenspace.
pub fn lsq_solve(a: &ComplexMatrix, c: &ComplexMatrix) -> Result<LsqSolution> {
    if a.rows() != c.rows() {
        return Err(Error::ShapeMismatch {
            op: "lsq_solve",
            left: a.shape(),
            right: c.shape(),
        });
    }
    let a_star = a.adjoint();
    let gram = &a_star * a;
    let e = jacobi::eigen(&gram);
    let top = e.values.last().copied().unwrap_or(0.0);
    let rhs = &a_star * c;
    let mut x = ComplexMatrix::zeros(a.cols(), c.cols());
    for (k, &lam) in e.values.iter().enumerate() {
        if top > 0.0 && lam > NORMAL_CUTOFF * top {
            let w = e.vectors.columns(k, 1);
            x = &x + &(&w * &(&w.adjoint() * &rhs)).scale(1.0 / lam);
        }
    }
    let residual = (&(a * &x) - c).fro_norm();
    Ok(LsqSolution { x, residual })
}

fn naive_hermitian_defect(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (m.get(i, j) - m.get(j, i).conj()).norm())
        .fold(0.0, f64::max)
}

fn max_entry(m: &ComplexMatrix) -> f64 {
    m.row_major().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Monte Carlo test of `<Mx, x> >= 0`. Probes the standard basis, pairs
/// `e_i ± e_j`, `e_i ± i e_j`, then `probes` random complex vectors.
///
/// A `false` is a witness that `M` is not PSD. A `true` is only evidence.
pub fn psd_quadratic_probe(m: &ComplexMatrix, probes: usize, seed: u64) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch {
            op: "psd_quadratic_probe",
            left: m.shape(),
            right: (m.rows(), m.rows()),
        });
    }
    let scale = max_entry(m).max(1.0);
    let defect = naive_hermitian_defect(m);
    if defect > 1e-9 * scale {
        return Err(Error::NotHermitian { defect });
    }
    let n = m.rows();
    let form = |x: &[C64]| -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += x[i].conj() * m.get(i, j) * x[j];
            }
        }
        let norm2: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        acc.re / norm2
    };
    let threshold = -1e-9 * scale;
    let unit = |i: usize| -> Vec<C64> {
        (0..n)
            .map(|k| C64::new(if k == i { 1.0 } else { 0.0 }, 0.0))
            .collect()
    };
    for i in 0..n {
        if form(&unit(i)) < threshold {
            return Ok(false);
        }
        for j in (i + 1)..n {
            for coef in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::i(), -C64::i()] {
                let mut x = unit(i);
                x[j] = coef;
                if form(&x) < threshold {
                    return Ok(false);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..probes {
        let x: Vec<C64> = generate::gaussian(&mut rng, n, 1).row_major();
        if x.iter().all(|z| z.norm() == 0.0) {
            continue;
        }
        if form(&x) < threshold {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `x` solves `AX = C` and is PSD, by the oracle's own tests.
pub fn is_positive_solution(a: &ComplexMatrix, c: &ComplexMatrix, x: &ComplexMatrix) -> bool {
    if a.cols() != x.rows() || x.cols() != c.cols() || !x.is_square() {
        return false;
    }
    let residual = (&(a * x) - c).fro_norm();
    if residual > AGREEMENT_TOL * c.fro_norm().max(1.0) {
        return false;
    }
    let scale = max_entry(x).max(1.0);
    if naive_hermitian_defect(x) > 1e-9 * scale {
        return false;
    }
    let e = jacobi::eigen(x);
    let top = e.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    e.values[0] >= -SEARCH_PSD_FLOOR * top
}

/// Randomized search for a PSD solution in the Hermitian family
/// `D + (I-P)D* + (I-P)Y(I-P)`: first `Y = 0`, then `Y = s G*G` with
/// Gaussian `G` and `s` log-uniform in `[1e-3, 1e3]`.
///
/// `D` and `P` come from the normal equations. `None` after `budget`
/// candidates is evidence against positive solvability, not proof.
pub fn positive_search(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    budget: usize,
    seed: u64,
) -> Option<ComplexMatrix> {
    if !a.is_square() || a.shape() != c.shape() || budget == 0 {
        return None;
    }
    let n = a.cols();
    let d = lsq_solve(a, c).ok()?.x;
    let p = jacobi::dominant_projector(&(&a.adjoint() * a), NORMAL_CUTOFF);
    let q = &ComplexMatrix::identity(n) - &p;
    let base = (&d + &(&q * &d.adjoint())).hermitian_part();
    if is_positive_solution(a, c, &base) {
        return Some(base);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 1..budget {
        let g = generate::gaussian(&mut rng, n, n);
        let s = 10f64.powf(rng.random_range(-3.0..3.0));
        let y = (&g.adjoint() * &g).scale(s);
        let x = (&base + &(&(&q * &y) * &q)).hermitian_part();
        if is_positive_solution(a, c, &x) {
            return Some(x);
        }
    }
    None
}

/// The three properties of the reduced solution `D`: `||D||^2` equals the
/// least `mu` with `CC* <= mu AA*`, `N(D) = N(C)`, and `R(D) ⊆ R(A*)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DouglasPropertiesReport {
    pub norm_squared: f64,
    pub mu_star: f64,
    /// `|‖D‖² − mu*| / max(1, mu*)`.
    pub norm_identity_error: f64,
    /// `||D Π_{N(C)}||`: `N(C) ⊆ N(D)`.
    pub kernel_residual_c_in_d: f64,
    /// `||C Π_{N(D)}||`: `N(D) ⊆ N(C)`.
    pub kernel_residual_d_in_c: f64,
    /// `||(I − Π_{R(A*)}) D||`.
    pub range_residual: f64,
}

impl DouglasPropertiesReport {
    pub fn norm_identity_holds(&self) -> bool {
        self.norm_identity_error <= AGREEMENT_TOL
    }

    pub fn kernels_agree(&self) -> bool {
        self.kernel_residual_c_in_d <= AGREEMENT_TOL && self.kernel_residual_d_in_c <= AGREEMENT_TOL
    }

    pub fn range_holds(&self) -> bool {
        self.range_residual <= AGREEMENT_TOL
    }

    pub fn all_hold(&self) -> bool {
        self.norm_identity_holds() && self.kernels_agree() && self.range_holds()
    }
}

fn null_projector(m: &ComplexMatrix) -> ComplexMatrix {
    let gram = &m.adjoint() * m;
    &ComplexMatrix::identity(m.cols()) - &jacobi::dominant_projector(&gram, NORMAL_CUTOFF)
}

/// Checks the reduced solution produced by the solver.
pub fn douglas_properties_check(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<DouglasPropertiesReport> {
    let d = douglas::reduced_solution(a, c, tol)?;
    let mu_star = match matcore::min_majorization_scale(a, c, tol)?.mu_star {
        matcore::Scale::Finite(mu) => mu,
        matcore::Scale::Infinite => f64::INFINITY,
    };
    let norm = jacobi::spectral_norm(&d);
    let norm_squared = norm * norm;
    let row_space = jacobi::dominant_projector(&(&a.adjoint() * a), NORMAL_CUTOFF);
    let outside = &d - &(&row_space * &d);
    Ok(DouglasPropertiesReport {
        norm_squared,
        mu_star,
        norm_identity_error: (norm_squared - mu_star).abs() / mu_star.max(1.0),
        kernel_residual_c_in_d: jacobi::spectral_norm(&(&d * &null_projector(c))),
        kernel_residual_d_in_c: jacobi::spectral_norm(&(c * &null_projector(&d))),
        range_residual: jacobi::spectral_norm(&outside),
    })
}

/// PSD test of an assembled matrix by the oracle's eigensolver, with the
/// solver's floor convention.
pub fn eigen_is_psd(m: &ComplexMatrix, tol: &ToleranceConfig) -> bool {
    if naive_hermitian_defect(m) > tol.residual_bound(max_entry(m)) {
        return false;
    }
    let e = jacobi::eigen(m);
    let norm = e.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    e.values.first().is_none_or(|&v| v >= tol.psd_floor(norm))
}
