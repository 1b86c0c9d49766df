//! Solutions of `AX = C`: the reduced solution, the general, Hermitian and
//! positive solution families, and the solvability criteria that decide
//! which families are nonempty.
//!
//! Notation used throughout: `D = A†C` is the reduced solution, `U_A` the
//! partial isometry of `A`'s polar decomposition and `P = U_A* U_A` the
//! projector onto `R(A*)`.
//!
//! Finite-dimensional matrices always have closed range, so every operator
//! here is regular and the polar decomposition always exists. The criteria
//! therefore reduce to rank and Loewner-order tests.

mod block;
mod lambda;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{self, Scale};
use crate::matrix::ComplexMatrix;
use crate::tolerance::ToleranceConfig;

pub use block::block_psd_test;
pub use lambda::{lambda_diagnostic, tn_sequence, LambdaEstimate, TnOperator, DEFAULT_N_MAX};

/// Strongest kind of solution known to exist. Ordered: positive implies
/// Hermitian implies general.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Unsolvable,
    SolvableGeneral,
    SolvableHermitian,
    SolvablePositive,
}

/// Outcome of a solvability check, with the quantities that justify it.
///
/// Fields tied to positivity are `None` when the check that produced the
/// report did not look at positivity (see [`hermitian_solvability`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolvabilityReport {
    /// `R(C) ⊆ R(A)`.
    pub range_ok: bool,
    /// `||A A† C - C||`.
    pub range_residual: f64,
    pub ca_star_hermitian: bool,
    /// `||CA* - (CA*)*||`.
    pub hermitian_defect: f64,
    pub ca_star_psd: Option<bool>,
    pub ca_star_min_eigenvalue: Option<f64>,
    /// Least `t` with `CC* <= t CA*`.
    pub t_min: Option<Scale>,
    /// `R(D) = R(DP)`.
    pub dp_range_eq: Option<bool>,
    /// `||(I - Π_{R(DP)}) D||`.
    pub dp_range_residual: Option<f64>,
    pub lambda_estimate: Option<LambdaEstimate>,
    /// Whether the `t_min` route and the `T_n` route agree with the
    /// range-equality route. Only set when `range_ok`.
    pub routes_agree: Option<bool>,
    pub verdict: Verdict,
    /// First condition that failed, for negative verdicts.
    pub failed_condition: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionKind {
    General,
    Hermitian,
    Positive,
}

/// The data parametrizing a solution family of `AX = C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFamily {
    /// `D = A†C`.
    pub reduced: ComplexMatrix,
    /// `P = U_A* U_A`.
    pub projector_p: ComplexMatrix,
    /// `I - P`.
    pub complement: ComplexMatrix,
    /// Particular positive solution, positive families only.
    pub x_zero: Option<ComplexMatrix>,
    pub kind: SolutionKind,
}

impl SolutionFamily {
    /// `D + (I - P) Y`.
    pub fn general_member(&self, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        expect_shape("general_solution", y, self.reduced.shape())?;
        Ok(&self.reduced + &(&self.complement * y))
    }

    /// `D + (I - P) D* + (I - P) Y (I - P)`, `Y` Hermitian.
    pub fn hermitian_member(&self, y: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
        if self.kind == SolutionKind::General {
            return Err(Error::PreconditionFailed(
                "family was not built for Hermitian solutions".into(),
            ));
        }
        expect_shape("hermitian_solution", y, self.reduced.shape())?;
        let defect = matcore::hermitian_defect(y);
        if defect > tol.residual_bound(y.op_norm()) {
            return Err(Error::ParameterNotHermitian { defect });
        }
        let q = &self.complement;
        let base = &self.reduced + &(q * &self.reduced.adjoint());
        Ok(&base + &(&(q * y) * q))
    }

    /// `X_0 + (I - P) Z (I - P)`, `Z` positive semidefinite.
    pub fn positive_member(&self, z: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
        let x_zero = self.x_zero.as_ref().ok_or_else(|| {
            Error::PreconditionFailed("family was not built for positive solutions".into())
        })?;
        expect_shape("positive_solution", z, x_zero.shape())?;
        if !matcore::is_psd(z, tol) {
            let min_eigenvalue = matcore::min_eigenvalue(z).unwrap_or(f64::NAN);
            return Err(Error::ParameterNotPsd { min_eigenvalue });
        }
        let q = &self.complement;
        Ok(x_zero + &(&(q * z) * q))
    }
}

fn expect_shape(op: &'static str, m: &ComplexMatrix, shape: (usize, usize)) -> Result<()> {
    if m.shape() != shape {
        return Err(Error::ShapeMismatch {
            op,
            left: m.shape(),
            right: shape,
        });
    }
    Ok(())
}

fn expect_same_rows(op: &'static str, a: &ComplexMatrix, c: &ComplexMatrix) -> Result<()> {
    if a.rows() != c.rows() {
        return Err(Error::ShapeMismatch {
            op,
            left: a.shape(),
            right: c.shape(),
        });
    }
    Ok(())
}

fn expect_same_shape(op: &'static str, a: &ComplexMatrix, c: &ComplexMatrix) -> Result<()> {
    if a.shape() != c.shape() {
        return Err(Error::ShapeMismatch {
            op,
            left: a.shape(),
            right: c.shape(),
        });
    }
    Ok(())
}

/// `P = U_A* U_A`, the projector onto `R(A*)`.
pub fn initial_projector(a: &ComplexMatrix, tol: &ToleranceConfig) -> ComplexMatrix {
    let u = matcore::polar_partial_isometry(a, tol);
    &u.adjoint() * &u
}

/// The reduced solution `D = A†C`, the unique solution with
/// `R(D) ⊆ R(A*)`.
pub fn reduced_solution(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    expect_same_rows("reduced_solution", a, c)?;
    let residual = matcore::range_residual(a, c, tol)?;
    if residual > tol.residual_bound(c.op_norm()) {
        return Err(Error::NotSolvable { residual });
    }
    Ok(&matcore::pinv(a, tol) * c)
}

fn family(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    kind: SolutionKind,
    tol: &ToleranceConfig,
) -> Result<SolutionFamily> {
    let reduced = reduced_solution(a, c, tol)?;
    let projector_p = initial_projector(a, tol);
    let complement = &ComplexMatrix::identity(a.cols()) - &projector_p;
    Ok(SolutionFamily {
        reduced,
        projector_p,
        complement,
        x_zero: None,
        kind,
    })
}

/// Family of all solutions `X = D + (I - P) Y`.
pub fn general_family(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<SolutionFamily> {
    family(a, c, SolutionKind::General, tol)
}

pub fn general_solution(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    general_family(a, c, tol)?.general_member(y)
}

/// Inverts the general parametrization: for a solution `X` returns
/// `Y = X - D`, which maps back to `X` under [`general_solution`].
pub fn recover_parameter(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    x: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    expect_same_rows("recover_parameter", a, c)?;
    if a.cols() != x.rows() || c.cols() != x.cols() {
        return Err(Error::ShapeMismatch {
            op: "recover_parameter",
            left: x.shape(),
            right: (a.cols(), c.cols()),
        });
    }
    let residual = (&(a * x) - c).op_norm();
    if residual > tol.residual_bound(c.op_norm()) {
        return Err(Error::NotASolution { residual });
    }
    let d = reduced_solution(a, c, tol)?;
    Ok(x - &d)
}

/// Conditions shared by both solvability checks.
struct BaseChecks {
    range_ok: bool,
    range_residual: f64,
    ca_star: ComplexMatrix,
    ca_star_hermitian: bool,
    hermitian_defect: f64,
}

fn base_checks(a: &ComplexMatrix, c: &ComplexMatrix, tol: &ToleranceConfig) -> Result<BaseChecks> {
    let range_residual = matcore::range_residual(a, c, tol)?;
    let range_ok = range_residual <= tol.residual_bound(c.op_norm());
    let ca_star = c * &a.adjoint();
    let hermitian_defect = matcore::hermitian_defect(&ca_star);
    let ca_star_hermitian = hermitian_defect <= tol.residual_bound(ca_star.op_norm());
    Ok(BaseChecks {
        range_ok,
        range_residual,
        ca_star,
        ca_star_hermitian,
        hermitian_defect,
    })
}

/// Hermitian solvability: `R(C) ⊆ R(A)` and `CA*` Hermitian. The verdict is
/// capped at [`Verdict::SolvableHermitian`]; positivity is not examined.
pub fn hermitian_solvability(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<SolvabilityReport> {
    expect_same_shape("hermitian_solvability", a, c)?;
    let base = base_checks(a, c, tol)?;
    let (verdict, failed_condition) = if !base.range_ok {
        (Verdict::Unsolvable, Some(RANGE_FAILED.to_string()))
    } else if !base.ca_star_hermitian {
        (Verdict::SolvableGeneral, Some(HERMITIAN_FAILED.to_string()))
    } else {
        (Verdict::SolvableHermitian, None)
    };
    Ok(SolvabilityReport {
        range_ok: base.range_ok,
        range_residual: base.range_residual,
        ca_star_hermitian: base.ca_star_hermitian,
        hermitian_defect: base.hermitian_defect,
        ca_star_psd: None,
        ca_star_min_eigenvalue: None,
        t_min: None,
        dp_range_eq: None,
        dp_range_residual: None,
        lambda_estimate: None,
        routes_agree: None,
        verdict,
        failed_condition,
    })
}

const RANGE_FAILED: &str = "range_inclusion: R(C) is not contained in R(A)";
const HERMITIAN_FAILED: &str = "ca_star_hermitian: CA* is not Hermitian";
const PSD_FAILED: &str = "ca_star_psd: CA* is not positive semidefinite";
const DP_RANGE_FAILED: &str = "dp_range_eq: R(D) differs from R(DP)";

/// Whether `R(D) = R(DP)`, with the residual `||(I - Π_{R(DP)}) D||`.
fn dp_range_equality(
    d: &ComplexMatrix,
    p: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> (bool, f64) {
    let dp = d * p;
    // DP can be rounding noise while D is not, so ranks are cut relative
    // to ||D||.
    let d_norm = d.op_norm();
    let dec = matcore::svd_at_scale(&dp, d_norm, tol);
    let basis = dec.range_basis();
    let residual = (d - &(&basis * &(&basis.adjoint() * d))).op_norm();
    let equal = residual <= tol.residual_bound(d_norm) && matcore::rank(d, tol) == dec.rank;
    (equal, residual)
}

/// Full solvability report, including positive solvability.
///
/// The verdict uses `R(C) ⊆ R(A)`, `CA* >= 0` and `R(D) = R(DP)`. Two
/// independent routes are cross-checked against it: the least `t` with
/// `CC* <= t CA*` (finite exactly when a positive solution exists) and the
/// `T_n` norm sequence (bounded exactly when a positive solution exists).
pub fn positive_solvability(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<SolvabilityReport> {
    positive_solvability_with(a, c, DEFAULT_N_MAX, tol)
}

/// [`positive_solvability`] with an explicit cap on the `T_n` schedule.
pub fn positive_solvability_with(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    n_max: u64,
    tol: &ToleranceConfig,
) -> Result<SolvabilityReport> {
    expect_same_shape("positive_solvability", a, c)?;
    let base = base_checks(a, c, tol)?;

    let ca_star_min_eigenvalue = matcore::min_eigenvalue(&base.ca_star)?;
    let ca_star_psd = base.ca_star_hermitian
        && ca_star_min_eigenvalue >= tol.psd_floor(base.ca_star.op_norm());
    // CA* can be rounding noise while C and A are not; judge its
    // eigenvalues against the size of its factors.
    let c_norm = c.op_norm();
    let ca_scale = c_norm * a.op_norm().max(c_norm);
    let t_min = matcore::min_loewner_scale_at(&base.ca_star, c, ca_scale, tol)?;

    let d = &matcore::pinv(a, tol) * c;
    let p = initial_projector(a, tol);
    let (dp_range_eq, dp_range_residual) = dp_range_equality(&d, &p, tol);

    let lambda_estimate = if base.range_ok && ca_star_psd {
        lambda_diagnostic(a, c, n_max, tol).ok()
    } else {
        None
    };

    let (verdict, failed_condition) = if !base.range_ok {
        (Verdict::Unsolvable, Some(RANGE_FAILED))
    } else if !base.ca_star_hermitian {
        (Verdict::SolvableGeneral, Some(HERMITIAN_FAILED))
    } else if !ca_star_psd {
        (Verdict::SolvableHermitian, Some(PSD_FAILED))
    } else if !dp_range_eq {
        (Verdict::SolvableHermitian, Some(DP_RANGE_FAILED))
    } else {
        (Verdict::SolvablePositive, None)
    };

    let routes_agree = base.range_ok.then(|| {
        let exact = ca_star_psd && dp_range_eq;
        let t_route = t_min.is_finite() == exact;
        let lambda_route = match &lambda_estimate {
            Some(est) => est.is_resolved() && est.is_finite() == dp_range_eq,
            None => true,
        };
        t_route && lambda_route
    });

    Ok(SolvabilityReport {
        range_ok: base.range_ok,
        range_residual: base.range_residual,
        ca_star_hermitian: base.ca_star_hermitian,
        hermitian_defect: base.hermitian_defect,
        ca_star_psd: Some(ca_star_psd),
        ca_star_min_eigenvalue: Some(ca_star_min_eigenvalue),
        t_min: Some(t_min),
        dp_range_eq: Some(dp_range_eq),
        dp_range_residual: Some(dp_range_residual),
        lambda_estimate,
        routes_agree,
        verdict,
        failed_condition: failed_condition.map(str::to_string),
    })
}

/// Family of Hermitian solutions; fails unless `R(C) ⊆ R(A)` and `CA*` is
/// Hermitian.
pub fn hermitian_family(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<SolutionFamily> {
    let report = hermitian_solvability(a, c, tol)?;
    if report.verdict < Verdict::SolvableHermitian {
        return Err(Error::NotSolvableHermitian {
            failed_condition: report.failed_condition.unwrap_or_default(),
        });
    }
    family(a, c, SolutionKind::Hermitian, tol)
}

pub fn hermitian_solution(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    hermitian_family(a, c, tol)?.hermitian_member(y, tol)
}

/// Family of positive solutions `X_0 + (I - P) Z (I - P)` with
/// `X_0 = D + (I-P)D* + (I-P)D*(DP)†D(I-P)`.
///
/// The free part lives on the complement of `P`: that is what makes every
/// member satisfy `AX = C`, since `A(I - P) = 0`.
pub fn positive_family(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<SolutionFamily> {
    // The T_n route is a diagnostic; skip it here.
    let report = positive_solvability_with(a, c, 1, tol)?;
    if report.verdict < Verdict::SolvablePositive {
        return Err(Error::NotSolvablePositive {
            failed_condition: report.failed_condition.unwrap_or_default(),
        });
    }
    let mut fam = family(a, c, SolutionKind::Positive, tol)?;
    let d = &fam.reduced;
    let q = &fam.complement;
    let dp_pinv = matcore::pinv(&(d * &fam.projector_p), tol);
    let d_star = d.adjoint();
    let leak = &(&(&(q * &d_star) * &dp_pinv) * d) * q;
    let x_zero = &(d + &(q * &d_star)) + &leak;
    fam.x_zero = Some(x_zero);
    Ok(fam)
}

pub fn positive_solution(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    z: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    positive_family(a, c, tol)?.positive_member(z, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::C64;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    fn assert_close(a: &ComplexMatrix, b: &ComplexMatrix, eps: f64) {
        let d = a.max_abs_diff(b);
        assert!(d <= eps, "differ by {d:e}\n{a:?}\n{b:?}");
    }

    fn rank_one_pair() -> (ComplexMatrix, ComplexMatrix) {
        (
            real(&[&[1.0, 0.0], &[0.0, 0.0]]),
            real(&[&[2.0, 1.0], &[0.0, 0.0]]),
        )
    }

    fn three_by_three_pair() -> (ComplexMatrix, ComplexMatrix) {
        (
            ComplexMatrix::from_diagonal(&[1.0, 1.0, 0.0]),
            real(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]]),
        )
    }

    #[test]
    fn reduced_solution_examples() {
        let (a, c) = rank_one_pair();
        let d = reduced_solution(&a, &c, &tol()).unwrap();
        assert_close(&d, &c, 1e-12);
        assert!(!matcore::is_hermitian(&d, &tol()));

        let a = real(&[&[2.0, 1.0], &[1.0, 3.0]]);
        let c = real(&[&[1.0, 4.0], &[-2.0, 0.5]]);
        let d = reduced_solution(&a, &c, &tol()).unwrap();
        // A^{-1} = [[3, -1], [-1, 2]] / 5
        let inv = real(&[&[0.6, -0.2], &[-0.2, 0.4]]);
        assert_close(&d, &(&inv * &c), 1e-12);

        let (a, c) = three_by_three_pair();
        assert_close(&reduced_solution(&a, &c, &tol()).unwrap(), &c, 1e-12);
    }

    #[test]
    fn reduced_solution_reports_residual_when_unsolvable() {
        let a = ComplexMatrix::from_diagonal(&[0.0, 1.0]);
        let c = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        match reduced_solution(&a, &c, &tol()) {
            Err(Error::NotSolvable { residual }) => assert!((residual - 1.0).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn general_solution_examples() {
        let (a, c) = rank_one_pair();
        let y0 = ComplexMatrix::zeros(2, 2);
        assert_close(&general_solution(&a, &c, &y0, &tol()).unwrap(), &c, 1e-12);

        let y = real(&[&[9.0, 9.0], &[1.0, 1.0]]);
        let x = general_solution(&a, &c, &y, &tol()).unwrap();
        assert_close(&x, &real(&[&[2.0, 1.0], &[1.0, 1.0]]), 1e-12);
        assert_close(&(&a * &x), &c, 1e-12);

        let bad = ComplexMatrix::zeros(3, 2);
        assert!(matches!(
            general_solution(&a, &c, &bad, &tol()),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn recover_parameter_examples() {
        let (a, c) = rank_one_pair();
        let y = recover_parameter(&a, &c, &c, &tol()).unwrap();
        assert!(y.fro_norm() < 1e-12);

        let x = real(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let y = recover_parameter(&a, &c, &x, &tol()).unwrap();
        assert_close(&y, &real(&[&[0.0, 0.0], &[1.0, 1.0]]), 1e-12);
        assert_close(&general_solution(&a, &c, &y, &tol()).unwrap(), &x, 1e-12);

        let not_x = real(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(matches!(
            recover_parameter(&a, &c, &not_x, &tol()),
            Err(Error::NotASolution { .. })
        ));
    }

    #[test]
    fn hermitian_solvability_examples() {
        let (a, c) = rank_one_pair();
        let r = hermitian_solvability(&a, &c, &tol()).unwrap();
        assert!(r.range_ok && r.ca_star_hermitian);
        assert_close(&(&c * &a.adjoint()), &ComplexMatrix::from_diagonal(&[2.0, 0.0]), 1e-14);

        let (a, c) = three_by_three_pair();
        let r = hermitian_solvability(&a, &c, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::SolvableHermitian);

        // CA* = [[0, 1], [0, 0]]
        let a = ComplexMatrix::identity(2);
        let c = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let r = hermitian_solvability(&a, &c, &tol()).unwrap();
        assert!(!r.ca_star_hermitian);
        assert_eq!(r.verdict, Verdict::SolvableGeneral);
        assert!(r.failed_condition.is_some());
    }

    #[test]
    fn hermitian_solution_examples() {
        let (a, c) = rank_one_pair();
        let x = hermitian_solution(&a, &c, &ComplexMatrix::zeros(2, 2), &tol()).unwrap();
        assert_close(&x, &real(&[&[2.0, 1.0], &[1.0, 0.0]]), 1e-12);

        let (a, c) = three_by_three_pair();
        for x33 in [-2.0, 0.0, 3.5] {
            let mut y = ComplexMatrix::zeros(3, 3);
            y.set(2, 2, C64::new(x33, 0.0));
            let x = hermitian_solution(&a, &c, &y, &tol()).unwrap();
            let expected = real(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 1.0, x33]]);
            assert_close(&x, &expected, 1e-12);
            assert!(!matcore::is_psd(&x, &tol()));
        }

        let y = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let (a, c) = rank_one_pair();
        assert!(matches!(
            hermitian_solution(&a, &c, &y, &tol()),
            Err(Error::ParameterNotHermitian { .. })
        ));

        let a = ComplexMatrix::identity(2);
        let c = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            hermitian_solution(&a, &c, &ComplexMatrix::zeros(2, 2), &tol()),
            Err(Error::NotSolvableHermitian { .. })
        ));
    }

    #[test]
    fn positive_solvability_examples() {
        let (a, c) = rank_one_pair();
        let r = positive_solvability(&a, &c, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::SolvablePositive);
        assert!((r.t_min.unwrap().value().unwrap() - 2.5).abs() < 1e-12);
        assert_eq!(r.routes_agree, Some(true));

        let (a, c) = three_by_three_pair();
        let r = positive_solvability(&a, &c, &tol()).unwrap();
        assert_eq!(r.dp_range_eq, Some(false));
        assert_eq!(r.verdict, Verdict::SolvableHermitian);
        assert_eq!(r.t_min, Some(Scale::Infinite));
        assert_eq!(r.routes_agree, Some(true));
        assert!(matches!(r.lambda_estimate, Some(LambdaEstimate::Divergent { .. })));

        let a = real(&[&[1.0, 2.0, 0.0], &[0.0, 1.0, -1.0], &[1.0, 3.0, -1.0]]);
        let r = positive_solvability(&a, &a, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::SolvablePositive);
        assert!((r.t_min.unwrap().value().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rounding_noise_in_ca_star_is_not_range() {
        // A = a v*, C = a w* with w ⟂ v: CA* and DP vanish up to rounding.
        let (cs, sn) = (0.7f64.cos(), 0.7f64.sin());
        let col = [C64::new(0.3, -1.1), C64::new(-0.8, 0.45)];
        let v = [C64::new(cs, 0.0), C64::new(0.0, sn)];
        let w = [C64::new(0.0, sn), C64::new(cs, 0.0)];
        let a = ComplexMatrix::from_fn(2, 2, |i, j| col[i] * v[j].conj());
        let c = ComplexMatrix::from_fn(2, 2, |i, j| col[i] * w[j].conj());
        assert!((&c * &a.adjoint()).op_norm() < 1e-14);
        let r = positive_solvability(&a, &c, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::SolvableHermitian);
        assert_eq!(r.dp_range_eq, Some(false));
        assert_eq!(r.t_min, Some(Scale::Infinite));
        assert_eq!(r.routes_agree, Some(true));
    }

    #[test]
    fn zero_c_is_positive_with_zero_t() {
        let a = real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let c = ComplexMatrix::zeros(2, 2);
        let r = positive_solvability(&a, &c, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::SolvablePositive);
        assert_eq!(r.t_min, Some(Scale::Finite(0.0)));
    }

    #[test]
    fn positive_solution_examples() {
        let (a, c) = rank_one_pair();
        let x0 = positive_solution(&a, &c, &ComplexMatrix::zeros(2, 2), &tol()).unwrap();
        assert_close(&x0, &real(&[&[2.0, 1.0], &[1.0, 0.5]]), 1e-12);
        let eig = matcore::eigh(&x0).unwrap();
        assert!((eig.values[0]).abs() < 1e-12 && (eig.values[1] - 2.5).abs() < 1e-12);
        assert_close(&(&a * &x0), &c, 1e-12);

        let a = real(&[&[1.0, 1.0, 0.0], &[0.0, 1.0, 1.0], &[1.0, 2.0, 1.0]]);
        let x0 = positive_solution(&a, &a, &ComplexMatrix::zeros(3, 3), &tol()).unwrap();
        assert_close(&x0, &initial_projector(&a, &tol()), 1e-10);

        let (a, c) = three_by_three_pair();
        assert!(matches!(
            positive_solution(&a, &c, &ComplexMatrix::zeros(3, 3), &tol()),
            Err(Error::NotSolvablePositive { .. })
        ));

        let (a, c) = rank_one_pair();
        let z = ComplexMatrix::from_diagonal(&[1.0, -1.0]);
        assert!(matches!(
            positive_solution(&a, &c, &z, &tol()),
            Err(Error::ParameterNotPsd { .. })
        ));
    }

    #[test]
    fn zero_operator_is_solvable_only_for_zero_rhs() {
        let a = ComplexMatrix::zeros(2, 3);
        let c = ComplexMatrix::zeros(2, 4);
        let d = reduced_solution(&a, &c, &tol()).unwrap();
        assert_eq!(d.shape(), (3, 4));
        assert_eq!(d.fro_norm(), 0.0);
        let y = ComplexMatrix::from_fn(3, 4, |i, j| C64::new(i as f64, j as f64));
        assert_close(&general_solution(&a, &c, &y, &tol()).unwrap(), &y, 1e-14);

        let c = real(&[&[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 0.0]]);
        assert!(matches!(
            reduced_solution(&a, &c, &tol()),
            Err(Error::NotSolvable { .. })
        ));
    }

    #[test]
    fn report_serializes_with_inf_marker() {
        let (a, c) = three_by_three_pair();
        let r = positive_solvability(&a, &c, &tol()).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["t_min"], "inf");
        assert_eq!(json["verdict"], "SolvableHermitian");
        assert_eq!(json["dp_range_eq"], false);
        let back: SolvabilityReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn verdicts_are_ordered() {
        assert!(Verdict::SolvablePositive > Verdict::SolvableHermitian);
        assert!(Verdict::SolvableHermitian > Verdict::SolvableGeneral);
        assert!(Verdict::SolvableGeneral > Verdict::Unsolvable);
    }
}
