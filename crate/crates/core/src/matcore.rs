//! Dense complex-matrix primitives: pseudoinverse, PSD square root, polar
//! partial isometry, range and Loewner-order tests.
//!
//! Every floating-point judgment call (rank, positivity, "is this residual
//! zero") is made here against a [`ToleranceConfig`], so the solvers built on
//! top never compare floats directly.

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tolerance::ToleranceConfig;

/// Nonnegative scale that may be infinite. Serializes as a JSON number or
/// the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scale {
    Finite(f64),
    Infinite,
}

impl Scale {
    pub fn is_finite(&self) -> bool {
        matches!(self, Scale::Finite(_))
    }

    pub fn value(&self) -> Option<f64> {
        match *self {
            Scale::Finite(v) => Some(v),
            Scale::Infinite => None,
        }
    }
}

impl Serialize for Scale {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Scale::Finite(v) => s.serialize_f64(v),
            Scale::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Scale {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) if v.is_finite() && v >= 0.0 => Ok(Scale::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(Scale::Infinite),
            _ => Err(serde::de::Error::custom(
                "expected a nonnegative number or \"inf\"",
            )),
        }
    }
}

/// Least `mu` with `C C* <= mu A A*`, or an explicit infinity marker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MajorizationResult {
    pub finite: bool,
    pub mu_star: Scale,
}

impl MajorizationResult {
    fn from_scale(mu_star: Scale) -> Self {
        Self {
            finite: mu_star.is_finite(),
            mu_star,
        }
    }
}

/// Thin singular value decomposition `M = U diag(s) V*` with singular values
/// in descending order and the numerical rank under `rank_rtol`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
    pub rank: usize,
}

impl Svd {
    /// Orthonormal basis of the column space.
    pub fn range_basis(&self) -> ComplexMatrix {
        self.u.columns(0, self.rank)
    }

    /// Orthonormal basis of the row space (range of `M*`).
    pub fn row_space_basis(&self) -> ComplexMatrix {
        self.v.columns(0, self.rank)
    }
}

pub fn svd(m: &ComplexMatrix, tol: &ToleranceConfig) -> Svd {
    svd_at_scale(m, 0.0, tol)
}

/// [`svd`] with the rank cutoff taken relative to `max(sigma_max, scale)`.
/// Use it when `m` is a product whose own norm may be pure rounding noise
/// next to its factors.
pub fn svd_at_scale(m: &ComplexMatrix, scale: f64, tol: &ToleranceConfig) -> Svd {
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    if k == 0 {
        return Svd {
            u: ComplexMatrix::zeros(rows, 0),
            singular_values: Vec::new(),
            v: ComplexMatrix::zeros(cols, 0),
            rank: 0,
        };
    }
    let dec = crate::svd::jacobi_svd(m.as_dmatrix());
    let singular_values = dec.sigma;
    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    let cutoff = tol.rank_rtol * sigma_max.max(scale);
    let rank = if sigma_max == 0.0 {
        0
    } else {
        singular_values.iter().take_while(|&&s| s > cutoff).count()
    };
    let u = ComplexMatrix::from_dmatrix(dec.u);
    let v = ComplexMatrix::from_dmatrix(dec.v);
    Svd {
        u,
        singular_values,
        v,
        rank,
    }
}

pub fn rank(m: &ComplexMatrix, tol: &ToleranceConfig) -> usize {
    svd(m, tol).rank
}

pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

/// Moore–Penrose inverse via the SVD, dropping singular values below
/// `rank_rtol * sigma_max`.
pub fn pinv(m: &ComplexMatrix, tol: &ToleranceConfig) -> ComplexMatrix {
    let dec = svd(m, tol);
    let r = dec.rank;
    let (rows, cols) = m.shape();
    if r == 0 {
        return ComplexMatrix::zeros(cols, rows);
    }
    let v = dec.v.columns(0, r);
    let u = dec.u.columns(0, r);
    let scaled_v = ComplexMatrix::from_fn(cols, r, |i, j| v.get(i, j) / dec.singular_values[j]);
    &scaled_v * &u.adjoint()
}

/// Orthogonal projector onto `R(M)`.
pub fn range_projector(m: &ComplexMatrix, tol: &ToleranceConfig) -> ComplexMatrix {
    let basis = svd(m, tol).range_basis();
    &basis * &basis.adjoint()
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V f(Lambda) V*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let scaled = ComplexMatrix::from_fn(n, n, |i, j| {
            self.vectors.get(i, j) * f(self.values[j])
        });
        &scaled * &self.vectors.adjoint()
    }
}

/// Eigendecomposition of the Hermitian part of a square matrix.
pub fn eigh(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch {
            op: "eigh",
            left: m.shape(),
            right: (m.cols(), m.rows()),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let herm = m.hermitian_part().into_dmatrix();
    let dec = SymmetricEigen::try_new(herm, f64::EPSILON, 0)
        .ok_or(Error::NoConvergence("Hermitian eigendecomposition"))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| dec.eigenvalues[a].total_cmp(&dec.eigenvalues[b]));
    let values = order.iter().map(|&k| dec.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| dec.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// `||M - M*||`.
pub fn hermitian_defect(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    (m - &m.adjoint()).op_norm()
}

pub fn is_hermitian(m: &ComplexMatrix, tol: &ToleranceConfig) -> bool {
    m.is_square() && hermitian_defect(m) <= tol.residual_bound(m.op_norm())
}

/// Smallest eigenvalue of the Hermitian part.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigh(m)?.values.first().copied().unwrap_or(0.0))
}

/// Hermitian within `residual_atol` and smallest eigenvalue at least
/// `-psd_atol * max(1, ||M||)`.
pub fn is_psd(m: &ComplexMatrix, tol: &ToleranceConfig) -> bool {
    if !is_hermitian(m, tol) {
        return false;
    }
    match min_eigenvalue(m) {
        Ok(lo) => lo >= tol.psd_floor(m.op_norm()),
        Err(_) => false,
    }
}

/// Principal square root of a PSD matrix. Eigenvalues in
/// `[-psd_atol * max(1, ||M||), 0)` are clamped to zero.
pub fn sqrt_psd(m: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch {
            op: "sqrt_psd",
            left: m.shape(),
            right: (m.cols(), m.rows()),
        });
    }
    let norm = m.op_norm();
    let defect = hermitian_defect(m);
    if defect > tol.residual_bound(norm) {
        return Err(Error::NotHermitian { defect });
    }
    let eig = eigh(m)?;
    let lo = eig.values.first().copied().unwrap_or(0.0);
    if lo < tol.psd_floor(norm) {
        return Err(Error::NotPsd { min_eigenvalue: lo });
    }
    Ok(eig.map(|x| x.max(0.0).sqrt()))
}

/// Partial isometry `U_A` of the polar decomposition `A = U_A (A*A)^{1/2}`,
/// with `U_A* U_A` the projector onto `R(A*)`.
pub fn polar_partial_isometry(a: &ComplexMatrix, tol: &ToleranceConfig) -> ComplexMatrix {
    let dec = svd(a, tol);
    &dec.range_basis() * &dec.row_space_basis().adjoint()
}

/// `||A A† C - C||`.
pub fn range_residual(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<f64> {
    if a.rows() != c.rows() {
        return Err(Error::ShapeMismatch {
            op: "range_inclusion",
            left: a.shape(),
            right: c.shape(),
        });
    }
    let basis = svd(a, tol).range_basis();
    let projected = &basis * &(&basis.adjoint() * c);
    Ok((&projected - c).op_norm())
}

/// Whether `R(C) ⊆ R(A)`.
pub fn range_inclusion(a: &ComplexMatrix, c: &ComplexMatrix, tol: &ToleranceConfig) -> Result<bool> {
    let residual = range_residual(a, c, tol)?;
    Ok(residual <= tol.residual_bound(c.op_norm()))
}

/// Least `mu` with `F F* <= mu * W` where `W = B diag(w) B*` is PSD with
/// orthonormal `basis` B and positive weights `w`. Infinite unless
/// `R(F) ⊆ R(B)`.
fn loewner_scale(
    basis: &ComplexMatrix,
    weights: &[f64],
    factor: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Scale {
    let coords = &basis.adjoint() * factor;
    let leak = (&(basis * &coords) - factor).op_norm();
    if leak > tol.residual_bound(factor.op_norm()) {
        return Scale::Infinite;
    }
    if weights.is_empty() {
        return Scale::Finite(0.0);
    }
    let whitened = ComplexMatrix::from_fn(coords.rows(), coords.cols(), |i, j| {
        coords.get(i, j) / weights[i].sqrt()
    });
    let norm = whitened.op_norm();
    Scale::Finite(norm * norm)
}

/// Least `mu` with `C C* <= mu A A*`: the largest eigenvalue of
/// `(AA*)†^{1/2} CC* (AA*)†^{1/2}`, finite iff `N(AA*) ⊆ N(CC*)`.
pub fn min_majorization_scale(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<MajorizationResult> {
    if a.rows() != c.rows() {
        return Err(Error::ShapeMismatch {
            op: "min_majorization_scale",
            left: a.shape(),
            right: c.shape(),
        });
    }
    let dec = svd(a, tol);
    // Eigenpairs of AA* on its range are (u_i, sigma_i^2).
    let weights: Vec<f64> = dec.singular_values[..dec.rank].iter().map(|s| s * s).collect();
    let scale = loewner_scale(&dec.range_basis(), &weights, c, tol);
    Ok(MajorizationResult::from_scale(scale))
}

/// Least `t` with `F F* <= t * H` for a Hermitian PSD `H`; infinite when `H`
/// is not PSD or `N(H) ⊄ N(F*)`.
pub fn min_loewner_scale(
    h: &ComplexMatrix,
    factor: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<Scale> {
    let f = factor.op_norm();
    min_loewner_scale_at(h, factor, f * f, tol)
}

/// [`min_loewner_scale`] with the eigenvalue cutoff of `H` taken relative
/// to `max(||H||, scale)`, so that an `H` made of rounding noise counts as
/// zero.
pub fn min_loewner_scale_at(
    h: &ComplexMatrix,
    factor: &ComplexMatrix,
    scale: f64,
    tol: &ToleranceConfig,
) -> Result<Scale> {
    if !h.is_square() || h.rows() != factor.rows() {
        return Err(Error::ShapeMismatch {
            op: "min_loewner_scale",
            left: h.shape(),
            right: factor.shape(),
        });
    }
    if !is_psd(h, tol) {
        return Ok(Scale::Infinite);
    }
    let eig = eigh(h)?;
    let top = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let cutoff = tol.rank_rtol * top.max(scale);
    let kept: Vec<usize> = (0..eig.values.len())
        .filter(|&k| top > 0.0 && eig.values[k] > cutoff)
        .collect();
    let basis = ComplexMatrix::from_fn(h.rows(), kept.len(), |i, j| eig.vectors.get(i, kept[j]));
    let weights: Vec<f64> = kept.iter().map(|&k| eig.values[k]).collect();
    Ok(loewner_scale(&basis, &weights, factor, tol))
}

/// `(M)†^{1/2}` style helper: `V f(Lambda) V*` restricted to eigenvalues above
/// the rank cutoff, used when inverting PSD operators on their range.
pub fn psd_pinv(m: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    let eig = eigh(m)?;
    let top = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let cutoff = tol.rank_rtol * top;
    Ok(eig.map(|x| if top > 0.0 && x > cutoff { 1.0 / x } else { 0.0 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::C64;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    fn assert_close(a: &ComplexMatrix, b: &ComplexMatrix, eps: f64) {
        let d = a.max_abs_diff(b);
        assert!(d <= eps, "matrices differ by {d:e}\n{a:?}\n{b:?}");
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(adjoint(&ComplexMatrix::identity(2)), ComplexMatrix::identity(2));
        let m = ComplexMatrix::from_row_major(
            2,
            2,
            vec![c(0.0), C64::new(0.0, 1.0), c(0.0), c(0.0)],
        )
        .unwrap();
        let expected = ComplexMatrix::from_row_major(
            2,
            2,
            vec![c(0.0), c(0.0), C64::new(0.0, -1.0), c(0.0)],
        )
        .unwrap();
        assert_eq!(adjoint(&m), expected);
    }

    #[test]
    fn pinv_of_projection_is_itself() {
        let p = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        assert_close(&pinv(&p, &tol()), &p, 1e-14);
    }

    #[test]
    fn pinv_rank_one_example() {
        // M M* = diag(5, 0) so M† = M* / 5; independently checked against
        // numpy.linalg.pinv.
        let m = real(&[&[2.0, 1.0], &[0.0, 0.0]]);
        let expected = real(&[&[0.4, 0.0], &[0.2, 0.0]]);
        assert_close(&pinv(&m, &tol()), &expected, 1e-14);
    }

    #[test]
    fn pinv_of_zero_has_transposed_shape() {
        let z = ComplexMatrix::zeros(2, 3);
        let p = pinv(&z, &tol());
        assert_eq!(p.shape(), (3, 2));
        assert_eq!(p.fro_norm(), 0.0);
    }

    #[test]
    fn sqrt_psd_examples() {
        let m = ComplexMatrix::from_diagonal(&[4.0, 9.0]);
        assert_close(&sqrt_psd(&m, &tol()).unwrap(), &ComplexMatrix::from_diagonal(&[2.0, 3.0]), 1e-14);
        let z = ComplexMatrix::zeros(3, 3);
        assert_eq!(sqrt_psd(&z, &tol()).unwrap().fro_norm(), 0.0);
    }

    #[test]
    fn sqrt_psd_matches_closed_form_at_half() {
        // P(1/2) + Q(1/2) with c = s = 1/sqrt(2).
        let m = real(&[&[1.5, 0.5], &[0.5, 0.5]]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let cc = s;
        let (rp, rm) = ((1.0 + cc).sqrt(), (1.0 - cc).sqrt());
        let alpha = 0.5 * (2.0 - s) * (rp + rm);
        let beta = 0.5 * s * (rp - rm);
        let gamma = 0.5 * s * (rp + rm);
        let expected = real(&[&[alpha, beta], &[beta, gamma]]);
        assert_close(&sqrt_psd(&m, &tol()).unwrap(), &expected, 1e-10);
    }

    #[test]
    fn sqrt_psd_rejects_negative() {
        let m = ComplexMatrix::from_diagonal(&[1.0, -0.5]);
        assert!(matches!(sqrt_psd(&m, &tol()), Err(Error::NotPsd { .. })));
        // roundoff-sized negative eigenvalue is clamped
        let m = ComplexMatrix::from_diagonal(&[1.0, -1e-14]);
        let r = sqrt_psd(&m, &tol()).unwrap();
        assert_abs_diff_eq!(r.get(1, 1).re, 0.0);
    }

    #[test]
    fn polar_examples() {
        let p = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        assert_close(&polar_partial_isometry(&p, &tol()), &p, 1e-14);
        let a = ComplexMatrix::from_diagonal(&[3.0, 0.0]);
        assert_close(&polar_partial_isometry(&a, &tol()), &p, 1e-14);
    }

    #[test]
    fn is_psd_examples() {
        assert!(is_psd(&real(&[&[2.0, 1.0], &[1.0, 1.0]]), &tol()));
        for x33 in [-100.0, -1.0, 0.0, 0.5, 1.0, 10.0, 1e3] {
            assert!(!is_psd(&real(&[&[0.0, 1.0], &[1.0, x33]]), &tol()), "x33 = {x33}");
        }
        assert!(!is_psd(&(-&ComplexMatrix::identity(3)), &tol()));
        // non-Hermitian is never PSD
        assert!(!is_psd(&real(&[&[1.0, 1.0], &[0.0, 1.0]]), &tol()));
    }

    #[test]
    fn range_inclusion_examples() {
        let a = real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let c = real(&[&[2.0, 1.0], &[0.0, 0.0]]);
        assert!(range_inclusion(&a, &c, &tol()).unwrap());

        let a = ComplexMatrix::from_diagonal(&[1.0, 1.0, 0.0]);
        let c = real(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]]);
        assert!(range_inclusion(&a, &c, &tol()).unwrap());

        let a = ComplexMatrix::from_diagonal(&[0.0, 1.0]);
        let c = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        assert!(!range_inclusion(&a, &c, &tol()).unwrap());

        assert!(matches!(
            range_inclusion(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3), &tol()),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn majorization_examples() {
        let a = real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let c = real(&[&[2.0, 1.0], &[0.0, 0.0]]);
        let r = min_majorization_scale(&a, &c, &tol()).unwrap();
        assert!(r.finite);
        assert_abs_diff_eq!(r.mu_star.value().unwrap(), 5.0, epsilon = 1e-12);

        let a = real(&[&[1.0, 2.0], &[0.5, -1.0], &[0.0, 3.0]]);
        let r = min_majorization_scale(&a, &a, &tol()).unwrap();
        assert_abs_diff_eq!(r.mu_star.value().unwrap(), 1.0, epsilon = 1e-12);

        let r = min_majorization_scale(
            &ComplexMatrix::from_diagonal(&[0.0, 1.0]),
            &ComplexMatrix::from_diagonal(&[1.0, 0.0]),
            &tol(),
        )
        .unwrap();
        assert!(!r.finite);
        assert_eq!(r.mu_star, Scale::Infinite);
    }

    #[test]
    fn scale_serde() {
        assert_eq!(serde_json::to_string(&Scale::Infinite).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&Scale::Finite(2.5)).unwrap(), "2.5");
        let back: Scale = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(back, Scale::Infinite);
        assert!(serde_json::from_str::<Scale>("-1.0").is_err());
    }

    #[test]
    fn loewner_scale_on_indefinite_is_infinite() {
        let h = ComplexMatrix::from_diagonal(&[1.0, -1.0]);
        let f = ComplexMatrix::identity(2);
        assert_eq!(min_loewner_scale(&h, &f, &tol()).unwrap(), Scale::Infinite);
    }

    fn arb_shaped(r: usize, c: usize, max_rank: usize) -> impl Strategy<Value = ComplexMatrix> {
        (0..=max_rank.min(r).min(c)).prop_flat_map(move |rank| {
            proptest::collection::vec((-2.0..2.0f64, -2.0..2.0f64), (r + c) * rank.max(1))
                .prop_map(move |vals| {
                    let z: Vec<C64> = vals.iter().map(|&(a, b)| C64::new(a, b)).collect();
                    let left = ComplexMatrix::from_fn(r, rank, |i, j| z[i * rank + j]);
                    let right = ComplexMatrix::from_fn(rank, c, |i, j| z[r * rank + i * c + j]);
                    &left * &right
                })
        })
    }

    fn arb_matrix(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
        (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| arb_shaped(r, c, max_dim))
    }

    fn arb_product_pair(max_dim: usize) -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
        arb_matrix(max_dim).prop_flat_map(move |a| {
            let rows = a.cols();
            (Just(a), (1..=max_dim).prop_flat_map(move |c| arb_shaped(rows, c, max_dim)))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn penrose_identities(m in arb_matrix(6)) {
            let t = tol();
            let p = pinv(&m, &t);
            let scale = 1.0 + m.op_norm() * p.op_norm();
            let bound = 1e-9 * scale * scale;
            prop_assert!((&(&(&m * &p) * &m) - &m).op_norm() <= bound * m.op_norm().max(1.0));
            prop_assert!((&(&(&p * &m) * &p) - &p).op_norm() <= bound * p.op_norm().max(1.0));
            prop_assert!(hermitian_defect(&(&m * &p)) <= bound);
            prop_assert!(hermitian_defect(&(&p * &m)) <= bound);
        }

        #[test]
        fn sqrt_round_trip(g in arb_matrix(5)) {
            let m = &g * &g.adjoint();
            let r = sqrt_psd(&m, &tol()).unwrap();
            prop_assert!(is_psd(&r, &tol()));
            prop_assert!((&(&r * &r) - &m).op_norm() <= 1e-9 * m.op_norm().max(1.0));
        }

        #[test]
        fn polar_consistency(a in arb_matrix(5)) {
            let t = tol();
            let u = polar_partial_isometry(&a, &t);
            let root = sqrt_psd(&(&a.adjoint() * &a), &t).unwrap();
            let bound = 1e-8 * a.op_norm().max(1.0);
            prop_assert!((&(&u * &root) - &a).op_norm() <= bound);
            prop_assert!((&(&(&u * &u.adjoint()) * &u) - &u).op_norm() <= 1e-9);
            let p = &u.adjoint() * &u;
            let row_proj = range_projector(&a.adjoint(), &t);
            prop_assert!((&p - &row_proj).op_norm() <= 1e-9);
        }

        #[test]
        fn right_multiplication_keeps_range((a, w) in arb_product_pair(5)) {
            prop_assert!(range_inclusion(&a, &(&a * &w), &tol()).unwrap());
        }
    }
}
