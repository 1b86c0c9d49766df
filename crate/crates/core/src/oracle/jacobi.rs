//! Cyclic Jacobi eigensolver for complex Hermitian matrices. Slow and
//! simple; shares nothing with the solver's decompositions.

use crate::matrix::{ComplexMatrix, C64};

const MAX_SWEEPS: usize = 100;

pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` belongs to `values[k]`.
    pub vectors: ComplexMatrix,
}

/// Eigendecomposition of the Hermitian part of `m`.
pub fn eigen(m: &ComplexMatrix) -> Eigen {
    assert!(m.is_square(), "eigen needs a square matrix");
    let n = m.rows();
    let mut a: Vec<Vec<C64>> = (0..n)
        .map(|i| (0..n).map(|j| 0.5 * (m.get(i, j) + m.get(j, i).conj())).collect())
        .collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();

    let total: f64 = a.iter().flatten().map(|z| z.norm_sqr()).sum();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j].norm_sqr())
            .sum();
        if off <= 1e-32 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let w = apq / g;
                let theta = (a[q][q].re - a[p][p].re) / (2.0 * g);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // U = diag(1, conj(w)) * [[c, s], [-s, c]] on (p, q).
                let u = [
                    [C64::new(c, 0.0), C64::new(s, 0.0)],
                    [-s * w.conj(), c * w.conj()],
                ];
                for row in a.iter_mut().chain(v.iter_mut()) {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = xp * u[0][0] + xq * u[1][0];
                    row[q] = xp * u[0][1] + xq * u[1][1];
                }
                let (head, tail) = a.split_at_mut(q);
                for (zp, zq) in head[p].iter_mut().zip(tail[0].iter_mut()) {
                    let (xp, xq) = (*zp, *zq);
                    *zp = u[0][0].conj() * xp + u[1][0].conj() * xq;
                    *zq = u[0][1].conj() * xp + u[1][1].conj() * xq;
                }
                a[p][q] = C64::new(0.0, 0.0);
                a[q][p] = C64::new(0.0, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].re.total_cmp(&a[j][j].re));
    Eigen {
        values: order.iter().map(|&k| a[k][k].re).collect(),
        vectors: ComplexMatrix::from_fn(n, n, |i, j| v[i][order[j]]),
    }
}

/// Largest singular value, from the eigenvalues of `M* M`.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    let gram = if m.rows() < m.cols() {
        m * &m.adjoint()
    } else {
        &m.adjoint() * m
    };
    eigen(&gram).values.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Orthogonal projector onto the span of eigenvectors of the PSD `g` whose
/// eigenvalues exceed `rel * max eigenvalue`.
pub fn dominant_projector(g: &ComplexMatrix, rel: f64) -> ComplexMatrix {
    let e = eigen(g);
    let top = e.values.last().copied().unwrap_or(0.0);
    let n = g.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &lam) in e.values.iter().enumerate() {
        if top > 0.0 && lam > rel * top {
            let col = e.vectors.columns(k, 1);
            out = &out + &(&col * &col.adjoint());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=8 {
            for _ in 0..50 {
                let g = ComplexMatrix::from_fn(n, n, |_, _| {
                    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                });
                let h = g.hermitian_part();
                let e = eigen(&h);
                let lam = ComplexMatrix::from_diagonal(&e.values);
                let rec = &(&e.vectors * &lam) * &e.vectors.adjoint();
                assert!(rec.max_abs_diff(&h) < 1e-12);
                let vv = &e.vectors.adjoint() * &e.vectors;
                assert!(vv.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-12);
                assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn norm_of_known_matrix() {
        let m = ComplexMatrix::from_real_rows(&[[3.0, 0.0], [4.0, 0.0]]).unwrap();
        assert!((spectral_norm(&m) - 5.0).abs() < 1e-12);
        assert_eq!(spectral_norm(&ComplexMatrix::zeros(0, 2)), 0.0);
    }
}
