//! One-sided (Hestenes) Jacobi SVD for small dense complex matrices.
//!
//! Columns of a working copy `W = M V` are rotated pairwise until mutually
//! orthogonal; then `sigma_j = ||w_j||`, `u_j = w_j / sigma_j`. High relative
//! accuracy and robust on rank-deficient input, which is what the range tests
//! need. Cost is fine at desk scale (dimensions up to a few hundred).

use nalgebra::DMatrix;

use crate::matrix::C64;

const MAX_SWEEPS: usize = 80;

pub(crate) struct RawSvd {
    /// `m x k`, orthonormal columns, `k = min(m, n)`.
    pub u: DMatrix<C64>,
    /// Descending, length `k`.
    pub sigma: Vec<f64>,
    /// `n x k`, orthonormal columns.
    pub v: DMatrix<C64>,
}

pub(crate) fn jacobi_svd(m: &DMatrix<C64>) -> RawSvd {
    let (rows, cols) = m.shape();
    if rows < cols {
        let t = tall_svd(&m.adjoint());
        return RawSvd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
    }
    tall_svd(m)
}

pub(crate) fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    jacobi_svd(m).sigma
}

fn tall_svd(m: &DMatrix<C64>) -> RawSvd {
    let (rows, cols) = m.shape();
    let mut w = m.clone();
    let mut v = DMatrix::<C64>::identity(cols, cols);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = w.column(p).iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w.column(q).iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = w
                    .column(p)
                    .iter()
                    .zip(w.column(q).iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<f64> = (0..cols)
        .map(|j| w.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    sigma = order.iter().map(|&j| sigma[j]).collect();
    let v = DMatrix::from_fn(cols, cols, |i, j| v[(i, order[j])]);

    let mut u = DMatrix::<C64>::zeros(rows, cols);
    let mut filled = 0;
    for (k, &j) in order.iter().enumerate() {
        if sigma[k] > f64::MIN_POSITIVE {
            let col = w.column(j) / C64::new(sigma[k], 0.0);
            u.set_column(k, &col);
            filled += 1;
        } else {
            break;
        }
    }
    complete_orthonormal(&mut u, filled);
    RawSvd { u, sigma, v }
}

/// `[x_p, x_q] <- [c x_p - s e^{-i phi} x_q, s x_p + c e^{-i phi} x_q]`.
fn rotate(x: &mut DMatrix<C64>, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let back = phase.conj();
    for i in 0..x.nrows() {
        let a = x[(i, p)];
        let b = x[(i, q)] * back;
        x[(i, p)] = a * c - b * s;
        x[(i, q)] = a * s + b * c;
    }
}

/// Fills columns `filled..` with an orthonormal completion, using modified
/// Gram–Schmidt against the standard basis.
fn complete_orthonormal(u: &mut DMatrix<C64>, mut filled: usize) {
    let (rows, cols) = u.shape();
    let mut e = 0;
    while filled < cols && e < rows {
        let mut cand = nalgebra::DVector::<C64>::zeros(rows);
        cand[e] = C64::new(1.0, 0.0);
        e += 1;
        for _ in 0..2 {
            for k in 0..filled {
                let proj = u.column(k).dotc(&cand);
                cand -= u.column(k) * proj;
            }
        }
        let norm = cand.norm();
        if norm > 1e-8 {
            u.set_column(filled, &(cand / C64::new(norm, 0.0)));
            filled += 1;
        }
    }
}
