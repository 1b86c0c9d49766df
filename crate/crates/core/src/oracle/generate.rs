//! Random instances with a known answer.
//!
//! An operator `A = U Σ V*` gets singular values in `[0.2, 3]` on its range.
//! The reduced solution is built in the split `V = [V_r, V_⊥]` as
//! `D = V_r [K F] V*`, so that `CA* = U_r Σ K Σ U_r*` and the kind of
//! solution that exists is decided by the blocks `K` and `F` alone.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::douglas::Verdict;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankPolicy {
    Full,
    Deficient,
    Random,
}

/// Shape and size of a randomized run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialSpec {
    pub min_dim: usize,
    pub max_dim: usize,
    pub rank_policy: RankPolicy,
    pub trials: usize,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 0x5EED_0D06;

impl TrialSpec {
    pub fn new(
        min_dim: usize,
        max_dim: usize,
        rank_policy: RankPolicy,
        trials: usize,
        seed: u64,
    ) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidTrialSpec("trials must be at least 1".into()));
        }
        if min_dim == 0 || min_dim > max_dim || max_dim > MAX_DIM {
            return Err(Error::InvalidTrialSpec(format!(
                "need 1 <= min_dim <= max_dim <= {MAX_DIM}, got {min_dim}..{max_dim}"
            )));
        }
        Ok(Self {
            min_dim,
            max_dim,
            rank_policy,
            trials,
            seed,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    /// Consistent, possibly rectangular.
    General,
    /// `R(C) ⊄ R(A)`.
    Inconsistent,
    /// Consistent, `CA*` not Hermitian.
    NonHermitian,
    /// `CA*` Hermitian and indefinite.
    HermitianIndefinite,
    /// `CA* >= 0` but `R(D) ≠ R(DP)`.
    RangeMismatch,
    Positive,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 6] = [
        InstanceKind::General,
        InstanceKind::Inconsistent,
        InstanceKind::NonHermitian,
        InstanceKind::HermitianIndefinite,
        InstanceKind::RangeMismatch,
        InstanceKind::Positive,
    ];

    /// Verdict of the full solvability check, for square kinds.
    pub fn expected_verdict(self) -> Option<Verdict> {
        match self {
            InstanceKind::General => None,
            InstanceKind::Inconsistent => Some(Verdict::Unsolvable),
            InstanceKind::NonHermitian => Some(Verdict::SolvableGeneral),
            InstanceKind::HermitianIndefinite | InstanceKind::RangeMismatch => {
                Some(Verdict::SolvableHermitian)
            }
            InstanceKind::Positive => Some(Verdict::SolvablePositive),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub kind: InstanceKind,
    pub a: ComplexMatrix,
    pub c: ComplexMatrix,
    /// The reduced solution used to build `C`, when `AX = C` is consistent.
    pub reduced: Option<ComplexMatrix>,
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * s, im * s)
    })
}

pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    if n == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    let g = gaussian(rng, n, n).into_dmatrix();
    ComplexMatrix::from_dmatrix(g.qr().q())
}

fn magnitude<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(0.2..3.0)
}

/// `W diag(values) W*` for a random unitary `W`; returns the matrix and `W`.
pub fn hermitian_with_spectrum<R: Rng + ?Sized>(
    rng: &mut R,
    values: &[f64],
) -> (ComplexMatrix, ComplexMatrix) {
    let w = unitary(rng, values.len());
    let m = &(&w * &ComplexMatrix::from_diagonal(values)) * &w.adjoint();
    (m.hermitian_part(), w)
}

/// Random PSD matrix, each eigenvalue zero with probability `zero_prob`.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, n: usize, zero_prob: f64) -> ComplexMatrix {
    let values: Vec<f64> = (0..n)
        .map(|_| if rng.random_bool(zero_prob) { 0.0 } else { magnitude(rng) })
        .collect();
    hermitian_with_spectrum(rng, &values).0
}

/// Random Hermitian matrix with eigenvalues of both signs when `n >= 2`.
pub fn random_indefinite<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let values: Vec<f64> = (0..n)
        .map(|k| {
            let mag = magnitude(rng);
            match k {
                0 => -mag,
                1 => mag,
                _ if rng.random_bool(0.5) => -mag,
                _ => mag,
            }
        })
        .collect();
    hermitian_with_spectrum(rng, &values).0
}

/// Gaussian matrix rescaled to a Frobenius norm in `[0.5, 2]`.
fn scaled_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let m = gaussian(rng, rows, cols);
    let norm = m.fro_norm();
    if norm == 0.0 {
        return m;
    }
    m.scale(rng.random_range(0.5..2.0) / norm)
}

/// An operator together with its singular factors.
pub struct Operator {
    pub a: ComplexMatrix,
    /// `m x m` unitary; the first `rank` columns span `R(A)`.
    pub u: ComplexMatrix,
    /// `n x n` unitary; the first `rank` columns span `R(A*)`.
    pub v: ComplexMatrix,
    pub rank: usize,
}

pub fn operator<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize, rank: usize) -> Operator {
    assert!(rank <= m.min(n));
    let u = unitary(rng, m);
    let v = unitary(rng, n);
    let sigma = ComplexMatrix::from_fn(m, n, |i, j| {
        if i == j && i < rank {
            C64::new(magnitude(rng), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let a = &(&u * &sigma) * &v.adjoint();
    Operator { a, u, v, rank }
}

/// Rank in `[lo, hi]` following the policy: `Full` takes `hi`, `Deficient`
/// stays below `full` when the bounds allow it.
pub fn choose_rank<R: Rng + ?Sized>(
    rng: &mut R,
    policy: RankPolicy,
    full: usize,
    lo: usize,
    hi: usize,
) -> usize {
    match policy {
        RankPolicy::Full => hi,
        RankPolicy::Deficient => {
            let top = if hi >= full && full > lo { full - 1 } else { hi };
            rng.random_range(lo..=top.max(lo))
        }
        RankPolicy::Random => rng.random_range(lo..=hi),
    }
}

/// Builds an instance of the given kind. Dimension bounds are widened where
/// the kind needs room (a range mismatch needs `n >= 2`).
pub fn instance<R: Rng + ?Sized>(rng: &mut R, kind: InstanceKind, spec: &TrialSpec) -> Instance {
    let dim = |rng: &mut R, lo: usize| rng.random_range(spec.min_dim.max(lo)..=spec.max_dim.max(lo));
    if kind == InstanceKind::General {
        let (m, n, p) = (dim(rng, 1), dim(rng, 1), dim(rng, 1));
        let full = m.min(n);
        let r = choose_rank(rng, spec.rank_policy, full, 0, full);
        let op = operator(rng, m, n, r);
        let d = &op.v.columns(0, r) * &gaussian(rng, r, p);
        let c = &op.a * &d;
        return Instance {
            kind,
            a: op.a,
            c,
            reduced: Some(d),
        };
    }

    let n = dim(rng, if kind == InstanceKind::RangeMismatch { 2 } else { 1 });
    let (lo, hi) = match kind {
        InstanceKind::Inconsistent => (0, n - 1),
        InstanceKind::RangeMismatch => (1, n - 1),
        InstanceKind::NonHermitian | InstanceKind::HermitianIndefinite => (1, n),
        _ => (0, n),
    };
    let r = choose_rank(rng, spec.rank_policy, n, lo, hi);
    let op = operator(rng, n, n, r);
    let rest = n - r;

    let (k, f) = match kind {
        InstanceKind::Positive => {
            let k = random_psd(rng, r, 0.25);
            let f = &k * &gaussian(rng, r, rest);
            (k, f)
        }
        InstanceKind::RangeMismatch => {
            let mut values: Vec<f64> = (0..r)
                .map(|_| if rng.random_bool(0.3) { 0.0 } else { magnitude(rng) })
                .collect();
            values[0] = 0.0;
            let (k, w) = hermitian_with_spectrum(rng, &values);
            let null: Vec<usize> = (0..r).filter(|&i| values[i] == 0.0).collect();
            let basis = ComplexMatrix::from_fn(r, null.len(), |i, j| w.get(i, null[j]));
            let leak = scaled_gaussian(rng, null.len(), rest);
            let f = &(&k * &gaussian(rng, r, rest)) + &(&basis * &leak);
            (k, f)
        }
        InstanceKind::HermitianIndefinite => (random_indefinite(rng, r), gaussian(rng, r, rest)),
        InstanceKind::NonHermitian => {
            let re = random_psd(rng, r, 0.0);
            let im = random_indefinite(rng, r);
            let k = ComplexMatrix::from_fn(r, r, |i, j| re.get(i, j) + C64::i() * im.get(i, j));
            (k, gaussian(rng, r, rest))
        }
        InstanceKind::Inconsistent => (gaussian(rng, r, r), gaussian(rng, r, rest)),
        InstanceKind::General => unreachable!(),
    };

    let row = ComplexMatrix::from_fn(r, n, |i, j| if j < r { k.get(i, j) } else { f.get(i, j - r) });
    let d = &(&op.v.columns(0, r) * &row) * &op.v.adjoint();
    let mut c = &op.a * &d;
    let mut reduced = Some(d);
    if kind == InstanceKind::Inconsistent {
        let outside = &op.u.columns(r, rest) * &scaled_gaussian(rng, rest, n);
        c = &c + &outside;
        reduced = None;
    }
    Instance {
        kind,
        a: op.a,
        c,
        reduced,
    }
}

/// Hermitian blocks `A11`, `A12`, `A22` of a matrix with known positivity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockInstance {
    pub a11: ComplexMatrix,
    pub a12: ComplexMatrix,
    pub a22: ComplexMatrix,
    pub psd: bool,
}

impl BlockInstance {
    pub fn assembled(&self) -> ComplexMatrix {
        ComplexMatrix::from_blocks(&self.a11, &self.a12, &self.a12.adjoint(), &self.a22)
            .expect("block shapes are consistent")
    }
}

/// Blocks of size at most 4. A third are `L L*` with `A11` well conditioned
/// on its range, a third are `L L* - δ w w*` with `w ⊥ R(L)`, and a third
/// are Hermitian with a negative eigenvalue.
pub fn block_instance<R: Rng + ?Sized>(rng: &mut R, max_dim: usize) -> BlockInstance {
    let top = max_dim.clamp(1, 4);
    let (k1, k2) = (rng.random_range(1..=top), rng.random_range(1..=top));
    let n = k1 + k2;
    let variant = rng.random_range(0..3);
    let m = if variant == 2 {
        random_indefinite(rng, n)
    } else {
        let r = if variant == 0 { rng.random_range(1..=n) } else { rng.random_range(1..n) };
        let u1 = unitary(rng, k1);
        let w = unitary(rng, r);
        let s = ComplexMatrix::from_fn(k1, r, |i, j| {
            if i == j && !rng.random_bool(0.3) {
                C64::new(rng.random_range(0.5..2.0), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let l1 = &(&u1 * &s) * &w.adjoint();
        let l2 = gaussian(rng, k2, r);
        let l = ComplexMatrix::from_fn(n, r, |i, j| if i < k1 { l1.get(i, j) } else { l2.get(i - k1, j) });
        let mut m = &l * &l.adjoint();
        if variant == 1 {
            // Unit vector orthogonal to R(L).
            let g = gaussian(rng, n, 1);
            let q = ComplexMatrix::from_dmatrix(l.clone().into_dmatrix().qr().q());
            let mut v = &g - &(&q * &(&q.adjoint() * &g));
            v = v.scale(1.0 / v.fro_norm());
            let delta = magnitude(rng);
            m = &m - &(&v * &v.adjoint()).scale(delta);
        }
        m.hermitian_part()
    };
    let sub = |r0: usize, rows: usize, c0: usize, cols: usize| {
        ComplexMatrix::from_fn(rows, cols, |i, j| m.get(r0 + i, c0 + j))
    };
    BlockInstance {
        a11: sub(0, k1, 0, k1),
        a12: sub(0, k1, k1, k2),
        a22: sub(k1, k2, k1, k2),
        psd: variant == 0,
    }
}
