//! Fixed inputs shared by the benchmarks, so runs compare like with like.

use axc_core::oracle::{Instance, InstanceKind, RankPolicy, TrialSpec};
use axc_core::verify;
use axc_core::ComplexMatrix;

/// Dimensions the per-size benchmarks sweep.
pub const DIMS: [usize; 4] = [2, 4, 6, 8];

const SEED: u64 = 0xBE7C4;

/// An instance of `kind` at `dim`, drawn from the verify generator so it
/// has the structure the property suite checks.
pub fn instance(kind: InstanceKind, dim: usize) -> Instance {
    let spec = TrialSpec::new(dim, dim, RankPolicy::Random, 1, SEED).expect("dim within bounds");
    let trial = InstanceKind::ALL
        .iter()
        .position(|k| *k == kind)
        .expect("kind is listed");
    verify::trial_instance(&spec, trial)
}

/// `CA*` of a positively solvable instance: Hermitian PSD, usually singular.
pub fn psd_matrix(dim: usize) -> ComplexMatrix {
    let inst = instance(InstanceKind::Positive, dim);
    (&inst.c * &inst.a.adjoint()).hermitian_part()
}
