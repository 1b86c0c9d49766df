//! Seeded randomized property suite comparing the solver with the oracle.
//!
//! Trial `i` draws from ChaCha8 stream `i` of the run seed, so results do
//! not depend on scheduling; trials run in parallel and are tallied in
//! order.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::douglas::{self, TnOperator, Verdict};
use crate::matcore;
use crate::matrix::ComplexMatrix;
use crate::oracle::{self, generate, jacobi, Instance, InstanceKind, TrialSpec};
use crate::tolerance::ToleranceConfig;

pub const PARAMETRIZATION: &str = "parametrization_completeness";
pub const LSQ_AGREEMENT: &str = "lsq_agreement";
pub const HERMITIAN_CRITERION: &str = "hermitian_criterion";
pub const POSITIVE_CRITERIA: &str = "positive_criteria_agreement";
pub const BLOCK_TEST: &str = "block_schur_vs_eigen";
pub const DOUGLAS_PROPERTIES: &str = "douglas_properties";
pub const NORM_IDENTITY: &str = "norm_identity";
pub const TN_LAMBDA: &str = "tn_monotone_and_lambda";
pub const PROBE_ONE_SIDED: &str = "psd_probe_one_sided";

pub const PROPERTIES: [&str; 9] = [
    PARAMETRIZATION,
    LSQ_AGREEMENT,
    HERMITIAN_CRITERION,
    POSITIVE_CRITERIA,
    BLOCK_TEST,
    DOUGLAS_PROPERTIES,
    NORM_IDENTITY,
    TN_LAMBDA,
    PROBE_ONE_SIDED,
];

const SEARCH_BUDGET: usize = 200;
const PROBES: usize = 200;
const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub trial: usize,
    pub kind: InstanceKind,
    pub detail: String,
    pub a: ComplexMatrix,
    pub c: ComplexMatrix,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PropertyTally {
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<FailureRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub rng: String,
    pub spec: TrialSpec,
    pub tolerances: ToleranceConfig,
    pub properties: BTreeMap<String, PropertyTally>,
    pub violations: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

type Outcome = (&'static str, Result<(), String>);

fn check(ok: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

fn scaled(x: f64) -> f64 {
    x.max(1.0)
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Runs the whole suite.
pub fn run_verify(spec: &TrialSpec, tol: &ToleranceConfig) -> VerifyReport {
    let results: Vec<(Instance, Vec<Outcome>)> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| run_trial(spec, tol, trial))
        .collect();

    let mut properties: BTreeMap<String, PropertyTally> = PROPERTIES
        .iter()
        .map(|p| (p.to_string(), PropertyTally::default()))
        .collect();
    for (trial, (inst, outcomes)) in results.into_iter().enumerate() {
        for (name, outcome) in outcomes {
            let tally = properties.entry(name.to_string()).or_default();
            tally.checked += 1;
            match outcome {
                Ok(()) => tally.passed += 1,
                Err(detail) => {
                    tally.failed += 1;
                    tally.first_failure.get_or_insert_with(|| FailureRecord {
                        trial,
                        kind: inst.kind,
                        detail,
                        a: inst.a.clone(),
                        c: inst.c.clone(),
                    });
                }
            }
        }
    }
    let violations = properties.values().map(|t| t.failed).sum();
    VerifyReport {
        rng: "ChaCha8, stream = trial index".into(),
        spec: *spec,
        tolerances: *tol,
        properties,
        violations,
    }
}

fn draw_instance(rng: &mut ChaCha8Rng, spec: &TrialSpec, trial: usize) -> Instance {
    let kind = InstanceKind::ALL[trial % InstanceKind::ALL.len()];
    generate::instance(rng, kind, spec)
}

/// The instance that trial `trial` of a run with `spec` checks.
pub fn trial_instance(spec: &TrialSpec, trial: usize) -> Instance {
    draw_instance(&mut trial_rng(spec.seed, trial), spec, trial)
}

/// One trial: an instance of kind `trial mod 6` and every property that
/// applies to it.
pub fn run_trial(spec: &TrialSpec, tol: &ToleranceConfig, trial: usize) -> (Instance, Vec<Outcome>) {
    let mut rng = trial_rng(spec.seed, trial);
    let inst = draw_instance(&mut rng, spec, trial);
    let kind = inst.kind;
    let mut out: Vec<Outcome> = Vec::new();

    if inst.reduced.is_some() {
        out.push((PARAMETRIZATION, parametrization(&mut rng, &inst, tol)));
        let (props, norm) = douglas_properties(&inst, tol);
        out.push((DOUGLAS_PROPERTIES, props));
        out.push((NORM_IDENTITY, norm));
    }
    out.push((LSQ_AGREEMENT, lsq_agreement(&inst, tol)));
    if kind != InstanceKind::General {
        out.push((HERMITIAN_CRITERION, hermitian_criterion(&mut rng, &inst, tol)));
        out.push((POSITIVE_CRITERIA, positive_criteria(&mut rng, &inst, tol)));
    }
    if matches!(kind, InstanceKind::Positive | InstanceKind::RangeMismatch) {
        out.push((TN_LAMBDA, tn_lambda(&inst, tol)));
    }
    out.push((BLOCK_TEST, block_test(&mut rng, spec, tol)));
    out.push((PROBE_ONE_SIDED, probe_one_sided(&mut rng, spec, tol)));
    (inst, out)
}

fn parametrization(rng: &mut ChaCha8Rng, inst: &Instance, tol: &ToleranceConfig) -> Result<(), String> {
    let (a, c) = (&inst.a, &inst.c);
    let y = generate::gaussian(rng, a.cols(), c.cols());
    let x = douglas::general_solution(a, c, &y, tol).map_err(|e| e.to_string())?;
    let residual = (&(a * &x) - c).op_norm();
    check(residual <= IDENTITY_TOL * scaled(c.op_norm()), || {
        format!("general solution residual {residual:e}")
    })?;
    let back = douglas::recover_parameter(a, c, &x, tol).map_err(|e| e.to_string())?;
    let again = douglas::general_solution(a, c, &back, tol).map_err(|e| e.to_string())?;
    let drift = (&again - &x).op_norm();
    check(drift <= IDENTITY_TOL * scaled(x.op_norm()), || {
        format!("round trip moved X by {drift:e}")
    })
}

fn lsq_agreement(inst: &Instance, tol: &ToleranceConfig) -> Result<(), String> {
    let lsq = oracle::lsq_solve(&inst.a, &inst.c).map_err(|e| e.to_string())?;
    match (&inst.reduced, douglas::reduced_solution(&inst.a, &inst.c, tol)) {
        (Some(truth), Ok(d)) => {
            let gap = (&lsq.x - &d).op_norm();
            let to_truth = (truth - &d).op_norm();
            let bound = oracle::AGREEMENT_TOL * scaled(d.op_norm());
            check(gap <= bound && to_truth <= bound, || {
                format!("oracle gap {gap:e}, constructed gap {to_truth:e}")
            })
        }
        (None, Err(_)) => check(lsq.residual > oracle::AGREEMENT_TOL, || {
            format!("inconsistent pair but oracle residual {:e}", lsq.residual)
        }),
        (Some(_), Err(e)) => Err(format!("consistent pair rejected: {e}")),
        (None, Ok(_)) => Err("inconsistent pair accepted".into()),
    }
}

fn hermitian_criterion(
    rng: &mut ChaCha8Rng,
    inst: &Instance,
    tol: &ToleranceConfig,
) -> Result<(), String> {
    let (a, c) = (&inst.a, &inst.c);
    let expected = inst.kind.expected_verdict().expect("square kind");
    let report = douglas::hermitian_solvability(a, c, tol).map_err(|e| e.to_string())?;
    let solvable = report.verdict >= Verdict::SolvableHermitian;
    check(solvable == (expected >= Verdict::SolvableHermitian), || {
        format!("hermitian verdict {:?}, expected {expected:?}", report.verdict)
    })?;

    if solvable {
        let y = generate::gaussian(rng, a.cols(), a.cols()).hermitian_part();
        let x = douglas::hermitian_solution(a, c, &y, tol).map_err(|e| e.to_string())?;
        let defect = (&x - &x.adjoint()).op_norm();
        let residual = (&(a * &x) - c).op_norm();
        check(
            defect <= IDENTITY_TOL * scaled(x.op_norm())
                && residual <= IDENTITY_TOL * scaled(c.op_norm()),
            || format!("hermitian solution defect {defect:e}, residual {residual:e}"),
        )?;
    }

    if report.range_ok {
        // DP and CA* are Hermitian together and PSD together.
        let d = douglas::reduced_solution(a, c, tol).map_err(|e| e.to_string())?;
        let dp = &d * &douglas::initial_projector(a, tol);
        let ca = c * &a.adjoint();
        let (dp_h, ca_h) = (matcore::is_hermitian(&dp, tol), matcore::is_hermitian(&ca, tol));
        let (dp_p, ca_p) = (matcore::is_psd(&dp, tol), matcore::is_psd(&ca, tol));
        check(dp_h == ca_h && dp_p == ca_p, || {
            format!("DP hermitian/psd {dp_h}/{dp_p}, CA* hermitian/psd {ca_h}/{ca_p}")
        })?;
    }

    // C = AH with H Hermitian always admits a Hermitian solution.
    let h = generate::gaussian(rng, a.cols(), a.cols()).hermitian_part();
    let c_h = a * &h;
    let forward = douglas::hermitian_solvability(a, &c_h, tol).map_err(|e| e.to_string())?;
    check(forward.verdict == Verdict::SolvableHermitian, || {
        format!("C = AH judged {:?}", forward.verdict)
    })
}

fn positive_criteria(
    rng: &mut ChaCha8Rng,
    inst: &Instance,
    tol: &ToleranceConfig,
) -> Result<(), String> {
    let (a, c) = (&inst.a, &inst.c);
    let expected = inst.kind.expected_verdict().expect("square kind");
    let report = douglas::positive_solvability(a, c, tol).map_err(|e| e.to_string())?;
    check(report.verdict == expected, || {
        format!("verdict {:?}, expected {expected:?}", report.verdict)
    })?;
    if report.range_ok {
        check(report.routes_agree == Some(true), || {
            format!(
                "routes disagree: t_min {:?}, lambda {:?}, dp_range_eq {:?}",
                report.t_min, report.lambda_estimate, report.dp_range_eq
            )
        })?;
    }

    if report.verdict == Verdict::SolvablePositive {
        let z = generate::random_psd(rng, a.cols(), 0.3);
        let x = douglas::positive_solution(a, c, &z, tol).map_err(|e| e.to_string())?;
        let residual = (&(a * &x) - c).op_norm();
        check(
            oracle::eigen_is_psd(&x, tol) && residual <= IDENTITY_TOL * scaled(c.op_norm()),
            || format!("positive solution not PSD or residual {residual:e}"),
        )?;
        let t = report.t_min.and_then(|t| t.value()).unwrap_or(f64::INFINITY);
        let bound = jacobi::spectral_norm(&x) + 1e-8;
        check(t <= bound, || format!("t_min {t} exceeds ||X|| bound {bound}"))?;
    }

    let seed = rng.random::<u64>();
    if let Some(x) = oracle::positive_search(a, c, SEARCH_BUDGET, seed) {
        check(report.verdict == Verdict::SolvablePositive, || {
            format!("search found a PSD solution but verdict is {:?}: {}", report.verdict, x.to_json_string())
        })?;
    }

    // C = AX' with X' positive definite is positively solvable.
    let x_pos = generate::random_psd(rng, a.cols(), 0.0);
    let c_pos = a * &x_pos;
    let forward = douglas::positive_solvability(a, &c_pos, tol).map_err(|e| e.to_string())?;
    check(
        forward.verdict == Verdict::SolvablePositive && forward.routes_agree == Some(true),
        || format!("C = AX' with X' > 0 judged {:?}, routes {:?}", forward.verdict, forward.routes_agree),
    )
}

fn douglas_properties(inst: &Instance, tol: &ToleranceConfig) -> (Result<(), String>, Result<(), String>) {
    match oracle::douglas_properties_check(&inst.a, &inst.c, tol) {
        Ok(r) => (
            check(r.kernels_agree() && r.range_holds(), || format!("{r:?}")),
            check(r.norm_identity_holds(), || {
                format!("||D||^2 = {}, mu* = {}", r.norm_squared, r.mu_star)
            }),
        ),
        Err(e) => (Err(e.to_string()), Err(e.to_string())),
    }
}

fn tn_lambda(inst: &Instance, tol: &ToleranceConfig) -> Result<(), String> {
    let op = TnOperator::new(&inst.a, &inst.c, tol).map_err(|e| e.to_string())?;
    for n in [1u64, 2, 3, 8, 64, 1024] {
        let delta = &op.matrix(n + 1) - &op.matrix(n);
        check(oracle::eigen_is_psd(&delta, tol), || {
            format!("T_{} - T_{n} is not PSD", n + 1)
        })?;
    }
    let est = douglas::lambda_diagnostic(&inst.a, &inst.c, douglas::DEFAULT_N_MAX, tol)
        .map_err(|e| e.to_string())?;
    let bounded = inst.kind == InstanceKind::Positive;
    check(est.is_finite() == bounded && est.is_resolved(), || {
        format!("lambda estimate {est:?}, expected bounded = {bounded}")
    })
}

fn block_test(rng: &mut ChaCha8Rng, spec: &TrialSpec, tol: &ToleranceConfig) -> Result<(), String> {
    let b = generate::block_instance(rng, spec.max_dim);
    let by_blocks = douglas::block_psd_test(&b.a11, &b.a12, &b.a22, tol).map_err(|e| e.to_string())?;
    let by_eigen = oracle::eigen_is_psd(&b.assembled(), tol);
    check(by_blocks == by_eigen && by_eigen == b.psd, || {
        format!(
            "block test {by_blocks}, eigen test {by_eigen}, constructed {}: {}",
            b.psd,
            b.assembled().to_json_string()
        )
    })
}

fn probe_one_sided(rng: &mut ChaCha8Rng, spec: &TrialSpec, tol: &ToleranceConfig) -> Result<(), String> {
    let n = rng.random_range(spec.min_dim..=spec.max_dim);
    let m = match rng.random_range(0..3) {
        0 => generate::random_psd(rng, n, 0.3),
        1 => generate::random_indefinite(rng, n),
        _ => generate::gaussian(rng, n, n).hermitian_part(),
    };
    let seed = rng.random::<u64>();
    let probe = oracle::psd_quadratic_probe(&m, PROBES, seed).map_err(|e| e.to_string())?;
    check(probe || !matcore::is_psd(&m, tol), || {
        format!("probe found a negative direction in a matrix judged PSD: {}", m.to_json_string())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::RankPolicy;

    #[test]
    fn small_run_is_clean_and_deterministic() {
        let spec = TrialSpec::new(1, 5, RankPolicy::Random, 60, 17).unwrap();
        let tol = ToleranceConfig::default();
        let first = run_verify(&spec, &tol);
        assert!(first.passed(), "{}", serde_json::to_string_pretty(&first).unwrap());
        let second = run_verify(&spec, &tol);
        assert_eq!(
            serde_json::to_string(&first).unwrap(),
            serde_json::to_string(&second).unwrap()
        );
        for name in PROPERTIES {
            assert!(first.properties[name].checked > 0, "{name} never ran");
        }
    }

    #[test]
    fn rank_policies_run_clean() {
        let tol = ToleranceConfig::default();
        for policy in [RankPolicy::Full, RankPolicy::Deficient] {
            let spec = TrialSpec::new(2, 6, policy, 36, 3).unwrap();
            let report = run_verify(&spec, &tol);
            assert!(report.passed(), "{}", serde_json::to_string_pretty(&report).unwrap());
        }
    }
}
