use axc_core::douglas::{self, Verdict};
use axc_core::{ComplexMatrix, ToleranceConfig, C64};
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), rows * cols).prop_map(move |v| {
        let data = v.into_iter().map(|(re, im)| C64::new(re, im)).collect();
        ComplexMatrix::from_row_major(rows, cols, data).unwrap()
    })
}

/// `A` with its last column zeroed so that `N(A)` is never trivial.
fn singular(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(n, n).prop_map(move |m| {
        ComplexMatrix::from_fn(n, n, |i, j| {
            if j + 1 == n {
                C64::new(0.0, 0.0)
            } else {
                m.get(i, j)
            }
        })
    })
}

fn residual(a: &ComplexMatrix, x: &ComplexMatrix, c: &ComplexMatrix) -> f64 {
    (&(a * x) - c).op_norm() / c.op_norm().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_general_member_solves(a in singular(3), x_true in matrix(3, 2), y in matrix(3, 2)) {
        let c = &a * &x_true;
        let x = douglas::general_solution(&a, &c, &y, &tol()).unwrap();
        prop_assert!(residual(&a, &x, &c) < 1e-9);
        let back = douglas::recover_parameter(&a, &c, &x, &tol()).unwrap();
        let again = douglas::general_solution(&a, &c, &back, &tol()).unwrap();
        prop_assert!(again.max_abs_diff(&x) < 1e-9);
    }

    #[test]
    fn hermitian_members_are_hermitian_solutions(a in singular(3), h in matrix(3, 3), y in matrix(3, 3)) {
        let h = h.hermitian_part();
        let c = &a * &h;
        let report = douglas::hermitian_solvability(&a, &c, &tol()).unwrap();
        prop_assert!(report.verdict >= Verdict::SolvableHermitian);
        let x = douglas::hermitian_solution(&a, &c, &y.hermitian_part(), &tol()).unwrap();
        prop_assert!(residual(&a, &x, &c) < 1e-9);
        prop_assert!(x.max_abs_diff(&x.adjoint()) < 1e-9);
    }

    #[test]
    fn positive_members_are_psd_solutions(a in singular(3), g in matrix(3, 3), z in matrix(3, 3)) {
        let psd = &g * &g.adjoint();
        let c = &a * &psd;
        let report = douglas::positive_solvability(&a, &c, &tol()).unwrap();
        prop_assert_eq!(report.verdict, Verdict::SolvablePositive);
        prop_assert_eq!(report.routes_agree, Some(true));
        let x = douglas::positive_solution(&a, &c, &(&z * &z.adjoint()), &tol()).unwrap();
        prop_assert!(residual(&a, &x, &c) < 1e-9);
        let min = axc_core::matcore::min_eigenvalue(&x).unwrap();
        prop_assert!(min >= -1e-9 * x.op_norm().max(1.0), "min eigenvalue {}", min);
    }

    #[test]
    fn verdicts_are_nested(a in matrix(3, 3), c in matrix(3, 3)) {
        let r = douglas::positive_solvability(&a, &c, &tol()).unwrap();
        if r.verdict >= Verdict::SolvableGeneral {
            prop_assert!(r.range_ok);
        }
        if r.verdict >= Verdict::SolvableHermitian {
            prop_assert!(r.ca_star_hermitian);
        }
        if r.verdict == Verdict::SolvablePositive {
            prop_assert_eq!(r.ca_star_psd, Some(true));
            prop_assert_eq!(r.dp_range_eq, Some(true));
        } else {
            prop_assert!(r.failed_condition.is_some());
        }
    }
}
