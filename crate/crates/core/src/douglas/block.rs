use crate::error::{Error, Result};
use crate::matcore;
use crate::matrix::ComplexMatrix;
use crate::tolerance::ToleranceConfig;

/// Positivity of `[[A11, A12], [A12*, A22]]` without assembling it:
/// `A11 >= 0`, `A12 = A11 A11† A12` and `A22 - A12* A11† A12 >= 0`.
pub fn block_psd_test(
    a11: &ComplexMatrix,
    a12: &ComplexMatrix,
    a22: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<bool> {
    if !a11.is_square() || !a22.is_square() || a12.shape() != (a11.rows(), a22.rows()) {
        return Err(Error::ShapeMismatch {
            op: "block_psd_test",
            left: a11.shape(),
            right: a12.shape(),
        });
    }
    for block in [a11, a22] {
        let defect = matcore::hermitian_defect(block);
        if defect > tol.residual_bound(block.op_norm()) {
            return Err(Error::NotHermitian { defect });
        }
    }
    if !matcore::is_psd(a11, tol) {
        return Ok(false);
    }
    let a11_pinv = matcore::pinv(a11, tol);
    let range_part = &(a11 * &a11_pinv) * a12;
    if (&range_part - a12).op_norm() > tol.residual_bound(a12.op_norm()) {
        return Ok(false);
    }
    let schur = a22 - &(&(&a12.adjoint() * &a11_pinv) * a12);
    Ok(matcore::is_psd(&schur.hermitian_part(), tol))
}
