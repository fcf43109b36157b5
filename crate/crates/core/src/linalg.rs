//! Small dense complex linear algebra on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// 2-norm condition number `σ_max / σ_min` (infinite when rank deficient).
pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Inverse by partial-pivot LU, rejecting matrices whose condition number
/// exceeds `max_condition`.
pub fn invert(m: &CMatrix, max_condition: f64, context: &str) -> Result<CMatrix> {
    let condition = condition_number(m);
    if !(condition <= max_condition) {
        return Err(Error::IllConditioned { context: context.to_string(), condition });
    }
    m.clone().lu().try_inverse().ok_or_else(|| Error::IllConditioned { context: context.to_string(), condition })
}

/// Solves the square system `m x = b` by partial-pivot LU.
pub fn solve(m: &CMatrix, b: &CVector, max_condition: f64, context: &str) -> Result<CVector> {
    let condition = condition_number(m);
    if !(condition <= max_condition) {
        return Err(Error::IllConditioned { context: context.to_string(), condition });
    }
    m.clone().lu().solve(b).ok_or_else(|| Error::IllConditioned { context: context.to_string(), condition })
}

/// Least-squares solution of the overdetermined `a x ≈ b` by Householder QR.
///
/// Returns the solution and the condition number of `a`.
pub fn least_squares(a: &CMatrix, b: &CVector, max_condition: f64, context: &str) -> Result<(CVector, f64)> {
    let (rows, cols) = a.shape();
    if rows < cols {
        return Err(Error::invalid(format!("{context}: need at least as many samples ({rows}) as unknowns ({cols})")));
    }
    let condition = condition_number(a);
    if !(condition <= max_condition) {
        return Err(Error::IllConditioned { context: context.to_string(), condition });
    }
    let qr = a.clone().qr();
    let rhs = qr.q().adjoint() * b;
    let x = qr
        .r()
        .solve_upper_triangular(&rhs)
        .ok_or_else(|| Error::IllConditioned { context: context.to_string(), condition })?;
    Ok((x, condition))
}

/// Real least squares `a x ≈ b` by Householder QR; returns the solution and
/// the condition number of `a`.
pub fn least_squares_real(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    max_condition: f64,
    context: &str,
) -> Result<(DVector<f64>, f64)> {
    let (rows, cols) = a.shape();
    if rows < cols {
        return Err(Error::invalid(format!("{context}: need at least as many samples ({rows}) as unknowns ({cols})")));
    }
    let sv = a.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if !(condition <= max_condition) {
        return Err(Error::IllConditioned { context: context.to_string(), condition });
    }
    let qr = a.clone().qr();
    let rhs = qr.q().transpose() * b;
    let x = qr
        .r()
        .solve_upper_triangular(&rhs)
        .ok_or_else(|| Error::IllConditioned { context: context.to_string(), condition })?;
    Ok((x, condition))
}
