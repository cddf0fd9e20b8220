//! Smallest generalized eigenvalue of a symmetric pencil `(A, G)` with SPD
//! `G`, by inverse iteration; used for discrete coercivity constants and
//! the inextensionality dichotomy.

use nalgebra::{DMatrix, DVector};

use crate::error::{Result, ShellError};

/// Smallest eigenvalue `lambda` of `A x = lambda G x` with `A` symmetric
/// positive semidefinite and `G` SPD.  A singular (or nearly singular) `A`
/// is handled by factoring the shifted matrix `A + sigma G`; the returned
/// value is the Rayleigh quotient of the *unshifted* pencil, so an exact
/// kernel reports as (numerically) zero.
pub fn smallest_generalized_eigenvalue(a: &DMatrix<f64>, g: &DMatrix<f64>) -> Result<f64> {
    let n = a.nrows();
    assert_eq!(a.ncols(), n);
    assert_eq!(g.nrows(), n);

    if g.clone().cholesky().is_none() {
        return Err(ShellError::SolveFailure("norm Gram matrix not SPD".into()));
    }

    // relative shift keeps the factorization alive when A has a kernel
    let scale_a = a.diagonal().iter().cloned().fold(0.0_f64, f64::max).max(1e-300);
    let scale_g = g.diagonal().iter().cloned().fold(0.0_f64, f64::max).max(1e-300);
    let sigma = 1e-12 * scale_a / scale_g;

    let factor = match a.clone().cholesky() {
        Some(c) => c,
        None => (a + g * sigma)
            .cholesky()
            .ok_or_else(|| ShellError::SolveFailure("stiffness pencil not PSD".into()))?,
    };

    // deterministic start vector
    let mut x = DVector::from_fn(n, |i, _| 1.0 + ((i % 7) as f64) * 0.1);
    let mut lambda_prev = f64::INFINITY;
    for _ in 0..5000 {
        let mut y = factor.solve(&(g * &x));
        let norm = (y.dot(&(g * &y))).sqrt();
        if !(norm > 0.0) {
            return Err(ShellError::SolveFailure("inverse iteration collapsed".into()));
        }
        y /= norm;
        let lambda = y.dot(&(a * &y)) / y.dot(&(g * &y));
        let done = (lambda - lambda_prev).abs() <= 1e-11 * lambda.abs().max(1e-30);
        x = y;
        lambda_prev = lambda;
        if done {
            break;
        }
    }
    Ok(lambda_prev)
}
