use nalgebra::{Const, DimMin, SMatrix};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Solves above this 1-norm condition estimate are reported as singular.
pub const CONDITION_LIMIT: f64 = 1e14;

pub(crate) fn norm1<const R: usize, const C: usize>(m: &SMatrix<Complex64, R, C>) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solves `m x = rhs` by LU with partial pivoting.
///
/// The condition estimate `|m|_1 |m^-1|_1` is formed from the same
/// factorization; `omega` is only carried into the error.
pub(crate) fn solve_checked<const N: usize, const K: usize>(
    m: SMatrix<Complex64, N, N>,
    rhs: &SMatrix<Complex64, N, K>,
    omega: f64,
) -> Result<SMatrix<Complex64, N, K>>
where
    Const<N>: DimMin<Const<N>, Output = Const<N>>,
{
    let norm_m = norm1(&m);
    let lu = m.lu();
    let singular = |condition| Error::SingularAtFrequency { omega, condition };
    let inv = lu.try_inverse().ok_or_else(|| singular(f64::INFINITY))?;
    let condition = norm_m * norm1(&inv);
    if !condition.is_finite() || condition > CONDITION_LIMIT {
        return Err(singular(condition));
    }
    let x = lu.solve(rhs).ok_or_else(|| singular(condition))?;
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(singular(condition));
    }
    Ok(x)
}

pub(crate) fn identity<const N: usize>() -> SMatrix<Complex64, N, N> {
    SMatrix::<Complex64, N, N>::identity()
}


pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);
