//! Dynamical stability of the linearized fluctuations.
//!
//! Two independent classifications: the four Routh–Hurwitz polynomials in
//! `(gamma, kappa, C, zeta cos phi)`, and the eigenvalues of the drift matrix.

use nalgebra::Schur;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{Model, OperatingPoint, ParameterId};
use crate::response::drift_matrix;

/// Normalized conditions at or below this count as violated.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

const SCHUR_MAX_ITERATIONS: usize = 10_000;
const BISECTION_RELATIVE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityReport {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub stable_rh: bool,
    pub max_real_eigenvalue: f64,
    pub stable_eig: bool,
    /// Smallest of the conditions after scaling each by the matching power
    /// of `gamma + kappa`.
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouthHurwitz {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub margin: f64,
    pub stable: bool,
}

pub fn routh_hurwitz(model: &Model) -> RouthHurwitz {
    let g = model.system.gamma;
    let k = model.kappa();
    let c = model.derived.cooperativity;
    let x = model.zeta() * model.system.phase_phi.cos();
    let s = g + k;

    let c1 = g - x + k;
    let c2 = x * (-4.0 * g * g - (c + 8.0) * g * k + 2.0 * x * (2.0 * g + k) - 3.0 * k * k)
        + s * (g * g + (c + 3.0) * g * k + k * k);
    let c3 = (x * (x * (c * k + 2.0 * k + 2.0 * g) - s * (2.0 * c * k + 3.0 * k + g))
        + k * (c + 1.0) * s * s)
        * (g - 2.0 * x + k);
    let c4 = c * k - 2.0 * x + k;

    let margin = (c1 / s)
        .min(c2 / s.powi(3))
        .min(c3 / s.powi(4))
        .min(c4 / s);
    RouthHurwitz {
        c1,
        c2,
        c3,
        c4,
        margin,
        stable: margin > BOUNDARY_TOLERANCE,
    }
}

/// Largest real part among the drift-matrix eigenvalues.
pub fn max_real_eigenvalue(model: &Model) -> Result<f64> {
    let a = drift_matrix(model).entries;
    let schur = Schur::try_new(a, f64::EPSILON, SCHUR_MAX_ITERATIONS).ok_or(Error::EigenFailure)?;
    let eig = schur.eigenvalues().ok_or(Error::EigenFailure)?;
    let max = eig.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    if max.is_finite() {
        Ok(max)
    } else {
        Err(Error::EigenFailure)
    }
}

pub fn eigenvalues(model: &Model) -> Result<[num_complex::Complex64; 4]> {
    let a = drift_matrix(model).entries;
    let schur = Schur::try_new(a, f64::EPSILON, SCHUR_MAX_ITERATIONS).ok_or(Error::EigenFailure)?;
    let eig = schur.eigenvalues().ok_or(Error::EigenFailure)?;
    Ok([eig[0], eig[1], eig[2], eig[3]])
}

pub fn eigen_stability(model: &Model) -> Result<StabilityReport> {
    let rh = routh_hurwitz(model);
    let max_re = max_real_eigenvalue(model)?;
    Ok(StabilityReport {
        c1: rh.c1,
        c2: rh.c2,
        c3: rh.c3,
        c4: rh.c4,
        stable_rh: rh.stable,
        max_real_eigenvalue: max_re,
        stable_eig: max_re < 0.0,
        margin: rh.margin,
    })
}

/// Locates the Routh–Hurwitz stability edge along one coordinate by bisection.
pub fn stability_boundary(base: &OperatingPoint, vary: ParameterId, lo: f64, hi: f64) -> Result<f64> {
    let stable_at = |v: f64| -> Result<bool> { Ok(routh_hurwitz(&vary.with(base, v).model()?).stable) };
    let (mut a, mut b) = (lo, hi);
    let sa = stable_at(a)?;
    if sa == stable_at(b)? {
        return Err(Error::NoSignChange { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if stable_at(mid)? == sa {
            a = mid;
        } else {
            b = mid;
        }
        if (b - a).abs() <= BISECTION_RELATIVE * a.abs().max(b.abs()) {
            break;
        }
    }
    Ok(0.5 * (a + b))
}
