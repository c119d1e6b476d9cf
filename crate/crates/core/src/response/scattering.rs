use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use super::drift::drift_matrix;
use crate::error::Result;
use crate::linalg::{identity, solve_checked, I};
use crate::params::Model;

/// Output-from-input transfer matrix at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringMatrix {
    pub omega: f64,
    pub s: Matrix4<Complex64>,
}

impl ScatteringMatrix {
    /// `s_ij` with one-based indices, as in the usual element naming.
    pub fn element(&self, i: usize, j: usize) -> Complex64 {
        self.s[(i - 1, j - 1)]
    }
}

/// Output coupling `diag(sqrt(2 kappa2), sqrt(2 kappa2), sqrt(2 gamma), sqrt(2 gamma))`.
pub fn output_coupling(model: &Model) -> Matrix4<Complex64> {
    let a = (2.0 * model.system.kappa2).sqrt();
    let b = (2.0 * model.system.gamma).sqrt();
    Matrix4::from_diagonal(&Vector4::new(a, a, b, b).map(Complex64::from))
}

/// Input coupling `diag(sqrt(2 kappa_fb), sqrt(2 kappa_fb), sqrt(2 gamma), sqrt(2 gamma))`.
pub fn input_coupling(model: &Model) -> Matrix4<Complex64> {
    let a = (2.0 * model.derived.kappa_fb).sqrt();
    let b = (2.0 * model.system.gamma).sqrt();
    Matrix4::from_diagonal(&Vector4::new(a, a, b, b).map(Complex64::from))
}

/// Intracavity fields per unit input noise: `x = -(A + i omega)^-1 H`.
pub fn field_response(model: &Model, omega: f64) -> Result<Matrix4<Complex64>> {
    let m = drift_matrix(model).entries + identity::<4>() * (I * omega);
    let rhs = -input_coupling(model);
    solve_checked(m, &rhs, omega)
}

pub fn scattering_numeric(model: &Model, omega: f64) -> Result<ScatteringMatrix> {
    let x = field_response(model, omega)?;
    Ok(ScatteringMatrix {
        omega,
        s: output_coupling(model) * x,
    })
}
