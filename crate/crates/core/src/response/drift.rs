use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::linalg::I;
use crate::params::Model;

/// Ordering of the doubled field vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// `(c, c^dagger, b, b^dagger)`
    CavityThenMechanics,
}

/// Linear drift of the fluctuation vector in the interaction picture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix {
    pub entries: Matrix4<Complex64>,
    pub basis: Basis,
}

pub fn drift_matrix(model: &Model) -> DriftMatrix {
    let s = &model.system;
    let d = &model.derived;
    let zm = Complex64::from_polar(d.zeta, -s.phase_phi);
    let zp = Complex64::from_polar(d.zeta, s.phase_phi);
    let il = I * s.coupling_lambda;
    let k = Complex64::from(d.kappa);
    let g = Complex64::from(s.gamma);
    let z = Complex64::from(0.0);
    #[rustfmt::skip]
    let entries = Matrix4::new(
        zm - k, zp,     il,  z,
        zm,     zp - k, z,   -il,
        il,     z,      -g,  z,
        z,      -il,    z,   -g,
    );
    DriftMatrix {
        entries,
        basis: Basis::CavityThenMechanics,
    }
}

/// Swaps `c <-> c^dagger` and `b <-> b^dagger` and conjugates.
pub fn doubled_basis_conjugate(m: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    const SWAP: [usize; 4] = [1, 0, 3, 2];
    Matrix4::from_fn(|r, c| m[(SWAP[r], SWAP[c])].conj())
}
