//! Counter-rotating corrections by a first-order Floquet truncation.
//!
//! Without the rotating-wave approximation the drift matrix picks up
//! components oscillating at `e^{-2 i n omega_m t}`. Keeping `n` in
//! `{-1, 0, +1}` gives a 12x12 system whose blocks are ordered `n = -1, 0, +1`.
//! Noise enters only the `n = 0` block, and spectra are read from the `n = 0`
//! output block.

use nalgebra::{Matrix4, SMatrix};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::{identity, solve_checked, I};
use crate::params::Model;
use crate::response::{
    correlation_coefficients, drift_matrix, input_coupling, output_coupling, quadrature_noise,
};

pub type Matrix12 = SMatrix<Complex64, 12, 12>;

#[derive(Debug, Clone, PartialEq)]
pub struct FloquetBlocks {
    pub a0: Matrix4<Complex64>,
    /// Coefficient of `e^{-2 i omega_m t}`.
    pub a_plus: Matrix4<Complex64>,
    /// Coefficient of `e^{+2 i omega_m t}`.
    pub a_minus: Matrix4<Complex64>,
    pub abar: Matrix12,
    pub hbar_mat: Matrix12,
    pub gbar_mat: Matrix12,
}

fn place(target: &mut Matrix12, block_row: usize, block_col: usize, m: &Matrix4<Complex64>) {
    target
        .fixed_view_mut::<4, 4>(4 * block_row, 4 * block_col)
        .copy_from(m);
}

pub fn build_floquet(model: &Model) -> FloquetBlocks {
    let a0 = drift_matrix(model).entries;
    let il = I * model.system.coupling_lambda;
    let mut a_plus = Matrix4::zeros();
    a_plus[(0, 3)] = il;
    a_plus[(2, 1)] = il;
    let mut a_minus = Matrix4::zeros();
    a_minus[(1, 2)] = -il;
    a_minus[(3, 0)] = -il;

    let shift = identity::<4>() * (2.0 * I * model.system.omega_m);
    let mut abar = Matrix12::zeros();
    place(&mut abar, 0, 0, &(a0 - shift));
    place(&mut abar, 1, 1, &a0);
    place(&mut abar, 2, 2, &(a0 + shift));
    place(&mut abar, 0, 1, &a_plus);
    place(&mut abar, 1, 2, &a_plus);
    place(&mut abar, 1, 0, &a_minus);
    place(&mut abar, 2, 1, &a_minus);

    let mut hbar_mat = Matrix12::zeros();
    place(&mut hbar_mat, 1, 1, &input_coupling(model));
    let mut gbar_mat = Matrix12::zeros();
    place(&mut gbar_mat, 1, 1, &output_coupling(model));

    FloquetBlocks {
        a0,
        a_plus,
        a_minus,
        abar,
        hbar_mat,
        gbar_mat,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloquetSolution {
    pub omega: f64,
    /// `-(i omega + Abar)^-1 Hbar`
    pub ubar_transfer: Matrix12,
    /// `n = 0` output block per unit `n = 0` input.
    pub central_scattering: Matrix4<Complex64>,
}

pub fn floquet_solve(blocks: &FloquetBlocks, omega: f64) -> Result<FloquetSolution> {
    let m = blocks.abar + identity::<12>() * (I * omega);
    let ubar_transfer = solve_checked(m, &(-blocks.hbar_mat), omega)?;
    let s = blocks.gbar_mat * ubar_transfer;
    Ok(FloquetSolution {
        omega,
        ubar_transfer,
        central_scattering: s.fixed_view::<4, 4>(4, 4).into_owned(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FloquetResponse {
    pub omega: f64,
    pub r_m_brwa: f64,
    pub n_add_brwa: f64,
}

pub fn floquet_response(model: &Model, omega: f64) -> Result<FloquetResponse> {
    let blocks = build_floquet(model);
    let plus = floquet_solve(&blocks, omega)?;
    let minus = floquet_solve(&blocks, -omega)?;
    let q = quadrature_noise(
        &plus.central_scattering,
        &minus.central_scattering,
        model.system.phase_phi,
        &correlation_coefficients(model),
        omega,
    );
    match q {
        Ok(q) => Ok(FloquetResponse {
            omega,
            r_m_brwa: q.r_m,
            n_add_brwa: q.n_add,
        }),
        Err(crate::Error::ZeroResponse { .. }) if model.system.coupling_lambda == 0.0 => {
            Ok(FloquetResponse {
                omega,
                r_m_brwa: 0.0,
                n_add_brwa: f64::INFINITY,
            })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::OperatingPoint;
    use crate::response::{
        added_noise_general, doubled_basis_conjugate, mechanical_response_rwa, scattering_numeric,
    };

    fn op(kappa_over_omega_m: f64, c: f64, z: f64, eta: f64) -> OperatingPoint {
        OperatingPoint {
            kappa_over_omega_m,
            cooperativity: c,
            zeta_over_kappa: z,
            kappa2_over_kappa: 0.95,
            eta,
            ..OperatingPoint::membrane_defaults()
        }
    }

    fn nnz(m: &Matrix12) -> usize {
        m.iter().filter(|z| z.norm() != 0.0).count()
    }

    #[test]
    fn sideband_blocks() {
        let m = op(0.06, 1.0, 0.3, 1.0).model().unwrap();
        let b = build_floquet(&m);
        assert_eq!(b.a_plus.iter().filter(|z| z.norm() != 0.0).count(), 2);
        assert_eq!(b.a_minus.iter().filter(|z| z.norm() != 0.0).count(), 2);
        let a0_nnz = b.a0.iter().filter(|z| z.norm() != 0.0).count();
        // two sideband blocks above and two below the diagonal
        assert_eq!(nnz(&b.abar), 3 * a0_nnz + 4 * 2);
        let tr = b.abar.trace() - 3.0 * b.a0.trace();
        assert!(tr.norm() <= 1e-12 * m.system.omega_m);
    }

    #[test]
    fn no_coupling_is_block_diagonal() {
        let m = op(0.06, 0.0, 0.3, 1.0).model().unwrap();
        let b = build_floquet(&m);
        assert_eq!(b.a_plus, Matrix4::zeros());
        assert_eq!(b.a_minus, Matrix4::zeros());
        for (r, c) in [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)] {
            assert!(b.abar.fixed_view::<4, 4>(4 * r, 4 * c).iter().all(|z| *z == Complex64::from(0.0)));
        }
        let f = floquet_response(&m, 0.0).unwrap();
        assert_eq!(f.r_m_brwa, 0.0);
    }

    #[test]
    fn central_block_keeps_doubled_basis_symmetry() {
        let m = op(0.5, 1.0, 0.3, 0.7).model().unwrap();
        let b = build_floquet(&m);
        let w = 0.3 * m.kappa();
        let plus = floquet_solve(&b, w).unwrap().central_scattering;
        let minus = floquet_solve(&b, -w).unwrap().central_scattering;
        assert!((plus - doubled_basis_conjugate(&minus)).norm() <= 1e-12 * plus.norm());
    }

    #[test]
    fn resolved_sideband_limit() {
        let m = op(0.06, 1.0, 0.49, 1.0).model().unwrap();
        for x in [0.0, 0.5, 3.0] {
            let w = x * m.kappa();
            let f = floquet_response(&m, w).unwrap();
            let g = added_noise_general(&m, w).unwrap();
            assert!((f.r_m_brwa / mechanical_response_rwa(&m, w) - 1.0).abs() < 0.01);
            assert!((f.n_add_brwa / g.n_add - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn far_sidebands_recover_rwa_scattering() {
        let m = op(1e-4, 1.0, 0.3, 1.0).model().unwrap();
        let b = build_floquet(&m);
        let s = floquet_solve(&b, 0.2 * m.kappa()).unwrap().central_scattering;
        let r = scattering_numeric(&m, 0.2 * m.kappa()).unwrap().s;
        assert!((s - r).norm() <= 1e-3 * r.norm());
    }

    #[test]
    fn counter_rotating_terms_amplify_in_bad_cavity() {
        for c in [0.5, 1.0, 2.0, 3.0] {
            let m = op(2.0, c, 0.49, 1.0).model().unwrap();
            let f = floquet_response(&m, 0.0).unwrap();
            assert!(f.r_m_brwa >= mechanical_response_rwa(&m, 0.0));
        }
    }
}
