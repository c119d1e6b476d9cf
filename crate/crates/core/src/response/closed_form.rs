//! Element-by-element expressions for the scattering matrix, written in terms
//! of the cavity and mechanical susceptibilities. Independent of the linear
//! solve in [`super::scattering`] and checked against it.

use nalgebra::Matrix4;
use num_complex::Complex64;

use super::scattering::ScatteringMatrix;
use crate::error::{Error, Result};
use crate::linalg::I;
use crate::params::Model;

/// Relative size below which `1/Xi` is treated as a pole.
const XI_INV_RELATIVE_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Susceptibilities {
    pub chi_c: Complex64,
    /// `conj(chi_c(-omega))`
    pub chi_c_star: Complex64,
    pub chi_m: Complex64,
    /// `conj(chi_m(-omega))`
    pub chi_m_star: Complex64,
    pub xi_inv: Complex64,
}

fn chi_c_inv(model: &Model, omega: f64) -> Complex64 {
    let zeta = Complex64::from_polar(model.zeta(), -model.system.phase_phi);
    Complex64::new(-model.kappa(), omega) + zeta
}

fn chi_m_inv(model: &Model, omega: f64) -> Complex64 {
    Complex64::new(-model.system.gamma, omega)
}

pub fn susceptibilities(model: &Model, omega: f64) -> Result<Susceptibilities> {
    let chi_c = chi_c_inv(model, omega).inv();
    let chi_c_star = chi_c_inv(model, -omega).inv().conj();
    let chi_m = chi_m_inv(model, omega).inv();
    let chi_m_star = chi_m_inv(model, -omega).inv().conj();
    let l2 = model.system.coupling_lambda.powi(2);
    let z2 = model.zeta().powi(2);

    let terms = [
        l2 * l2 * chi_c * chi_c_star * chi_m * chi_m_star,
        l2 * chi_c * chi_m,
        l2 * chi_c_star * chi_m_star,
        Complex64::from(1.0),
        -z2 * chi_c * chi_c_star,
    ];
    let xi_inv: Complex64 = terms.iter().sum();
    let scale: f64 = terms.iter().map(|t| t.norm()).sum();
    if !(xi_inv.norm() > XI_INV_RELATIVE_FLOOR * scale) {
        return Err(Error::SingularAtFrequency {
            omega,
            condition: scale / xi_inv.norm(),
        });
    }
    Ok(Susceptibilities {
        chi_c,
        chi_c_star,
        chi_m,
        chi_m_star,
        xi_inv,
    })
}

pub fn scattering_closed_form(model: &Model, omega: f64) -> Result<ScatteringMatrix> {
    let sus = susceptibilities(model, omega)?;
    let Susceptibilities {
        chi_c: c,
        chi_c_star: cs,
        chi_m: m,
        chi_m_star: ms,
        xi_inv,
    } = sus;
    let xi = xi_inv.inv();

    let sp = &model.system;
    let l = sp.coupling_lambda;
    let l2 = l * l;
    let z = model.zeta();
    let g = sp.gamma;
    let ep = Complex64::from_polar(1.0, sp.phase_phi);
    let em = ep.conj();
    let a = 2.0 * (sp.kappa2 * model.derived.kappa_fb).sqrt();
    let b = 2.0 * (g * sp.kappa2).sqrt();
    let f = 2.0 * (g * model.derived.kappa_fb).sqrt();
    let cc = c * cs;
    let upper = l2 * cs * ms + 1.0;
    let lower = l2 * c * m + 1.0;

    let mut s = Matrix4::<Complex64>::zeros();
    s[(0, 0)] = -a * c * xi * upper;
    s[(0, 1)] = a * z * ep * cc * xi;
    s[(0, 2)] = I * b * l * c * m * xi * upper;
    s[(0, 3)] = I * b * z * ep * l * cc * ms * xi;

    s[(1, 0)] = a * z * em * cc * xi;
    s[(1, 1)] = -a * cs * xi * lower;
    s[(1, 2)] = -I * b * z * em * l * cc * m * xi;
    s[(1, 3)] = -I * b * l * cs * ms * xi * lower;

    s[(2, 0)] = I * f * l * c * m * xi * upper;
    s[(2, 1)] = -I * f * z * ep * l * cc * m * xi;
    s[(2, 2)] = 2.0 * g * m * xi * (cs * (z * z * c - l2 * ms) - 1.0);
    s[(2, 3)] = 2.0 * g * z * ep * l2 * cc * m * ms * xi;

    s[(3, 0)] = I * f * z * em * l * cc * ms * xi;
    s[(3, 1)] = -I * f * l * cs * ms * xi * lower;
    s[(3, 2)] = 2.0 * g * z * em * l2 * cc * m * ms * xi;
    s[(3, 3)] = 2.0 * g * ms * xi * (c * (z * z * cs - l2 * m) - 1.0);

    Ok(ScatteringMatrix { omega, s })
}

/// `(gamma - i omega)(kappa - i omega) - 2 zeta (gamma - i omega) cos(phi) + Lambda^2`
pub fn quadrature_denominator(model: &Model, omega: f64) -> Complex64 {
    let sp = &model.system;
    let mech = Complex64::new(sp.gamma, -omega);
    let cav = Complex64::new(model.kappa(), -omega);
    mech * cav - 2.0 * model.zeta() * sp.phase_phi.cos() * mech + sp.coupling_lambda.powi(2)
}

/// Closed-form optical-input transfer `Psi[omega]`.
pub fn psi_closed_form(model: &Model, omega: f64) -> Complex64 {
    let sp = &model.system;
    let mech = Complex64::new(sp.gamma, -omega);
    let num = Complex64::from_polar(2.0, -sp.phase_phi)
        * mech
        * (sp.kappa2 * model.derived.kappa_fb).sqrt();
    num / quadrature_denominator(model, omega)
}

/// Closed-form mechanical-input transfer `Phi[omega]`.
pub fn phi_closed_form(model: &Model, omega: f64) -> Complex64 {
    let sp = &model.system;
    let num = I
        * Complex64::from_polar(2.0 * sp.coupling_lambda, -sp.phase_phi)
        * (sp.gamma * sp.kappa2).sqrt();
    num / quadrature_denominator(model, omega)
}
