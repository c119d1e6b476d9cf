//! Linear response of the feedback-loaded cavity: drift matrix, scattering
//! matrix, quadrature transfer functions and the force-noise budget.
//!
//! Starred functions follow `f*(omega) = conj(f(-omega))`.

mod closed_form;
mod drift;
mod noise;
mod rwa;
mod scattering;

pub use closed_form::{
    phi_closed_form, psi_closed_form, quadrature_denominator, scattering_closed_form,
    susceptibilities, Susceptibilities,
};
pub use drift::{doubled_basis_conjugate, drift_matrix, Basis, DriftMatrix};
pub use noise::{
    correlation_coefficients, quadrature_noise, quadrature_weights, CorrelationCoefficients,
    QuadratureNoise, RESPONSE_FLOOR,
};
pub use rwa::{
    added_noise_rwa, mechanical_response_rwa, on_resonance_added_noise, on_resonance_response,
};
pub use scattering::{
    field_response, input_coupling, output_coupling, scattering_numeric, ScatteringMatrix,
};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::params::Model;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferPair {
    pub omega: f64,
    pub psi: Complex64,
    pub phi: Complex64,
    pub psi_star: Complex64,
    pub phi_star: Complex64,
}

pub fn transfer_functions(model: &Model, omega: f64) -> Result<TransferPair> {
    let phase = model.system.phase_phi;
    let wp = quadrature_weights(&scattering_numeric(model, omega)?.s, phase);
    let wm = quadrature_weights(&scattering_numeric(model, -omega)?.s, phase);
    Ok(TransferPair {
        omega,
        psi: wp[0],
        phi: wp[2],
        psi_star: wm[0].conj(),
        phi_star: wm[2].conj(),
    })
}

/// `R_m = (Phi[-w] Phi*[w] + Phi[w] Phi*[-w]) / 2` from the numeric scattering matrix.
pub fn mechanical_response(model: &Model, omega: f64) -> Result<f64> {
    let t = transfer_functions(model, omega)?;
    let t_neg = transfer_functions(model, -omega)?;
    Ok(0.5 * (t_neg.phi * t.phi_star + t.phi * t_neg.phi_star).re)
}

/// Added noise from the full input-correlation quadratic form.
///
/// Agrees with [`added_noise_rwa`] at unit detection efficiency. For
/// `eta < 1` the detection term picks up a factor `2 cos^2(phi)`, see
/// [`general_minus_rwa`].
pub fn added_noise_general(model: &Model, omega: f64) -> Result<QuadratureNoise> {
    let s_plus = scattering_numeric(model, omega)?.s;
    let s_minus = scattering_numeric(model, -omega)?.s;
    quadrature_noise(
        &s_plus,
        &s_minus,
        model.system.phase_phi,
        &correlation_coefficients(model),
        omega,
    )
}

/// Exact difference between the general quadratic form and the rational
/// RWA expression: `(2 cos^2 phi - 1)` times the detection term.
pub fn general_minus_rwa(model: &Model, omega: f64) -> f64 {
    let sp = &model.system;
    let g = sp.gamma;
    let c = model.derived.cooperativity;
    let detection = (omega * omega + g * g) * (1.0 - sp.eta) * sp.feedback_gain_g.powi(2)
        * sp.kappa1
        / (c * g * g * model.kappa());
    (2.0 * sp.phase_phi.cos().powi(2) - 1.0) * detection
}

/// Which algebraic route produced a noise budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    ClosedForm,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseBudget {
    pub omega: f64,
    pub r_m: f64,
    pub n_add: f64,
    /// Force-noise spectral density, N^2/Hz.
    pub s_nn: f64,
}

impl NoiseBudget {
    pub fn new(model: &Model, omega: f64, r_m: f64, n_add: f64, nbar: f64) -> Self {
        NoiseBudget {
            omega,
            r_m,
            n_add,
            s_nn: model.force_scale() * r_m * (nbar + 0.5 + n_add),
        }
    }
}

/// `S_NN = 2 hbar m gamma omega_m R_m (nbar + 1/2 + n_add)`.
///
/// The closed-form route uses the rational expressions; the exact route uses
/// the numeric response and the general added-noise quadratic form.
pub fn noise_force_spectrum(model: &Model, omega: f64, nbar: f64, route: Route) -> Result<NoiseBudget> {
    let (r_m, n_add) = match route {
        Route::ClosedForm => (
            mechanical_response_rwa(model, omega),
            added_noise_rwa(model, omega),
        ),
        Route::Exact => {
            let q = added_noise_general(model, omega)?;
            (q.r_m, q.n_add)
        }
    };
    Ok(NoiseBudget::new(model, omega, r_m, n_add, nbar))
}

/// `F_est[w] = (Phi*[w] F[w - w_m] - Phi[w] F[w + w_m]) / 2`.
pub fn force_estimator<F>(model: &Model, omega: f64, force: F) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let t = transfer_functions(model, omega)?;
    let wm = model.system.omega_m;
    Ok(0.5 * (t.phi_star * force(omega - wm) - t.phi * force(omega + wm)))
}

/// The simplified constant-force expression `R_m cos^2(phi) F`.
///
/// It does not follow from [`force_estimator`]: for constant `F` the
/// half-difference has magnitude `sqrt(R_m) |cos phi| F`. Kept for comparison.
pub fn impulsive_force_reduction(model: &Model, omega: f64, force: f64) -> f64 {
    mechanical_response_rwa(model, omega) * model.system.phase_phi.cos().powi(2) * force
}
