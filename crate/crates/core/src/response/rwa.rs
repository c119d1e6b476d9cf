//! Rational closed forms of the mechanical response and added noise.
//!
//! `gamma` is kept exactly; nothing here assumes `gamma << kappa`.

use num_complex::Complex64;

use crate::params::Model;

/// `(C+1) gamma kappa - 2 zeta (gamma - i omega) cos(phi) - i omega (gamma + kappa) - omega^2`
fn response_denominator(model: &Model, omega: f64) -> Complex64 {
    let sp = &model.system;
    let (g, k) = (sp.gamma, model.kappa());
    let c = model.derived.cooperativity;
    Complex64::new((c + 1.0) * g * k - omega * omega, -omega * (g + k))
        - 2.0 * model.zeta() * sp.phase_phi.cos() * Complex64::new(g, -omega)
}

pub fn mechanical_response_rwa(model: &Model, omega: f64) -> f64 {
    let sp = &model.system;
    let (g, k) = (sp.gamma, model.kappa());
    let c = model.derived.cooperativity;
    let num = 4.0 * c * g * g * k * sp.kappa2;
    let den = response_denominator(model, omega).norm_sqr();
    if num == 0.0 {
        return 0.0;
    }
    if den == 0.0 {
        return f64::INFINITY;
    }
    num / den
}

pub fn added_noise_rwa(model: &Model, omega: f64) -> f64 {
    let sp = &model.system;
    let (g, k, k2) = (sp.gamma, model.kappa(), sp.kappa2);
    let c = model.derived.cooperativity;
    let w2 = omega * omega;
    let scale = 4.0 * c * g * g * k * k2;
    if scale == 0.0 {
        return f64::INFINITY;
    }
    let optical = (w2 * (g * g - 2.0 * c * g * k + k * k) + ((c + 1.0) * g * k).powi(2)
        - 4.0 * c * g * g * k * k2
        + w2 * w2)
        / scale;
    // (1-eta) zeta^2 / (2 C gamma^2 eta kappa kappa2) with zeta^2 = 2 g^2 eta kappa1 kappa2,
    // so the eta = 0 end stays finite.
    let detection = (w2 + g * g) * (1.0 - sp.eta) * sp.feedback_gain_g.powi(2) * sp.kappa1
        / (c * g * g * k);
    optical + detection
}

/// `4 C kappa kappa2 / ((C+1) kappa - 2 zeta cos(phi))^2`
pub fn on_resonance_response(model: &Model) -> f64 {
    let k = model.kappa();
    let c = model.derived.cooperativity;
    let num = 4.0 * c * k * model.system.kappa2;
    let den = ((c + 1.0) * k - 2.0 * model.zeta() * model.system.phase_phi.cos()).powi(2);
    if num == 0.0 {
        return 0.0;
    }
    if den == 0.0 {
        return f64::INFINITY;
    }
    num / den
}

/// `(C-1)^2/4C + (C+1)^2 kappa1 / (4 C kappa2) + (1-eta) zeta^2 / (2 C eta kappa kappa2)`
pub fn on_resonance_added_noise(model: &Model) -> f64 {
    let sp = &model.system;
    let c = model.derived.cooperativity;
    if c == 0.0 {
        return f64::INFINITY;
    }
    let k = model.kappa();
    (c - 1.0).powi(2) / (4.0 * c)
        + (c + 1.0).powi(2) * sp.kappa1 / (4.0 * c * sp.kappa2)
        + (1.0 - sp.eta) * sp.feedback_gain_g.powi(2) * sp.kappa1 / (c * k)
}
