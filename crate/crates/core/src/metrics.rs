//! Sensor figures of merit: signal-to-noise ratio, force sensitivity and the
//! half-maximum bandwidth of the mechanical response.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::Model;
use crate::response::{
    added_noise_general, added_noise_rwa, force_estimator, mechanical_response,
    mechanical_response_rwa, Route,
};
use crate::stability::routh_hurwitz;

/// Upper edge of the half-maximum search, in units of `kappa`.
pub const FWHM_WINDOW_KAPPA: f64 = 10.0;
const FWHM_START_KAPPA: f64 = 1e-9;
const FWHM_STEPS_PER_OCTAVE: f64 = 8.0;
const FWHM_RELATIVE: f64 = 1e-6;

fn added_noise(model: &Model, omega: f64, route: Route) -> Result<f64> {
    match route {
        Route::ClosedForm => Ok(added_noise_rwa(model, omega)),
        Route::Exact => Ok(added_noise_general(model, omega)?.n_add),
    }
}

fn noise_quanta(model: &Model, omega: f64, nbar: f64, route: Route) -> Result<f64> {
    Ok(nbar + 0.5 + added_noise(model, omega, route)?)
}

/// `sqrt(2 hbar m gamma omega_m (nbar + 1/2 + n_add))`, N/sqrt(Hz).
pub fn sensitivity(model: &Model, omega: f64, nbar: f64, route: Route) -> Result<f64> {
    Ok((model.force_scale() * noise_quanta(model, omega, nbar, route)?).sqrt())
}

/// SNR for a force with flat spectrum `force` (N/sqrt(Hz)).
pub fn snr(model: &Model, omega: f64, nbar: f64, force: f64, route: Route) -> Result<f64> {
    let cos = model.system.phase_phi.cos().abs();
    Ok(cos * force / sensitivity(model, omega, nbar, route)?)
}

/// SNR as the detected force signal over the noise standard deviation,
/// `|F_est| / sqrt(S_NN)`, both taken from the linear response.
pub fn snr_ratio_route(model: &Model, omega: f64, nbar: f64, force: f64, route: Route) -> Result<f64> {
    if force == 0.0 {
        return Ok(0.0);
    }
    let signal = force_estimator(model, omega, |_| Complex64::from(force))?.norm();
    let r_m = mechanical_response(model, omega)?;
    let noise = (model.force_scale() * r_m * noise_quanta(model, omega, nbar, route)?).sqrt();
    Ok(signal / noise)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensorPoint {
    pub omega: f64,
    /// SNR per unit force amplitude, sqrt(Hz)/N.
    pub snr_per_force: f64,
    /// N/sqrt(Hz)
    pub sensitivity: f64,
    /// rad/s
    pub fwhm: Option<f64>,
}

pub fn sensor_point(model: &Model, omega: f64, nbar: f64, route: Route, with_fwhm: bool) -> Result<SensorPoint> {
    let s = sensitivity(model, omega, nbar, route)?;
    let fwhm = if with_fwhm { Some(fwhm(model, route)?) } else { None };
    Ok(SensorPoint {
        omega,
        snr_per_force: model.system.phase_phi.cos().abs() / s,
        sensitivity: s,
        fwhm,
    })
}

fn response(model: &Model, omega: f64, route: Route) -> Result<f64> {
    match route {
        Route::ClosedForm => Ok(mechanical_response_rwa(model, omega)),
        Route::Exact => mechanical_response(model, omega),
    }
}

/// Full width at half maximum of `R_m` around `omega = 0`, rad/s.
///
/// Scans geometrically outward from `1e-9 kappa` on each side until `R_m`
/// drops below half of `R_m[0]`, then bisects. The search stops at
/// `10 kappa`.
pub fn fwhm(model: &Model, route: Route) -> Result<f64> {
    if !routh_hurwitz(model).stable {
        return Err(Error::Unstable);
    }
    let peak = response(model, 0.0, route)?;
    if !(peak > 0.0) {
        return Err(Error::NoHalfCrossing);
    }
    let half = 0.5 * peak;
    let upper = half_crossing(model, route, half, 1.0)?;
    let lower = half_crossing(model, route, half, -1.0)?;
    Ok(upper + lower)
}

/// Distance from zero to the first half-maximum crossing on one side.
fn half_crossing(model: &Model, route: Route, half: f64, side: f64) -> Result<f64> {
    let kappa = model.kappa();
    let limit = FWHM_WINDOW_KAPPA * kappa;
    let step = 2f64.powf(1.0 / FWHM_STEPS_PER_OCTAVE);
    let below = |w: f64| -> Result<bool> { Ok(response(model, side * w, route)? < half) };

    let mut inner = 0.0;
    let mut outer = FWHM_START_KAPPA * kappa;
    loop {
        if below(outer)? {
            break;
        }
        if outer >= limit {
            return Err(Error::NoHalfCrossing);
        }
        inner = outer;
        outer = (outer * step).min(limit);
    }
    while outer - inner > FWHM_RELATIVE * outer {
        let mid = 0.5 * (inner + outer);
        if below(mid)? {
            outer = mid;
        } else {
            inner = mid;
        }
    }
    Ok(0.5 * (inner + outer))
}
