//! Physical inputs and the quantities derived from them.
//!
//! All rates are amplitude decay rates in rad/s: the cavity field decays as
//! `dc/dt = -kappa c + ...` and the membrane as `db/dt = -gamma b + ...`.
//! The detuning is pinned to the red mechanical sideband, so the mechanical
//! frequency only enters through the thermal occupation, the force scale and
//! the counter-rotating sidebands.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// CODATA 2018 values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub k_boltzmann: f64,
}

impl PhysicalConstants {
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        hbar: HBAR,
        k_boltzmann: K_BOLTZMANN,
    };
}

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_BOLTZMANN: f64 = 1.380_649e-23;

/// Raw physical inputs of the sensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Mechanical angular frequency, rad/s.
    pub omega_m: f64,
    /// Mechanical amplitude decay rate, rad/s.
    pub gamma: f64,
    /// Decay rate through the driven mirror M1, rad/s.
    pub kappa1: f64,
    /// Decay rate through the detected mirror M2, rad/s.
    pub kappa2: f64,
    /// Linearized optomechanical coupling rate, rad/s.
    pub coupling_lambda: f64,
    /// Dimensionless electronic feedback gain.
    pub feedback_gain_g: f64,
    /// Global feedback phase (local-oscillator phase plus delay phase), rad.
    pub phase_phi: f64,
    /// Homodyne detection efficiency.
    pub eta: f64,
    /// Effective mass, kg.
    pub mass: f64,
    /// Mechanical bath temperature, K.
    pub temperature: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// Total cavity decay rate `kappa1 + kappa2`.
    pub kappa: f64,
    /// Feedback reduction of the cavity linewidth, `g sqrt(2 eta kappa1 kappa2)`.
    pub zeta: f64,
    /// Feedback-modified cavity decay rate `kappa - zeta`.
    pub kappa_fb: f64,
    /// Feedback-mediated thermal occupation of the in-loop noise.
    pub n_fb: f64,
    pub m_fb: Complex64,
    pub p_fb: Complex64,
    pub cooperativity: f64,
    pub nbar: f64,
    /// Zero-point position spread, m.
    pub x_zpf: f64,
    /// `kappa < omega_m`; informational only.
    pub resolved_sideband: bool,
}

/// Validated inputs bundled with their derived quantities.
///
/// Every frequency-domain routine takes a `Model`; constructing one is the
/// only place where validation happens.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model {
    pub system: SystemParams,
    pub derived: DerivedParams,
}

impl Model {
    pub fn new(system: SystemParams) -> Result<Self> {
        let derived = derive_params(&system)?;
        Ok(Model { system, derived })
    }

    pub fn kappa(&self) -> f64 {
        self.derived.kappa
    }

    pub fn zeta(&self) -> f64 {
        self.derived.zeta
    }

    /// `2 hbar m gamma omega_m`, the force-noise scale (N^2/Hz).
    pub fn force_scale(&self) -> f64 {
        let s = &self.system;
        2.0 * HBAR * s.mass * s.gamma * s.omega_m
    }
}

fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite (got {value})"),
        })
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    check_finite(name, value)?;
    if value > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveRate { name, value })
    }
}

fn check_non_negative(name: &'static str, value: f64) -> Result<()> {
    check_finite(name, value)?;
    if value >= 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveRate { name, value })
    }
}

/// Validates `p` and evaluates every derived quantity.
///
/// `kappa1 = 0` (a one-port cavity) and `coupling_lambda = 0` are accepted;
/// the remaining rates must be strictly positive.
pub fn derive_params(p: &SystemParams) -> Result<DerivedParams> {
    check_positive("omega_m", p.omega_m)?;
    check_positive("gamma", p.gamma)?;
    check_non_negative("kappa1", p.kappa1)?;
    check_positive("kappa2", p.kappa2)?;
    check_non_negative("coupling_lambda", p.coupling_lambda)?;
    check_finite("feedback_gain_g", p.feedback_gain_g)?;
    check_finite("phase_phi", p.phase_phi)?;
    check_finite("eta", p.eta)?;
    if !(0.0..=1.0).contains(&p.eta) {
        return Err(Error::InvalidParameter {
            name: "eta",
            reason: format!("must lie in [0, 1] (got {})", p.eta),
        });
    }
    check_finite("mass", p.mass)?;
    if p.mass <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "mass",
            reason: format!("must be positive (got {})", p.mass),
        });
    }
    check_finite("temperature", p.temperature)?;
    if p.temperature < 0.0 {
        return Err(Error::InvalidParameter {
            name: "temperature",
            reason: format!("must be non-negative (got {})", p.temperature),
        });
    }

    let kappa = p.kappa1 + p.kappa2;
    let g = p.feedback_gain_g;
    let zeta = g * (2.0 * p.eta * p.kappa1 * p.kappa2).sqrt();
    if zeta >= kappa {
        return Err(Error::FeedbackOverdrive { zeta, kappa });
    }
    let kappa_fb = kappa - zeta;

    // zeta^2 / (4 eta kappa2 kappa_fb) with the eta cancelled, so that the
    // electronic noise injected at eta = 0 stays finite.
    let n_fb = g * g * p.kappa1 / (2.0 * kappa_fb);
    let phase = Complex64::from_polar(1.0, p.phase_phi);
    let m_fb = phase * (zeta / (2.0 * kappa_fb));
    let p_fb = phase * (-zeta / (4.0 * p.kappa2 * kappa_fb).sqrt());

    Ok(DerivedParams {
        kappa,
        zeta,
        kappa_fb,
        n_fb,
        m_fb,
        p_fb,
        cooperativity: p.coupling_lambda * p.coupling_lambda / (kappa * p.gamma),
        nbar: thermal_occupation(p.omega_m, p.temperature),
        x_zpf: (HBAR / (2.0 * p.mass * p.omega_m)).sqrt(),
        resolved_sideband: kappa < p.omega_m,
    })
}

/// Bose occupation `1 / (exp(hbar omega_m / k_B T) - 1)`; exactly zero at `T = 0`.
pub fn thermal_occupation(omega_m: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    let x = HBAR * omega_m / (K_BOLTZMANN * temperature);
    1.0 / x.exp_m1()
}

/// Inverse of `C = Lambda^2 / (kappa gamma)`.
pub fn coupling_from_cooperativity(cooperativity: f64, kappa: f64, gamma: f64) -> Result<f64> {
    if !(cooperativity >= 0.0) {
        return Err(Error::NegativeCooperativity(cooperativity));
    }
    Ok((cooperativity * kappa * gamma).sqrt())
}

/// Feedback gain `g` that produces the linewidth reduction `zeta`.
pub fn gain_from_zeta(zeta: f64, eta: f64, kappa1: f64, kappa2: f64) -> Result<f64> {
    if zeta == 0.0 {
        return Ok(0.0);
    }
    let scale = (2.0 * eta * kappa1 * kappa2).sqrt();
    if !(scale > 0.0) {
        return Err(Error::UnreachableFeedback { zeta });
    }
    Ok(zeta / scale)
}

/// A design point in the dimensionless coordinates used by the figures:
/// rates relative to `omega_m` or `kappa`, coupling as a cooperativity and
/// feedback as a linewidth reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    /// Mechanical angular frequency, rad/s.
    pub omega_m: f64,
    pub kappa_over_omega_m: f64,
    pub gamma_over_omega_m: f64,
    pub kappa2_over_kappa: f64,
    pub cooperativity: f64,
    pub zeta_over_kappa: f64,
    pub phi: f64,
    pub eta: f64,
    pub mass: f64,
    pub temperature: f64,
}

impl OperatingPoint {
    /// Membrane-in-the-middle device: `omega_m = 2 pi x 343.13 kHz`,
    /// `kappa = 0.06 omega_m`, `gamma = 3.4e-6 omega_m`, `m = 1e-12 kg`,
    /// symmetric mirrors, `eta = 0.6`, no coupling or feedback, `T = 0`.
    pub fn membrane_defaults() -> Self {
        OperatingPoint {
            omega_m: 2.0 * std::f64::consts::PI * 343.13e3,
            kappa_over_omega_m: 0.06,
            gamma_over_omega_m: 3.4e-6,
            kappa2_over_kappa: 0.5,
            cooperativity: 0.0,
            zeta_over_kappa: 0.0,
            phi: 0.0,
            eta: 0.6,
            mass: 1e-12,
            temperature: 0.0,
        }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa_over_omega_m * self.omega_m
    }

    pub fn gamma(&self) -> f64 {
        self.gamma_over_omega_m * self.omega_m
    }

    pub fn system_params(&self) -> Result<SystemParams> {
        if !(0.0..=1.0).contains(&self.kappa2_over_kappa) {
            return Err(Error::InvalidParameter {
                name: "kappa2_over_kappa",
                reason: format!("must lie in [0, 1] (got {})", self.kappa2_over_kappa),
            });
        }
        let kappa = self.kappa();
        let gamma = self.gamma();
        let kappa2 = self.kappa2_over_kappa * kappa;
        let kappa1 = kappa - kappa2;
        let zeta = self.zeta_over_kappa * kappa;
        Ok(SystemParams {
            omega_m: self.omega_m,
            gamma,
            kappa1,
            kappa2,
            coupling_lambda: coupling_from_cooperativity(self.cooperativity, kappa, gamma)?,
            feedback_gain_g: gain_from_zeta(zeta, self.eta, kappa1, kappa2)?,
            phase_phi: self.phi,
            eta: self.eta,
            mass: self.mass,
            temperature: self.temperature,
        })
    }

    pub fn model(&self) -> Result<Model> {
        Model::new(self.system_params()?)
    }

    /// Expresses an absolute parameter set in figure coordinates.
    pub fn from_model(model: &Model) -> Self {
        let s = &model.system;
        let d = &model.derived;
        OperatingPoint {
            omega_m: s.omega_m,
            kappa_over_omega_m: d.kappa / s.omega_m,
            gamma_over_omega_m: s.gamma / s.omega_m,
            kappa2_over_kappa: s.kappa2 / d.kappa,
            cooperativity: d.cooperativity,
            zeta_over_kappa: d.zeta / d.kappa,
            phi: s.phase_phi,
            eta: s.eta,
            mass: s.mass,
            temperature: s.temperature,
        }
    }
}

/// A scalar coordinate of [`OperatingPoint`] that scans and boundary
/// searches can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterId {
    Cooperativity,
    ZetaOverKappa,
    Kappa2OverKappa,
    KappaOverOmegaM,
    Eta,
    Phi,
    Temperature,
}

impl ParameterId {
    pub const ALL: [ParameterId; 7] = [
        ParameterId::Cooperativity,
        ParameterId::ZetaOverKappa,
        ParameterId::Kappa2OverKappa,
        ParameterId::KappaOverOmegaM,
        ParameterId::Eta,
        ParameterId::Phi,
        ParameterId::Temperature,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ParameterId::Cooperativity => "cooperativity",
            ParameterId::ZetaOverKappa => "zeta_over_kappa",
            ParameterId::Kappa2OverKappa => "kappa2_over_kappa",
            ParameterId::KappaOverOmegaM => "kappa_over_omega_m",
            ParameterId::Eta => "eta",
            ParameterId::Phi => "phi",
            ParameterId::Temperature => "temperature",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn get(self, op: &OperatingPoint) -> f64 {
        match self {
            ParameterId::Cooperativity => op.cooperativity,
            ParameterId::ZetaOverKappa => op.zeta_over_kappa,
            ParameterId::Kappa2OverKappa => op.kappa2_over_kappa,
            ParameterId::KappaOverOmegaM => op.kappa_over_omega_m,
            ParameterId::Eta => op.eta,
            ParameterId::Phi => op.phi,
            ParameterId::Temperature => op.temperature,
        }
    }

    pub fn set(self, op: &mut OperatingPoint, value: f64) {
        let slot = match self {
            ParameterId::Cooperativity => &mut op.cooperativity,
            ParameterId::ZetaOverKappa => &mut op.zeta_over_kappa,
            ParameterId::Kappa2OverKappa => &mut op.kappa2_over_kappa,
            ParameterId::KappaOverOmegaM => &mut op.kappa_over_omega_m,
            ParameterId::Eta => &mut op.eta,
            ParameterId::Phi => &mut op.phi,
            ParameterId::Temperature => &mut op.temperature,
        };
        *slot = value;
    }

    pub fn with(self, op: &OperatingPoint, value: f64) -> OperatingPoint {
        let mut out = *op;
        self.set(&mut out, value);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn base() -> SystemParams {
        SystemParams {
            omega_m: 1.0,
            gamma: 1e-4,
            kappa1: 0.05,
            kappa2: 0.95,
            coupling_lambda: 0.01,
            feedback_gain_g: 0.0,
            phase_phi: 0.0,
            eta: 0.6,
            mass: 1e-12,
            temperature: 0.0,
        }
    }

    #[test]
    fn open_loop_has_no_feedback_noise() {
        let d = derive_params(&base()).unwrap();
        assert_eq!(d.zeta, 0.0);
        assert_eq!(d.kappa_fb, d.kappa);
        assert_eq!(d.n_fb, 0.0);
        assert_eq!(d.m_fb, Complex64::new(0.0, 0.0));
        assert_eq!(d.p_fb.norm(), 0.0);
    }

    #[test]
    fn feedback_occupation_matches_direct_arithmetic() {
        let mut p = base();
        p.feedback_gain_g = gain_from_zeta(0.49, p.eta, p.kappa1, p.kappa2).unwrap();
        let d = derive_params(&p).unwrap();
        assert_relative_eq!(d.zeta, 0.49, max_relative = 1e-14);
        assert_relative_eq!(d.kappa_fb, 0.51, max_relative = 1e-14);
        // 0.49^2 / (4 * 0.6 * 0.95 * 0.51)
        assert_relative_eq!(d.n_fb, 0.206_484_348_125_215_02, max_relative = 1e-13);
        assert_relative_eq!(
            d.n_fb,
            d.zeta * d.zeta / (4.0 * p.eta * p.kappa2 * d.kappa_fb),
            max_relative = 1e-13
        );
        assert_relative_eq!(d.m_fb.norm(), d.zeta / (2.0 * d.kappa_fb), max_relative = 1e-14);
        assert_relative_eq!(
            d.p_fb.norm(),
            d.zeta / (4.0 * p.kappa2 * d.kappa_fb).sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn unit_gain_symmetric_ideal_detection() {
        let p = SystemParams {
            kappa1: 0.5,
            kappa2: 0.5,
            eta: 1.0,
            feedback_gain_g: 1.0,
            ..base()
        };
        let d = derive_params(&p).unwrap();
        assert_relative_eq!(d.zeta, 1.0 / 2f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn overdrive_and_bad_rates_are_rejected() {
        let p = SystemParams {
            feedback_gain_g: 10.0,
            ..base()
        };
        assert!(matches!(derive_params(&p), Err(Error::FeedbackOverdrive { .. })));

        let p = SystemParams { gamma: 0.0, ..base() };
        assert!(matches!(
            derive_params(&p),
            Err(Error::NonPositiveRate { name: "gamma", .. })
        ));
        let p = SystemParams { kappa2: -1.0, ..base() };
        assert!(matches!(derive_params(&p), Err(Error::NonPositiveRate { .. })));
        let p = SystemParams { eta: 1.5, ..base() };
        assert!(matches!(derive_params(&p), Err(Error::InvalidParameter { .. })));
        let p = SystemParams {
            temperature: -1.0,
            ..base()
        };
        assert!(matches!(derive_params(&p), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn zero_efficiency_keeps_electronic_noise_finite() {
        let p = SystemParams {
            eta: 0.0,
            feedback_gain_g: 0.3,
            ..base()
        };
        let d = derive_params(&p).unwrap();
        assert_eq!(d.zeta, 0.0);
        assert!(d.n_fb.is_finite() && d.n_fb > 0.0);
    }

    #[test]
    fn thermal_occupation_limits() {
        assert_eq!(thermal_occupation(1e6, 0.0), 0.0);
        let omega = 2.0 * std::f64::consts::PI * 343.13e3;
        let t_one = HBAR * omega / (K_BOLTZMANN * std::f64::consts::LN_2);
        assert_relative_eq!(thermal_occupation(omega, t_one), 1.0, max_relative = 1e-12);
        // k_B T / (hbar omega) - 1/2 + x/12 for x << 1
        let x = HBAR * omega / (K_BOLTZMANN * 300.0);
        let series = 1.0 / x - 0.5 + x / 12.0;
        assert_relative_eq!(thermal_occupation(omega, 300.0), series, max_relative = 1e-12);
        assert_relative_eq!(thermal_occupation(omega, 300.0), 1.821_754_311_562_2e7, max_relative = 1e-10);
    }

    #[test]
    fn cooperativity_inversion() {
        assert_eq!(coupling_from_cooperativity(0.0, 1.0, 1.0).unwrap(), 0.0);
        assert_relative_eq!(
            coupling_from_cooperativity(0.5, 1.0, 1.0).unwrap(),
            0.5f64.sqrt(),
            max_relative = 1e-15
        );
        let lambda = coupling_from_cooperativity(1.0, 0.06, 3.4e-6).unwrap();
        assert_relative_eq!(lambda, 4.516_635_916_254_486e-4, max_relative = 1e-12);
        assert!(matches!(
            coupling_from_cooperativity(-0.1, 1.0, 1.0),
            Err(Error::NegativeCooperativity(_))
        ));
    }

    #[test]
    fn zero_point_spread_of_the_membrane() {
        let op = OperatingPoint::membrane_defaults();
        let m = op.model().unwrap();
        assert_relative_eq!(m.derived.x_zpf, 4.945_427_087_496_867e-15, max_relative = 1e-10);
        assert!(m.derived.resolved_sideband);
    }

    #[test]
    fn operating_point_round_trip() {
        let op = OperatingPoint {
            kappa2_over_kappa: 0.95,
            cooperativity: 1.3,
            zeta_over_kappa: 0.31,
            phi: 0.2,
            ..OperatingPoint::membrane_defaults()
        };
        let back = OperatingPoint::from_model(&op.model().unwrap());
        assert_relative_eq!(back.cooperativity, op.cooperativity, max_relative = 1e-12);
        assert_relative_eq!(back.zeta_over_kappa, op.zeta_over_kappa, max_relative = 1e-12);
        assert_relative_eq!(back.kappa2_over_kappa, op.kappa2_over_kappa, max_relative = 1e-12);
    }

    #[test]
    fn feedback_needs_both_mirrors_and_detection() {
        assert!(matches!(
            gain_from_zeta(0.1, 0.0, 0.5, 0.5),
            Err(Error::UnreachableFeedback { .. })
        ));
        assert!(matches!(
            gain_from_zeta(0.1, 1.0, 0.0, 1.0),
            Err(Error::UnreachableFeedback { .. })
        ));
        assert_eq!(gain_from_zeta(0.0, 0.0, 0.0, 1.0).unwrap(), 0.0);
    }
}
