//! Symmetrized noise of the detected quadrature assembled from the
//! scattering matrix and the frequency-domain input correlations.
//!
//! Input ordering: `[c_fb, c_fb^dagger, c_in2, c_in2^dagger]` for the optical
//! channels. White correlations `<v_i[w] v_j[w']> = 2 pi N_ij delta(w + w')`
//! reduce the spectrum to a quadratic form in the quadrature weights.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::Model;

/// Below this the added noise (a ratio over the response) is undefined.
pub const RESPONSE_FLOOR: f64 = 1e-300;

/// Constants of the feedback-modified input correlations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationCoefficients {
    pub n_fb: f64,
    pub m_fb: Complex64,
    pub p_fb: Complex64,
    /// `kappa / kappa_fb`
    pub kappa_ratio: f64,
    /// `sqrt(kappa2 / kappa_fb)`
    pub transmission_overlap: f64,
}

pub fn correlation_coefficients(model: &Model) -> CorrelationCoefficients {
    let d = &model.derived;
    CorrelationCoefficients {
        n_fb: d.n_fb,
        m_fb: d.m_fb,
        p_fb: d.p_fb,
        kappa_ratio: d.kappa / d.kappa_fb,
        transmission_overlap: (model.system.kappa2 / d.kappa_fb).sqrt(),
    }
}

impl CorrelationCoefficients {
    /// `N_ij` over `[c_fb, c_fb^dagger, c_in2, c_in2^dagger]`.
    pub fn optical_matrix(&self) -> Matrix4<Complex64> {
        let n = Complex64::from(self.n_fb);
        let m = self.m_fb;
        let p = self.p_fb;
        let r = self.transmission_overlap;
        let mut cov = Matrix4::<Complex64>::zeros();
        cov[(0, 0)] = n - m;
        cov[(1, 1)] = n - m.conj();
        cov[(1, 0)] = n;
        cov[(0, 1)] = n + self.kappa_ratio - m - m.conj();
        cov[(2, 3)] = Complex64::from(1.0);
        cov[(2, 0)] = p;
        cov[(2, 1)] = p + r;
        cov[(0, 3)] = p.conj() + r;
        cov[(1, 3)] = p.conj();
        cov
    }
}

/// Weights of the detected quadrature on the four scattering inputs:
/// `e^{-i phi} s_1j + e^{i phi} s_2j`. Entries 0 and 2 are `Psi` and `Phi`,
/// entries 1 and 3 their starred partners.
pub fn quadrature_weights(s: &Matrix4<Complex64>, phase_phi: f64) -> [Complex64; 4] {
    let ep = Complex64::from_polar(1.0, phase_phi);
    let em = ep.conj();
    std::array::from_fn(|j| em * s[(0, j)] + ep * s[(1, j)])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureNoise {
    pub r_m: f64,
    /// Imaginary residue of the response combination; zero up to rounding.
    pub r_m_imag: f64,
    /// Symmetrized optical noise, in the normalization where the vacuum
    /// input port contributes `2`.
    pub optical_bracket: f64,
    pub n_add: f64,
}

/// Response and added noise from the scattering matrices at `+omega` and
/// `-omega`. Works for any truncation that keeps the doubled-basis symmetry.
pub fn quadrature_noise(
    s_plus: &Matrix4<Complex64>,
    s_minus: &Matrix4<Complex64>,
    phase_phi: f64,
    corr: &CorrelationCoefficients,
    omega: f64,
) -> Result<QuadratureNoise> {
    let wp = quadrature_weights(s_plus, phase_phi);
    let wm = quadrature_weights(s_minus, phase_phi);

    let r_m_c = 0.5 * (wm[2] * wp[3] + wp[2] * wm[3]);

    let port = Complex64::from_polar(1.0, phase_phi);
    let optical = |w: &[Complex64; 4]| [w[0], w[1], -port.conj(), -port];
    let (op, om) = (optical(&wp), optical(&wm));
    let cov = corr.optical_matrix();
    let mut bracket = Complex64::from(0.0);
    for i in 0..4 {
        for j in 0..4 {
            bracket += (op[i] * om[j] + om[i] * op[j]) * cov[(i, j)];
        }
    }

    let r_m = r_m_c.re;
    if !(r_m.abs() > RESPONSE_FLOOR) {
        return Err(Error::ZeroResponse { omega });
    }
    Ok(QuadratureNoise {
        r_m,
        r_m_imag: r_m_c.im,
        optical_bracket: bracket.re,
        n_add: bracket.re / (2.0 * r_m),
    })
}
