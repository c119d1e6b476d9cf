//! Browser bindings. Every export takes plain numbers and returns a flat
//! `Float64Array` or `Uint8Array` so the page can draw without parsing.
//!
//! Parameters follow the CLI: rates relative to `kappa`, `kappa` relative to
//! `omega_m`, the membrane device for everything not exposed.

use loopsense::floquet::floquet_response;
use loopsense::response::{added_noise_rwa, mechanical_response_rwa};
use loopsense::scan::{region_map, Grid};
use loopsense::stability::routh_hurwitz;
use loopsense::{Model, OperatingPoint, Route};
use wasm_bindgen::prelude::*;

/// Cell flags returned by [`region_flags`].
pub const AMPLIFYING: u8 = 1;
pub const SUB_SQL: u8 = 2;
pub const UNSTABLE: u8 = 4;
pub const FAILED: u8 = 8;

fn point(cooperativity: f64, zeta_over_kappa: f64, kappa2_over_kappa: f64, eta: f64, phi: f64) -> OperatingPoint {
    OperatingPoint {
        cooperativity,
        zeta_over_kappa,
        kappa2_over_kappa,
        eta,
        phi,
        ..OperatingPoint::membrane_defaults()
    }
}

fn model(p: &OperatingPoint) -> Result<Model, String> {
    p.model().map_err(|e| e.to_string())
}

fn check_n(n: usize) -> Result<(), String> {
    if n == 0 || n > 4096 {
        return Err(format!("grid size must lie in 1..=4096 (got {n})"));
    }
    Ok(())
}

/// `R_m` and `n_add` over `n` frequencies in `[-span, span]` (units of
/// `kappa`), interleaved as `omega/kappa, R_m, n_add`.
#[wasm_bindgen]
pub fn response_curve(
    cooperativity: f64,
    zeta_over_kappa: f64,
    kappa2_over_kappa: f64,
    eta: f64,
    phi: f64,
    span: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    check_n(n)?;
    let m = model(&point(cooperativity, zeta_over_kappa, kappa2_over_kappa, eta, phi))?;
    let grid = Grid::new("omega_over_kappa", -span, span, n);
    grid.validate().map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(3 * n);
    for x in grid.values() {
        let w = x * m.kappa();
        out.extend([x, mechanical_response_rwa(&m, w), added_noise_rwa(&m, w)]);
    }
    Ok(out)
}

/// On-resonance region flags over `C in [0, c_max]` (rows) and
/// `zeta/kappa in [0, zeta_max]` (columns), `n` points each. Each byte is
/// an OR of [`AMPLIFYING`], [`SUB_SQL`], [`UNSTABLE`] and [`FAILED`].
#[wasm_bindgen]
pub fn region_flags(kappa2_over_kappa: f64, eta: f64, c_max: f64, zeta_max: f64, n: usize) -> Result<Vec<u8>, String> {
    check_n(n)?;
    let base = point(0.0, 0.0, kappa2_over_kappa, eta, 0.0);
    let a1 = Grid::new("cooperativity", 0.0, c_max, n);
    let a2 = Grid::new("zeta_over_kappa", 0.0, zeta_max, n);
    let map = region_map(&base, &a1, &a2, Route::ClosedForm).map_err(|e| e.to_string())?;
    Ok(map
        .cells
        .iter()
        .map(|c| {
            let mut f = 0;
            if c.amplifying {
                f |= AMPLIFYING;
            }
            if c.sub_sql {
                f |= SUB_SQL;
            }
            if c.unstable {
                f |= UNSTABLE;
            }
            if c.error.is_some() && !c.unstable {
                f |= FAILED;
            }
            f
        })
        .collect())
}

/// On-resonance response and added noise with and without the
/// counter-rotating sidebands, over `n` cooperativities in `[c_lo, c_hi]`.
/// Interleaved as `C, R_rwa, R_floquet, n_add_rwa, n_add_floquet`; unstable
/// points carry NaN.
#[wasm_bindgen]
pub fn floquet_comparison(
    kappa_over_omega_m: f64,
    zeta_over_kappa: f64,
    kappa2_over_kappa: f64,
    eta: f64,
    c_lo: f64,
    c_hi: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    check_n(n)?;
    let grid = Grid::new("cooperativity", c_lo, c_hi, n);
    grid.validate().map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(5 * n);
    for c in grid.values() {
        let p = OperatingPoint {
            kappa_over_omega_m,
            ..point(c, zeta_over_kappa, kappa2_over_kappa, eta, 0.0)
        };
        let m = model(&p)?;
        let row = match floquet_response(&m, 0.0) {
            Ok(f) if routh_hurwitz(&m).stable => [
                mechanical_response_rwa(&m, 0.0),
                f.r_m_brwa,
                added_noise_rwa(&m, 0.0),
                f.n_add_brwa,
            ],
            _ => [f64::NAN; 4],
        };
        out.push(c);
        out.extend(row);
    }
    Ok(out)
}
