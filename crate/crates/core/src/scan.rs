//! Parameter-space scans: two-axis on-resonance region maps and one-axis
//! sweeps. Every cell and row is an independent pure evaluation; results are
//! gathered in grid order whatever the scheduling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floquet::floquet_response;
use crate::metrics::{fwhm, sensitivity, snr};
use crate::params::{Model, OperatingPoint, ParameterId};
use crate::response::{
    added_noise_general, added_noise_rwa, mechanical_response_rwa,
    noise_force_spectrum, on_resonance_added_noise, on_resonance_response, Route,
};
use crate::stability::routh_hurwitz;

/// Standard quantum limit on the added noise.
pub const SQL_ADDED_NOISE: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64, n: usize) -> Self {
        Grid {
            name: name.into(),
            lo,
            hi,
            n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidGrid(format!("`{}` has no points", self.name)));
        }
        if !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::InvalidGrid(format!("`{}` has non-finite bounds", self.name)));
        }
        if self.hi < self.lo || (self.n > 1 && self.hi == self.lo) {
            return Err(Error::InvalidGrid(format!(
                "`{}` must increase (lo = {}, hi = {})",
                self.name, self.lo, self.hi
            )));
        }
        Ok(())
    }

    /// Evenly spaced points including both ends.
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n)
            .map(|i| if i + 1 == self.n { self.hi } else { self.lo + step * i as f64 })
            .collect()
    }
}

#[cfg(feature = "parallel")]
fn map_ordered<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_ordered<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).map(f).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionCell {
    pub x: f64,
    pub y: f64,
    /// `None` for unstable cells and cells that failed to evaluate.
    pub r_m0: Option<f64>,
    pub n_add0: Option<f64>,
    pub amplifying: bool,
    pub sub_sql: bool,
    pub unstable: bool,
    pub error: Option<&'static str>,
}

impl RegionCell {
    fn failed(x: f64, y: f64, e: &Error) -> Self {
        RegionCell {
            x,
            y,
            r_m0: None,
            n_add0: None,
            amplifying: false,
            sub_sql: false,
            unstable: false,
            error: Some(e.tag()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionMap {
    pub axis1: Grid,
    pub axis2: Grid,
    pub route: Route,
    /// Row-major: `cells[i * axis2.n + j]` is `(axis1[i], axis2[j])`.
    pub cells: Vec<RegionCell>,
}

impl RegionMap {
    pub fn cell(&self, i: usize, j: usize) -> &RegionCell {
        &self.cells[i * self.axis2.n + j]
    }

    pub fn count(&self, pred: impl Fn(&RegionCell) -> bool) -> usize {
        self.cells.iter().filter(|c| pred(c)).count()
    }
}

fn resolve_axis(grid: &Grid) -> Result<ParameterId> {
    ParameterId::from_name(&grid.name)
        .ok_or_else(|| Error::InvalidGrid(format!("unknown parameter `{}`", grid.name)))
}

fn region_cell(model: &Model, x: f64, y: f64, route: Route) -> RegionCell {
    if !routh_hurwitz(model).stable {
        return RegionCell {
            x,
            y,
            r_m0: None,
            n_add0: None,
            amplifying: false,
            sub_sql: false,
            unstable: true,
            error: None,
        };
    }
    let values = match route {
        Route::ClosedForm => Ok((on_resonance_response(model), on_resonance_added_noise(model))),
        Route::Exact => added_noise_general(model, 0.0).map(|q| (q.r_m, q.n_add)),
    };
    match values {
        Ok((r_m0, n_add0)) => RegionCell {
            x,
            y,
            r_m0: Some(r_m0),
            n_add0: Some(n_add0),
            amplifying: r_m0 > 1.0,
            sub_sql: n_add0 < SQL_ADDED_NOISE,
            unstable: false,
            error: None,
        },
        Err(e) => RegionCell::failed(x, y, &e),
    }
}

/// On-resonance response, added noise and stability over a two-axis grid.
///
/// The default axes are cooperativity and `zeta / kappa`; any pair of
/// [`ParameterId`] names is accepted.
pub fn region_map(base: &OperatingPoint, axis1: &Grid, axis2: &Grid, route: Route) -> Result<RegionMap> {
    axis1.validate()?;
    axis2.validate()?;
    let (p1, p2) = (resolve_axis(axis1)?, resolve_axis(axis2)?);
    let (xs, ys) = (axis1.values(), axis2.values());
    let cells = map_ordered(xs.len() * ys.len(), |k| {
        let (x, y) = (xs[k / ys.len()], ys[k % ys.len()]);
        let op = p2.with(&p1.with(base, x), y);
        match op.model() {
            Ok(m) => region_cell(&m, x, y, route),
            Err(e) => RegionCell::failed(x, y, &e),
        }
    });
    Ok(RegionMap {
        axis1: axis1.clone(),
        axis2: axis2.clone(),
        route,
        cells,
    })
}

/// A single value in an output table.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Float(f64),
    Bool(bool),
    Text(String),
    Missing,
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Missing, Into::into)
    }
}

/// Column-labelled rows plus an ordered key/value header.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Table {
            metadata: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    /// Echoes every coordinate of the operating point.
    pub fn echo_params(&mut self, op: &OperatingPoint) -> &mut Self {
        self.meta("version", env!("CARGO_PKG_VERSION"))
            .meta("omega_m_rad_per_s", fmt_float(op.omega_m))
            .meta("kappa_over_omega_m", fmt_float(op.kappa_over_omega_m))
            .meta("gamma_over_omega_m", fmt_float(op.gamma_over_omega_m))
            .meta("kappa2_over_kappa", fmt_float(op.kappa2_over_kappa))
            .meta("cooperativity", fmt_float(op.cooperativity))
            .meta("zeta_over_kappa", fmt_float(op.zeta_over_kappa))
            .meta("phi", fmt_float(op.phi))
            .meta("eta", fmt_float(op.eta))
            .meta("mass_kg", fmt_float(op.mass))
            .meta("temperature_k", fmt_float(op.temperature))
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

/// Shortest text that parses back to the same `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:e}")
}

impl RegionMap {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(
            [
                self.axis1.name.as_str(),
                self.axis2.name.as_str(),
                "r_m",
                "n_add",
                "amplifying",
                "sub_sql",
                "stable",
                "error",
            ]
            .map(String::from)
            .to_vec(),
        );
        t.rows = self
            .cells
            .iter()
            .map(|c| {
                vec![
                    c.x.into(),
                    c.y.into(),
                    c.r_m0.into(),
                    c.n_add0.into(),
                    c.amplifying.into(),
                    c.sub_sql.into(),
                    (!c.unstable && c.error.is_none()).into(),
                    c.error.map(String::from).map_or(Value::Missing, Value::Text),
                ]
            })
            .collect();
        t
    }
}

/// What a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepAxis {
    /// Detection frequency in units of `kappa`.
    OmegaOverKappa,
    Parameter(ParameterId),
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::OmegaOverKappa => "omega_over_kappa",
            SweepAxis::Parameter(p) => p.name(),
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        if name == "omega_over_kappa" {
            return Some(SweepAxis::OmegaOverKappa);
        }
        ParameterId::from_name(name).map(SweepAxis::Parameter)
    }
}

/// Output column groups a sweep can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    /// `r_m`, `n_add` on the selected route.
    Response,
    /// `r_m_general`, `n_add_general` from the numeric scattering matrix.
    General,
    /// `r_m_brwa`, `n_add_brwa` with counter-rotating sidebands.
    Floquet,
    Snr,
    Sensitivity,
    NoiseSpectrum,
    Stability,
    Flags,
    Fwhm,
}

impl Output {
    pub const ALL: [Output; 9] = [
        Output::Response,
        Output::General,
        Output::Floquet,
        Output::Snr,
        Output::Sensitivity,
        Output::NoiseSpectrum,
        Output::Stability,
        Output::Flags,
        Output::Fwhm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Output::Response => "response",
            Output::General => "general",
            Output::Floquet => "floquet",
            Output::Snr => "snr",
            Output::Sensitivity => "sensitivity",
            Output::NoiseSpectrum => "noise_spectrum",
            Output::Stability => "stability",
            Output::Flags => "flags",
            Output::Fwhm => "fwhm",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.name() == name)
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Output::Response => &["r_m", "n_add"],
            Output::General => &["r_m_general", "n_add_general"],
            Output::Floquet => &["r_m_brwa", "n_add_brwa"],
            Output::Snr => &["snr"],
            Output::Sensitivity => &["sensitivity_N_per_sqrtHz"],
            Output::NoiseSpectrum => &["s_nn_N2_per_Hz"],
            Output::Stability => &["c1", "c2", "c3", "c4", "stable"],
            Output::Flags => &["amplifying", "sub_sql"],
            Output::Fwhm => &["fwhm_rad_per_s"],
        }
    }

    /// Whether the group is meaningless past the stability edge.
    fn needs_stability(self) -> bool {
        !matches!(self, Output::Stability)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub grid: Grid,
    pub outputs: Vec<Output>,
    pub route: Route,
    /// Flat force amplitude for the SNR column, N/sqrt(Hz).
    pub force: f64,
    /// Detection frequency in units of `kappa` when the axis is a parameter.
    pub omega_over_kappa: f64,
}

fn evaluate(output: Output, model: &Model, omega: f64, spec: &SweepSpec) -> Result<Vec<Value>> {
    let nbar = model.derived.nbar;
    let route = spec.route;
    let response = || -> Result<(f64, f64)> {
        match route {
            Route::ClosedForm => Ok((mechanical_response_rwa(model, omega), added_noise_rwa(model, omega))),
            Route::Exact => added_noise_general(model, omega).map(|q| (q.r_m, q.n_add)),
        }
    };
    Ok(match output {
        Output::Response => {
            let (r, n) = response()?;
            vec![r.into(), n.into()]
        }
        Output::General => {
            let q = added_noise_general(model, omega)?;
            vec![q.r_m.into(), q.n_add.into()]
        }
        Output::Floquet => {
            let f = floquet_response(model, omega)?;
            vec![f.r_m_brwa.into(), f.n_add_brwa.into()]
        }
        Output::Snr => vec![snr(model, omega, nbar, spec.force, route)?.into()],
        Output::Sensitivity => vec![sensitivity(model, omega, nbar, route)?.into()],
        Output::NoiseSpectrum => vec![noise_force_spectrum(model, omega, nbar, route)?.s_nn.into()],
        Output::Stability => {
            let rh = routh_hurwitz(model);
            vec![rh.c1.into(), rh.c2.into(), rh.c3.into(), rh.c4.into(), rh.stable.into()]
        }
        Output::Flags => {
            let (r, n) = response()?;
            vec![(r > 1.0).into(), (n < SQL_ADDED_NOISE).into()]
        }
        Output::Fwhm => vec![fwhm(model, route)?.into()],
    })
}

fn sweep_row(base: &OperatingPoint, spec: &SweepSpec, x: f64) -> Vec<Value> {
    let width: usize = spec.outputs.iter().map(|o| o.columns().len()).sum();
    let mut row = vec![Value::Float(x)];
    let (op, omega_over_kappa) = match spec.axis {
        SweepAxis::OmegaOverKappa => (*base, x),
        SweepAxis::Parameter(p) => (p.with(base, x), spec.omega_over_kappa),
    };
    let model = match op.model() {
        Ok(m) => m,
        Err(e) => {
            row.extend(std::iter::repeat_n(Value::Missing, width));
            row.push(Value::Text(e.tag().into()));
            return row;
        }
    };
    let omega = omega_over_kappa * model.kappa();
    let stable = routh_hurwitz(&model).stable;
    let mut first_error: Option<&'static str> = None;
    for &output in &spec.outputs {
        let n = output.columns().len();
        if output.needs_stability() && !stable {
            first_error.get_or_insert(Error::Unstable.tag());
            row.extend(std::iter::repeat_n(Value::Missing, n));
            continue;
        }
        match evaluate(output, &model, omega, spec) {
            Ok(values) => row.extend(values),
            Err(e) => {
                first_error.get_or_insert(e.tag());
                row.extend(std::iter::repeat_n(Value::Missing, n));
            }
        }
    }
    row.push(first_error.map_or(Value::Missing, |t| Value::Text(t.into())));
    row
}

/// One row per grid value, with the selected output groups side by side.
pub fn sweep(base: &OperatingPoint, spec: &SweepSpec) -> Result<Table> {
    spec.grid.validate()?;
    let mut columns = vec![spec.axis.name().to_string()];
    for o in &spec.outputs {
        columns.extend(o.columns().iter().map(|c| c.to_string()));
    }
    columns.push("error".into());
    let mut table = Table::new(columns);
    table.echo_params(base);
    table.meta("axis", spec.axis.name());
    if spec.outputs.is_empty() {
        return Ok(table);
    }
    let xs = spec.grid.values();
    table.rows = map_ordered(xs.len(), |i| sweep_row(base, spec, xs[i]));
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn base(k2: f64, eta: f64) -> OperatingPoint {
        OperatingPoint {
            kappa2_over_kappa: k2,
            eta,
            ..OperatingPoint::membrane_defaults()
        }
    }

    fn fig2_axes(n: usize) -> (Grid, Grid) {
        (
            Grid::new("cooperativity", 0.01, 3.0, n),
            Grid::new("zeta_over_kappa", 0.0, 0.99, n),
        )
    }

    #[test]
    fn grid_values() {
        assert_eq!(Grid::new("eta", 0.0, 1.0, 5).values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(Grid::new("eta", 0.3, 0.3, 1).values(), vec![0.3]);
        assert!(Grid::new("eta", 1.0, 0.0, 3).validate().is_err());
        assert!(Grid::new("eta", 0.0, 1.0, 0).validate().is_err());
    }

    #[test]
    fn amplification_edge_passes_through_threshold_point() {
        let b = OperatingPoint {
            cooperativity: 0.5,
            zeta_over_kappa: 0.25,
            ..base(0.5, 0.6)
        };
        let m = b.model().unwrap();
        assert_relative_eq!(on_resonance_response(&m), 1.0, max_relative = 1e-12);
        let map = region_map(
            &base(0.5, 0.6),
            &Grid::new("cooperativity", 0.5, 0.5, 1),
            &Grid::new("zeta_over_kappa", 0.24, 0.26, 3),
            Route::ClosedForm,
        )
        .unwrap();
        let flags: Vec<bool> = map.cells.iter().map(|c| c.amplifying).collect();
        assert_eq!(flags, vec![false, false, true]);
    }

    #[test]
    fn sub_sql_area_grows_with_transmission() {
        let (a1, a2) = fig2_axes(40);
        let count = |k2| {
            region_map(&base(k2, 0.6), &a1, &a2, Route::ClosedForm)
                .unwrap()
                .count(|c| c.sub_sql)
        };
        assert!(count(0.9) > count(0.5));
    }

    #[test]
    fn all_unstable_above_edge() {
        let map = region_map(
            &base(0.5, 1.0),
            &Grid::new("cooperativity", 0.01, 0.2, 4),
            &Grid::new("zeta_over_kappa", 0.7, 0.99, 4),
            Route::ClosedForm,
        )
        .unwrap();
        assert!(map.cells.iter().all(|c| c.unstable && c.r_m0.is_none()));
    }

    #[test]
    fn flags_are_consistent_with_values() {
        let (a1, a2) = fig2_axes(25);
        let map = region_map(&base(0.75, 0.6), &a1, &a2, Route::ClosedForm).unwrap();
        assert_eq!(map.cells.len(), 625);
        for c in &map.cells {
            assert_eq!(c.amplifying, c.r_m0.is_some_and(|r| r > 1.0));
            assert_eq!(c.sub_sql, c.n_add0.is_some_and(|n| n < 0.5));
            assert!(!(c.amplifying && c.unstable));
        }
        assert_eq!(map.cell(3, 7).x, a1.values()[3]);
        assert_eq!(map.cell(3, 7).y, a2.values()[7]);
    }

    #[test]
    fn exact_route_matches_closed_form_at_unit_efficiency() {
        let (a1, a2) = fig2_axes(12);
        let a = region_map(&base(0.8, 1.0), &a1, &a2, Route::ClosedForm).unwrap();
        let b = region_map(&base(0.8, 1.0), &a1, &a2, Route::Exact).unwrap();
        for (x, y) in a.cells.iter().zip(&b.cells) {
            assert_eq!(x.unstable, y.unstable);
            if let (Some(r1), Some(r2)) = (x.r_m0, y.r_m0) {
                assert_relative_eq!(r1, r2, max_relative = 1e-8);
                assert_relative_eq!(x.n_add0.unwrap(), y.n_add0.unwrap(), max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn unreachable_cells_are_recorded() {
        let map = region_map(
            &base(1.0, 0.6),
            &Grid::new("cooperativity", 1.0, 1.0, 1),
            &Grid::new("zeta_over_kappa", 0.0, 0.3, 2),
            Route::ClosedForm,
        )
        .unwrap();
        assert_eq!(map.cells[0].error, None);
        assert_eq!(map.cells[1].error, Some("unreachable_feedback"));
    }

    fn spec(axis: SweepAxis, grid: Grid, outputs: Vec<Output>) -> SweepSpec {
        SweepSpec {
            axis,
            grid,
            outputs,
            route: Route::ClosedForm,
            force: 1e-18,
            omega_over_kappa: 0.0,
        }
    }

    #[test]
    fn cooperativity_sweep_peaks_at_unity() {
        let s = spec(
            SweepAxis::Parameter(ParameterId::Cooperativity),
            Grid::new("cooperativity", 0.0, 4.0, 41),
            vec![Output::Response],
        );
        let t = sweep(&base(0.8, 1.0), &s).unwrap();
        let col = t.column("r_m").unwrap();
        let (best, value) = t
            .rows
            .iter()
            .map(|r| match (&r[0], &r[col]) {
                (Value::Float(x), Value::Float(y)) => (*x, *y),
                _ => panic!(),
            })
            .fold((0.0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
        assert_relative_eq!(best, 1.0, max_relative = 1e-12);
        assert_relative_eq!(value, 0.8, max_relative = 1e-12);
    }

    #[test]
    fn frequency_sweep_half_width_grows_with_feedback() {
        let width = |z: f64| {
            let b = OperatingPoint {
                cooperativity: 1.0,
                zeta_over_kappa: z,
                ..base(0.95, 0.6)
            };
            let g = b.gamma_over_omega_m / b.kappa_over_omega_m;
            let s = spec(
                SweepAxis::OmegaOverKappa,
                Grid::new("omega_over_kappa", 0.0, 200.0 * g, 2001),
                vec![Output::Response],
            );
            let t = sweep(&b, &s).unwrap();
            let col = t.column("r_m").unwrap();
            let r: Vec<f64> = t
                .rows
                .iter()
                .map(|row| match row[col] {
                    Value::Float(v) => v,
                    _ => panic!(),
                })
                .collect();
            r.iter().position(|&v| v < 0.5 * r[0]).unwrap()
        };
        assert!(width(0.49) > width(0.0));
    }

    #[test]
    fn empty_selection_is_metadata_only() {
        let s = spec(SweepAxis::OmegaOverKappa, Grid::new("omega_over_kappa", 0.0, 1.0, 5), vec![]);
        let t = sweep(&base(0.5, 0.6), &s).unwrap();
        assert!(t.rows.is_empty());
        assert!(!t.metadata.is_empty());
        assert_eq!(t.columns, vec!["omega_over_kappa", "error"]);
    }

    #[test]
    fn unstable_rows_are_masked_but_keep_stability_columns() {
        let s = spec(
            SweepAxis::Parameter(ParameterId::ZetaOverKappa),
            Grid::new("zeta_over_kappa", 0.4, 0.8, 3),
            vec![Output::Response, Output::Stability],
        );
        let b = OperatingPoint {
            cooperativity: 1.0,
            ..base(0.5, 1.0)
        };
        let t = sweep(&b, &s).unwrap();
        let last = &t.rows[2];
        assert_eq!(last[t.column("r_m").unwrap()], Value::Missing);
        assert_eq!(last[t.column("stable").unwrap()], Value::Bool(false));
        assert_eq!(last[t.column("error").unwrap()], Value::Text("unstable".into()));
        assert_eq!(t.rows[0][t.column("error").unwrap()], Value::Missing);
    }

    #[test]
    fn all_output_groups_evaluate() {
        let s = SweepSpec {
            outputs: Output::ALL.to_vec(),
            ..spec(
                SweepAxis::OmegaOverKappa,
                Grid::new("omega_over_kappa", 0.0, 0.5, 3),
                vec![],
            )
        };
        let b = OperatingPoint {
            cooperativity: 1.0,
            zeta_over_kappa: 0.3,
            ..base(0.95, 1.0)
        };
        let t = sweep(&b, &s).unwrap();
        for row in &t.rows {
            assert_eq!(row.len(), t.columns.len());
            assert_eq!(*row.last().unwrap(), Value::Missing, "{row:?}");
        }
    }
}
