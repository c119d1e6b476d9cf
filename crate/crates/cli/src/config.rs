//! Run configuration: a TOML document with a `command` key and the sections
//! `[params]`, `[grid]`, `[axis1]`, `[axis2]`, `[output]` and `[flags]`.
//!
//! Frequencies are dimensionless ratios except the anchor `omega_m_hz`.
//! Parameters left out take the membrane-device defaults, except coupling
//! (`cooperativity` or `lambda_over_kappa`) and feedback (`zeta_over_kappa`
//! or `g`), which must be given explicitly.

use std::fmt;
use std::str::FromStr;

use loopsense::params::OperatingPoint;
use loopsense::scan::{Grid, Output};
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Parse(String),
    ConflictingKeys(&'static str, &'static str),
    MissingKey(String),
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse(msg) => write!(f, "parse error: {msg}"),
            ConfigError::ConflictingKeys(a, b) => {
                write!(f, "conflicting keys: give either `{a}` or `{b}`, not both")
            }
            ConfigError::MissingKey(k) => write!(f, "missing key: {k}"),
            ConfigError::Invalid(msg) => write!(f, "invalid config: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Derive,
    Spectrum,
    Region,
    Fwhm,
    Sensitivity,
    Floquet,
    Stability,
    Sweep,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Derive,
        Command::Spectrum,
        Command::Region,
        Command::Fwhm,
        Command::Sensitivity,
        Command::Floquet,
        Command::Stability,
        Command::Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Derive => "derive",
            Command::Spectrum => "spectrum",
            Command::Region => "region",
            Command::Fwhm => "fwhm",
            Command::Sensitivity => "sensitivity",
            Command::Floquet => "floquet",
            Command::Stability => "stability",
            Command::Sweep => "sweep",
        }
    }
}

impl FromStr for Command {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ConfigError::Invalid(format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(ConfigError::Invalid(format!("unknown format `{s}` (csv or json)"))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    command: Option<String>,
    #[serde(default)]
    params: RawParams,
    grid: Option<RawGrid>,
    axis1: Option<RawGrid>,
    axis2: Option<RawGrid>,
    #[serde(default)]
    output: RawOutput,
    #[serde(default)]
    flags: RawFlags,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    omega_m_hz: Option<f64>,
    kappa_over_omega_m: Option<f64>,
    gamma_over_omega_m: Option<f64>,
    kappa2_over_kappa: Option<f64>,
    cooperativity: Option<f64>,
    lambda_over_kappa: Option<f64>,
    zeta_over_kappa: Option<f64>,
    g: Option<f64>,
    phi: Option<f64>,
    eta: Option<f64>,
    mass_kg: Option<f64>,
    temperature_k: Option<f64>,
    force_n: Option<f64>,
    omega_over_kappa: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    parameter: String,
    lo: f64,
    hi: f64,
    n: usize,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<String>,
    format: Option<String>,
    outputs: Option<Vec<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFlags {
    #[serde(default)]
    exact: bool,
    #[serde(default)]
    floquet: bool,
}

/// Validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub point: OperatingPoint,
    /// Flat force amplitude for SNR columns, N/sqrt(Hz).
    pub force: f64,
    /// Detection frequency for single-frequency commands, in units of kappa.
    pub omega_over_kappa: f64,
    pub grid: Option<Grid>,
    pub axes: Option<(Grid, Grid)>,
    pub outputs: Option<Vec<Output>>,
    pub output_path: Option<String>,
    pub format: Format,
    pub exact: bool,
    pub floquet: bool,
}

/// Default flat force amplitude, N/sqrt(Hz).
pub const DEFAULT_FORCE: f64 = 1e-18;

fn exclusive(a: Option<f64>, b: Option<f64>, na: &'static str, nb: &'static str) -> Result<Option<(bool, f64)>, ConfigError> {
    match (a, b) {
        (Some(_), Some(_)) => Err(ConfigError::ConflictingKeys(na, nb)),
        (Some(x), None) => Ok(Some((true, x))),
        (None, Some(y)) => Ok(Some((false, y))),
        (None, None) => Ok(None),
    }
}

fn grid_spec(raw: RawGrid) -> Grid {
    Grid::new(raw.parameter, raw.lo, raw.hi, raw.n)
}

fn operating_point(p: &RawParams) -> Result<OperatingPoint, ConfigError> {
    let d = OperatingPoint::membrane_defaults();
    let mut op = OperatingPoint {
        omega_m: p.omega_m_hz.map_or(d.omega_m, |hz| 2.0 * std::f64::consts::PI * hz),
        kappa_over_omega_m: p.kappa_over_omega_m.unwrap_or(d.kappa_over_omega_m),
        gamma_over_omega_m: p.gamma_over_omega_m.unwrap_or(d.gamma_over_omega_m),
        kappa2_over_kappa: p.kappa2_over_kappa.unwrap_or(d.kappa2_over_kappa),
        phi: p.phi.unwrap_or(d.phi),
        eta: p.eta.unwrap_or(d.eta),
        mass: p.mass_kg.unwrap_or(d.mass),
        temperature: p.temperature_k.unwrap_or(d.temperature),
        ..d
    };

    let coupling = exclusive(p.cooperativity, p.lambda_over_kappa, "cooperativity", "lambda_over_kappa")?
        .ok_or_else(|| ConfigError::MissingKey("params.cooperativity or params.lambda_over_kappa".into()))?;
    op.cooperativity = match coupling {
        (true, c) => c,
        // C = Lambda^2 / (kappa gamma) = (Lambda/kappa)^2 kappa/gamma
        (false, l) => l * l * op.kappa_over_omega_m / op.gamma_over_omega_m,
    };

    let feedback = exclusive(p.zeta_over_kappa, p.g, "zeta_over_kappa", "g")?
        .ok_or_else(|| ConfigError::MissingKey("params.zeta_over_kappa or params.g".into()))?;
    op.zeta_over_kappa = match feedback {
        (true, z) => z,
        (false, g) => {
            let kappa2 = op.kappa2_over_kappa;
            let kappa1 = 1.0 - kappa2;
            let scale = (2.0 * op.eta * kappa1 * kappa2).sqrt();
            if g != 0.0 && scale == 0.0 {
                return Err(ConfigError::Invalid(
                    "a nonzero `g` needs eta > 0 and kappa2_over_kappa < 1".into(),
                ));
            }
            g * scale
        }
    };
    Ok(op)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_with_command(text, None)
}

/// As [`parse_config`], with `command` taken from the caller when given.
pub fn parse_config_with_command(text: &str, command: Option<Command>) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let command = match (command, raw.command.as_deref()) {
        (Some(c), _) => c,
        (None, Some(name)) => name.parse()?,
        (None, None) => return Err(ConfigError::MissingKey("command".into())),
    };
    let point = operating_point(&raw.params)?;

    let grid = raw.grid.map(grid_spec);
    let axes = match (raw.axis1, raw.axis2) {
        (Some(a), Some(b)) => Some((grid_spec(a), grid_spec(b))),
        (None, None) => None,
        (Some(_), None) => return Err(ConfigError::MissingKey("axis2".into())),
        (None, Some(_)) => return Err(ConfigError::MissingKey("axis1".into())),
    };
    match command {
        Command::Region => {
            if axes.is_none() {
                return Err(ConfigError::MissingKey("axis1 and axis2".into()));
            }
            if grid.is_some() {
                return Err(ConfigError::Invalid("`region` takes [axis1]/[axis2], not [grid]".into()));
            }
        }
        Command::Spectrum | Command::Sweep => {
            if grid.is_none() {
                return Err(ConfigError::MissingKey("grid".into()));
            }
        }
        Command::Derive => {
            if grid.is_some() || axes.is_some() {
                return Err(ConfigError::Invalid("`derive` takes no grid".into()));
            }
        }
        Command::Fwhm | Command::Sensitivity | Command::Floquet | Command::Stability => {}
    }
    if command != Command::Region && axes.is_some() {
        return Err(ConfigError::Invalid(format!(
            "[axis1]/[axis2] only apply to `region`, not `{}`",
            command.name()
        )));
    }
    if command == Command::Spectrum {
        if let Some(g) = &grid {
            if g.name != "omega_over_kappa" {
                return Err(ConfigError::Invalid("`spectrum` grids run over omega_over_kappa".into()));
            }
        }
    }

    let outputs = raw
        .output
        .outputs
        .map(|names| {
            names
                .iter()
                .map(|n| {
                    Output::from_name(n).ok_or_else(|| ConfigError::Invalid(format!("unknown output group `{n}`")))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    if outputs.is_some() && command != Command::Sweep {
        return Err(ConfigError::Invalid("output.outputs only applies to `sweep`".into()));
    }

    Ok(RunConfig {
        command,
        point,
        force: raw.params.force_n.unwrap_or(DEFAULT_FORCE),
        omega_over_kappa: raw.params.omega_over_kappa.unwrap_or(0.0),
        grid,
        axes,
        outputs,
        output_path: raw.output.path,
        format: raw.output.format.as_deref().map(str::parse).transpose()?.unwrap_or_default(),
        exact: raw.flags.exact,
        floquet: raw.flags.floquet,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
command = "derive"
[params]
cooperativity = 1.0
zeta_over_kappa = 0.0
"#;

    #[test]
    fn minimal_config_takes_device_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.command, Command::Derive);
        assert_eq!(c.point.kappa_over_omega_m, 0.06);
        assert_eq!(c.point.gamma_over_omega_m, 3.4e-6);
        assert_eq!(c.point.omega_m, 2.0 * std::f64::consts::PI * 343.13e3);
        assert_eq!(c.format, Format::Csv);
    }

    #[test]
    fn conflicting_and_missing_keys() {
        let both = MINIMAL.replace("zeta_over_kappa = 0.0", "zeta_over_kappa = 0.0\ng = 0.1");
        assert_eq!(
            parse_config(&both),
            Err(ConfigError::ConflictingKeys("zeta_over_kappa", "g"))
        );
        let both = MINIMAL.replace("cooperativity = 1.0", "cooperativity = 1.0\nlambda_over_kappa = 0.1");
        assert!(matches!(parse_config(&both), Err(ConfigError::ConflictingKeys(..))));
        let none = MINIMAL.replace("cooperativity = 1.0", "");
        assert!(matches!(parse_config(&none), Err(ConfigError::MissingKey(_))));
        assert!(matches!(parse_config("[params]\ng = 0.0"), Err(ConfigError::MissingKey(_))));
    }

    #[test]
    fn unknown_keys_are_rejected_with_location() {
        let bad = MINIMAL.replace("[params]", "[params]\nkapa = 1.0");
        match parse_config(&bad) {
            Err(ConfigError::Parse(msg)) => {
                assert!(msg.contains("kapa"), "{msg}");
                assert!(msg.contains("line"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cooperativity_sweep_spec() {
        let text = r#"
command = "sweep"
[params]
cooperativity = 0.0
zeta_over_kappa = 0.49
kappa2_over_kappa = 0.95
eta = 0.6
[grid]
parameter = "cooperativity"
lo = 0.0
hi = 4.0
n = 81
"#;
        let c = parse_config(text).unwrap();
        assert_eq!(c.point.zeta_over_kappa, 0.49);
        assert_eq!(c.point.kappa2_over_kappa, 0.95);
        assert_eq!(c.point.eta, 0.6);
        assert_eq!(c.grid, Some(Grid::new("cooperativity", 0.0, 4.0, 81)));
    }

    #[test]
    fn gain_and_coupling_conversions() {
        let text = r#"
command = "derive"
[params]
lambda_over_kappa = 0.1
g = 1.0
eta = 1.0
kappa2_over_kappa = 0.5
"#;
        let c = parse_config(text).unwrap();
        let m = c.point.model().unwrap();
        assert!((m.system.feedback_gain_g - 1.0).abs() < 1e-12);
        assert!((m.system.coupling_lambda / m.kappa() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn grids_only_where_needed() {
        let with_grid = format!("{MINIMAL}[grid]\nparameter = \"eta\"\nlo = 0.1\nhi = 1.0\nn = 3\n");
        assert!(matches!(parse_config(&with_grid), Err(ConfigError::Invalid(_))));
        let region = MINIMAL.replace("derive", "region");
        assert!(matches!(parse_config(&region), Err(ConfigError::MissingKey(_))));
        let spectrum = MINIMAL.replace("derive", "spectrum");
        assert!(matches!(parse_config(&spectrum), Err(ConfigError::MissingKey(_))));
    }
}
