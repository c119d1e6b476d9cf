use loopsense::params::{derive_params, SystemParams};
use loopsense::scan::{fmt_float, region_map, sweep, Grid, Output, SweepAxis, SweepSpec, Table, Value};
use loopsense::{category_of_tag, Error, ErrorCategory, Route};

use crate::config::{Command, RunConfig};

/// Why a run did not produce a clean table.
#[derive(Debug)]
pub enum RunError {
    Config(String),
    Numerical(String),
    Io(std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical(_) => 3,
            RunError::Io(_) => 4,
        }
    }

    pub fn category(&self) -> &'static str {
        match self {
            RunError::Config(_) => "config",
            RunError::Numerical(_) => "numerical",
            RunError::Io(_) => "io",
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(m) | RunError::Numerical(m) => f.write_str(m),
            RunError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e.category() {
            ErrorCategory::Parameter => RunError::Config(e.to_string()),
            ErrorCategory::Numerical => RunError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

fn route(cfg: &RunConfig) -> Route {
    if cfg.exact {
        Route::Exact
    } else {
        Route::ClosedForm
    }
}

fn route_name(r: Route) -> &'static str {
    match r {
        Route::ClosedForm => "closed_form",
        Route::Exact => "exact",
    }
}

fn default_outputs(cfg: &RunConfig) -> Vec<Output> {
    let mut out = match cfg.command {
        Command::Spectrum => vec![
            Output::Response,
            Output::General,
            Output::Snr,
            Output::Sensitivity,
            Output::NoiseSpectrum,
            Output::Flags,
        ],
        Command::Fwhm => vec![Output::Response, Output::Fwhm],
        Command::Sensitivity => vec![Output::Response, Output::Snr, Output::Sensitivity],
        Command::Floquet => vec![Output::Response, Output::Floquet],
        Command::Stability => vec![Output::Stability],
        Command::Sweep => cfg.outputs.clone().unwrap_or_else(|| {
            vec![
                Output::Response,
                Output::General,
                Output::Snr,
                Output::Sensitivity,
                Output::Stability,
                Output::Flags,
            ]
        }),
        Command::Derive | Command::Region => Vec::new(),
    };
    if cfg.floquet && !out.contains(&Output::Floquet) && cfg.command != Command::Derive {
        out.push(Output::Floquet);
    }
    out
}

fn derive_table(cfg: &RunConfig) -> Result<Table, RunError> {
    let sp: SystemParams = cfg.point.system_params()?;
    let d = derive_params(&sp)?;
    let entries: Vec<(&str, Value)> = vec![
        ("omega_m", sp.omega_m.into()),
        ("gamma", sp.gamma.into()),
        ("kappa1", sp.kappa1.into()),
        ("kappa2", sp.kappa2.into()),
        ("kappa", d.kappa.into()),
        ("lambda", sp.coupling_lambda.into()),
        ("g", sp.feedback_gain_g.into()),
        ("zeta", d.zeta.into()),
        ("kappa_fb", d.kappa_fb.into()),
        ("n_fb", d.n_fb.into()),
        ("m_fb_re", d.m_fb.re.into()),
        ("m_fb_im", d.m_fb.im.into()),
        ("p_fb_re", d.p_fb.re.into()),
        ("p_fb_im", d.p_fb.im.into()),
        ("cooperativity", d.cooperativity.into()),
        ("nbar", d.nbar.into()),
        ("x_zpf", d.x_zpf.into()),
        ("resolved_sideband", d.resolved_sideband.into()),
    ];
    let mut t = Table::new(entries.iter().map(|(k, _)| k.to_string()).collect());
    t.rows.push(entries.into_iter().map(|(_, v)| v).collect());
    Ok(t)
}

fn sweep_table(cfg: &RunConfig) -> Result<Table, RunError> {
    let grid = cfg.grid.clone().unwrap_or_else(|| {
        Grid::new("omega_over_kappa", cfg.omega_over_kappa, cfg.omega_over_kappa, 1)
    });
    let axis = SweepAxis::from_name(&grid.name)
        .ok_or_else(|| RunError::Config(format!("unknown grid parameter `{}`", grid.name)))?;
    let spec = SweepSpec {
        axis,
        grid,
        outputs: default_outputs(cfg),
        route: route(cfg),
        force: cfg.force,
        omega_over_kappa: cfg.omega_over_kappa,
    };
    let mut t = sweep(&cfg.point, &spec)?;
    t.meta("force_n_per_sqrt_hz", fmt_float(cfg.force));
    if !matches!(axis, SweepAxis::OmegaOverKappa) {
        t.meta("omega_over_kappa", fmt_float(cfg.omega_over_kappa));
    }
    Ok(t)
}

/// Builds the output table for a validated configuration.
///
/// Grid commands record per-row failures in an `error` column. Commands
/// evaluated at a single point turn a failed row into an error.
pub fn run(cfg: &RunConfig) -> Result<Table, RunError> {
    cfg.point.model()?;
    let mut table = match cfg.command {
        Command::Derive => {
            let mut t = derive_table(cfg)?;
            t.echo_params(&cfg.point);
            t
        }
        Command::Region => {
            let (a1, a2) = cfg.axes.as_ref().expect("validated config has axes");
            let map = region_map(&cfg.point, a1, a2, route(cfg))?;
            let mut t = map.to_table();
            let mut meta = Table::new(Vec::new());
            meta.echo_params(&cfg.point);
            t.metadata = meta.metadata;
            t
        }
        _ => {
            let t = sweep_table(cfg)?;
            if cfg.grid.is_none() {
                single_row_check(&t)?;
            }
            t
        }
    };
    let mut head = Table::new(Vec::new());
    head.meta("command", cfg.command.name())
        .meta("route", route_name(route(cfg)));
    head.metadata.append(&mut table.metadata);
    table.metadata = head.metadata;
    Ok(table)
}

fn single_row_check(t: &Table) -> Result<(), RunError> {
    let col = t.column("error").expect("sweep tables end in an error column");
    for row in &t.rows {
        if let Value::Text(tag) = &row[col] {
            let msg = format!("evaluation failed: {tag}");
            return Err(match category_of_tag(tag) {
                Some(ErrorCategory::Parameter) => RunError::Config(msg),
                _ => RunError::Numerical(msg),
            });
        }
    }
    Ok(())
}
