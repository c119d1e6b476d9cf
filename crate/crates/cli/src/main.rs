use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use loopsense_cli::{emit_table, parse_config_with_command, run, Command, Format, RunError};

/// Spectra, stability and region maps of an optomechanical force sensor
/// with in-loop feedback.
///
/// The half-maximum bandwidth search stops at 10 kappa.
#[derive(Debug, Parser)]
#[command(name = "loopsense", version)]
struct Args {
    /// derive, spectrum, region, fwhm, sensitivity, floquet, stability or
    /// sweep. Overrides `command` in the config file.
    command: Option<String>,

    /// TOML run configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,

    /// csv or json.
    #[arg(long, value_name = "FORMAT")]
    format: Option<String>,

    /// Use the numeric scattering route instead of the closed forms.
    #[arg(long)]
    exact: bool,

    /// Add counter-rotating (Floquet) columns.
    #[arg(long)]
    floquet: bool,

    /// Suppress the summary line on stderr.
    #[arg(long)]
    quiet: bool,
}

fn configure_threads() -> Result<(), RunError> {
    let Ok(raw) = std::env::var("SENSOR_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| RunError::Config(format!("SENSOR_THREADS must be a positive integer (got `{raw}`)")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| RunError::Config(format!("thread pool: {e}")))
}

fn execute(args: &Args) -> Result<String, RunError> {
    configure_threads()?;
    let text = fs::read_to_string(&args.config)?;
    let command = args
        .command
        .as_deref()
        .map(str::parse::<Command>)
        .transpose()
        .map_err(|e| RunError::Config(e.to_string()))?;
    let mut cfg = parse_config_with_command(&text, command).map_err(|e| RunError::Config(e.to_string()))?;
    if let Some(f) = &args.format {
        cfg.format = f.parse::<Format>().map_err(|e| RunError::Config(e.to_string()))?;
    }
    cfg.exact |= args.exact;
    cfg.floquet |= args.floquet;

    let table = run(&cfg)?;
    let mut buf = Vec::new();
    emit_table(&table, cfg.format, &mut buf)?;

    let target = args.output.clone().or_else(|| cfg.output_path.clone().map(PathBuf::from));
    match &target {
        Some(path) => fs::write(path, &buf)?,
        None => io::stdout().lock().write_all(&buf)?,
    }
    Ok(format!(
        "{}: {} rows -> {}",
        cfg.command.name(),
        table.rows.len(),
        target.map_or("stdout".into(), |p| p.display().to_string())
    ))
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(summary) => {
            if !args.quiet {
                eprintln!("{summary}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
