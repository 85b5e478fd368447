//! `zjtangent` command-line tool.
//!
//! Exit codes: 0 on success, 1 when an asserted check fails, 2 on invalid
//! input or configuration.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use zjtangent::materials::Model;
use zjtangent::tensor::Tensor2;
use zjtangent::verify::{Scheme, DEFAULT_SEED};

use commands::{Outcome, Settings};
use config::{
    json_arg, matrix_from_spec, parse_matrix, parse_model, parse_range, path_from_arg, path_from_spec, ConfigError,
    Format, RunConfig,
};

const SCHEMA_PREFIX: &str = "zjtangent/v1";

#[derive(Parser)]
#[command(name = "zjtangent", version, about = "Zaremba-Jaumann tangent stiffness tools for hyperelastic laws")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Cmd {
    /// All tangent constructions at one deformation gradient, with residuals.
    Tangent,
    /// Abaqus-style stability sweep over the six standard paths.
    Sweep,
    /// Symmetry, Hill, TSTS and determinant checks.
    Check,
    /// Integrate the Zaremba-Jaumann rate form along a path.
    Simulate,
    /// One-dimensional monotonicity scan of a scalar law.
    Uniaxial,
    /// Component tables of the tensor products of P and Q.
    Products,
    /// Run the command named in the config file.
    Run,
}

#[derive(Args)]
struct Opts {
    /// JSON run configuration; command-line flags override its entries.
    #[arg(long, global = true)]
    config: Option<String>,
    /// hencky, hencky_incompressible, svk, inline JSON or a JSON file.
    #[arg(long, global = true)]
    model: Option<String>,
    /// Deformation gradient: `diag(a,b,c)` or 9 row-major entries.
    #[arg(long = "F", global = true, allow_hyphen_values = true)]
    f: Option<String>,
    /// Named path, inline JSON or a JSON file.
    #[arg(long, global = true)]
    path: Option<String>,
    /// `min:max[:step]` for grids, or path endpoints.
    #[arg(long, global = true)]
    range: Option<String>,
    #[arg(long, global = true)]
    step: Option<f64>,
    #[arg(long, global = true)]
    scheme: Option<Scheme>,
    #[arg(long, global = true)]
    steps: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of random pairs in the Hill check.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Scalar law for `uniaxial`: hencky, svk or log_quadratic:<k>.
    #[arg(long, global = true)]
    law: Option<String>,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long = "P", global = true, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long = "Q", global = true, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long = "Z", global = true, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long = "tol.sym", global = true)]
    tol_sym: Option<f64>,
    #[arg(long = "tol.cross", global = true)]
    tol_cross: Option<f64>,
    #[arg(long = "tol.cross_exact", global = true)]
    tol_cross_exact: Option<f64>,
    #[arg(long = "tol.bridge", global = true)]
    tol_bridge: Option<f64>,
    #[arg(long = "tol.bridge_1d", global = true)]
    tol_bridge_1d: Option<f64>,
    #[arg(long = "tol.integration", global = true)]
    tol_integration: Option<f64>,
    #[arg(long = "tol.rate", global = true)]
    tol_rate: Option<f64>,
}

fn command_from_name(name: &str) -> Result<Cmd, ConfigError> {
    Ok(match name {
        "tangent" => Cmd::Tangent,
        "sweep" => Cmd::Sweep,
        "check" => Cmd::Check,
        "simulate" => Cmd::Simulate,
        "uniaxial" => Cmd::Uniaxial,
        "products" => Cmd::Products,
        _ => return Err(ConfigError(format!("unknown command `{name}` in config"))),
    })
}

fn name_of(cmd: Cmd) -> &'static str {
    match cmd {
        Cmd::Tangent => "tangent",
        Cmd::Sweep => "sweep",
        Cmd::Check => "check",
        Cmd::Simulate => "simulate",
        Cmd::Uniaxial => "uniaxial",
        Cmd::Products => "products",
        Cmd::Run => "run",
    }
}

/// Merges the config file with the flags; flags win.
fn resolve(cli: &Cli) -> Result<(Cmd, Settings, Format, Option<String>), ConfigError> {
    let o = &cli.opts;
    let cfg: RunConfig = match &o.config {
        Some(c) => json_arg(c, "config")?,
        None => RunConfig::default(),
    };
    let cmd = match cli.command {
        Cmd::Run => match &cfg.command {
            Some(n) => command_from_name(n)?,
            None => return Err(ConfigError("`run` needs a config with a `command` entry".into())),
        },
        c => c,
    };
    let model = match (&o.model, cfg.model) {
        (Some(m), _) => parse_model(m)?,
        (None, Some(m)) => {
            m.validate()?;
            m
        }
        (None, None) => Model::hencky(1.0, 1.0),
    };
    let f = match (&o.f, &cfg.f) {
        (Some(s), _) => Some(parse_matrix(s)?),
        (None, Some(m)) => Some(matrix_from_spec(m)?),
        (None, None) => None,
    };
    let range = match &o.range {
        Some(r) => Some(parse_range(r)?),
        None => cfg.grid.map(|g| (g.min, g.max, Some(g.step))),
    };
    let endpoints = range.map(|(a, b, _)| (a, b));
    let path = match (&o.path, &cfg.path) {
        (Some(p), _) => Some(path_from_arg(p, endpoints)?),
        (None, Some(spec)) => Some(path_from_spec(spec, endpoints)?),
        (None, None) => None,
    };
    let mut tol = cfg.tolerances;
    for (slot, flag) in [
        (&mut tol.sym, o.tol_sym),
        (&mut tol.cross, o.tol_cross),
        (&mut tol.cross_exact, o.tol_cross_exact),
        (&mut tol.bridge, o.tol_bridge),
        (&mut tol.bridge_1d, o.tol_bridge_1d),
        (&mut tol.integration, o.tol_integration),
        (&mut tol.rate, o.tol_rate),
    ] {
        if let Some(v) = flag {
            *slot = v;
        }
    }
    let matrix_or = |s: &Option<String>, d: Tensor2| s.as_deref().map_or(Ok(d), parse_matrix);
    let settings = Settings {
        model,
        f,
        path,
        range,
        step: o.step,
        scheme: o.scheme.or(cfg.scheme).unwrap_or(Scheme::Rk4),
        steps: o.steps.or(cfg.steps).unwrap_or(1000),
        seed: o.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED),
        samples: o.samples.or(cfg.samples).unwrap_or(10_000),
        law: o.law.clone().or(cfg.law).unwrap_or_else(|| "hencky".into()),
        tol,
        p: matrix_or(&o.p, Tensor2::diag(1.0, 2.0, 3.0))?,
        q: matrix_or(&o.q, Tensor2::IDENTITY)?,
        z: matrix_or(&o.z, Tensor2::from_fn(|i, j| if i == 0 && j == 1 { 1.0 } else { 0.0 }))?,
    };
    let out_cfg = cfg.output.unwrap_or(config::OutputSpec { format: None, path: None });
    let default_format = if cmd == Cmd::Uniaxial { Format::Csv } else { Format::Json };
    let format = o.format.or(out_cfg.format).unwrap_or(default_format);
    let out = o.out.clone().or(out_cfg.path);
    Ok((cmd, settings, format, out))
}

fn dispatch(cmd: Cmd, s: &Settings) -> Result<Outcome, ConfigError> {
    match cmd {
        Cmd::Tangent => commands::tangent(s),
        Cmd::Sweep => commands::sweep(s),
        Cmd::Check => commands::check(s),
        Cmd::Simulate => commands::simulate(s),
        Cmd::Uniaxial => commands::uniaxial(s),
        Cmd::Products => commands::products(s),
        Cmd::Run => unreachable!("run is resolved to a concrete command"),
    }
}

fn envelope(command: &str, failures: &[String], result: Value) -> Value {
    json!({
        "schema": format!("{SCHEMA_PREFIX}/{command}"),
        "command": command,
        "passed": failures.is_empty(),
        "failures": failures,
        "result": result,
    })
}

fn emit(text: &str, out: Option<&str>) -> Result<(), ConfigError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| ConfigError(format!("cannot write `{p}`: {e}"))),
        None => {
            let mut so = std::io::stdout().lock();
            match so.write_all(text.as_bytes()).and_then(|_| so.flush()) {
                // a closed pipe (e.g. `| head`) is not an error of ours
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(ConfigError(format!("cannot write to stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn render(o: &Outcome, format: Format) -> Result<String, ConfigError> {
    match format {
        Format::Json => {
            let v = envelope(o.command, &o.failures, o.result.clone());
            let mut s = serde_json::to_string_pretty(&v).map_err(|e| ConfigError(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            o.csv.clone().ok_or_else(|| ConfigError(format!("`{}` has no CSV output; use --format json", o.command)))
        }
    }
}

fn run(cli: &Cli) -> Result<bool, (String, ConfigError)> {
    let fallback = name_of(cli.command).to_string();
    let (cmd, settings, format, out) = resolve(cli).map_err(|e| (fallback.clone(), e))?;
    let name = name_of(cmd).to_string();
    let outcome = dispatch(cmd, &settings).map_err(|e| (name.clone(), e))?;
    let text = render(&outcome, format).map_err(|e| (name.clone(), e))?;
    emit(&text, out.as_deref()).map_err(|e| (name.clone(), e))?;
    eprintln!("{}", outcome.summary);
    for f in &outcome.failures {
        eprintln!("FAIL: {f}");
    }
    Ok(outcome.failures.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err((command, e)) => {
            eprintln!("error: {e}");
            let v = envelope(&command, &[e.0.clone()], Value::Null);
            let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&v).unwrap_or_default());
            ExitCode::from(2)
        }
    }
}
