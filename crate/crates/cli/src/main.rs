use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use overlay_outage::sweep::{run_sweep, SweepSpec};
use overlay_outage::QuadratureSpec;
use overlay_outage_cli::output::{do_cg_report, validate, validation_report, write_sweep, Z_LIMIT};
use overlay_outage_cli::settings::{parse_config, parse_pair, resolve, sweep_settings, Layer, Request};
use overlay_outage_cli::{preset_listing, CliError};

#[derive(Parser)]
#[command(
    name = "overlay-outage",
    version,
    about = "Outage analysis for an energy-harvesting overlay relay network"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep SNR, alpha or rho and write CSV.
    Sweep(SweepArgs),
    /// Compare Monte-Carlo against the exact outage (exit 2 if z > 4).
    Validate(ValidateArgs),
    /// Report diversity order and coding gain for both systems.
    DoCg(ParamArgs),
    /// Built-in figure presets.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    /// List presets and the parameters of each curve.
    List,
}

#[derive(Args)]
struct ParamArgs {
    /// Start from a built-in preset (fig3..fig8).
    #[arg(long)]
    preset: Option<String>,
    /// Restrict the preset to one curve label.
    #[arg(long)]
    curve: Option<String>,
    /// Flat key=value file; flags override it, it overrides the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parameter override, e.g. -p alpha=0.9 -p m4=1.5.
    #[arg(short = 'p', long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// snr_db, alpha or rho.
    #[arg(long)]
    axis: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    stop: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    /// Monte-Carlo trials per point.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated subset of mc,exact,approx,asym.
    #[arg(long)]
    outputs: Option<String>,
    /// Output file; with several curves, one file per curve is written as
    /// `<stem>_<curve>.csv`. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    workers: Option<usize>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn layers(args: &ParamArgs) -> Result<(Layer, Layer), CliError> {
    let config = match &args.config {
        Some(path) => parse_config(&fs::read_to_string(path)?)?,
        None => Layer::default(),
    };
    let flags = Layer(args.params.iter().map(|s| parse_pair(s)).collect::<Result<_, _>>()?);
    Ok((config, flags))
}

fn curve_path(out: &Path, label: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep");
    let ext = out.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    out.with_file_name(format!("{stem}_{label}.{ext}"))
}

fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let (config, mut flags) = layers(&args.params)?;
    let explicit = [
        ("axis", args.axis.clone()),
        ("start", args.start.map(|v| v.to_string())),
        ("stop", args.stop.map(|v| v.to_string())),
        ("step", args.step.map(|v| v.to_string())),
        ("trials", args.trials.map(|v| v.to_string())),
        ("seed", args.seed.map(|v| v.to_string())),
        ("outputs", args.outputs.clone()),
    ];
    for (k, v) in explicit {
        if let Some(v) = v {
            flags.0.push((k.to_string(), v));
        }
    }
    let req = Request {
        preset: args.params.preset.as_deref(),
        curve: args.params.curve.as_deref(),
        config,
        flags,
    };
    let resolved = resolve(&req)?;
    let s = sweep_settings(resolved.preset.as_ref(), &req.config, &req.flags)?;
    let preset_name = resolved.preset.as_ref().map(|p| p.name);
    let several = resolved.curves.len() > 1;
    let mut failed_points = 0;
    let stdout = io::stdout();
    for (i, (label, params)) in resolved.curves.iter().enumerate() {
        let spec = SweepSpec {
            axis: s.axis,
            start: s.start,
            stop: s.stop,
            step: s.step,
            fixed: *params,
            outputs: s.outputs,
            mc_trials: s.trials,
            seed: s.seed,
            workers: args.workers.unwrap_or_else(default_workers),
            quadrature: QuadratureSpec::relative(1e-8),
        };
        let rows = run_sweep(&spec)?;
        failed_points += rows.iter().filter(|r| r.error.is_some()).count();
        match &args.out {
            Some(out) => {
                let path = if several { curve_path(out, label) } else { out.clone() };
                let mut f = io::BufWriter::new(fs::File::create(&path)?);
                write_sweep(&mut f, &spec, preset_name, label, &rows)?;
                f.flush()?;
                eprintln!("wrote {}", path.display());
            }
            None => {
                let mut w = stdout.lock();
                if i > 0 {
                    writeln!(w)?;
                }
                write_sweep(&mut w, &spec, preset_name, label, &rows)?;
            }
        }
    }
    if failed_points > 0 {
        return Err(CliError::Numeric(format!(
            "{failed_points} point(s) failed; see the error column"
        )));
    }
    Ok(())
}

fn run_validate(args: ValidateArgs) -> Result<(), CliError> {
    let (config, flags) = layers(&args.params)?;
    let resolved = resolve(&Request {
        preset: args.params.preset.as_deref(),
        curve: args.params.curve.as_deref(),
        config,
        flags,
    })?;
    let workers = args.workers.unwrap_or_else(default_workers);
    let mut all_pass = true;
    for (label, p) in &resolved.curves {
        let v = validate(p, args.trials, args.seed, workers, &QuadratureSpec::relative(1e-9))?;
        print!("{}", validation_report(label, p, &v));
        all_pass &= v.iter().all(|r| r.pass);
    }
    if all_pass {
        Ok(())
    } else {
        Err(CliError::ValidationFailed { limit: Z_LIMIT })
    }
}

fn run_do_cg(args: ParamArgs) -> Result<(), CliError> {
    let (config, flags) = layers(&args)?;
    let resolved = resolve(&Request {
        preset: args.preset.as_deref(),
        curve: args.curve.as_deref(),
        config,
        flags,
    })?;
    for (label, p) in &resolved.curves {
        print!("{}", do_cg_report(label, p)?);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // 2 is reserved for validation failures.
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Validate(a) => run_validate(a),
        Command::DoCg(a) => run_do_cg(a),
        Command::Preset {
            action: PresetAction::List,
        } => {
            print!("{}", preset_listing());
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
