use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::Deserialize;

use floquet_core::analysis::{sweep_csv, Experiment};
use floquet_core::calibration::{calibration_noise_model, load_calibration, mean_error};
use floquet_core::{build_layout, build_patch, CodeKind, Layout, NoiseModel};

/// Seed used when `--seed` is not given.
const DEFAULT_SEED: u64 = 20220901;
const DEFAULT_SHOTS: usize = 10_000;

#[derive(Parser)]
#[command(name = "floquet", version, about = "Floquet code syndrome-change simulations on heavy-hex layouts")]
struct Cli {
    /// Worker threads for shot simulation. Results do not depend on it.
    #[arg(long, global = true, env = "FLOQUET_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one configuration and report detection rates.
    Run(RunArgs),
    /// Aggregate detection rates over a list of noise strengths.
    Sweep(SweepArgs),
    /// Print the detectors of a schedule.
    Detectors(DetectorArgs),
    /// Print or export a layout.
    Layout(LayoutArgs),
    /// Device calibration snapshots.
    Calib {
        #[command(subcommand)]
        command: CalibCommand,
    },
}

#[derive(Args, Clone)]
struct ScheduleArgs {
    /// honeycomb or color.
    #[arg(long, default_value = "honeycomb")]
    code: CodeKind,
    /// Device name (falcon27, hummingbird65, eagle127) or patch dimensions
    /// such as `patch2x3`.
    #[arg(long, default_value = "falcon27")]
    layout: String,
    /// Number of rounds; defaults to the code's minimal schedule.
    #[arg(long)]
    rounds: Option<usize>,
    /// Do not reset auxiliary qubits between measurements.
    #[arg(long)]
    no_reset: bool,
}

#[derive(Args)]
struct NoiseArgs {
    /// Uniform error probability for every noise category.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    p_prep: Option<f64>,
    #[arg(long)]
    p_meas: Option<f64>,
    #[arg(long)]
    p_cx: Option<f64>,
    #[arg(long)]
    p_idle: Option<f64>,
    /// Take the noise model from a calibration snapshot.
    #[arg(long, conflicts_with = "p")]
    calib: Option<PathBuf>,
}

impl NoiseArgs {
    fn model(&self) -> Result<NoiseModel> {
        let base = match &self.calib {
            Some(path) => calibration_noise_model(&load_calibration(path)?)?,
            None => NoiseModel::uniform(self.p.unwrap_or(0.0)),
        };
        Ok(NoiseModel {
            p_prep: self.p_prep.unwrap_or(base.p_prep),
            p_meas: self.p_meas.unwrap_or(base.p_meas),
            p_cx: self.p_cx.unwrap_or(base.p_cx),
            p_idle: self.p_idle.unwrap_or(base.p_idle),
        })
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long, default_value_t = DEFAULT_SHOTS)]
    shots: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit JSON instead of CSV.
    #[arg(long)]
    json: bool,
    /// Also write the raw shot table (binary; `.csv` paths get 0/1 text).
    #[arg(long)]
    dump_shots: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Code(s) to sweep; repeat or separate with commas.
    #[arg(long, value_delimiter = ',')]
    code: Vec<CodeKind>,
    #[arg(long)]
    layout: Option<String>,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long)]
    no_reset: bool,
    /// Noise strengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// TOML file with the same keys; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct SweepConfig {
    code: Option<Vec<CodeKind>>,
    layout: Option<String>,
    rounds: Option<usize>,
    reset: Option<bool>,
    p: Option<Vec<f64>>,
    shots: Option<usize>,
    seed: Option<u64>,
}

#[derive(Args)]
struct DetectorArgs {
    #[command(flatten)]
    schedule: ScheduleArgs,
}

#[derive(Args)]
struct LayoutArgs {
    /// Device name or `patch<R>x<C>`.
    #[arg(long)]
    name: String,
    /// Write the layout document to this path.
    #[arg(long)]
    export: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CalibCommand {
    /// Print `device,<mean>%,<sigma>%`.
    Summarize { file: PathBuf },
}

fn parse_layout(name: &str) -> Result<Layout> {
    if let Some(dims) = name.strip_prefix("patch") {
        let (r, c) = dims.split_once('x').with_context(|| format!("bad patch name `{name}`"))?;
        return Ok(build_patch(r.parse()?, c.parse()?)?);
    }
    Ok(build_layout(name)?)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let s = &args.schedule;
    let mut exp = Experiment::new(s.code, parse_layout(&s.layout)?);
    exp.rounds = s.rounds.unwrap_or(s.code.default_rounds());
    exp.reset_aux = !s.no_reset;
    exp.noise = args.noise.model()?;
    exp.shots = args.shots;
    exp.seed = args.seed;
    let output = exp.run()?;

    if let Some(path) = &args.dump_shots {
        let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let w = std::io::BufWriter::new(file);
        if path.extension().is_some_and(|e| e == "csv") {
            output.shots.write_csv(w)?;
        } else {
            output.shots.write_binary(w)?;
        }
    }
    let text = if args.json { output.report.to_json()? + "\n" } else { output.report.to_csv() };
    write_output(args.out.as_deref(), &text)?;
    if args.out.is_some() {
        println!("{}", output.report.summary_line());
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let config: SweepConfig = match &args.config {
        Some(path) => {
            toml::from_str(&fs::read_to_string(path)?).with_context(|| format!("parsing {}", path.display()))?
        }
        None => SweepConfig::default(),
    };
    let codes = if args.code.is_empty() { config.code.unwrap_or(vec![CodeKind::Honeycomb]) } else { args.code };
    let p_values = if args.p.is_empty() { config.p.unwrap_or_default() } else { args.p };
    if p_values.is_empty() {
        Cli::command()
            .error(ErrorKind::MissingRequiredArgument, "no noise strengths given (use --p or a config file with `p`)")
            .exit();
    }
    let layout = parse_layout(args.layout.or(config.layout).as_deref().unwrap_or("falcon27"))?;
    let reset = !args.no_reset && config.reset.unwrap_or(true);
    let shots = args.shots.or(config.shots).unwrap_or(DEFAULT_SHOTS);
    let seed = args.seed.or(config.seed).unwrap_or(DEFAULT_SEED);
    let rounds = args.rounds.or(config.rounds);

    let mut reports = Vec::new();
    for code in codes {
        let mut exp = Experiment::new(code, layout.clone());
        exp.rounds = rounds.unwrap_or(code.default_rounds());
        exp.reset_aux = reset;
        exp.shots = shots;
        exp.seed = seed;
        for &p in &p_values {
            exp.noise = NoiseModel::uniform(p);
            reports.push(exp.run()?.report);
        }
    }
    let text = if args.json { serde_json::to_string_pretty(&reports)? + "\n" } else { sweep_csv(&reports) };
    write_output(args.out.as_deref(), &text)
}

fn cmd_detectors(args: DetectorArgs) -> Result<()> {
    let s = &args.schedule;
    let mut exp = Experiment::new(s.code, parse_layout(&s.layout)?);
    exp.rounds = s.rounds.unwrap_or(s.code.default_rounds());
    exp.reset_aux = !s.no_reset;
    let (_, detectors) = exp.detectors()?;
    for d in detectors {
        println!("{d}");
    }
    Ok(())
}

fn cmd_layout(args: LayoutArgs) -> Result<()> {
    let layout = parse_layout(&args.name)?;
    match &args.export {
        Some(path) => fs::write(path, layout.to_json()?).with_context(|| format!("writing {}", path.display())),
        None => {
            println!(
                "{}: {} active qubits, {} links, {} plaquettes, {} couplings",
                layout.name,
                layout.active_qubits().len(),
                layout.links.len(),
                layout.plaquettes.len(),
                layout.coupling.len()
            );
            Ok(())
        }
    }
}

fn cmd_calib(command: CalibCommand) -> Result<()> {
    match command {
        CalibCommand::Summarize { file } => {
            let cal = load_calibration(&file)?;
            let (p, sigma) = mean_error(&cal)?;
            println!("{},{:.2}%,{:.2}%", cal.device, 100.0 * p, 100.0 * sigma);
            Ok(())
        }
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build()?;
    pool.install(|| match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Detectors(args) => cmd_detectors(args),
        Command::Layout(args) => cmd_layout(args),
        Command::Calib { command } => cmd_calib(command),
    })
}
