use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qshutter::output::write_records;
use qshutter::{
    compute, parse_values, sweep, CliResult, Experiment, ExperimentConfig, Format, GateChoice, OutputSpec, Params,
    ResultRecord, SweepParam, ThetaSpec,
};

#[derive(Parser)]
#[command(name = "qshutter", version, about = "Interaction-free measurement and quantum shutter experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Repeated weak rotation with an optional absorber in one arm.
    Interrogate(RunArgs),
    /// One pass through the shutter device, with or without the particle.
    ShutterEvolve(RunArgs),
    /// Distance of the finite-cycle shutter from its limit.
    ShutterConverge(RunArgs),
    /// Store qubits in shutters and read them back.
    MemoryRoundtrip(RunArgs),
    /// Two-shutter CNOT on basis and random inputs.
    Cnot(RunArgs),
    /// Run one experiment over a list of values of one parameter.
    Sweep {
        experiment: Experiment,
        #[arg(long)]
        vary: SweepParam,
        /// Comma separated; integers also take `a..b`, `a..=b` and `:step`.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Radians, or `pi/<x>`, `pi/(2N)`, `pi/(N+1)`.
    #[arg(long)]
    theta: Option<ThetaSpec>,
    #[arg(long)]
    cycles: Option<u32>,
    #[arg(long)]
    bomb: bool,
    #[arg(long)]
    particle: bool,
    /// Input port: H1, V1, H2 or V2.
    #[arg(long)]
    input: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_im: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta_im: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u32>,
    #[arg(long)]
    gate: Option<GateChoice>,
    #[arg(long, default_value = "json")]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn amplitude(re: Option<f64>, im: Option<f64>) -> Option<(f64, f64)> {
    (re.is_some() || im.is_some()).then(|| (re.unwrap_or(0.0), im.unwrap_or(0.0)))
}

impl RunArgs {
    fn into_config(self, experiment: Experiment) -> ExperimentConfig {
        let params = Params {
            theta: self.theta,
            cycles: self.cycles,
            bomb: self.bomb,
            particle: self.particle,
            input: self.input,
            alpha: amplitude(self.alpha_re, self.alpha_im),
            beta: amplitude(self.beta_re, self.beta_im),
            seed: self.seed,
            trials: self.trials,
            gate: self.gate,
        };
        ExperimentConfig { experiment, params, output: OutputSpec { path: self.out, format: self.format } }
    }
}

fn emit(records: &[ResultRecord], config: &ExperimentConfig, leading: Option<&str>) -> CliResult<()> {
    let format = config.output.format;
    match &config.output.path {
        Some(path) => write_records(records, format, leading, io::BufWriter::new(std::fs::File::create(path)?)),
        None => {
            let stdout = io::stdout().lock();
            write_records(records, format, leading, stdout)?;
            io::stdout().flush()?;
            Ok(())
        }
    }
}

fn execute(command: Command) -> CliResult<()> {
    let (experiment, args) = match command {
        Command::Interrogate(a) => (Experiment::Interrogate, a),
        Command::ShutterEvolve(a) => (Experiment::ShutterEvolve, a),
        Command::ShutterConverge(a) => (Experiment::ShutterConverge, a),
        Command::MemoryRoundtrip(a) => (Experiment::MemoryRoundtrip, a),
        Command::Cnot(a) => (Experiment::Cnot, a),
        Command::Sweep { experiment, vary, values, run } => {
            let config = run.into_config(experiment);
            let values = parse_values(vary, &values)?;
            let records = sweep(&config, vary, &values)?;
            return emit(&records, &config, Some(vary.name()));
        }
    };
    let config = args.into_config(experiment);
    let record = compute(&config)?;
    emit(std::slice::from_ref(&record), &config, None)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is_broken_pipe() => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
