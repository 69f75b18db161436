use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use teflow_cli::config::{parse_config_file, PartialConfig};
use teflow_cli::run::{run_analyze, run_gen_fixture, run_sweep, FixtureSpec};

/// Directed information flow between an index and a panel of stocks,
/// via transfer entropy over coarse-grained daily log returns.
#[derive(Parser)]
#[command(name = "teflow", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and write all result tables.
    Analyze(PipelineArgs),
    /// Write only the band-width sweep table.
    Sweep(PipelineArgs),
    /// Generate a synthetic toy-market panel as price CSVs.
    GenFixture(GenFixtureArgs),
}

#[derive(Args)]
struct PipelineArgs {
    /// Key=value config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Price CSV (repeatable). One of them must be the index.
    #[arg(long = "input")]
    inputs: Vec<PathBuf>,

    /// Instrument id (file stem) of the index series.
    #[arg(long)]
    index_id: Option<String>,

    /// Target (index/stock) history length.
    #[arg(short = 'k', long)]
    k: Option<usize>,

    /// Source history length.
    #[arg(short = 'l', long)]
    l: Option<usize>,

    /// Comma-separated ascending band widths for the sweep.
    #[arg(long, value_delimiter = ',')]
    d_grid: Option<Vec<f64>>,

    /// Band width for the per-stock flow stage.
    #[arg(long)]
    flows_d: Option<f64>,

    /// Use each series' own equiprobable band width in the flow stage.
    #[arg(long)]
    equiprobable_flows: bool,

    /// Histogram bin width (bits).
    #[arg(long)]
    hist_bin_width: Option<f64>,

    /// Ranking length in the summary.
    #[arg(long)]
    top_k: Option<usize>,

    /// Shuffle replicates per pair and direction.
    #[arg(long)]
    surrogates: Option<usize>,

    /// Shuffle both series per replicate instead of the source only.
    #[arg(long)]
    shuffle_both: bool,

    /// Base seed for all randomness.
    #[arg(long)]
    seed: Option<u64>,

    #[arg(long)]
    output_dir: Option<PathBuf>,
}

impl PipelineArgs {
    fn resolve(self) -> teflow_cli::Result<teflow_cli::RunConfig> {
        let flags = PartialConfig {
            inputs: self.inputs,
            index_id: self.index_id,
            k: self.k,
            l: self.l,
            d_grid: self.d_grid,
            flows_d: self.flows_d,
            equiprobable_flows: self.equiprobable_flows.then_some(true),
            hist_bin_width: self.hist_bin_width,
            top_k: self.top_k,
            surrogates: self.surrogates,
            shuffle_both: self.shuffle_both.then_some(true),
            seed: self.seed,
            output_dir: self.output_dir,
            alignment: None,
        };
        let base = match &self.config {
            Some(path) => parse_config_file(path)?,
            None => PartialConfig::default(),
        };
        flags.over(base).resolve()
    }
}

#[derive(Args)]
struct GenFixtureArgs {
    #[arg(long)]
    output_dir: PathBuf,

    #[arg(long, default_value_t = 8)]
    n_stocks: usize,

    /// Probability a stock copies the lagged index-driver sign.
    #[arg(long, default_value_t = 0.8)]
    coupling: f64,

    #[arg(long, default_value_t = 0.01)]
    idiosyncratic_vol: f64,

    /// Trading days of returns per instrument.
    #[arg(long, default_value_t = 500)]
    length: usize,

    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are successful exits; anything else is a usage error
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let result = match cli.command {
        Command::Analyze(args) => args.resolve().and_then(|cfg| run_analyze(&cfg)),
        Command::Sweep(args) => args.resolve().and_then(|cfg| run_sweep(&cfg)),
        Command::GenFixture(args) => run_gen_fixture(
            &FixtureSpec {
                n_stocks: args.n_stocks,
                coupling: args.coupling,
                idiosyncratic_vol: args.idiosyncratic_vol,
                length: args.length,
                seed: args.seed,
            },
            &args.output_dir,
        ),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
