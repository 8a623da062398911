use std::path::{Path, PathBuf};
use std::process::ExitCode;

use boolswarm::algorithms::Algorithm;
use boolswarm::harness::{
    export_results, read_records, run_experiment, run_single, samples, write_aggregate,
    ExperimentConfig, OutputFormat, StatsReport,
};
use boolswarm::objectives::Problem;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "boolswarm",
    version,
    about = "Discrete multi-objective PSO experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (algorithm, problem, seed) cell and write all artifacts.
    Run(Overrides),
    /// Run one algorithm on one problem and print its metrics as JSON.
    Single {
        #[arg(long)]
        algorithm: Algorithm,
        #[arg(long)]
        problem: Problem,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Recompute the aggregate from the per-run records in a results directory.
    Stats {
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
    },
}

#[derive(Args)]
struct Overrides {
    /// TOML experiment config; flags below take precedence.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Comma-separated algorithm names.
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<Algorithm>>,
    /// Comma-separated problem names.
    #[arg(long, value_delimiter = ',')]
    problems: Option<Vec<Problem>>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    particles: Option<usize>,
    #[arg(long)]
    iterations: Option<usize>,
    /// Base seed; run `i` of every cell uses `seed + i`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    format: Option<OutputFormat>,
}

impl Overrides {
    fn resolve(self) -> boolswarm::Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(v) = self.algorithms {
            config.algorithms = v;
        }
        if let Some(v) = self.problems {
            config.problems = v;
        }
        if let Some(v) = self.runs {
            config.runs = v;
        }
        if let Some(v) = self.particles {
            config.swarm_size = v;
        }
        if let Some(v) = self.iterations {
            config.iterations = v;
        }
        if let Some(v) = self.seed {
            config.base_seed = v;
        }
        if let Some(v) = self.out {
            config.output_dir = Some(v);
        }
        if let Some(v) = self.workers {
            config.workers = v;
        }
        if let Some(v) = self.format {
            config.format = v;
        }
        config.validate()?;
        Ok(config)
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(command: Command) -> boolswarm::Result<()> {
    match command {
        Command::Run(overrides) => {
            let config = overrides.resolve()?;
            let dir = config
                .output_dir
                .clone()
                .unwrap_or_else(|| PathBuf::from("results"));
            let results = run_experiment(&config)?;
            let report = export_results(&dir, &config, &results, config.format)?;
            print_table(&report);
            eprintln!("{} runs written to {}", results.len(), dir.display());
        }
        Command::Single {
            algorithm,
            problem,
            overrides,
        } => {
            let config = overrides.resolve()?;
            let result = run_single(algorithm, problem, &config, config.base_seed)?;
            println!("{}", serde_json::to_string_pretty(&result.metrics)?);
        }
        Command::Stats { out, format } => {
            let report = recompute(&out, format)?;
            print_table(&report);
        }
    }
    Ok(())
}

fn recompute(dir: &Path, format: OutputFormat) -> boolswarm::Result<StatsReport> {
    let records = read_records(dir)?;
    let report = StatsReport::from_samples(&samples(&records))?;
    write_aggregate(dir, &report, format)?;
    Ok(report)
}

fn print_table(report: &StatsReport) {
    print!("{:<9} {:<4}", "problem", "");
    for a in &report.algorithms {
        print!(" {:>20}", a.name());
    }
    println!();
    for row in &report.table {
        print!("{:<9} {:<4}", row.problem.name(), row.metric.name());
        for a in &report.algorithms {
            let cell = row.cells.iter().find(|c| c.algorithm == *a);
            let text = cell.map_or(String::new(), |c| {
                let flag = match c.mark {
                    boolswarm::harness::Mark::StrongWin => "**",
                    boolswarm::harness::Mark::Win => "*",
                    _ => "",
                };
                format!("{:.4}±{:.4}{flag}", c.mean, c.sd)
            });
            print!(" {text:>20}");
        }
        println!();
    }
}
