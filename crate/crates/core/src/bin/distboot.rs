use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use distboot::harness::{
    self, emit_report, run_bench, run_comparison, run_coverage_experiment, run_oracle_width,
    ExperimentConfig, ExperimentReport, ReportFormat,
};
use distboot::theory::{tau_min, ModelFamily};
use distboot::{BootMethod, NormFunctional};

#[derive(Parser)]
#[command(name = "distboot", version, about = "Distributed multiplier bootstrap experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coverage and width of k-grad / n+k-1-grad.
    Coverage(RunArgs),
    /// Gradient bootstraps against BLB and SDB.
    Compare(RunArgs),
    /// Mean wall times at τ = 1.
    Bench(RunArgs),
    /// Oracle width for the configured design.
    OracleWidth(RunArgs),
    /// Minimal CSL rounds for given size exponents.
    TauMin(TauArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `root_seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Overrides `norm` from the config: sup, coord:<l> or l2.
    #[arg(long)]
    norm: Option<String>,
}

#[derive(Args)]
struct TauArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    method: String,
    #[arg(long = "gamma-n", allow_negative_numbers = true)]
    gamma_n: f64,
    #[arg(long = "gamma-k", allow_negative_numbers = true)]
    gamma_k: f64,
}

impl RunArgs {
    fn load(&self) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(&self.config)
            .with_context(|| format!("reading {}", self.config.display()))?;
        let mut cfg: ExperimentConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing {}", self.config.display()))?;
        if let Some(seed) = self.seed {
            cfg.root_seed = seed;
        }
        if let Some(norm) = &self.norm {
            cfg.norm = norm.parse::<NormFunctional>()?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn format(&self) -> Result<ReportFormat> {
        Ok(self.format.parse()?)
    }

    fn write(&self, report: &ExperimentReport) -> Result<()> {
        let format = self.format()?;
        match &self.out {
            Some(path) => emit_report(report, format, path)
                .with_context(|| format!("writing {}", path.display()))?,
            None => harness::write_report(report, format, std::io::stdout().lock())?,
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Coverage(a) => report_with(&a, run_coverage_experiment),
        Command::Compare(a) => report_with(&a, run_comparison),
        Command::Bench(a) => report_with(&a, run_bench),
        Command::OracleWidth(a) => {
            let cfg = a.load()?;
            let width = harness::with_threads(a.threads, || run_oracle_width(&cfg))??;
            let line = match a.format()? {
                ReportFormat::Csv => format!("d,n,oracle_width\n{},{},{width}\n", cfg.design.d, cfg.n_total),
                ReportFormat::Json => format!(
                    "{}\n",
                    serde_json::json!({"d": cfg.design.d, "n": cfg.n_total, "oracle_width": width})
                ),
            };
            match &a.out {
                Some(path) => std::fs::write(path, line)?,
                None => std::io::stdout().write_all(line.as_bytes())?,
            }
            Ok(())
        }
        Command::TauMin(t) => {
            let family: ModelFamily = t.family.parse()?;
            let method: BootMethod = t.method.parse()?;
            let plan = tau_min(family, method, t.gamma_n, t.gamma_k);
            println!("{}", serde_json::to_string_pretty(&plan)?);
            Ok(())
        }
    }
}

fn report_with(
    a: &RunArgs,
    f: fn(&ExperimentConfig) -> distboot::Result<ExperimentReport>,
) -> Result<()> {
    let cfg = a.load()?;
    a.format()?;
    let report = harness::with_threads(a.threads, || f(&cfg))??;
    a.write(&report)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
