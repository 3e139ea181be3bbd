use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use wsaic::algorithms::{sample_moments, MomentEstimates};
use wsaic::functions::{validate::validate_all, FunctionId};
use wsaic::harness::{compare, run_batch, CompareMetric, ExperimentConfig, Overrides, Preset};
use wsaic::RngStream;

#[derive(Parser)]
#[command(name = "wsaic", version, about = "Whale swarm multimodal optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output root; overrides the config.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        /// Base seed; run i uses seed + i.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_parser = parse_preset)]
        preset: Option<Preset>,
    },
    /// Z-test two sets of result bundles, function by function.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// anof (higher is better) or fitness (lower is better).
        #[arg(long, default_value = "anof")]
        metric: String,
        /// Also write the table as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the benchmark ids with their reference settings.
    ListFunctions,
    /// Re-derive the per-block optima counts by grid scan and local refinement.
    ValidateFunctions,
    /// Monte-Carlo check of the update coefficients.
    Moments {
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_preset(s: &str) -> std::result::Result<Preset, String> {
    s.parse().map_err(|e: wsaic::Error| e.to_string())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run {
            config,
            out,
            workers,
            seed,
            preset,
        } => {
            let mut cfg = ExperimentConfig::load(&config)
                .with_context(|| format!("loading {}", config.display()))?;
            cfg.apply(&Overrides {
                preset,
                base_seed: seed,
                workers,
                output: out,
            });
            if cfg.output.is_none() {
                bail!("no output directory: set `output` in the config or pass --out");
            }
            let start = Instant::now();
            for dir in run_batch(&cfg)? {
                let b = wsaic::harness::read_bundle(&dir)?;
                let s = &b.summary;
                let quality = s
                    .quality
                    .map(|(m, sd)| format!("{m:.3e} ({sd:.3e})"))
                    .unwrap_or_else(|| "NA".into());
                println!(
                    "{} {}: SR {:.3}  ANOF {:.2}±{:.2} of {}  quality {}  -> {}",
                    s.function,
                    s.algorithm,
                    s.success_rate,
                    s.anof_mean,
                    s.anof_std,
                    s.optima,
                    quality,
                    dir.display()
                );
            }
            eprintln!("done in {:.1?}", start.elapsed());
            Ok(true)
        }
        Command::Compare { a, b, metric, out } => {
            let metric: CompareMetric = metric.parse()?;
            let table = compare(&a, &b, metric)?;
            println!("{table}");
            if let Some(path) = out {
                std::fs::write(&path, table.to_csv())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(true)
        }
        Command::ListFunctions => {
            println!(
                "{:<4} {:<32} {:>4} {:>8} {:>4} {:>10} {:>8} {:>7}",
                "id", "name", "n", "eps_f", "p", "budget", "optima", "wsa_eta"
            );
            for id in FunctionId::ALL {
                let d = id.defaults();
                let optima = id.problem()?.registry().count();
                println!(
                    "{:<4} {:<32} {:>4} {:>8.0e} {:>4} {:>10.1e} {:>8} {:>7}",
                    id.to_string(),
                    d.name,
                    d.dimension,
                    d.epsilon_f,
                    d.population,
                    d.budget as f64,
                    optima,
                    d.wsa_eta
                );
            }
            Ok(true)
        }
        Command::ValidateFunctions => {
            let start = Instant::now();
            let mut ok = true;
            for v in validate_all() {
                let pass = v.passed();
                ok &= pass;
                println!(
                    "{:<24} registered {:>2}  found {:>2}  worst {:.1e}  {}",
                    v.base.name(),
                    v.registered,
                    v.found.len(),
                    v.worst_value,
                    if pass { "ok" } else { "MISMATCH" }
                );
            }
            eprintln!("done in {:.1?}", start.elapsed());
            Ok(ok)
        }
        Command::Moments { samples, seed } => {
            let m = sample_moments(samples, &mut RngStream::new(seed))?;
            let names = ["E(A)", "E(B)", "Var(A)", "Var(B)", "E(AB)"];
            for ((name, est), target) in names.iter().zip(m.as_array()).zip(MomentEstimates::TARGET) {
                println!("{name:<7} {est:>+.6}  target {target:>+.6}  error {:.2e}", (est - target).abs());
            }
            Ok(m.max_error() < 0.01)
        }
    }
}
