use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dirac_graph::config::{load_config, SweepParam, SweepSpec};
use dirac_graph::error::ConfigError;
use dirac_graph::experiment::{resolve_out_dir, run_experiment, run_sweep, threads_from_env, THREADS_ENV};
use dirac_graph::Error;

#[derive(Parser)]
#[command(name = "dirac-graph", version, about = "Dirac wave packets on metric star graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write time series, snapshots and a summary.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to `[output] dir` of the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the incoming bond weight and record the final reflection.
    #[command(after_help = format!("Worker threads are taken from {THREADS_ENV} (default: all cores)."))]
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Swept parameter; only `alpha1` is supported.
        #[arg(long, value_enum)]
        param: Option<ParamArg>,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the sum-rule residual and the transparency factor A.
    CheckSumrule {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ParamArg {
    Alpha1,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn missing(key: &str) -> Error {
    ConfigError::Invalid { field: key.to_string(), reason: "not given on the command line or in the config".into() }
        .into()
}

fn execute(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Run { config, out } => {
            let cfg = load_config(&config)?;
            let out = resolve_out_dir(out, &cfg).ok_or_else(|| missing("output.dir"))?;
            let summary = run_experiment(&cfg, &out)?;
            println!("steps          {}", summary.steps);
            println!("t_final        {}", summary.t_final);
            println!("R_final        {:.6e}", summary.final_reflection);
            if let Some(fr) = &summary.final_fractions {
                let shown: Vec<String> = fr.iter().map(|f| format!("{f:.6}")).collect();
                println!("fractions      {}", shown.join(" "));
            }
            println!("energy drift   {:.3e}", summary.max_energy_drift);
            println!("norm drift     {:.3e}", summary.max_norm_drift);
            println!("wrote          {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { config, param, from, to, points, out } => {
            let cfg = load_config(&config)?;
            let base = cfg.sweep.clone();
            let spec = SweepSpec {
                param: match param {
                    Some(ParamArg::Alpha1) => SweepParam::Alpha1,
                    None => base.as_ref().map_or(SweepParam::Alpha1, |s| s.param),
                },
                from: from.or(base.as_ref().map(|s| s.from)).ok_or_else(|| missing("sweep.from"))?,
                to: to.or(base.as_ref().map(|s| s.to)).ok_or_else(|| missing("sweep.to"))?,
                points: points.or(base.as_ref().map(|s| s.points)).ok_or_else(|| missing("sweep.points"))?,
            };
            let out = resolve_out_dir(out, &cfg).ok_or_else(|| missing("output.dir"))?;
            let outcome = run_sweep(&cfg, &spec, threads_from_env(), &out)?;
            for p in &outcome.points {
                match &p.reflection {
                    Ok(r) => println!("{:.6}  {r:.6e}", p.alpha1),
                    Err(e) => println!("{:.6}  failed: {e}", p.alpha1),
                }
            }
            if let (Some(a), Some(r)) = (outcome.argmin_alpha1, outcome.min_reflection) {
                println!("argmin alpha1 {a:.6}  R {r:.6e}");
            }
            println!("wrote {}", out.display());
            let failed = outcome.failures();
            if failed > 0 {
                return Err(Error::SweepFailures { failed, total: outcome.points.len() });
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckSumrule { config } => {
            let cfg = load_config(&config)?;
            println!("residual {:.17e}", cfg.graph.sum_rule_residual());
            println!("A        {:.17e}", cfg.graph.transparency_factor());
            Ok(ExitCode::SUCCESS)
        }
    }
}
