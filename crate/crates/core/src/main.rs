use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use torsion_burst::harness::{
    configured_constants, read_records, run_experiment, summarize, write_tables, ExperimentConfig, ExperimentKind,
    Summary,
};
use torsion_burst::lmprocess::{DEFAULT_Q0, DEFAULT_WINDOW};
use torsion_burst::qtrees::{enumerate_qacyclic, kalai_sum, DEFAULT_STEP_CAP};
use torsion_burst::shadow::DEFAULT_SCAN_RADIUS;
use torsion_burst::Result;

#[derive(Parser)]
#[command(name = "torsion-burst", version, about = "Torsion in random simplicial complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: usize,
    #[arg(long, default_value_t = DEFAULT_Q0)]
    q0: u64,
    /// Overridden by TORSION_WORKERS.
    #[arg(long)]
    workers: Option<usize>,
    /// Trial records, one JSON object per line.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for CSV tables.
    #[arg(long)]
    tables: Option<PathBuf>,
    /// Threshold constant used for m*.
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Largest torsion group and burst anatomy of the process.
    LtBurst(Common),
    /// Q-acyclic 2-complexes from the basis-exchange chain.
    QtreeSample {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_STEP_CAP)]
        step_cap: u64,
    },
    /// All Q-acyclic 2-complexes on n <= 6 vertices.
    QtreeEnumerate {
        #[arg(long)]
        n: usize,
        /// Print every face set.
        #[arg(long)]
        list: bool,
    },
    /// Weighted count of Q-acyclic 2-complexes against n^C(n-2,2).
    KalaiCheck {
        #[arg(long)]
        n: usize,
    },
    /// Burst, giant core and giant shadow event times.
    HittingTime {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SCAN_RADIUS)]
        scan_radius: usize,
    },
    /// Threshold constants, Cohen–Lenstra normalizers and expected phases.
    Constants,
    /// Statistics from a record file.
    Summarize {
        records: PathBuf,
        #[arg(long)]
        tables: Option<PathBuf>,
    },
}

fn config(kind: ExperimentKind, c: &Common) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(kind, c.n, c.d);
    cfg.trials = c.trials;
    cfg.seed = c.seed;
    cfg.window_radius = c.window;
    cfg.q0 = c.q0;
    cfg.workers = c.workers;
    cfg.out = c.out.clone();
    cfg.c = c.c;
    cfg
}

fn emit_summary(summary: &Summary, tables: Option<&PathBuf>) -> Result<()> {
    if let Some(dir) = tables {
        write_tables(summary, dir)?;
    }
    println!("{}", serde_json::to_string(summary)?);
    Ok(())
}

fn batch(cfg: ExperimentConfig, tables: Option<&PathBuf>) -> Result<()> {
    let records = run_experiment(&cfg)?;
    if cfg.out.is_none() {
        for r in &records {
            println!("{}", serde_json::to_string(r)?);
        }
    }
    emit_summary(&summarize(&records)?, tables)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::LtBurst(c) => batch(config(ExperimentKind::LtBurst, &c), c.tables.as_ref()),
        Command::QtreeSample { common, step_cap } => {
            let mut cfg = config(ExperimentKind::Qtree, &common);
            cfg.step_cap = step_cap;
            batch(cfg, common.tables.as_ref())
        }
        Command::HittingTime {
            common,
            threshold,
            scan_radius,
        } => {
            let mut cfg = config(ExperimentKind::Hitting, &common);
            cfg.shadow_threshold = threshold;
            cfg.scan_radius = scan_radius;
            batch(cfg, common.tables.as_ref())
        }
        Command::QtreeEnumerate { n, list } => {
            let trees = enumerate_qacyclic(n)?;
            if list {
                for t in &trees {
                    println!("{}", serde_json::to_string(t.faces())?);
                }
            }
            println!("{}", json!({ "n": n, "count": trees.len() }));
            Ok(())
        }
        Command::KalaiCheck { n } => {
            let k = kalai_sum(n)?;
            let by_order: Vec<_> = k.by_order.iter().map(|(o, c)| json!([o.to_string(), c])).collect();
            println!(
                "{}",
                json!({
                    "n": n,
                    "trees": k.trees,
                    "weighted": k.weighted.to_string(),
                    "expected": k.expected.to_string(),
                    "holds": k.holds(),
                    "by_order": by_order,
                })
            );
            Ok(())
        }
        Command::Constants => {
            let mut cfg = ExperimentConfig::new(ExperimentKind::Constants, 1, 1);
            cfg.workers = Some(1);
            let r = run_experiment(&cfg)?;
            println!(
                "{}",
                json!({ "solved": r[0].output, "configured_c_d": configured_constants()? })
            );
            Ok(())
        }
        Command::Summarize { records, tables } => emit_summary(&summarize(&read_records(&records)?)?, tables.as_ref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::FAILURE
        }
    }
}
