use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use selfadjust::analysis::AuditSelection;
use selfadjust::harness::counterexample::{gen_counterexample, Family};
use selfadjust::harness::emit::{emit, write_json, Format};
use selfadjust::harness::experiments::{
    greedy_run, pathbalance_scaling, sequential, SequentialAlgo,
};
use selfadjust::harness::{run, RunConfig, WeightScheme, Workload, WorkloadKind};
use selfadjust::{Error, Result, Transformer};

#[derive(Parser)]
#[command(
    name = "selfadjust",
    version,
    about = "Self-adjusting BST restructuring experiments"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one algorithm over a workload and emit per-access records.
    Run {
        #[arg(long)]
        algo: Transformer,
        #[arg(long, default_value = "uniform")]
        workload: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value = "uniform")]
        weights: WeightScheme,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "all")]
        audit: AuditSelection,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
    /// Scaling and sequential-access experiments.
    Experiment {
        #[command(subcommand)]
        which: Experiment,
    },
    /// Generate a counterexample family instance and check its properties.
    Counterexample {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
    },
    /// Geometric view.
    Geometry {
        #[command(subcommand)]
        which: Geometry,
    },
}

#[derive(Subcommand)]
enum Experiment {
    /// Path-balance cost per access over a grid of powers of two.
    PathbalanceScaling {
        #[arg(long, default_value_t = 1024)]
        nmin: usize,
        #[arg(long, default_value_t = 65536)]
        nmax: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Access 1..n in order starting from the left path.
    Sequential {
        #[arg(long)]
        algo: SequentialAlgo,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum Geometry {
    /// Greedy on height diagrams with the geometric access lemma audited.
    Greedy {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "uniform")]
        workload: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    write_json(value, std::io::stdout().lock())
}

fn exponent(n: usize) -> Result<u32> {
    if n.is_power_of_two() && n >= 2 {
        Ok(n.trailing_zeros())
    } else {
        Err(Error::Precondition(format!(
            "{n} is not a power of two ≥ 2"
        )))
    }
}

#[derive(Serialize)]
struct CounterexampleDump<'a, R: Serialize> {
    before_path: &'a [i64],
    after_tree: String,
    report: R,
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Run {
            algo,
            workload,
            n,
            m,
            alpha,
            weights,
            seed,
            audit,
            out,
            format,
        } => {
            let kind = WorkloadKind::parse(&workload, alpha)?;
            let cfg = RunConfig::new(algo, Workload::new(kind, n, m, seed))
                .weights(weights)
                .audits(audit);
            let report = run(&cfg)?;
            emit(&report, format, out.as_deref())?;
            let mut err = std::io::stderr().lock();
            writeln!(
                err,
                "{algo} on {kind} (n={n}, m={m}, initial tree {:?}): total cost {}, {} audit failure(s)",
                cfg.initial,
                report.aggregates.total_cost,
                report.failures.len()
            )?;
            for f in &report.failures {
                writeln!(
                    err,
                    "  access {}: {} slack {:.3e}",
                    f.record.access_index, f.audit, f.slack
                )?;
            }
            Ok(report.passed())
        }
        Cmd::Experiment {
            which: Experiment::PathbalanceScaling { nmin, nmax, seed },
        } => {
            let r = pathbalance_scaling(exponent(nmin)?..=exponent(nmax)?, seed)?;
            print_json(&r)?;
            Ok(true)
        }
        Cmd::Experiment {
            which: Experiment::Sequential { algo, n },
        } => {
            print_json(&sequential(algo, n)?)?;
            Ok(true)
        }
        Cmd::Counterexample { family, n } => {
            let (path, after, report) = gen_counterexample(family, n)?;
            let ok = report.all_pass();
            print_json(&CounterexampleDump {
                before_path: path.keys(),
                after_tree: after.to_string(),
                report,
            })?;
            Ok(ok)
        }
        Cmd::Geometry {
            which:
                Geometry::Greedy {
                    n,
                    workload,
                    m,
                    alpha,
                    seed,
                },
        } => {
            let kind = WorkloadKind::parse(&workload, alpha)?;
            let r = greedy_run(&Workload::new(kind, n, m.unwrap_or(n), seed))?;
            let ok = r.all_disjoint && r.min_slack.is_none_or(|s| s >= -1e-6);
            print_json(&r)?;
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
