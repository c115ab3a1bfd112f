mod plot;

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use htee_core::harness::{
    dbm_to_watt, format_sig, parse_config, run_sweep, solve_strategies, write_csvs, InstanceConfig, InstanceMetrics,
    Strategy,
};
use htee_core::scenario::export_batch;
use htee_core::{InterferenceNetwork, ScenarioParams, Status};

#[derive(Parser)]
#[command(
    name = "htee",
    version,
    about = "Throughput, energy efficiency and hierarchical power allocation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw random networks and write them as `net_<seed>_<index>.txt`.
    Generate {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one strategy on a network file.
    Solve {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        strategy: Strategy,
        /// Per-user power budget.
        #[arg(long, allow_negative_numbers = true)]
        pmax_dbm: f64,
        /// Fraction of the maximum throughput kept by `htee`.
        #[arg(long, default_value_t = 0.95)]
        omega: f64,
        #[arg(long, default_value_t = 0.01)]
        eta: f64,
        #[arg(long)]
        node_budget: Option<u64>,
    },
    /// Run a power sweep described by a config file and write CSV tables.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render the CSV tables of a sweep as SVG line plots.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Generate { seed, count, out } => {
            let paths = export_batch(seed, count, &ScenarioParams::default(), &out)
                .with_context(|| format!("writing networks to {}", out.display()))?;
            for p in paths {
                println!("{}", p.display());
            }
        }
        Command::Solve {
            net,
            strategy,
            pmax_dbm,
            omega,
            eta,
            node_budget,
        } => solve(&net, strategy, pmax_dbm, omega, eta, node_budget)?,
        Command::Sweep { config, out } => {
            let text = fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let cfg = parse_config(&text).with_context(|| format!("parsing {}", config.display()))?;
            let result = run_sweep(&cfg)?;
            write_csvs(&result.records, &out)?;
            for r in &result.records {
                if r.failed > 0 {
                    log::warn!(
                        "{} dBm: {} of {} realizations excluded",
                        r.p_dbm,
                        r.failed,
                        r.failed + r.used
                    );
                }
            }
            println!("wrote {} budgets to {}", result.records.len(), out.display());
        }
        Command::Plot { input, out } => {
            let written = plot::render_dir(&input, &out)?;
            for p in written {
                println!("{}", p.display());
            }
        }
    }
    Ok(())
}

fn solve(
    path: &PathBuf,
    strategy: Strategy,
    pmax_dbm: f64,
    omega: f64,
    eta: f64,
    node_budget: Option<u64>,
) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let net = InterferenceNetwork::from_text(&text).with_context(|| format!("parsing {}", path.display()))?;
    if !(0.0..=1.0).contains(&omega) {
        bail!("omega must lie in [0, 1], got {omega}");
    }
    let pm = ScenarioParams::default().power_model()?;
    let mut cfg = InstanceConfig {
        omega,
        eta,
        ..Default::default()
    };
    if let Some(n) = node_budget {
        cfg.node_budget = n;
        cfg.sit_node_budget = n;
    }
    let p_max = vec![dbm_to_watt(pmax_dbm); net.users()];
    // the power minimization needs the throughput optimum first
    let strategies = match strategy {
        Strategy::Htee => vec![Strategy::Tp, Strategy::Htee],
        s => vec![s],
    };
    let metrics = solve_strategies(&strategies, &net, &pm, &p_max, &cfg)?;
    if strategy == Strategy::Htee {
        println!("tp_sum_rate_mbps = {}", format_sig(metrics[0].sum_rate / 1e6));
    }
    print_metrics(metrics.last().expect("one result per strategy"));
    Ok(())
}

fn print_metrics(m: &InstanceMetrics) {
    let status = match m.status {
        Status::Optimal => "optimal",
        Status::Infeasible => "infeasible",
        Status::BudgetExhausted => "budget_exhausted",
    };
    println!("strategy = {}", m.strategy);
    println!("status = {status}");
    if let Some(p) = &m.point {
        let powers: Vec<String> = p.iter().map(|&v| format_sig(v)).collect();
        println!("power_w = {}", powers.join(","));
        println!("sum_rate_mbps = {}", format_sig(m.sum_rate / 1e6));
        println!("gee_mbit_per_j = {}", format_sig(m.gee / 1e6));
        println!("total_power_w = {}", format_sig(m.total_power));
    }
    println!("nodes = {}", m.nodes);
    println!("wall_time_s = {}", format_sig(m.wall_time.as_secs_f64()));
}
