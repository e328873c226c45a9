//! Budget sweeps over a generated family.

use std::ops::RangeInclusive;
use std::time::Instant;

use clap::{Args, ValueEnum};

use rcg_core::gen::{self, LayeredParams};
use rcg_core::solver::{relevant_times, Mode, Solver, SolverConfig, DEFAULT_MAX_STATES};
use rcg_core::temporal::RcgInstance;

use crate::error::CliError;

#[derive(Clone, Copy, ValueEnum)]
pub enum Family {
    Chain,
    Layered,
    #[value(name = "qbf-family")]
    Qbf,
}

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Budgets to solve, as `a..b` (inclusive)
    #[arg(long, value_parser = parse_sweep, default_value = "0..2")]
    budget_sweep: RangeInclusive<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// chain: number of arcs
    #[arg(long, default_value_t = 8)]
    length: usize,
    /// layered: number of layers
    #[arg(long, default_value_t = 5)]
    layers: usize,
    /// layered: vertices per layer
    #[arg(long, default_value_t = 3)]
    width: usize,
    /// qbf-family: variables
    #[arg(long, default_value_t = 2)]
    vars: usize,
    /// qbf-family: clauses
    #[arg(long, default_value_t = 2)]
    clauses: usize,
    #[arg(long, env = "RCG_MAX_STATES", default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
}

fn parse_sweep(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected `a..b`, got `{s}`"))?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad lower bound `{a}`"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad upper bound `{b}`"))?;
    if a > b {
        return Err(format!("empty sweep {a}..{b}"));
    }
    Ok(a..=b)
}

fn instance(args: &BenchArgs) -> Result<RcgInstance, CliError> {
    let bad = |e: gen::GenError| CliError::Format(e.to_string());
    match args.family {
        Family::Chain => gen::chain(args.length, 0).map_err(bad),
        Family::Layered => {
            gen::layered(args.seed, LayeredParams { layers: args.layers, width: args.width, budget: 0 }).map_err(bad)
        }
        Family::Qbf => Ok(gen::qbf_family(args.seed, args.vars, args.clauses).map_err(bad)?.1),
    }
}

/// Least-squares slope of `ln(states)` against the budget.
pub fn log_slope(rows: &[(usize, u64)]) -> f64 {
    let n = rows.len() as f64;
    let xs: Vec<f64> = rows.iter().map(|r| r.0 as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| (r.1.max(1) as f64).ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    sxy / sxx
}

pub fn run(args: &BenchArgs) -> Result<(), CliError> {
    let base = instance(args)?;
    let bound = 2 * relevant_times(&base).len() + 2;
    println!(
        "family vertices={} arcs={} relevant_times={} depth_bound={bound}",
        base.graph().vertex_count(),
        base.graph().arc_count(),
        relevant_times(&base).len()
    );
    println!("{:>4} {:>12} {:>10} {:>10} {:>9}", "x", "states", "time_ms", "peak_depth", "winner");
    let mut rows = Vec::new();
    for x in args.budget_sweep.clone() {
        let inst = base.with_budget(x).map_err(|e| CliError::Format(e.to_string()))?;
        // every announcement is explored so the count depends only on the instance
        let config = SolverConfig { max_states: args.max_states, exhaustive: true, ..SolverConfig::new(Mode::Memo) };
        let start = Instant::now();
        let verdict = Solver::new(&inst, config).solve().map_err(|e| CliError::Resource(e.to_string()))?;
        let elapsed = start.elapsed();
        let dfs =
            Solver::new(&inst, SolverConfig::new(Mode::Dfs)).solve().map_err(|e| CliError::Resource(e.to_string()))?;
        println!(
            "{x:>4} {:>12} {:>10.3} {:>10} {:>9}",
            verdict.stats.states_evaluated,
            elapsed.as_secs_f64() * 1e3,
            dfs.stats.peak_depth,
            verdict.winner
        );
        if dfs.stats.peak_depth > bound {
            return Err(CliError::Mismatch(format!("peak depth {} exceeds {bound}", dfs.stats.peak_depth)));
        }
        rows.push((x, verdict.stats.states_evaluated));
    }
    if rows.len() >= 2 {
        println!("fitted log-slope: {:.4}", log_slope(&rows));
    } else {
        println!("fitted log-slope: n/a (one budget)");
    }
    Ok(())
}
