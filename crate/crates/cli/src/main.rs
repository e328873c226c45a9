mod bench;
mod error;
mod play;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use rcg_core::game::{play as play_game, replay, Transcript, Winner};
use rcg_core::gen::{self, LayeredParams, RandomParams};
use rcg_core::oracle::{enumerate_instances, minimax, qbf_eval, Limits};
use rcg_core::reduction::{parse_qdimacs, reduce_with, BudgetRule};
use rcg_core::solver::{
    relevant_times, EngineAdversary, EngineTraveler, Mode, SolveError, Solver, SolverConfig, DEFAULT_MAX_STATES,
};
use rcg_core::temporal::{parse_instance, serialize_instance, RcgInstance};

use error::{read, write, CliError};

#[derive(Parser)]
#[command(name = "rcg", version, about = "Robust connection game on temporal graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Memo,
    Dfs,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Memo => Mode::Memo,
            ModeArg::Dfs => Mode::Dfs,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Side {
    Traveler,
    Adversary,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Chain,
    Random,
    Layered,
    QbfFamily,
}

#[derive(Subcommand)]
enum Command {
    /// Decide who wins an .rcg instance
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "memo")]
        mode: ModeArg,
        /// Play engine against engine and write the transcript here
        #[arg(long, value_name = "OUT")]
        policy: Option<PathBuf>,
        /// Memo table cap
        #[arg(long, env = "RCG_MAX_STATES", default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
    },
    /// Compile a QDIMACS formula into an .rcg instance
    Reduce {
        qdimacs: PathBuf,
        /// Instance output; printed to stdout when omitted
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Gadget map output
        #[arg(long)]
        map: Option<PathBuf>,
        /// Use the budget n(m+|forall|)+1 instead of n*m+|forall|+1
        #[arg(long = "paper-budget", visible_alias = "loose-budget")]
        loose_budget: bool,
    },
    /// Replay a transcript against an instance
    Verify { instance: PathBuf, transcript: PathBuf },
    /// Play one side interactively against the engine
    Play {
        instance: PathBuf,
        #[arg(long = "as", value_enum)]
        side: Side,
        /// Where to save the transcript [default: instance path with .rcgt]
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[arg(long, env = "RCG_MAX_STATES", default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
    },
    /// Generate an instance on stdout
    Gen(GenArgs),
    /// Solve a family over a range of budgets
    Bench(bench::BenchArgs),
    /// Compare the solver with the brute-force oracles
    OracleCheck {
        /// .rcg instance, or QDIMACS formula with --qbf
        file: Option<PathBuf>,
        #[arg(long)]
        qbf: bool,
        /// Also run the exhaustive small-instance corpus
        #[arg(long)]
        enumerate: bool,
    },
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// chain: number of arcs
    #[arg(long)]
    length: Option<usize>,
    /// chain, layered: adversary budget
    #[arg(long)]
    budget: Option<usize>,
    /// random: maximum vertex count
    #[arg(long)]
    vertices: Option<u32>,
    /// random: maximum arc count
    #[arg(long)]
    arcs: Option<usize>,
    /// random: largest time label
    #[arg(long)]
    max_label: Option<u64>,
    /// random: largest budget
    #[arg(long)]
    max_budget: Option<usize>,
    /// layered: number of layers
    #[arg(long)]
    layers: Option<usize>,
    /// layered: vertices per layer
    #[arg(long)]
    width: Option<usize>,
    /// qbf-family: variables
    #[arg(long)]
    vars: Option<usize>,
    /// qbf-family: clauses
    #[arg(long)]
    clauses: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { instance, mode, policy, max_states } => {
            cmd_solve(&instance, mode.into(), policy.as_deref(), max_states)
        }
        Command::Reduce { qdimacs, output, map, loose_budget } => {
            cmd_reduce(&qdimacs, output.as_deref(), map.as_deref(), loose_budget)
        }
        Command::Verify { instance, transcript } => cmd_verify(&instance, &transcript),
        Command::Play { instance, side, transcript, max_states } => {
            let out = transcript.unwrap_or_else(|| instance.with_extension("rcgt"));
            load(&instance).and_then(|inst| {
                let stdin = std::io::stdin();
                play::run(&inst, side == Side::Traveler, max_states, &mut stdin.lock(), &mut std::io::stdout(), &out)
            })
        }
        Command::Gen(args) => cmd_gen(&args),
        Command::Bench(args) => bench::run(&args),
        Command::OracleCheck { file, qbf, enumerate } => cmd_oracle_check(file.as_deref(), qbf, enumerate),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rcg: {e}");
            e.exit_code()
        }
    }
}

fn load(path: &Path) -> Result<RcgInstance, CliError> {
    parse_instance(&read(path)?).map_err(|e| CliError::format(path, e))
}

fn resource(e: SolveError) -> CliError {
    CliError::Resource(e.to_string())
}

fn cmd_solve(path: &Path, mode: Mode, policy: Option<&Path>, max_states: usize) -> Result<(), CliError> {
    let inst = load(path)?;
    let config = SolverConfig { max_states, ..SolverConfig::new(mode) };
    let start = Instant::now();
    let mut solver = Solver::new(&inst, config);
    let verdict = solver.solve().map_err(resource)?;
    let elapsed = start.elapsed();
    println!("{}", verdict.winner);
    println!(
        "states={} memo_hits={} memo_entries={} peak_depth={} relevant_times={} mode={mode} time={:.3}s",
        verdict.stats.states_evaluated,
        verdict.stats.memo_hits,
        verdict.stats.memo_entries,
        verdict.stats.peak_depth,
        relevant_times(&inst).len(),
        elapsed.as_secs_f64()
    );
    if let Some(out) = policy {
        let mut traveler = EngineTraveler::with_config(&inst, config);
        let mut adversary = EngineAdversary::with_config(&inst, config);
        let (outcome, transcript) = play_game(&inst, &mut traveler, &mut adversary).map_err(|e| match e {
            rcg_core::game::GameError::Policy { error: rcg_core::game::PolicyError::Resource(msg), .. } => {
                CliError::Resource(msg)
            }
            other => CliError::Mismatch(format!("engine playout failed: {other}")),
        })?;
        let replayed =
            replay(&inst, &transcript).map_err(|e| CliError::Mismatch(format!("playout does not replay: {e}")))?;
        if outcome.winner != verdict.winner || replayed.winner != verdict.winner {
            return Err(CliError::Mismatch(format!(
                "playout ended {} against verdict {}",
                outcome.winner, verdict.winner
            )));
        }
        write(out, &transcript.to_rcgt())?;
    }
    Ok(())
}

fn cmd_reduce(path: &Path, output: Option<&Path>, map_out: Option<&Path>, loose_budget: bool) -> Result<(), CliError> {
    let qbf = parse_qdimacs(&read(path)?).map_err(|e| CliError::format(path, e))?;
    let rule = if loose_budget { BudgetRule::Loose } else { BudgetRule::Tight };
    let (inst, map) = reduce_with(&qbf, rule);
    let summary = format!(
        "n={} m={} forall={} budget={} vertices={} arcs={}",
        qbf.variable_count(),
        qbf.clause_count(),
        qbf.universal_count(),
        inst.budget(),
        inst.graph().vertex_count(),
        inst.graph().arc_count()
    );
    if let Some(m) = map_out {
        write(m, &map.to_map_text())?;
    }
    match output {
        Some(o) => {
            write(o, &serialize_instance(&inst))?;
            println!("{summary}");
        }
        None => {
            print!("{}", serialize_instance(&inst));
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn cmd_verify(instance: &Path, transcript: &Path) -> Result<(), CliError> {
    let inst = load(instance)?;
    let t = Transcript::parse(&read(transcript)?).map_err(|e| CliError::format(transcript, e))?;
    let outcome = replay(&inst, &t).map_err(|e| CliError::Mismatch(format!("mismatch at round {}: {e}", e.round())))?;
    println!("OK {} after {} rounds", outcome.winner, t.rounds.len());
    Ok(())
}

fn cmd_gen(args: &GenArgs) -> Result<(), CliError> {
    let given = [
        ("--length", args.length.is_some(), [Model::Chain].as_slice()),
        ("--budget", args.budget.is_some(), &[Model::Chain, Model::Layered]),
        ("--vertices", args.vertices.is_some(), &[Model::Random]),
        ("--arcs", args.arcs.is_some(), &[Model::Random]),
        ("--max-label", args.max_label.is_some(), &[Model::Random]),
        ("--max-budget", args.max_budget.is_some(), &[Model::Random]),
        ("--layers", args.layers.is_some(), &[Model::Layered]),
        ("--width", args.width.is_some(), &[Model::Layered]),
        ("--vars", args.vars.is_some(), &[Model::QbfFamily]),
        ("--clauses", args.clauses.is_some(), &[Model::QbfFamily]),
    ];
    for (flag, set, models) in given {
        if set && !models.contains(&args.model) {
            return Err(CliError::Format(format!("{flag} does not apply to the chosen model")));
        }
    }
    let bad = |e: gen::GenError| CliError::Format(e.to_string());
    let inst = match args.model {
        Model::Chain => {
            let length = args.length.unwrap_or(2);
            gen::chain(length, args.budget.unwrap_or(1.min(length))).map_err(bad)?
        }
        Model::Random => {
            let d = RandomParams::default();
            let params = RandomParams {
                max_vertices: args.vertices.unwrap_or(d.max_vertices),
                max_arcs: args.arcs.unwrap_or(d.max_arcs),
                max_label: args.max_label.unwrap_or(d.max_label),
                max_budget: args.max_budget.unwrap_or(d.max_budget),
                ..d
            };
            gen::random(args.seed, &params).map_err(bad)?
        }
        Model::Layered => {
            let params = LayeredParams {
                layers: args.layers.unwrap_or(4),
                width: args.width.unwrap_or(3),
                budget: args.budget.unwrap_or(1),
            };
            gen::layered(args.seed, params).map_err(bad)?
        }
        Model::QbfFamily => {
            let (qbf, inst, _) =
                gen::qbf_family(args.seed, args.vars.unwrap_or(2), args.clauses.unwrap_or(2)).map_err(bad)?;
            for line in qbf.to_qdimacs().lines() {
                println!("c {line}");
            }
            inst
        }
    };
    print!("{}", serialize_instance(&inst));
    Ok(())
}

fn cmd_oracle_check(file: Option<&Path>, qbf: bool, enumerate: bool) -> Result<(), CliError> {
    if file.is_none() && !enumerate {
        return Err(CliError::Format("give an instance file, --enumerate, or both".into()));
    }
    let mut disagreements = 0;
    if let Some(path) = file {
        if qbf {
            let formula = parse_qdimacs(&read(path)?).map_err(|e| CliError::format(path, e))?;
            let truth = qbf_eval(&formula).map_err(|e| CliError::Resource(e.to_string()))?;
            let (inst, _) = reduce_with(&formula, BudgetRule::Tight);
            let winner = rcg_core::solver::solve(&inst, Mode::Memo).map_err(resource)?.winner;
            let agree = truth == (winner == Winner::Traveler);
            println!("formula={truth} reduced={winner} {}", if agree { "AGREE" } else { "DISAGREE" });
            disagreements += !agree as usize;
        } else {
            let inst = load(path)?;
            let oracle = minimax(&inst).map_err(|e| CliError::Resource(e.to_string()))?;
            let memo = rcg_core::solver::solve(&inst, Mode::Memo).map_err(resource)?.winner;
            let dfs = rcg_core::solver::solve(&inst, Mode::Dfs).map_err(resource)?.winner;
            let agree = oracle == memo && memo == dfs;
            println!("oracle={oracle} memo={memo} dfs={dfs} {}", if agree { "AGREE" } else { "DISAGREE" });
            disagreements += !agree as usize;
        }
    }
    if enumerate {
        let mut count = 0;
        let mut bad = 0;
        for inst in enumerate_instances(&Limits::small()) {
            count += 1;
            let oracle = minimax(&inst).map_err(|e| CliError::Resource(e.to_string()))?;
            let memo = rcg_core::solver::solve(&inst, Mode::Memo).map_err(resource)?.winner;
            let dfs = rcg_core::solver::solve(&inst, Mode::Dfs).map_err(resource)?.winner;
            bad += !(oracle == memo && memo == dfs) as usize;
        }
        println!("enumerated={count} disagreements={bad}");
        disagreements += bad;
    }
    if disagreements > 0 {
        return Err(CliError::Mismatch(format!("{disagreements} disagreements with the oracle")));
    }
    Ok(())
}
