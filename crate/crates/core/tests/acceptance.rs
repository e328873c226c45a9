//! Acceptance suite. Runs every criterion and prints one PASS/FAIL line each;
//! exits non-zero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use rcg_core::game::{
    legal_announcements, legal_moves, play, step, AdversaryPolicy, Announcement, GameState, PolicyError, Transcript,
    TravelerPolicy, Winner,
};
use rcg_core::gen::{layered, random, random_qbf, LayeredParams, RandomParams};
use rcg_core::oracle::{
    certify_adversary_policy, certify_traveler_policy, enumerate_instances, minimax, qbf_eval, Limits,
};
use rcg_core::reduction::{interpret_transcript, reduce, reduce_with, BudgetRule, GadgetMap, Qbf, Quantifier};
use rcg_core::solver::{
    adversary_policy, relevant_times, solve, solve_with, traveler_policy, EngineAdversary, EngineTraveler, Mode,
    Solver, SolverConfig,
};
use rcg_core::temporal::{ArcId, DelayRecord, RcgInstance, VertexId};

const CORPUS_1_SIZE: usize = 396_222;

struct Outcome {
    id: u8,
    name: &'static str,
    pass: bool,
    detail: String,
}

/// Everything checked per instance of the oracle corpora.
#[derive(Default, Clone, Copy)]
struct Tally {
    instances: usize,
    traveler_wins: usize,
    disagreements: usize,
    uncertified: usize,
    depth_violations: usize,
    dfs_memo_allocations: usize,
    worst_depth_slack: i64,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.instances += o.instances;
        self.traveler_wins += o.traveler_wins;
        self.disagreements += o.disagreements;
        self.uncertified += o.uncertified;
        self.depth_violations += o.depth_violations;
        self.dfs_memo_allocations += o.dfs_memo_allocations;
        self.worst_depth_slack = self.worst_depth_slack.min(o.worst_depth_slack);
        self
    }
}

fn check_instance(inst: &RcgInstance) -> Tally {
    let memo = solve(inst, Mode::Memo).expect("memo solve");
    let mut dfs_solver = Solver::new(inst, SolverConfig::new(Mode::Dfs));
    let dfs = dfs_solver.solve().expect("dfs solve");
    let oracle = minimax(inst).expect("oracle guard");
    let bound = 2 * relevant_times(inst).len() as i64 + 2;
    let slack = bound - dfs.stats.peak_depth as i64;
    let certified = if memo.winner == Winner::Traveler {
        certify_traveler_policy(inst, &mut traveler_policy(inst)).is_ok()
    } else {
        certify_adversary_policy(inst, &mut adversary_policy(inst)).is_ok()
    };
    Tally {
        instances: 1,
        traveler_wins: (memo.winner == Winner::Traveler) as usize,
        disagreements: !(memo.winner == dfs.winner && dfs.winner == oracle) as usize,
        uncertified: !certified as usize,
        depth_violations: (slack < 0) as usize,
        dfs_memo_allocations: (dfs.stats.memo_entries != 0 || dfs_solver.memo_entries().next().is_some()) as usize,
        worst_depth_slack: slack,
    }
}

fn tally_corpus<I: Iterator<Item = RcgInstance> + Send>(corpus: I) -> Tally {
    corpus
        .par_bridge()
        .map(|inst| check_instance(&inst))
        .reduce(|| Tally { worst_depth_slack: i64::MAX, ..Tally::default() }, Tally::merge)
}

fn figure_formula() -> Qbf {
    use Quantifier::*;
    Qbf::new(vec![(Exists, 1), (Forall, 2), (Exists, 3)], vec![vec![1, -2, -3], vec![-1, 2, -3], vec![1, -2, 3]])
        .unwrap()
}

fn formula_corpus() -> Vec<(String, Qbf)> {
    use Quantifier::*;
    let q = |p: Vec<(Quantifier, u32)>, c: Vec<Vec<i32>>| Qbf::new(p, c).unwrap();
    let mut corpus = vec![
        ("exists x (x)".to_string(), q(vec![(Exists, 1)], vec![vec![1]])),
        ("forall x (x)".to_string(), q(vec![(Forall, 1)], vec![vec![1]])),
        ("exists x forall y (x or y)".to_string(), q(vec![(Exists, 1), (Forall, 2)], vec![vec![1, 2]])),
        ("forall x exists y (x or y)".to_string(), q(vec![(Forall, 1), (Exists, 2)], vec![vec![1, 2]])),
        ("three-variable example".to_string(), figure_formula()),
    ];
    for seed in 0..240u64 {
        let n = 1 + (seed % 3) as usize;
        let m = 1 + ((seed / 3) % 3) as usize;
        corpus.push((format!("random seed {seed} n={n} m={m}"), random_qbf(seed, n, m).unwrap()));
    }
    corpus
}

fn criterion_1(tally: &Tally, elapsed: Duration) -> Outcome {
    let pass = tally.instances == CORPUS_1_SIZE && tally.disagreements == 0 && elapsed <= Duration::from_secs(300);
    Outcome {
        id: 1,
        name: "exhaustive oracle equivalence",
        pass,
        detail: format!(
            "{} instances (expected {CORPUS_1_SIZE}), {} traveler wins, {} disagreements, {:.1} s",
            tally.instances,
            tally.traveler_wins,
            tally.disagreements,
            elapsed.as_secs_f64()
        ),
    }
}

fn criterion_2(tally: &Tally) -> Outcome {
    Outcome {
        id: 2,
        name: "randomized oracle equivalence",
        pass: tally.instances == 500 && tally.disagreements == 0,
        detail: format!(
            "{} instances, {} traveler wins, {} three-way disagreements",
            tally.instances, tally.traveler_wins, tally.disagreements
        ),
    }
}

struct FormulaRun {
    truth: bool,
    tight: Winner,
    tight_dfs: Winner,
    tight_time: Duration,
    loose: Winner,
    forall: usize,
    n: usize,
}

fn run_formulas(corpus: &[(String, Qbf)]) -> Vec<FormulaRun> {
    corpus
        .par_iter()
        .map(|(_, qbf)| {
            let truth = qbf_eval(qbf).unwrap();
            let (tight_inst, _) = reduce(qbf);
            let start = Instant::now();
            let tight = solve(&tight_inst, Mode::Memo).unwrap().winner;
            let tight_time = start.elapsed();
            let tight_dfs = solve(&tight_inst, Mode::Dfs).unwrap().winner;
            let (loose_inst, _) = reduce_with(qbf, BudgetRule::Loose);
            let loose = solve(&loose_inst, Mode::Memo).unwrap().winner;
            FormulaRun {
                truth,
                tight,
                tight_dfs,
                tight_time,
                loose,
                forall: qbf.universal_count(),
                n: qbf.variable_count(),
            }
        })
        .collect()
}

fn criterion_3(corpus: &[(String, Qbf)], runs: &[FormulaRun]) -> Outcome {
    let mut wrong = Vec::new();
    for ((name, _), r) in corpus.iter().zip(runs) {
        let expected = if r.truth { Winner::Traveler } else { Winner::Adversary };
        if r.tight != expected || r.tight_dfs != expected {
            wrong.push(name.clone());
        }
    }
    let slowest = runs.iter().map(|r| r.tight_time).max().unwrap_or_default();
    let trues = runs.iter().filter(|r| r.truth).count();
    let mut detail = format!(
        "{} formulas ({} true), {} mismatches, slowest solve {:.3} s",
        runs.len(),
        trues,
        wrong.len(),
        slowest.as_secs_f64()
    );
    if !wrong.is_empty() {
        detail.push_str(&format!(", first mismatch: {}", wrong[0]));
    }
    Outcome {
        id: 3,
        name: "reduction correctness",
        pass: wrong.is_empty() && runs.len() >= 205 && slowest <= Duration::from_secs(60),
        detail,
    }
}

fn criterion_8(runs: &[FormulaRun]) -> Outcome {
    let agree = |r: &FormulaRun| (r.loose == Winner::Traveler) == r.truth;
    let tight_ok = runs.iter().all(|r| (r.tight == Winner::Traveler) == r.truth);
    let loose_agree = runs.iter().filter(|r| agree(r)).count();
    let exposed: Vec<&FormulaRun> = runs.iter().filter(|r| r.forall >= 1 && r.n >= 2).collect();
    let exposed_agree = exposed.iter().filter(|r| agree(r)).count();
    let exposed_true = exposed.iter().filter(|r| r.truth).count();
    Outcome {
        id: 8,
        name: "budget formula resolution",
        pass: tight_ok,
        detail: format!(
            "budget n*m+|forall|+1 agrees on {}/{}; budget n*(m+|forall|)+1 agrees on {}/{} ({:.1}%), \
             on formulas with a universal and n >= 2: {}/{} ({} of them true)",
            runs.iter().filter(|r| (r.tight == Winner::Traveler) == r.truth).count(),
            runs.len(),
            loose_agree,
            runs.len(),
            100.0 * loose_agree as f64 / runs.len() as f64,
            exposed_agree,
            exposed.len(),
            exposed_true,
        ),
    }
}

/// Follows the given path arcs whenever one leaves the current vertex and is
/// legal; otherwise defers to the engine.
struct ScriptedTraveler<'a> {
    engine: EngineTraveler<'a>,
    route: Vec<ArcId>,
}

impl TravelerPolicy for ScriptedTraveler<'_> {
    fn choose_move(&mut self, inst: &RcgInstance, state: &GameState, ann: &Announcement) -> Result<ArcId, PolicyError> {
        let legal = legal_moves(inst, state, ann);
        if let Some(&a) = self.route.iter().find(|a| legal.contains(a)) {
            return Ok(a);
        }
        self.engine.choose_move(inst, state, ann)
    }
}

/// Makes a fixed announcement on the first visit to one vertex; otherwise
/// defers to the engine.
struct ScriptedAdversary<'a> {
    engine: EngineAdversary<'a>,
    script: Option<(VertexId, Announcement)>,
}

impl AdversaryPolicy for ScriptedAdversary<'_> {
    fn announce(&mut self, inst: &RcgInstance, state: &GameState) -> Result<Announcement, PolicyError> {
        if self.script.as_ref().is_some_and(|(v, _)| *v == state.position) {
            return Ok(self.script.take().unwrap().1);
        }
        self.engine.announce(inst, state)
    }
}

fn states_along(inst: &RcgInstance, t: &Transcript) -> Vec<GameState> {
    let mut states = vec![rcg_core::game::initial_state(inst)];
    for r in &t.rounds {
        let ann: Announcement = r.announcement.iter().copied().collect();
        let next = step(inst, states.last().unwrap(), &ann, r.moved).expect("engine transcript replays");
        states.push(next);
    }
    states
}

#[derive(Default)]
struct ProbeLog {
    playouts: usize,
    failures: Vec<String>,
    existential_checks: usize,
    situation_a: usize,
    situation_b: usize,
    situation_c: usize,
    situation_b_lost: usize,
    budget_exhaustion_checks: usize,
    clause_probes: usize,
}

fn gadget_arcs(map: &GadgetMap, i: usize) -> BTreeSet<ArcId> {
    map.variables[i].arcs().collect()
}

fn check_playout(inst: &RcgInstance, map: &GadgetMap, qbf: &Qbf, t: &Transcript, label: &str, log: &mut ProbeLog) {
    let m = map.clauses.len();
    let states = states_along(inst, t);
    let moved: BTreeSet<ArcId> = t.rounds.iter().map(|r| r.moved).collect();
    for (i, g) in map.variables.iter().enumerate() {
        let Some(at_exit) = states.iter().find(|s| s.position == g.exit) else { continue };
        let inside: BTreeSet<ArcId> = at_exit.delays.iter().filter(|a| gadget_arcs(map, i).contains(a)).collect();
        let positive = g.positive.path_arcs.iter().any(|a| moved.contains(a));
        let side = g.side(positive);
        let literals: BTreeSet<ArcId> = side.literal_arcs.iter().copied().collect();
        let expected = match (g.quantifier, positive) {
            (Quantifier::Exists, _) => {
                log.existential_checks += 1;
                if literals.len() != m {
                    log.failures.push(format!(
                        "{label}: existential gadget {} has {} literal arcs",
                        i + 1,
                        literals.len()
                    ));
                }
                literals
            }
            (Quantifier::Forall, true) => {
                log.situation_a += 1;
                if literals.len() != m + 1 {
                    log.failures.push(format!("{label}: situation (a) with {} delays", literals.len()));
                }
                literals
            }
            (Quantifier::Forall, false) => {
                let first = g.positive.path_arcs[0];
                if at_exit.delays.contains(first) {
                    log.situation_c += 1;
                    literals.iter().copied().chain([first]).collect()
                } else {
                    log.situation_b += 1;
                    if t.outcome == Winner::Adversary {
                        log.situation_b_lost += 1;
                    } else {
                        log.failures.push(format!("{label}: traveler won after situation (b)"));
                    }
                    literals
                }
            }
        };
        if inside != expected {
            log.failures.push(format!(
                "{label}: gadget {} delays {:?}, expected {:?}",
                i + 1,
                inside.iter().map(|a| a.0).collect::<Vec<_>>(),
                expected.iter().map(|a| a.0).collect::<Vec<_>>()
            ));
        }
    }
    let first_clause = map.clauses[0].entry;
    if t.outcome == Winner::Traveler {
        if let Some(at_c1) = states.iter().find(|s| s.position == first_clause) {
            log.budget_exhaustion_checks += 1;
            if at_c1.delays.len() != inst.budget() || !at_c1.delays.contains(map.escape_bridge) {
                log.failures.push(format!("{label}: budget not exhausted on the escape bridge at the first clause"));
            }
            let assignment = interpret_transcript(map, t).expect("legal play never mixes sides");
            let satisfied =
                qbf.clauses().iter().all(|c| c.iter().any(|&lit| assignment.get(lit.unsigned_abs()) == Some(lit > 0)));
            if !satisfied {
                log.failures.push(format!("{label}: winning assignment {assignment:?} violates the matrix"));
            }
        }
    }
}

/// Whether the traveler can get from `c_j` to `c_{j+1}` with no budget left.
fn clause_traversable(inst: &RcgInstance, state: &GameState, exit: VertexId) -> bool {
    if state.position == exit {
        return true;
    }
    let none = Announcement::none();
    legal_moves(inst, state, &none)
        .into_iter()
        .any(|e| clause_traversable(inst, &step(inst, state, &none, e).unwrap(), exit))
}

fn criterion_4() -> Outcome {
    let qbf = figure_formula();
    let (inst, map) = reduce(&qbf);
    let universal = &map.variables[1];
    let adversary_scripts: Vec<Option<Announcement>> =
        vec![None, Some(Announcement::none()), Some([universal.positive.path_arcs[0]].into_iter().collect())];
    let mut jobs = Vec::new();
    for sides in itertools::iproduct!(0..3, 0..3, 0..3) {
        for ann in &adversary_scripts {
            jobs.push(([sides.0, sides.1, sides.2], ann.clone()));
        }
    }
    let results: Vec<(String, Transcript)> = jobs
        .par_iter()
        .map(|(sides, ann)| {
            let mut route = Vec::new();
            for (g, &s) in map.variables.iter().zip(sides) {
                match s {
                    1 => route.extend(&g.positive.path_arcs),
                    2 => route.extend(&g.negative.path_arcs),
                    _ => {}
                }
            }
            let mut traveler = ScriptedTraveler { engine: EngineTraveler::new(&inst), route };
            let mut adversary = ScriptedAdversary {
                engine: EngineAdversary::new(&inst),
                script: ann.clone().map(|a| (universal.entry, a)),
            };
            let (_, t) = play(&inst, &mut traveler, &mut adversary).expect("playout completes");
            (format!("sides {sides:?}, script {ann:?}"), t)
        })
        .collect();
    let mut log = ProbeLog::default();
    for (label, t) in &results {
        log.playouts += 1;
        check_playout(&inst, &map, &qbf, t, label, &mut log);
    }

    // clause probes with the budget spent: filler delays on variable path arcs
    let filler: Vec<ArcId> =
        map.variables.iter().flat_map(|g| g.positive.path_arcs.iter().chain(&g.negative.path_arcs).copied()).collect();
    for (j, c) in map.clauses.iter().enumerate() {
        let k = c.literal_arcs.len();
        for mask in 0..(1u32 << k) {
            let chosen: Vec<ArcId> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| c.literal_arcs[b]).collect();
            let fill = inst.budget() - chosen.len();
            let delays = DelayRecord::with_delayed(1, chosen.iter().copied().chain(filler.iter().copied().take(fill)));
            let state = GameState { position: c.entry, clock: map.schedule.clause_start(j + 1), delays };
            assert_eq!(legal_announcements(&inst, &state).count(), 1);
            log.clause_probes += 1;
            if clause_traversable(&inst, &state, c.exit) != !chosen.is_empty() {
                log.failures.push(format!("clause {} with delayed literal arcs {chosen:?}", j + 1));
            }
        }
    }

    let pass = log.failures.is_empty()
        && log.situation_a > 0
        && log.situation_c > 0
        && log.situation_b > 0
        && log.situation_b_lost == log.situation_b
        && log.budget_exhaustion_checks > 0;
    let mut detail = format!(
        "{} playouts: {} existential traversals with exactly m delays, situations a/b/c = {}/{}/{} \
         (every b lost), {} budget-exhaustion checks, {} clause probes",
        log.playouts,
        log.existential_checks,
        log.situation_a,
        log.situation_b,
        log.situation_c,
        log.budget_exhaustion_checks,
        log.clause_probes
    );
    if let Some(f) = log.failures.first() {
        detail.push_str(&format!("; {} failures, first: {f}", log.failures.len()));
    }
    Outcome { id: 4, name: "gadget probes", pass, detail }
}

fn criterion_5(c1: &Tally, c2: &Tally) -> Outcome {
    let total = c1.instances + c2.instances;
    let bad = c1.uncertified + c2.uncertified;
    Outcome {
        id: 5,
        name: "strategy certification",
        pass: bad == 0 && total > 0,
        detail: format!("{total} instances certified against exhaustive opposition, {bad} counterexamples"),
    }
}

fn criterion_6(c1: &Tally, c2: &Tally) -> Outcome {
    let violations = c1.depth_violations + c2.depth_violations;
    Outcome {
        id: 6,
        name: "depth and space",
        pass: violations == 0 && c1.dfs_memo_allocations == 0 && c2.dfs_memo_allocations == 0,
        detail: format!(
            "{violations} depth-bound violations, smallest slack {}, {} DFS runs with memo entries",
            c1.worst_depth_slack.min(c2.worst_depth_slack),
            c1.dfs_memo_allocations + c2.dfs_memo_allocations
        ),
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn criterion_7() -> Outcome {
    let params = |budget| LayeredParams { layers: 5, width: 3, budget };
    let mut states = Vec::new();
    let mut within_bound = true;
    for x in 0..=3 {
        let inst = layered(7, params(x)).unwrap();
        let config = SolverConfig { exhaustive: true, ..SolverConfig::new(Mode::Memo) };
        let s = solve_with(&inst, config).unwrap().stats.states_evaluated as f64;
        let keys = inst.graph().vertex_count() as f64
            * relevant_times(&inst).len() as f64
            * (0..=x).map(|k| binomial(inst.graph().arc_count(), k)).sum::<f64>();
        within_bound &= s <= keys;
        states.push(s);
    }
    let ys: Vec<f64> = states.iter().map(|s| s.ln()).collect();
    let xs = [0.0, 1.0, 2.0, 3.0];
    let (mx, my) = (xs.iter().sum::<f64>() / 4.0, ys.iter().sum::<f64>() / 4.0);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let monotone = states.windows(2).all(|w| w[0] <= w[1]);
    Outcome {
        id: 7,
        name: "scaling sanity",
        pass: slope.is_finite() && monotone && within_bound,
        detail: format!(
            "layered family (5 layers, width 3, seed 7), states for x=0..3: {:?}, fitted log-slope {slope:.3}, \
             monotone {monotone}, within state-key bound {within_bound}",
            states.iter().map(|s| *s as u64).collect::<Vec<_>>()
        ),
    }
}

fn main() -> ExitCode {
    let mut outcomes = Vec::new();

    let start = Instant::now();
    eprintln!("running the exhaustive corpus");
    let c1 = tally_corpus(enumerate_instances(&Limits::small()));
    let c1_time = start.elapsed();
    outcomes.push(criterion_1(&c1, c1_time));

    eprintln!("running the random corpus");
    let params = RandomParams::default();
    let c2 = tally_corpus((0..500u64).map(|seed| random(seed, &params).unwrap()));
    outcomes.push(criterion_2(&c2));

    eprintln!("running the formula corpus");
    let formulas = formula_corpus();
    let runs = run_formulas(&formulas);
    outcomes.push(criterion_3(&formulas, &runs));
    eprintln!("running the gadget probes");
    outcomes.push(criterion_4());
    outcomes.push(criterion_5(&c1, &c2));
    outcomes.push(criterion_6(&c1, &c2));
    outcomes.push(criterion_7());
    outcomes.push(criterion_8(&runs));

    outcomes.sort_by_key(|o| o.id);
    for o in &outcomes {
        println!("criterion {} {}: {} ({})", o.id, o.name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if outcomes.iter().all(|o| o.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
