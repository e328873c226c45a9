//! Plain-Rust side of the demo. Errors are strings so everything here runs
//! natively under `cargo test`; `lib.rs` only adapts it for JavaScript.

use serde::Serialize;

use rcg_core::game::{
    check_announcement, initial_state, is_terminal, legal_announcements, legal_moves, step, AdversaryPolicy,
    Announcement, GameState, Round, Transcript, TravelerPolicy, Winner,
};
use rcg_core::oracle::qbf_eval;
use rcg_core::reduction::{parse_qdimacs, reduce_with, BudgetRule};
use rcg_core::solver::{relevant_times, EngineAdversary, EngineTraveler, Mode, Solver, SolverConfig};
use rcg_core::temporal::{parse_instance, serialize_instance, ArcId, RcgInstance};

/// Memo cap for anything triggered from the page; keeps a tab from eating all memory.
pub const MAX_STATES: usize = 2_000_000;

fn config(mode: Mode) -> SolverConfig {
    SolverConfig { max_states: MAX_STATES, ..SolverConfig::new(mode) }
}

fn parse(text: &str) -> Result<RcgInstance, String> {
    parse_instance(text).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct ArcView {
    pub id: u32,
    pub tail: u32,
    pub head: u32,
    pub label: u64,
    pub traversal: u64,
}

#[derive(Debug, Serialize)]
pub struct GraphView {
    pub vertices: u32,
    pub start: u32,
    pub target: u32,
    pub budget: usize,
    pub delta: u64,
    pub arcs: Vec<ArcView>,
}

pub fn graph_view(text: &str) -> Result<GraphView, String> {
    let inst = parse(text)?;
    let arcs = inst
        .graph()
        .arcs()
        .iter()
        .map(|a| ArcView { id: a.id.0, tail: a.tail.0, head: a.head.0, label: a.label, traversal: a.traversal })
        .collect();
    Ok(GraphView {
        vertices: inst.graph().vertex_count(),
        start: inst.start().0,
        target: inst.target().0,
        budget: inst.budget(),
        delta: inst.delta(),
        arcs,
    })
}

#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub winner: String,
    pub states: u64,
    pub memo_hits: u64,
    pub memo_entries: usize,
    pub peak_depth: usize,
    pub relevant_times: usize,
}

pub fn solve(text: &str, mode: &str) -> Result<SolveReport, String> {
    let inst = parse(text)?;
    let mode = match mode {
        "memo" => Mode::Memo,
        "dfs" => Mode::Dfs,
        other => return Err(format!("unknown mode `{other}`")),
    };
    let mut solver = Solver::new(&inst, config(mode));
    let verdict = solver.solve().map_err(|e| e.to_string())?;
    Ok(SolveReport {
        winner: verdict.winner.to_string(),
        states: verdict.stats.states_evaluated,
        memo_hits: verdict.stats.memo_hits,
        memo_entries: verdict.stats.memo_entries,
        peak_depth: verdict.stats.peak_depth,
        relevant_times: relevant_times(&inst).len(),
    })
}

#[derive(Debug, Serialize)]
pub struct ReduceReport {
    pub variables: usize,
    pub clauses: usize,
    pub universal: usize,
    pub budget: usize,
    pub vertices: u32,
    pub arcs: usize,
    /// Truth of the formula by direct evaluation, when it is small enough.
    pub truth: Option<bool>,
    pub instance: String,
    pub map: String,
}

pub fn reduce(text: &str, loose: bool) -> Result<ReduceReport, String> {
    let qbf = parse_qdimacs(text).map_err(|e| e.to_string())?;
    let rule = if loose { BudgetRule::Loose } else { BudgetRule::Tight };
    let (inst, map) = reduce_with(&qbf, rule);
    let truth = qbf_eval(&qbf).ok();
    Ok(ReduceReport {
        variables: qbf.variable_count(),
        clauses: qbf.clause_count(),
        universal: qbf.universal_count(),
        budget: inst.budget(),
        vertices: inst.graph().vertex_count(),
        arcs: inst.graph().arc_count(),
        truth,
        instance: serialize_instance(&inst),
        map: map.to_map_text(),
    })
}

#[derive(Debug, Serialize)]
pub struct MoveView {
    pub arc: u32,
    pub head: u32,
    pub departs: u64,
    pub arrives: u64,
    pub delayed: bool,
}

#[derive(Debug, Serialize)]
pub struct SessionView {
    /// `announce`, `move` or `over`.
    pub phase: &'static str,
    pub human: &'static str,
    pub position: u32,
    pub clock: u64,
    pub delayed: Vec<u32>,
    pub remaining: usize,
    /// Arcs the human adversary may delay this round.
    pub candidates: Vec<u32>,
    pub max_announce: usize,
    /// The engine adversary's announcement awaiting the human's move.
    pub pending: Vec<u32>,
    pub moves: Vec<MoveView>,
    pub winner: Option<String>,
    pub log: Vec<String>,
}

/// One game between a human and the engine, advanced one decision at a time.
pub struct Session {
    inst: RcgInstance,
    human_traveler: bool,
    state: GameState,
    rounds: Vec<Round>,
    pending: Option<Announcement>,
    winner: Option<Winner>,
    log: Vec<String>,
}

fn ids(it: impl IntoIterator<Item = ArcId>) -> String {
    let v: Vec<String> = it.into_iter().map(|a| a.to_string()).collect();
    if v.is_empty() {
        "nothing".into()
    } else {
        v.join(" ")
    }
}

impl Session {
    pub fn new(text: &str, human_traveler: bool) -> Result<Session, String> {
        let inst = parse(text)?;
        let state = initial_state(&inst);
        let mut s =
            Session { inst, human_traveler, state, rounds: Vec::new(), pending: None, winner: None, log: Vec::new() };
        s.prepare()?;
        Ok(s)
    }

    /// Settles a finished game or, when the human travels, fetches the engine's announcement.
    fn prepare(&mut self) -> Result<(), String> {
        if let Some(o) = is_terminal(&self.inst, &self.state) {
            self.winner = Some(o.winner);
            self.log.push(format!("winner: {}", o.winner));
            return Ok(());
        }
        if self.human_traveler {
            let ann = EngineAdversary::with_config(&self.inst, config(Mode::Memo))
                .announce(&self.inst, &self.state)
                .map_err(|e| e.to_string())?;
            self.log.push(format!("round {}: adversary delays {}", self.rounds.len() + 1, ids(ann.iter())));
            self.pending = Some(ann);
        }
        Ok(())
    }

    fn advance(&mut self, ann: Announcement, mv: ArcId) -> Result<(), String> {
        self.state = step(&self.inst, &self.state, &ann, mv).map_err(|v| v.to_string())?;
        self.log.push(format!(
            "round {}: traveler takes {mv} to {} at time {}",
            self.rounds.len() + 1,
            self.state.position,
            self.state.clock
        ));
        self.rounds.push(Round { announcement: ann.iter().collect(), moved: mv });
        self.prepare()
    }

    /// The human adversary delays `arcs`; the engine traveler answers.
    pub fn announce(&mut self, arcs: &[u32]) -> Result<(), String> {
        if self.winner.is_some() || self.human_traveler {
            return Err("it is not the adversary's turn".into());
        }
        let ann: Announcement = arcs.iter().map(|&a| ArcId(a)).collect();
        if ann.len() != arcs.len() {
            return Err("an arc is listed twice".into());
        }
        check_announcement(&self.inst, &self.state, &ann).map_err(|v| v.to_string())?;
        self.log.push(format!("round {}: you delay {}", self.rounds.len() + 1, ids(ann.iter())));
        let mv = EngineTraveler::with_config(&self.inst, config(Mode::Memo))
            .choose_move(&self.inst, &self.state, &ann)
            .map_err(|e| e.to_string())?;
        self.advance(ann, mv)
    }

    /// The human traveler takes `arc` after the pending announcement.
    pub fn take(&mut self, arc: u32) -> Result<(), String> {
        let Some(ann) = self.pending.take().filter(|_| self.winner.is_none()) else {
            return Err("it is not the traveler's turn".into());
        };
        if !legal_moves(&self.inst, &self.state, &ann).contains(&ArcId(arc)) {
            let err = format!("{} is not a legal move", ArcId(arc));
            self.pending = Some(ann);
            return Err(err);
        }
        self.advance(ann, ArcId(arc))
    }

    pub fn view(&self) -> SessionView {
        let over = self.winner.is_some();
        let (candidates, max_announce) = if over || self.human_traveler {
            (Vec::new(), 0)
        } else {
            let legal = legal_announcements(&self.inst, &self.state);
            (legal.candidates().iter().map(|a| a.0).collect(), legal.max_size())
        };
        let moves = match (&self.pending, over) {
            (Some(ann), false) => {
                let delays = self.state.delays.union(ann.iter());
                legal_moves(&self.inst, &self.state, ann)
                    .into_iter()
                    .map(|id| {
                        let a = self.inst.graph().arc(id).expect("legal moves exist");
                        MoveView {
                            arc: id.0,
                            head: a.head.0,
                            departs: a.effective_label(&delays),
                            arrives: a.arrival(&delays),
                            delayed: delays.contains(id),
                        }
                    })
                    .collect()
            }
            _ => Vec::new(),
        };
        SessionView {
            phase: if over {
                "over"
            } else if self.human_traveler {
                "move"
            } else {
                "announce"
            },
            human: if self.human_traveler { "traveler" } else { "adversary" },
            position: self.state.position.0,
            clock: self.state.clock,
            delayed: self.state.delays.iter().map(|a| a.0).collect(),
            remaining: self.inst.budget() - self.state.delays.len(),
            candidates,
            max_announce,
            pending: self.pending.iter().flat_map(|a| a.iter()).map(|a| a.0).collect(),
            moves,
            winner: self.winner.map(|w| w.to_string()),
            log: self.log.clone(),
        }
    }

    /// The finished game in transcript format.
    pub fn transcript(&self) -> Result<String, String> {
        let outcome = self.winner.ok_or("the game is not over yet")?;
        Ok(Transcript { rounds: self.rounds.clone(), outcome }.to_rcgt())
    }
}
