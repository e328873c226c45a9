//! Exact decision procedure for the robust connection game.
//!
//! `F(z, t, D) = true`; for any other vertex `v`,
//!
//! ```text
//! F(v, t, D) = AND over announcements D' ⊆ avail(v, t, D) \ D, |D ∪ D'| <= budget
//!                OR over e ∈ avail(v, t, D ∪ D')  F(head e, arr_{D ∪ D'}(e), D ∪ D')
//! ```
//!
//! with the empty disjunction false. Delays only postpone departures, so the
//! available arcs after an announcement are exactly those before it; only
//! their arrival times change.
//!
//! Two execution modes share the recursion: [`Mode::Memo`] caches `F` per
//! state in a hash table, [`Mode::Dfs`] keeps nothing but the current
//! root-to-leaf path and so runs in space linear in the recursion depth.

mod policy;

pub use policy::{
    adversary_policy, traveler_policy, AdversaryStrategy, EngineAdversary, EngineTraveler, TravelerStrategy,
};

use std::fmt;

use itertools::Itertools;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::game::{GameState, Winner};
use crate::temporal::{ArcId, DelayRecord, RcgInstance, Time, VertexId};

pub const DEFAULT_MAX_STATES: usize = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Memo,
    Dfs,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Memo => "memo",
            Mode::Dfs => "dfs",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub mode: Mode,
    /// Memo table size at which [`Mode::Memo`] gives up. Ignored by DFS.
    pub max_states: usize,
    /// Disable short-circuiting so every reachable state is evaluated.
    pub exhaustive: bool,
}

impl SolverConfig {
    pub fn new(mode: Mode) -> Self {
        SolverConfig { mode, max_states: DEFAULT_MAX_STATES, exhaustive: false }
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig::new(Mode::Memo)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Non-target states whose recurrence was expanded (memo hits excluded).
    pub states_evaluated: u64,
    pub memo_hits: u64,
    /// Size of the memo table; always zero in DFS mode.
    pub memo_entries: usize,
    /// Deepest level of the search tree, counting state and announcement levels.
    pub peak_depth: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub winner: Winner,
    pub stats: Stats,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("memo table reached the state cap of {0}")]
    StateCap(usize),
    #[error("state does not belong to this instance: {0}")]
    ForeignState(String),
}

/// `{1} ∪ {arr(e), arr(e) + δ}` over the undelayed graph, sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelevantTimes(Vec<Time>);

impl RelevantTimes {
    pub fn as_slice(&self) -> &[Time] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, t: Time) -> bool {
        self.0.binary_search(&t).is_ok()
    }
}

pub fn relevant_times(inst: &RcgInstance) -> RelevantTimes {
    let none = inst.no_delays();
    let mut times = vec![1];
    for arc in inst.graph().arcs() {
        let arr = arc.arrival(&none);
        times.push(arr);
        times.push(arr + inst.delta());
    }
    times.sort_unstable();
    times.dedup();
    RelevantTimes(times)
}

/// Canonical table key: position, clock and the sorted delayed-arc ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MemoKey {
    position: u32,
    clock: Time,
    delayed: Box<[u32]>,
}

impl MemoKey {
    fn new(position: VertexId, clock: Time, delayed: &[ArcId]) -> Self {
        MemoKey { position: position.0, clock, delayed: delayed.iter().map(|a| a.0).collect() }
    }

    pub fn to_state(&self, delta: Time) -> GameState {
        GameState {
            position: VertexId(self.position),
            clock: self.clock,
            delays: DelayRecord::with_delayed(delta, self.delayed.iter().map(|&a| ArcId(a))),
        }
    }
}

pub struct Solver<'a> {
    inst: &'a RcgInstance,
    config: SolverConfig,
    memo: Option<FxHashMap<MemoKey, bool>>,
    stats: Stats,
    times: RelevantTimes,
}

impl<'a> Solver<'a> {
    pub fn new(inst: &'a RcgInstance, config: SolverConfig) -> Self {
        let memo = match config.mode {
            Mode::Memo => Some(FxHashMap::default()),
            Mode::Dfs => None,
        };
        Solver { inst, config, memo, stats: Stats::default(), times: relevant_times(inst) }
    }

    pub fn instance(&self) -> &'a RcgInstance {
        self.inst
    }

    pub fn stats(&self) -> Stats {
        let mut s = self.stats;
        s.memo_entries = self.memo.as_ref().map_or(0, |m| m.len());
        s
    }

    pub fn relevant_times(&self) -> &RelevantTimes {
        &self.times
    }

    /// Value of the initial state `(start, 1, ∅)`.
    pub fn solve(&mut self) -> Result<Verdict, SolveError> {
        let wins = self.eval(self.inst.start(), 1, &[], 1)?;
        let winner = if wins { Winner::Traveler } else { Winner::Adversary };
        Ok(Verdict { winner, stats: self.stats() })
    }

    /// True iff the traveler wins from `state`.
    pub fn solve_state(&mut self, state: &GameState) -> Result<bool, SolveError> {
        let delayed = self.check_state(state)?;
        self.eval(state.position, state.clock, &delayed, 1)
    }

    /// Memoized entries, for auditing. Empty in DFS mode.
    pub fn memo_entries(&self) -> impl Iterator<Item = (&MemoKey, bool)> + '_ {
        self.memo.iter().flat_map(|m| m.iter().map(|(k, &v)| (k, v)))
    }

    fn check_state(&self, state: &GameState) -> Result<Vec<ArcId>, SolveError> {
        let foreign = |msg: String| Err(SolveError::ForeignState(msg));
        let g = self.inst.graph();
        if !g.contains_vertex(state.position) {
            return foreign(format!("vertex {} does not exist", state.position));
        }
        if state.clock == 0 {
            return foreign("clock must be at least 1".into());
        }
        if state.delays.delta != self.inst.delta() {
            return foreign(format!("delta {} differs from the instance's {}", state.delays.delta, self.inst.delta()));
        }
        if state.delays.len() > self.inst.budget() {
            return foreign(format!("{} delays exceed the budget {}", state.delays.len(), self.inst.budget()));
        }
        if let Some(a) = state.delays.iter().find(|&a| g.arc(a).is_err()) {
            return foreign(format!("arc {a} does not exist"));
        }
        Ok(state.delays.iter().collect())
    }

    fn label(&self, arc: ArcId, delayed: &[ArcId]) -> Time {
        let a = &self.inst.graph().arcs()[arc.0 as usize - 1];
        if delayed.binary_search(&arc).is_ok() {
            a.label + self.inst.delta()
        } else {
            a.label
        }
    }

    /// Arcs leaving `pos` still enterable at `clock`, ascending id.
    fn available(&self, pos: VertexId, clock: Time, delayed: &[ArcId]) -> Vec<ArcId> {
        self.inst.graph().out_arcs(pos).iter().copied().filter(|&a| clock <= self.label(a, delayed)).collect()
    }

    /// Delay sets `D ∪ D'` for every legal announcement `D'`, in canonical order.
    fn announcement_sets(&self, available: &[ArcId], delayed: &[ArcId]) -> impl Iterator<Item = Vec<ArcId>> {
        let candidates: Vec<ArcId> = available.iter().copied().filter(|a| delayed.binary_search(a).is_err()).collect();
        let max = self.inst.budget().saturating_sub(delayed.len()).min(candidates.len());
        let base = delayed.to_vec();
        (0..=max).flat_map(move |k| candidates.clone().into_iter().combinations(k)).map(move |extra| {
            let mut d = base.clone();
            d.extend(extra);
            d.sort_unstable();
            d
        })
    }

    fn successor(&self, arc: ArcId, delayed: &[ArcId]) -> (VertexId, Time) {
        let a = &self.inst.graph().arcs()[arc.0 as usize - 1];
        (a.head, self.label(arc, delayed) + a.traversal)
    }

    fn eval(&mut self, pos: VertexId, clock: Time, delayed: &[ArcId], depth: usize) -> Result<bool, SolveError> {
        self.stats.peak_depth = self.stats.peak_depth.max(depth);
        if pos == self.inst.target() {
            return Ok(true);
        }
        // a caller-supplied root may sit between relevant times; its successors never do
        debug_assert!(depth == 1 || self.times.contains(clock), "clock {clock} outside the relevant times");
        let key = self.memo.as_ref().map(|_| MemoKey::new(pos, clock, delayed));
        if let (Some(memo), Some(key)) = (&self.memo, &key) {
            if let Some(&v) = memo.get(key) {
                self.stats.memo_hits += 1;
                return Ok(v);
            }
        }
        self.stats.states_evaluated += 1;

        let available = self.available(pos, clock, delayed);
        let mut value = true;
        for d in self.announcement_sets(&available, delayed) {
            self.stats.peak_depth = self.stats.peak_depth.max(depth + 1);
            let mut escapes = false;
            for &e in &available {
                let (head, arrival) = self.successor(e, &d);
                if self.eval(head, arrival, &d, depth + 2)? {
                    escapes = true;
                    if !self.config.exhaustive {
                        break;
                    }
                }
            }
            if !escapes {
                value = false;
                if !self.config.exhaustive {
                    break;
                }
            }
        }

        if let (Some(memo), Some(key)) = (&mut self.memo, key) {
            if memo.len() >= self.config.max_states {
                return Err(SolveError::StateCap(self.config.max_states));
            }
            memo.insert(key, value);
        }
        Ok(value)
    }
}

pub fn solve(inst: &RcgInstance, mode: Mode) -> Result<Verdict, SolveError> {
    Solver::new(inst, SolverConfig::new(mode)).solve()
}

pub fn solve_with(inst: &RcgInstance, config: SolverConfig) -> Result<Verdict, SolveError> {
    Solver::new(inst, config).solve()
}

pub fn solve_state(inst: &RcgInstance, state: &GameState) -> Result<bool, SolveError> {
    Solver::new(inst, SolverConfig::default()).solve_state(state)
}
