//! Online strategies read off the solver.
//!
//! [`TravelerStrategy`] and [`AdversaryStrategy`] are the certified winning
//! strategies and refuse to act from a lost position. The `Engine*` wrappers
//! always produce a legal action, which is what interactive play and
//! solver-vs-solver transcripts need: a losing traveler takes the least-id
//! arc, and a losing adversary holds off the traveler's quickest wins.

use super::{SolveError, Solver, SolverConfig};
use crate::game::{AdversaryPolicy, Announcement, GameState, PolicyError, TravelerPolicy};
use crate::temporal::{ArcId, RcgInstance, Time, VertexId};

fn resource(e: SolveError) -> PolicyError {
    PolicyError::Resource(e.to_string())
}

pub struct TravelerStrategy<'a> {
    solver: Solver<'a>,
}

pub fn traveler_policy(inst: &RcgInstance) -> TravelerStrategy<'_> {
    TravelerStrategy { solver: Solver::new(inst, SolverConfig::default()) }
}

impl<'a> TravelerStrategy<'a> {
    pub fn with_config(inst: &'a RcgInstance, config: SolverConfig) -> Self {
        TravelerStrategy { solver: Solver::new(inst, config) }
    }

    pub fn solver(&mut self) -> &mut Solver<'a> {
        &mut self.solver
    }

    /// Least-id arc whose successor is winning, or `None` if there is none.
    pub fn winning_move(&mut self, state: &GameState, ann: &Announcement) -> Result<Option<ArcId>, SolveError> {
        let mut delayed = self.solver.check_state(state)?;
        delayed.extend(ann.iter());
        delayed.sort_unstable();
        delayed.dedup();
        for e in self.solver.available(state.position, state.clock, &delayed) {
            let (head, arrival) = self.solver.successor(e, &delayed);
            if self.solver.eval(head, arrival, &delayed, 1)? {
                return Ok(Some(e));
            }
        }
        Ok(None)
    }
}

impl TravelerPolicy for TravelerStrategy<'_> {
    fn choose_move(&mut self, _: &RcgInstance, state: &GameState, ann: &Announcement) -> Result<ArcId, PolicyError> {
        if !self.solver.solve_state(state).map_err(resource)? {
            return Err(PolicyError::TravelerLoses);
        }
        self.winning_move(state, ann).map_err(resource)?.ok_or(PolicyError::TravelerLoses)
    }
}

pub struct AdversaryStrategy<'a> {
    solver: Solver<'a>,
}

pub fn adversary_policy(inst: &RcgInstance) -> AdversaryStrategy<'_> {
    AdversaryStrategy { solver: Solver::new(inst, SolverConfig::default()) }
}

impl<'a> AdversaryStrategy<'a> {
    pub fn with_config(inst: &'a RcgInstance, config: SolverConfig) -> Self {
        AdversaryStrategy { solver: Solver::new(inst, config) }
    }

    pub fn solver(&mut self) -> &mut Solver<'a> {
        &mut self.solver
    }

    /// First announcement, in canonical order, after which every move loses.
    pub fn refuting_announcement(&mut self, state: &GameState) -> Result<Option<Announcement>, SolveError> {
        let delayed = self.solver.check_state(state)?;
        if state.position == self.solver.inst.target() {
            return Ok(None);
        }
        let available = self.solver.available(state.position, state.clock, &delayed);
        'ann: for d in self.solver.announcement_sets(&available, &delayed) {
            for &e in &available {
                let (head, arrival) = self.solver.successor(e, &d);
                if self.solver.eval(head, arrival, &d, 1)? {
                    continue 'ann;
                }
            }
            return Ok(Some(d.into_iter().filter(|a| !state.delays.contains(*a)).collect()));
        }
        Ok(None)
    }
}

impl AdversaryPolicy for AdversaryStrategy<'_> {
    fn announce(&mut self, _: &RcgInstance, state: &GameState) -> Result<Announcement, PolicyError> {
        self.refuting_announcement(state).map_err(resource)?.ok_or(PolicyError::AdversaryLoses)
    }
}

/// Traveler for full playouts: wins whenever possible, otherwise takes the
/// least-id legal arc.
pub struct EngineTraveler<'a> {
    strategy: TravelerStrategy<'a>,
}

impl<'a> EngineTraveler<'a> {
    pub fn new(inst: &'a RcgInstance) -> Self {
        EngineTraveler { strategy: traveler_policy(inst) }
    }

    pub fn with_config(inst: &'a RcgInstance, config: SolverConfig) -> Self {
        EngineTraveler { strategy: TravelerStrategy::with_config(inst, config) }
    }
}

impl TravelerPolicy for EngineTraveler<'_> {
    fn choose_move(&mut self, inst: &RcgInstance, state: &GameState, ann: &Announcement) -> Result<ArcId, PolicyError> {
        if let Some(e) = self.strategy.winning_move(state, ann).map_err(resource)? {
            return Ok(e);
        }
        crate::game::GreedyTraveler.choose_move(inst, state, ann)
    }
}

/// Rounds of lookahead [`EngineAdversary`] uses when stalling.
pub const STALL_HORIZON: u32 = 3;

/// Adversary for full playouts. From a lost position it prefers announcements
/// after which the traveler cannot force a win within [`STALL_HORIZON`]
/// rounds (fewer is worse), ties broken by canonical announcement order.
pub struct EngineAdversary<'a> {
    strategy: AdversaryStrategy<'a>,
}

impl<'a> EngineAdversary<'a> {
    pub fn new(inst: &'a RcgInstance) -> Self {
        EngineAdversary { strategy: adversary_policy(inst) }
    }

    pub fn with_config(inst: &'a RcgInstance, config: SolverConfig) -> Self {
        EngineAdversary { strategy: AdversaryStrategy::with_config(inst, config) }
    }

    // Traveler reaches the target within `rounds` rounds whatever is announced.
    fn forced_win(&self, pos: VertexId, clock: Time, delayed: &[ArcId], rounds: u32) -> bool {
        let solver = &self.strategy.solver;
        if pos == solver.inst.target() {
            return true;
        }
        if rounds == 0 {
            return false;
        }
        let available = solver.available(pos, clock, delayed);
        solver.announcement_sets(&available, delayed).all(|d| {
            available.iter().any(|&e| {
                let (head, arrival) = solver.successor(e, &d);
                self.forced_win(head, arrival, &d, rounds - 1)
            })
        })
    }

    // Fewest rounds, up to the horizon, in which the traveler forces a win after `d`.
    fn urgency(&self, available: &[ArcId], d: &[ArcId]) -> u32 {
        (1..=STALL_HORIZON)
            .find(|&k| {
                available.iter().any(|&e| {
                    let (head, arrival) = self.strategy.solver.successor(e, d);
                    self.forced_win(head, arrival, d, k - 1)
                })
            })
            .unwrap_or(STALL_HORIZON + 1)
    }

    fn stalling_announcement(&mut self, state: &GameState) -> Result<Announcement, SolveError> {
        let delayed = self.strategy.solver.check_state(state)?;
        let solver = &self.strategy.solver;
        let available = solver.available(state.position, state.clock, &delayed);
        let mut chosen: Option<(u32, Vec<ArcId>)> = None;
        for d in solver.announcement_sets(&available, &delayed) {
            let value = self.urgency(&available, &d);
            if chosen.as_ref().is_none_or(|(best, _)| value > *best) {
                chosen = Some((value, d));
            }
        }
        let d = chosen.map(|(_, d)| d).unwrap_or_default();
        Ok(d.into_iter().filter(|a| !state.delays.contains(*a)).collect())
    }
}

impl AdversaryPolicy for EngineAdversary<'_> {
    fn announce(&mut self, _: &RcgInstance, state: &GameState) -> Result<Announcement, PolicyError> {
        if let Some(ann) = self.strategy.refuting_announcement(state).map_err(resource)? {
            return Ok(ann);
        }
        self.stalling_announcement(state).map_err(resource)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{play, Winner};
    use crate::temporal::{parse_instance, DelayRecord};

    fn chain(budget: usize, second_label: Time) -> RcgInstance {
        parse_instance(&format!("p rcg 3 2 1 {budget}\ns 1\nz 3\na 1 2 1 1\na 2 3 {second_label} 1\n")).unwrap()
    }

    fn at(v: u32, clock: Time, delayed: &[u32]) -> GameState {
        GameState {
            position: VertexId(v),
            clock,
            delays: DelayRecord::with_delayed(1, delayed.iter().map(|&a| ArcId(a))),
        }
    }

    fn ann(ids: &[u32]) -> Announcement {
        ids.iter().map(|&a| ArcId(a)).collect()
    }

    #[test]
    fn traveler_policy_examples() {
        let inst = chain(0, 2);
        let mut p = traveler_policy(&inst);
        assert_eq!(p.choose_move(&inst, &at(1, 1, &[]), &ann(&[])), Ok(ArcId(1)));
        let relaxed = chain(1, 3);
        let mut p = traveler_policy(&relaxed);
        assert_eq!(p.choose_move(&relaxed, &at(1, 1, &[]), &ann(&[1])), Ok(ArcId(1)));
    }

    #[test]
    fn traveler_policy_refuses_losing_state() {
        let inst = chain(1, 2);
        let mut p = traveler_policy(&inst);
        assert_eq!(p.choose_move(&inst, &at(1, 1, &[]), &ann(&[])), Err(PolicyError::TravelerLoses));
    }

    #[test]
    fn adversary_policy_examples() {
        let inst = chain(1, 2);
        let mut p = adversary_policy(&inst);
        assert_eq!(p.announce(&inst, &at(1, 1, &[])), Ok(ann(&[1])));
        // stuck with the budget spent: only the empty announcement is legal
        assert_eq!(p.announce(&inst, &at(2, 3, &[1])), Ok(ann(&[])));
        assert_eq!(p.announce(&inst, &at(2, 2, &[1])), Err(PolicyError::AdversaryLoses));
    }

    #[test]
    fn engine_players_finish_every_game() {
        for (budget, label, winner) in [(0, 2, Winner::Traveler), (1, 2, Winner::Adversary), (1, 3, Winner::Traveler)] {
            let inst = chain(budget, label);
            let (out, _) = play(&inst, &mut EngineTraveler::new(&inst), &mut EngineAdversary::new(&inst)).unwrap();
            assert_eq!(out.winner, winner);
        }
    }

    #[test]
    fn stalling_adversary_prefers_longer_games() {
        // short route 1-2-3 is cut by delaying a1; the long route 1-4-5-3 is robust
        let inst =
            parse_instance("p rcg 5 5 1 1\ns 1\nz 3\na 1 2 1 1\na 2 3 2 1\na 1 4 1 1\na 4 5 5 1\na 5 3 9 1\n").unwrap();
        let mut adv = EngineAdversary::new(&inst);
        assert_eq!(adv.announce(&inst, &at(1, 1, &[])), Ok(ann(&[1])));
        let (out, t) = play(&inst, &mut EngineTraveler::new(&inst), &mut adv).unwrap();
        assert_eq!(out.winner, Winner::Traveler);
        assert_eq!(t.rounds.len(), 3);
    }
}
