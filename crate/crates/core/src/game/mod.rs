//! Round-based referee for the robust connection game.
//!
//! Each round the adversary announces a set of not-yet-delayed arcs leaving
//! the traveler's vertex (at most the remaining budget), then the traveler
//! must take an arc that is still available. The traveler wins on reaching
//! the target and loses when stuck anywhere else.

mod transcript;

pub use transcript::{Round, Transcript, TranscriptParseError};

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::temporal::{ArcId, DelayRecord, RcgInstance, Time, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Winner {
    Traveler,
    Adversary,
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Winner::Traveler => "TRAVELER",
            Winner::Adversary => "ADVERSARY",
        })
    }
}

/// Position, clock and delays so far: the full game state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameState {
    pub position: VertexId,
    pub clock: Time,
    pub delays: DelayRecord,
}

/// Arcs newly delayed in one round.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Announcement(BTreeSet<ArcId>);

impl Announcement {
    pub fn none() -> Self {
        Announcement(BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, arc: ArcId) -> bool {
        self.0.contains(&arc)
    }

    pub fn iter(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.0.iter().copied()
    }
}

impl FromIterator<ArcId> for Announcement {
    fn from_iter<I: IntoIterator<Item = ArcId>>(iter: I) -> Self {
        Announcement(iter.into_iter().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub winner: Winner,
    pub final_state: GameState,
}

/// The rule a player broke.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("the game is already over")]
    GameOver,
    #[error("arc {0} does not exist")]
    UnknownArc(ArcId),
    #[error("arc {0} was already delayed; each arc may be delayed at most once")]
    AlreadyDelayed(ArcId),
    #[error("arc {arc} does not leave the current vertex {position}")]
    NotAtPosition { arc: ArcId, position: VertexId },
    #[error("arc {arc} departed at {label}, before the current time {clock}")]
    Departed { arc: ArcId, label: Time, clock: Time },
    #[error("announcing {requested} delays exceeds the remaining budget {remaining}")]
    BudgetExceeded { requested: usize, remaining: usize },
    #[error("arc {0} is not a legal move")]
    IllegalMove(ArcId),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("traveler policy queried at a losing state")]
    TravelerLoses,
    #[error("adversary policy queried at a state the traveler wins")]
    AdversaryLoses,
    #[error("policy ran out of resources: {0}")]
    Resource(String),
    #[error("session aborted")]
    Aborted,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("round {round}: {violation}")]
    Referee { round: usize, violation: Violation },
    #[error("round {round}: {error}")]
    Policy { round: usize, error: PolicyError },
    #[error("game did not terminate within {0} rounds")]
    RoundCap(usize),
}

pub fn initial_state(inst: &RcgInstance) -> GameState {
    GameState { position: inst.start(), clock: 1, delays: inst.no_delays() }
}

pub fn remaining_budget(inst: &RcgInstance, state: &GameState) -> usize {
    inst.budget().saturating_sub(state.delays.len())
}

/// All legal announcements at a state: subsets of the available,
/// not-yet-delayed arcs leaving the current vertex, up to the remaining budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegalAnnouncements {
    candidates: Vec<ArcId>,
    max_size: usize,
}

impl LegalAnnouncements {
    pub fn candidates(&self) -> &[ArcId] {
        &self.candidates
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn contains(&self, ann: &Announcement) -> bool {
        ann.len() <= self.max_size && ann.iter().all(|a| self.candidates.contains(&a))
    }

    /// Canonical order: by size, then lexicographically on sorted ids. The
    /// empty announcement comes first.
    pub fn iter(&self) -> impl Iterator<Item = Announcement> + '_ {
        (0..=self.max_size)
            .flat_map(move |k| self.candidates.iter().copied().combinations(k))
            .map(Announcement::from_iter)
    }

    pub fn count(&self) -> usize {
        (0..=self.max_size).map(|k| binomial(self.candidates.len(), k)).sum()
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn legal_announcements(inst: &RcgInstance, state: &GameState) -> LegalAnnouncements {
    let candidates: Vec<ArcId> = inst
        .graph()
        .available_arcs(state.position, state.clock, &state.delays)
        .into_iter()
        .filter(|&a| !state.delays.contains(a))
        .collect();
    let max_size = remaining_budget(inst, state).min(candidates.len());
    LegalAnnouncements { candidates, max_size }
}

/// Checks an announcement and explains the first rule it breaks.
pub fn check_announcement(inst: &RcgInstance, state: &GameState, ann: &Announcement) -> Result<(), Violation> {
    if is_terminal(inst, state).is_some() {
        return Err(Violation::GameOver);
    }
    for id in ann.iter() {
        let arc = inst.graph().arc(id).map_err(|_| Violation::UnknownArc(id))?;
        if state.delays.contains(id) {
            return Err(Violation::AlreadyDelayed(id));
        }
        if arc.tail != state.position {
            return Err(Violation::NotAtPosition { arc: id, position: state.position });
        }
        if state.clock > arc.label {
            return Err(Violation::Departed { arc: id, label: arc.label, clock: state.clock });
        }
    }
    let remaining = remaining_budget(inst, state);
    if ann.len() > remaining {
        return Err(Violation::BudgetExceeded { requested: ann.len(), remaining });
    }
    Ok(())
}

/// Arcs the traveler may take after `ann`, ascending id.
pub fn legal_moves(inst: &RcgInstance, state: &GameState, ann: &Announcement) -> Vec<ArcId> {
    let delays = state.delays.union(ann.iter());
    inst.graph().available_arcs(state.position, state.clock, &delays)
}

pub fn step(inst: &RcgInstance, state: &GameState, ann: &Announcement, mv: ArcId) -> Result<GameState, Violation> {
    check_announcement(inst, state, ann)?;
    let delays = state.delays.union(ann.iter());
    let arc = inst.graph().arc(mv).map_err(|_| Violation::UnknownArc(mv))?;
    if arc.tail != state.position || state.clock > arc.effective_label(&delays) {
        return Err(Violation::IllegalMove(mv));
    }
    let clock = arc.arrival(&delays);
    debug_assert!(clock > state.clock);
    Ok(GameState { position: arc.head, clock, delays })
}

/// `Some` once the game is decided. A traveler with no available arc cannot
/// be rescued by any announcement since delays only postpone departures.
pub fn is_terminal(inst: &RcgInstance, state: &GameState) -> Option<Outcome> {
    let winner = if state.position == inst.target() {
        Winner::Traveler
    } else if inst.graph().available_arcs(state.position, state.clock, &state.delays).is_empty() {
        Winner::Adversary
    } else {
        return None;
    };
    Some(Outcome { winner, final_state: state.clone() })
}

pub trait TravelerPolicy {
    fn choose_move(&mut self, inst: &RcgInstance, state: &GameState, ann: &Announcement) -> Result<ArcId, PolicyError>;
}

pub trait AdversaryPolicy {
    fn announce(&mut self, inst: &RcgInstance, state: &GameState) -> Result<Announcement, PolicyError>;
}

impl<F> TravelerPolicy for F
where
    F: FnMut(&RcgInstance, &GameState, &Announcement) -> Result<ArcId, PolicyError>,
{
    fn choose_move(&mut self, inst: &RcgInstance, state: &GameState, ann: &Announcement) -> Result<ArcId, PolicyError> {
        self(inst, state, ann)
    }
}

/// Traveler that always takes the least-id legal arc.
#[derive(Clone, Copy, Debug, Default)]
pub struct GreedyTraveler;

impl TravelerPolicy for GreedyTraveler {
    fn choose_move(&mut self, inst: &RcgInstance, state: &GameState, ann: &Announcement) -> Result<ArcId, PolicyError> {
        // legal_moves is never empty at a non-terminal state
        Ok(legal_moves(inst, state, ann)[0])
    }
}

/// Adversary that never delays anything.
#[derive(Clone, Copy, Debug, Default)]
pub struct NullAdversary;

impl AdversaryPolicy for NullAdversary {
    fn announce(&mut self, _: &RcgInstance, _: &GameState) -> Result<Announcement, PolicyError> {
        Ok(Announcement::none())
    }
}

/// Upper bound on rounds; the clock strictly increases so real games stop far earlier.
pub fn round_cap(inst: &RcgInstance) -> usize {
    2 * inst.graph().arc_count() + 2
}

pub fn play(
    inst: &RcgInstance,
    traveler: &mut dyn TravelerPolicy,
    adversary: &mut dyn AdversaryPolicy,
) -> Result<(Outcome, Transcript), GameError> {
    let cap = round_cap(inst);
    let mut state = initial_state(inst);
    let mut rounds = Vec::new();
    loop {
        if let Some(outcome) = is_terminal(inst, &state) {
            let transcript = Transcript { rounds, outcome: outcome.winner };
            return Ok((outcome, transcript));
        }
        let round = rounds.len() + 1;
        if round > cap {
            return Err(GameError::RoundCap(cap));
        }
        let ann = adversary.announce(inst, &state).map_err(|error| GameError::Policy { round, error })?;
        check_announcement(inst, &state, &ann).map_err(|violation| GameError::Referee { round, violation })?;
        let mv = traveler.choose_move(inst, &state, &ann).map_err(|error| GameError::Policy { round, error })?;
        state = step(inst, &state, &ann, mv).map_err(|violation| GameError::Referee { round, violation })?;
        rounds.push(Round { announcement: ann.iter().collect(), moved: mv });
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("round {round}: {violation}")]
    Illegal { round: usize, violation: Violation },
    #[error("round {round}: announcement lists arc {arc} twice")]
    DuplicateInAnnouncement { round: usize, arc: ArcId },
    #[error("round {round}: game already ended before this round")]
    PastTerminal { round: usize },
    #[error("after round {round}: game is not over")]
    Unfinished { round: usize },
    #[error("after round {round}: recorded {recorded} but the game ends with {actual}")]
    OutcomeMismatch { round: usize, recorded: Winner, actual: Winner },
}

impl ReplayError {
    pub fn round(&self) -> usize {
        match *self {
            ReplayError::Illegal { round, .. }
            | ReplayError::DuplicateInAnnouncement { round, .. }
            | ReplayError::PastTerminal { round }
            | ReplayError::Unfinished { round }
            | ReplayError::OutcomeMismatch { round, .. } => round,
        }
    }
}

/// Re-executes a transcript and checks the recorded outcome.
pub fn replay(inst: &RcgInstance, transcript: &Transcript) -> Result<Outcome, ReplayError> {
    let mut state = initial_state(inst);
    for (k, r) in transcript.rounds.iter().enumerate() {
        let round = k + 1;
        match is_terminal(inst, &state).map(|o| o.winner) {
            Some(Winner::Traveler) => return Err(ReplayError::PastTerminal { round }),
            // stuck: whatever arc was recorded cannot be taken
            Some(Winner::Adversary) => {
                return Err(ReplayError::Illegal { round, violation: Violation::IllegalMove(r.moved) })
            }
            None => {}
        }
        let ann: Announcement = r.announcement.iter().copied().collect();
        if ann.len() != r.announcement.len() {
            let arc = r.announcement.iter().duplicates().next().copied().unwrap_or(ArcId(0));
            return Err(ReplayError::DuplicateInAnnouncement { round, arc });
        }
        state = step(inst, &state, &ann, r.moved).map_err(|violation| ReplayError::Illegal { round, violation })?;
    }
    let round = transcript.rounds.len();
    let outcome = is_terminal(inst, &state).ok_or(ReplayError::Unfinished { round })?;
    if outcome.winner != transcript.outcome {
        return Err(ReplayError::OutcomeMismatch { round, recorded: transcript.outcome, actual: outcome.winner });
    }
    Ok(outcome)
}
