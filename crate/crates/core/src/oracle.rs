//! Brute-force ground truth.
//!
//! Everything here is written against the referee in [`crate::game`] alone:
//! no relevant-time set, no memo table, no solver code. Agreement between
//! these functions and [`crate::solver`] is what the test suites check.

use itertools::Itertools;
use thiserror::Error;

use crate::game::{
    initial_state, is_terminal, legal_announcements, legal_moves, step, AdversaryPolicy, Announcement, GameState,
    PolicyError, Round, TravelerPolicy, Violation, Winner,
};
use crate::reduction::{Qbf, Quantifier};
use crate::temporal::{ArcSpec, RcgInstance, TemporalGraph, Time, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guard {
    pub max_arcs: usize,
    pub max_budget: usize,
}

impl Default for Guard {
    fn default() -> Self {
        Guard { max_arcs: 12, max_budget: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {arcs} arcs and budget {budget}; the oracle accepts at most {} arcs and budget {}", .guard.max_arcs, .guard.max_budget)]
    TooLarge { arcs: usize, budget: usize, guard: Guard },
    #[error("formula has {0} variables; the evaluator accepts at most {MAX_QBF_VARIABLES}")]
    TooManyVariables(usize),
}

pub const MAX_QBF_VARIABLES: usize = 20;

pub fn minimax(inst: &RcgInstance) -> Result<Winner, OracleError> {
    minimax_with(inst, Guard::default())
}

pub fn minimax_with(inst: &RcgInstance, guard: Guard) -> Result<Winner, OracleError> {
    let won = minimax_state(inst, &initial_state(inst), guard)?;
    Ok(if won { Winner::Traveler } else { Winner::Adversary })
}

/// Whether the traveler wins from `state`, by full alternation over every
/// legal announcement and move.
pub fn minimax_state(inst: &RcgInstance, state: &GameState, guard: Guard) -> Result<bool, OracleError> {
    let (arcs, budget) = (inst.graph().arc_count(), inst.budget());
    if arcs > guard.max_arcs || budget > guard.max_budget {
        return Err(OracleError::TooLarge { arcs, budget, guard });
    }
    Ok(wins(inst, state))
}

fn wins(inst: &RcgInstance, state: &GameState) -> bool {
    if let Some(out) = is_terminal(inst, state) {
        return out.winner == Winner::Traveler;
    }
    legal_announcements(inst, state).iter().all(|ann| {
        legal_moves(inst, state, &ann)
            .into_iter()
            .any(|mv| wins(inst, &step(inst, state, &ann, mv).expect("referee accepts its own legal moves")))
    })
}

pub fn qbf_eval(qbf: &Qbf) -> Result<bool, OracleError> {
    let n = qbf.variable_count();
    if n > MAX_QBF_VARIABLES {
        return Err(OracleError::TooManyVariables(n));
    }
    let mut values = vec![false; qbf.prefix().iter().map(|&(_, v)| v as usize).max().unwrap_or(0) + 1];
    Ok(expand(qbf, 0, &mut values))
}

fn expand(qbf: &Qbf, depth: usize, values: &mut [bool]) -> bool {
    let Some(&(q, var)) = qbf.prefix().get(depth) else {
        return qbf.clauses().iter().all(|c| c.iter().any(|&lit| values[lit.unsigned_abs() as usize] == (lit > 0)));
    };
    let mut branch = |value: bool| {
        values[var as usize] = value;
        expand(qbf, depth + 1, values)
    };
    match q {
        Quantifier::Exists => branch(false) || branch(true),
        Quantifier::Forall => branch(false) && branch(true),
    }
}

/// Bounds for [`enumerate_instances`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_vertices: u32,
    pub max_arcs: usize,
    pub labels: Vec<Time>,
    pub traversals: Vec<Time>,
    pub max_budget: usize,
    pub deltas: Vec<Time>,
}

impl Limits {
    /// V ≤ 3, A ≤ 3, labels and traversals in {1, 2}, x ≤ 2, δ = 1.
    pub fn small() -> Self {
        Limits {
            max_vertices: 3,
            max_arcs: 3,
            labels: vec![1, 2],
            traversals: vec![1, 2],
            max_budget: 2,
            deltas: vec![1],
        }
    }
}

/// Every valid instance within `limits`, in a fixed order: by vertex count,
/// arc count, arc sequence (odometer over tail, head, label, traversal with
/// the last arc varying fastest), δ, budget, start, target. Arc sequences
/// are ordered, so instances differing only in arc numbering all appear.
pub fn enumerate_instances(limits: &Limits) -> impl Iterator<Item = RcgInstance> + '_ {
    (1..=limits.max_vertices).flat_map(move |v| {
        let choices: Vec<ArcSpec> = (1..=v)
            .cartesian_product(1..=v)
            .filter(|(t, h)| t != h)
            .cartesian_product(limits.labels.iter().copied().cartesian_product(limits.traversals.iter().copied()))
            .map(|((t, h), (l, tr))| ArcSpec::new(t, h, l, tr))
            .collect();
        let max_arcs = if choices.is_empty() { 0 } else { limits.max_arcs };
        (0..=max_arcs).flat_map(move |a| arc_sequences(choices.clone(), a)).flat_map(move |specs| {
            let graph = TemporalGraph::new(v, specs).expect("enumerated arcs are valid");
            let budgets = 0..=limits.max_budget.min(graph.arc_count());
            limits.deltas.iter().copied().cartesian_product(budgets).flat_map(move |(delta, budget)| {
                let graph = graph.clone();
                (1..=v).cartesian_product(1..=v).map(move |(s, z)| {
                    RcgInstance::new(graph.clone(), VertexId(s), VertexId(z), budget, delta)
                        .expect("enumerated instance is valid")
                })
            })
        })
    })
}

fn arc_sequences(choices: Vec<ArcSpec>, len: usize) -> Box<dyn Iterator<Item = Vec<ArcSpec>> + Send> {
    if len == 0 {
        return Box::new(std::iter::once(Vec::new()));
    }
    Box::new(std::iter::repeat_n(choices, len).multi_cartesian_product())
}

/// A way to beat a policy, or a policy that broke the rules.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("policy loses after {} rounds", .rounds.len())]
    Counterexample { rounds: Vec<Round> },
    #[error("policy failed after {} rounds: {error}", .rounds.len())]
    Policy { rounds: Vec<Round>, error: PolicyError },
    #[error("policy made an illegal choice after {} rounds: {violation}", .rounds.len())]
    Illegal { rounds: Vec<Round>, violation: Violation },
}

/// Plays `policy` against every adversary behavior. Succeeds iff every
/// branch reaches the target.
pub fn certify_traveler_policy(inst: &RcgInstance, policy: &mut dyn TravelerPolicy) -> Result<(), CertifyError> {
    let mut rounds = Vec::new();
    certify_traveler(inst, &initial_state(inst), policy, &mut rounds)
}

fn certify_traveler(
    inst: &RcgInstance,
    state: &GameState,
    policy: &mut dyn TravelerPolicy,
    rounds: &mut Vec<Round>,
) -> Result<(), CertifyError> {
    match is_terminal(inst, state) {
        Some(out) if out.winner == Winner::Traveler => return Ok(()),
        Some(_) => return Err(CertifyError::Counterexample { rounds: rounds.clone() }),
        None => {}
    }
    for ann in legal_announcements(inst, state).iter() {
        let mv = policy
            .choose_move(inst, state, &ann)
            .map_err(|error| CertifyError::Policy { rounds: rounds.clone(), error })?;
        let next = step(inst, state, &ann, mv)
            .map_err(|violation| CertifyError::Illegal { rounds: rounds.clone(), violation })?;
        rounds.push(Round { announcement: ann.iter().collect(), moved: mv });
        certify_traveler(inst, &next, policy, rounds)?;
        rounds.pop();
    }
    Ok(())
}

/// Plays `policy` against every traveler behavior. Succeeds iff every branch
/// strands the traveler.
pub fn certify_adversary_policy(inst: &RcgInstance, policy: &mut dyn AdversaryPolicy) -> Result<(), CertifyError> {
    let mut rounds = Vec::new();
    certify_adversary(inst, &initial_state(inst), policy, &mut rounds)
}

fn certify_adversary(
    inst: &RcgInstance,
    state: &GameState,
    policy: &mut dyn AdversaryPolicy,
    rounds: &mut Vec<Round>,
) -> Result<(), CertifyError> {
    match is_terminal(inst, state) {
        Some(out) if out.winner == Winner::Adversary => return Ok(()),
        Some(_) => return Err(CertifyError::Counterexample { rounds: rounds.clone() }),
        None => {}
    }
    let ann: Announcement =
        policy.announce(inst, state).map_err(|error| CertifyError::Policy { rounds: rounds.clone(), error })?;
    for mv in legal_moves(inst, state, &ann) {
        let next = step(inst, state, &ann, mv)
            .map_err(|violation| CertifyError::Illegal { rounds: rounds.clone(), violation })?;
        rounds.push(Round { announcement: ann.iter().collect(), moved: mv });
        certify_adversary(inst, &next, policy, rounds)?;
        rounds.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{GreedyTraveler, NullAdversary};
    use crate::temporal::parse_instance;
    use Quantifier::*;

    fn chain(budget: usize, second_label: Time) -> RcgInstance {
        parse_instance(&format!("p rcg 3 2 1 {budget}\ns 1\nz 3\na 1 2 1 1\na 2 3 {second_label} 1\n")).unwrap()
    }

    #[test]
    fn minimax_on_chains() {
        assert_eq!(minimax(&chain(1, 2)), Ok(Winner::Adversary));
        assert_eq!(minimax(&chain(0, 2)), Ok(Winner::Traveler));
        assert_eq!(minimax(&chain(1, 3)), Ok(Winner::Traveler));
    }

    #[test]
    fn minimax_from_inner_states() {
        use crate::temporal::{ArcId, DelayRecord};
        let inst = chain(1, 2);
        let at = |clock| GameState { position: VertexId(2), clock, delays: DelayRecord::with_delayed(1, [ArcId(1)]) };
        assert_eq!(minimax_state(&inst, &at(2), Guard::default()), Ok(true));
        assert_eq!(minimax_state(&inst, &at(3), Guard::default()), Ok(false));
    }

    #[test]
    fn guard_rejects_large_instances() {
        let tight = Guard { max_arcs: 1, max_budget: 4 };
        assert!(matches!(minimax_with(&chain(1, 2), tight), Err(OracleError::TooLarge { arcs: 2, .. })));
        let no_budget = Guard { max_arcs: 12, max_budget: 0 };
        assert!(minimax_with(&chain(1, 2), no_budget).is_err());
    }

    #[test]
    fn qbf_examples() {
        let q = |prefix: Vec<(Quantifier, u32)>, clauses: Vec<Vec<i32>>| Qbf::new(prefix, clauses).unwrap();
        assert_eq!(qbf_eval(&q(vec![(Exists, 1)], vec![vec![1]])), Ok(true));
        assert_eq!(qbf_eval(&q(vec![(Forall, 1)], vec![vec![1]])), Ok(false));
        assert_eq!(qbf_eval(&q(vec![(Exists, 1), (Forall, 2)], vec![vec![1, 2]])), Ok(true));
        assert_eq!(qbf_eval(&q(vec![(Forall, 1), (Exists, 2)], vec![vec![1, 2]])), Ok(true));
        assert_eq!(qbf_eval(&q(vec![(Forall, 1), (Exists, 2)], vec![vec![1], vec![2]])), Ok(false));
        let figure =
            q(vec![(Exists, 1), (Forall, 2), (Exists, 3)], vec![vec![1, -2, -3], vec![-1, 2, -3], vec![1, -2, 3]]);
        assert_eq!(qbf_eval(&figure), Ok(true));
    }

    #[test]
    fn qbf_size_guard() {
        let prefix: Vec<_> = (1..=21).map(|v| (Exists, v)).collect();
        let big = Qbf::new(prefix, vec![vec![1]]).unwrap();
        assert_eq!(qbf_eval(&big), Err(OracleError::TooManyVariables(21)));
    }

    #[test]
    fn tiny_enumeration() {
        let limits = Limits {
            max_vertices: 2,
            max_arcs: 1,
            labels: vec![1],
            traversals: vec![1],
            max_budget: 1,
            deltas: vec![1],
        };
        let all: Vec<RcgInstance> = enumerate_instances(&limits).collect();
        // V=1: one empty instance; V=2: (1 + 2 arcs × 2 budgets) × 4 endpoint pairs
        assert_eq!(all.len(), 1 + 5 * 4);
        let one_arc = |budget| {
            all.iter().any(|i| {
                i.graph().arc_count() == 1
                    && i.budget() == budget
                    && i.start() != i.target()
                    && i.graph().arcs()[0].tail == i.start()
                    && i.graph().arcs()[0].head == i.target()
            })
        };
        assert!(one_arc(0) && one_arc(1));
        assert!(all.iter().all(|i| i.graph().arcs().iter().all(|a| a.tail != a.head)));
    }

    #[test]
    fn enumeration_order_is_stable() {
        let first: Vec<String> =
            enumerate_instances(&Limits::small()).take(50).map(|i| crate::temporal::serialize_instance(&i)).collect();
        let again: Vec<String> =
            enumerate_instances(&Limits::small()).take(50).map(|i| crate::temporal::serialize_instance(&i)).collect();
        assert_eq!(first, again);
    }

    #[test]
    fn certification_catches_bad_policies() {
        let inst = chain(1, 2);
        let err = certify_traveler_policy(&inst, &mut GreedyTraveler).unwrap_err();
        assert!(matches!(err, CertifyError::Counterexample { ref rounds } if rounds.len() == 1));
        assert!(certify_traveler_policy(&chain(0, 2), &mut GreedyTraveler).is_ok());
        assert!(certify_adversary_policy(&chain(0, 2), &mut NullAdversary).is_err());
        assert!(certify_adversary_policy(&inst, &mut NullAdversary).is_err());
    }
}
