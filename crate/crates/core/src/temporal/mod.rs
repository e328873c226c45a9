//! Temporal graphs with starting delays.
//!
//! An arc `(tail, head, label, traversal)` can be entered at any time up to and
//! including its label and reaches its head `label + traversal` time units
//! later. Delaying an arc shifts its label by the instance-wide delta; the
//! traversal time is never touched.

mod format;

pub use format::{parse_instance, serialize_instance, InstanceParseError, ParseErrorKind};

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Discrete timestamps and durations.
pub type Time = u64;

/// 1-based vertex index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

/// 1-based arc index, assigned in file order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

impl ArcId {
    fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl VertexId {
    fn index(self) -> usize {
        self.0 as usize - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("arc {0} does not exist")]
    UnknownArc(ArcId),
    #[error("vertex {vertex} is outside 1..={count}")]
    VertexOutOfRange { vertex: u32, count: u32 },
    #[error("arc {0} is a self-loop")]
    SelfLoop(ArcId),
    #[error("arc {arc} has non-positive {field}")]
    NonPositive { arc: ArcId, field: &'static str },
    #[error("a temporal graph needs at least one vertex")]
    NoVertices,
    #[error("delay magnitude must be positive")]
    ZeroDelta,
    #[error("budget {budget} exceeds the arc count {arcs}")]
    BudgetTooLarge { budget: usize, arcs: usize },
    #[error("arc {0}: label + traversal + delta overflows the time range")]
    TimeOverflow(ArcId),
    #[error("walk is empty")]
    EmptyWalk,
    #[error("arcs {prev} and {next} are not consecutive (head {head} != tail {tail})")]
    NotIncident { prev: ArcId, next: ArcId, head: VertexId, tail: VertexId },
}

/// Endpoint and timing data for one arc, before ids are assigned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcSpec {
    pub tail: VertexId,
    pub head: VertexId,
    pub label: Time,
    pub traversal: Time,
}

impl ArcSpec {
    pub fn new(tail: u32, head: u32, label: Time, traversal: Time) -> Self {
        ArcSpec { tail: VertexId(tail), head: VertexId(head), label, traversal }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TemporalArc {
    pub id: ArcId,
    pub tail: VertexId,
    pub head: VertexId,
    pub label: Time,
    pub traversal: Time,
}

impl TemporalArc {
    /// Label in the delayed graph: shifted by delta iff the arc is delayed.
    pub fn effective_label(&self, delays: &DelayRecord) -> Time {
        if delays.contains(self.id) {
            self.label + delays.delta
        } else {
            self.label
        }
    }

    /// Arrival time at the head in the delayed graph.
    pub fn arrival(&self, delays: &DelayRecord) -> Time {
        self.effective_label(delays) + self.traversal
    }
}

/// The set of arcs delayed so far together with the delay magnitude.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DelayRecord {
    delayed: BTreeSet<ArcId>,
    pub delta: Time,
}

impl DelayRecord {
    pub fn new(delta: Time) -> Self {
        DelayRecord { delayed: BTreeSet::new(), delta }
    }

    pub fn with_delayed(delta: Time, arcs: impl IntoIterator<Item = ArcId>) -> Self {
        DelayRecord { delayed: arcs.into_iter().collect(), delta }
    }

    pub fn contains(&self, arc: ArcId) -> bool {
        self.delayed.contains(&arc)
    }

    pub fn len(&self) -> usize {
        self.delayed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delayed.is_empty()
    }

    /// Delayed arcs in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.delayed.iter().copied()
    }

    pub fn delayed(&self) -> &BTreeSet<ArcId> {
        &self.delayed
    }

    /// Returns a new record with `arcs` added; the receiver is left untouched.
    pub fn union(&self, arcs: impl IntoIterator<Item = ArcId>) -> DelayRecord {
        let mut delayed = self.delayed.clone();
        delayed.extend(arcs);
        DelayRecord { delayed, delta: self.delta }
    }
}

/// Immutable vertex/arc store. Multi-arcs are allowed, self-loops are not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalGraph {
    vertex_count: u32,
    arcs: Vec<TemporalArc>,
    // out-arcs per vertex, ascending id
    out: Vec<Vec<ArcId>>,
}

impl TemporalGraph {
    pub fn new(vertex_count: u32, specs: impl IntoIterator<Item = ArcSpec>) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut arcs = Vec::new();
        let mut out = vec![Vec::new(); vertex_count as usize];
        for (k, spec) in specs.into_iter().enumerate() {
            let id = ArcId(k as u32 + 1);
            for v in [spec.tail, spec.head] {
                if v.0 == 0 || v.0 > vertex_count {
                    return Err(GraphError::VertexOutOfRange { vertex: v.0, count: vertex_count });
                }
            }
            if spec.tail == spec.head {
                return Err(GraphError::SelfLoop(id));
            }
            if spec.label == 0 {
                return Err(GraphError::NonPositive { arc: id, field: "label" });
            }
            if spec.traversal == 0 {
                return Err(GraphError::NonPositive { arc: id, field: "traversal" });
            }
            if spec.label.checked_add(spec.traversal).is_none() {
                return Err(GraphError::TimeOverflow(id));
            }
            out[spec.tail.index()].push(id);
            arcs.push(TemporalArc {
                id,
                tail: spec.tail,
                head: spec.head,
                label: spec.label,
                traversal: spec.traversal,
            });
        }
        Ok(TemporalGraph { vertex_count, arcs, out })
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[TemporalArc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> Result<&TemporalArc, GraphError> {
        if id.0 == 0 {
            return Err(GraphError::UnknownArc(id));
        }
        self.arcs.get(id.index()).ok_or(GraphError::UnknownArc(id))
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.0 >= 1 && v.0 <= self.vertex_count
    }

    /// Arcs leaving `v` in ascending id order, regardless of time.
    pub fn out_arcs(&self, v: VertexId) -> &[ArcId] {
        if self.contains_vertex(v) {
            &self.out[v.index()]
        } else {
            &[]
        }
    }

    pub fn effective_label(&self, id: ArcId, delays: &DelayRecord) -> Result<Time, GraphError> {
        Ok(self.arc(id)?.effective_label(delays))
    }

    pub fn arrival(&self, id: ArcId, delays: &DelayRecord) -> Result<Time, GraphError> {
        Ok(self.arc(id)?.arrival(delays))
    }

    /// Arcs leaving `v` that can still be entered at time `now`, ascending id.
    pub fn available_arcs(&self, v: VertexId, now: Time, delays: &DelayRecord) -> Vec<ArcId> {
        self.out_arcs(v).iter().copied().filter(|&id| now <= self.arcs[id.index()].effective_label(delays)).collect()
    }

    pub fn check_delays(&self, delays: &DelayRecord) -> Result<(), GraphError> {
        if delays.delta == 0 {
            return Err(GraphError::ZeroDelta);
        }
        for id in delays.iter() {
            self.arc(id)?;
        }
        Ok(())
    }

    /// Checks the arc sequence against the temporal-walk condition.
    pub fn validate_walk(&self, walk: &[ArcId], delays: &DelayRecord) -> Result<WalkCheck, GraphError> {
        let first = *walk.first().ok_or(GraphError::EmptyWalk)?;
        let mut prev = self.arc(first)?;
        let mut seen = BTreeSet::from([prev.tail, prev.head]);
        let mut distinct = true;
        let mut temporal = true;
        for &id in &walk[1..] {
            let next = self.arc(id)?;
            if prev.head != next.tail {
                return Err(GraphError::NotIncident { prev: prev.id, next: next.id, head: prev.head, tail: next.tail });
            }
            if prev.arrival(delays) > next.effective_label(delays) {
                temporal = false;
            }
            distinct &= seen.insert(next.head);
            prev = next;
        }
        Ok(WalkCheck { temporal, path: temporal && distinct })
    }
}

/// Result of [`TemporalGraph::validate_walk`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkCheck {
    /// Every arc is entered no later than its effective label.
    pub temporal: bool,
    /// A temporal walk whose vertices are pairwise distinct.
    pub path: bool,
}

/// A game instance: graph, start, target, adversary budget and delay magnitude.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RcgInstance {
    graph: TemporalGraph,
    start: VertexId,
    target: VertexId,
    budget: usize,
    delta: Time,
}

impl RcgInstance {
    pub fn new(
        graph: TemporalGraph,
        start: VertexId,
        target: VertexId,
        budget: usize,
        delta: Time,
    ) -> Result<Self, GraphError> {
        for v in [start, target] {
            if !graph.contains_vertex(v) {
                return Err(GraphError::VertexOutOfRange { vertex: v.0, count: graph.vertex_count() });
            }
        }
        if delta == 0 {
            return Err(GraphError::ZeroDelta);
        }
        if budget > graph.arc_count() {
            return Err(GraphError::BudgetTooLarge { budget, arcs: graph.arc_count() });
        }
        for arc in graph.arcs() {
            if arc.label.checked_add(arc.traversal).and_then(|t| t.checked_add(delta)).is_none() {
                return Err(GraphError::TimeOverflow(arc.id));
            }
        }
        Ok(RcgInstance { graph, start, target, budget, delta })
    }

    pub fn graph(&self) -> &TemporalGraph {
        &self.graph
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn delta(&self) -> Time {
        self.delta
    }

    /// Same instance with a different budget.
    pub fn with_budget(&self, budget: usize) -> Result<Self, GraphError> {
        RcgInstance::new(self.graph.clone(), self.start, self.target, budget, self.delta)
    }

    pub fn no_delays(&self) -> DelayRecord {
        DelayRecord::new(self.delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // a1 = (s -> u, t=1, λ=1), a2 = (u -> z, t=2, λ=1)
    fn chain() -> TemporalGraph {
        TemporalGraph::new(3, [ArcSpec::new(1, 2, 1, 1), ArcSpec::new(2, 3, 2, 1)]).unwrap()
    }

    fn arc(label: Time, traversal: Time) -> TemporalArc {
        TemporalArc { id: ArcId(1), tail: VertexId(1), head: VertexId(2), label, traversal }
    }

    #[test]
    fn effective_label_shifts_only_delayed_arcs() {
        assert_eq!(arc(5, 1).effective_label(&DelayRecord::new(1)), 5);
        assert_eq!(arc(5, 1).effective_label(&DelayRecord::with_delayed(1, [ArcId(1)])), 6);
        assert_eq!(arc(2, 1).effective_label(&DelayRecord::with_delayed(3, [ArcId(1)])), 5);
    }

    #[test]
    fn arrival_adds_traversal() {
        assert_eq!(arc(1, 1).arrival(&DelayRecord::new(1)), 2);
        assert_eq!(arc(1, 1).arrival(&DelayRecord::with_delayed(1, [ArcId(1)])), 3);
        assert_eq!(arc(7, 2).arrival(&DelayRecord::with_delayed(4, [ArcId(1)])), 13);
    }

    #[test]
    fn unknown_arc_is_structural_error() {
        let g = chain();
        let d = DelayRecord::new(1);
        assert_eq!(g.effective_label(ArcId(3), &d), Err(GraphError::UnknownArc(ArcId(3))));
        assert_eq!(g.arrival(ArcId(0), &d), Err(GraphError::UnknownArc(ArcId(0))));
        assert!(g.check_delays(&DelayRecord::with_delayed(1, [ArcId(9)])).is_err());
    }

    #[test]
    fn available_arcs_filters_by_effective_label() {
        let g = chain();
        let u = VertexId(2);
        assert_eq!(g.available_arcs(u, 2, &DelayRecord::new(1)), vec![ArcId(2)]);
        assert!(g.available_arcs(u, 3, &DelayRecord::new(1)).is_empty());
        assert_eq!(g.available_arcs(u, 3, &DelayRecord::with_delayed(1, [ArcId(2)])), vec![ArcId(2)]);
    }

    #[test]
    fn available_arcs_keeps_ascending_ids_with_multi_arcs() {
        let g = TemporalGraph::new(2, [ArcSpec::new(1, 2, 4, 1), ArcSpec::new(1, 2, 2, 1), ArcSpec::new(1, 2, 9, 3)])
            .unwrap();
        let ids = g.available_arcs(VertexId(1), 3, &DelayRecord::new(1));
        assert_eq!(ids, vec![ArcId(1), ArcId(3)]);
    }

    #[test]
    fn walk_validation() {
        let g = chain();
        let none = DelayRecord::new(1);
        let w = g.validate_walk(&[ArcId(1), ArcId(2)], &none).unwrap();
        assert!(w.temporal && w.path);
        let late = DelayRecord::with_delayed(1, [ArcId(1)]);
        assert!(!g.validate_walk(&[ArcId(1), ArcId(2)], &late).unwrap().temporal);
        assert!(g.validate_walk(&[ArcId(1)], &none).unwrap().temporal);
        assert_eq!(g.validate_walk(&[], &none), Err(GraphError::EmptyWalk));
        assert!(matches!(g.validate_walk(&[ArcId(2), ArcId(1)], &none), Err(GraphError::NotIncident { .. })));
    }

    #[test]
    fn walk_revisiting_a_vertex_is_not_a_path() {
        let g = TemporalGraph::new(2, [ArcSpec::new(1, 2, 1, 1), ArcSpec::new(2, 1, 2, 1)]).unwrap();
        let w = g.validate_walk(&[ArcId(1), ArcId(2)], &DelayRecord::new(1)).unwrap();
        assert!(w.temporal);
        assert!(!w.path);
    }

    #[test]
    fn construction_rejects_bad_arcs() {
        assert_eq!(TemporalGraph::new(2, [ArcSpec::new(1, 1, 1, 1)]), Err(GraphError::SelfLoop(ArcId(1))));
        assert!(matches!(
            TemporalGraph::new(2, [ArcSpec::new(1, 2, 0, 1)]),
            Err(GraphError::NonPositive { field: "label", .. })
        ));
        assert!(matches!(
            TemporalGraph::new(2, [ArcSpec::new(1, 2, 1, 0)]),
            Err(GraphError::NonPositive { field: "traversal", .. })
        ));
        assert!(matches!(
            TemporalGraph::new(2, [ArcSpec::new(1, 3, 1, 1)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, .. })
        ));
    }

    #[test]
    fn instance_budget_bounded_by_arcs() {
        let err = RcgInstance::new(chain(), VertexId(1), VertexId(3), 5, 1).unwrap_err();
        assert_eq!(err, GraphError::BudgetTooLarge { budget: 5, arcs: 2 });
        assert!(RcgInstance::new(chain(), VertexId(1), VertexId(3), 2, 1).is_ok());
        assert!(RcgInstance::new(chain(), VertexId(1), VertexId(1), 0, 1).is_ok());
    }
}
