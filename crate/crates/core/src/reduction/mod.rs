//! Compiles a prenex-CNF formula into a game instance the traveler wins
//! exactly when the formula is true.
//!
//! Layout, with `n` variables, `m` clauses, `δ = 1` and every traversal 1:
//!
//! * Assignment phase. Variable `i` gets a gadget from `s_i` to `s_{i+1}`
//!   with a positive and a negative path. Every inner path vertex `u^j` owns a
//!   literal arc `u^j -> w^j` departing at the start of clause `j`, and `w^j`
//!   an escape arc to the target one unit later. The adversary must delay the
//!   literal arc at every path vertex the traveler passes, or the traveler
//!   escapes, so the chosen side ends up fully delayed. Path departures are two
//!   units apart. A universal gadget has one extra pair on the positive side
//!   and departs one unit earlier after its first arc, so delaying the first
//!   positive arc alone bars that side: the adversary picks the value.
//! * Bridge. From `s_{n+1}` one arc goes to the first clause node and one to a
//!   vertex `v` with an escape arc; the last unit of budget must be spent on
//!   the arc to `v`.
//! * Evaluation phase. Clause `j` offers one route `c_j -> u -> w -> c_{j+1}`
//!   per literal, through that literal's arc, which is only catchable if it was
//!   delayed during the assignment phase.
//!
//! The budget is `n·m + |∀| + 1` by default: `m` delays per existential
//! gadget, `m + 1` per universal one and one at the bridge. The looser value
//! `n·(m + |∀|) + 1` is available through [`BudgetRule::Loose`].

mod qbf;

pub use qbf::{parse_qdimacs, Qbf, QbfError, QdimacsError, QdimacsErrorKind, Quantifier};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::game::Transcript;
use crate::temporal::{ArcId, ArcSpec, RcgInstance, TemporalGraph, Time, VertexId};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BudgetRule {
    /// `n·m + |∀| + 1`
    #[default]
    Tight,
    /// `n·(m + |∀|) + 1`
    Loose,
}

impl BudgetRule {
    pub fn budget(self, n: usize, m: usize, universals: usize) -> usize {
        match self {
            BudgetRule::Tight => n * m + universals + 1,
            BudgetRule::Loose => n * (m + universals) + 1,
        }
    }
}

/// Departure schedule of the gadgets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Schedule {
    pub variables: usize,
    pub clauses: usize,
}

impl Schedule {
    /// Departure time at `s_i`, `i` in `1..=n+1`.
    pub fn variable_start(&self, i: usize) -> Time {
        1 + (i as Time - 1) * 2 * (self.clauses as Time + 2)
    }

    /// Departure time at `c_j`, `j` in `1..=m+1`.
    pub fn clause_start(&self, j: usize) -> Time {
        self.variable_start(self.variables + 1) + 1 + 3 * (j as Time - 1)
    }
}

/// One side (positive or negative) of a variable gadget.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Side {
    /// Inner path vertices `u^1..u^k`.
    pub path_vertices: Vec<VertexId>,
    /// `k + 1` arcs from the gadget entry through `u^1..u^k` to the exit.
    pub path_arcs: Vec<ArcId>,
    /// `u^j -> w^j`
    pub literal_arcs: Vec<ArcId>,
    pub escape_vertices: Vec<VertexId>,
    /// `w^j -> z`
    pub escape_arcs: Vec<ArcId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableGadget {
    pub variable: u32,
    pub quantifier: Quantifier,
    pub entry: VertexId,
    pub exit: VertexId,
    pub positive: Side,
    pub negative: Side,
}

impl VariableGadget {
    pub fn side(&self, positive: bool) -> &Side {
        if positive {
            &self.positive
        } else {
            &self.negative
        }
    }

    pub fn arcs(&self) -> impl Iterator<Item = ArcId> + '_ {
        [&self.positive, &self.negative]
            .into_iter()
            .flat_map(|s| s.path_arcs.iter().chain(&s.literal_arcs).chain(&s.escape_arcs).copied())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseGadget {
    pub entry: VertexId,
    pub exit: VertexId,
    pub literals: Vec<i32>,
    /// Per literal: `c_j ->` tail of its literal arc.
    pub entry_arcs: Vec<ArcId>,
    /// Per literal: head of its literal arc `-> c_{j+1}`.
    pub exit_arcs: Vec<ArcId>,
    /// Per literal: the variable-gadget arc the route passes through.
    pub literal_arcs: Vec<ArcId>,
}

/// Where every gadget landed in the emitted instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetMap {
    pub schedule: Schedule,
    pub variables: Vec<VariableGadget>,
    pub clauses: Vec<ClauseGadget>,
    pub start: VertexId,
    pub target: VertexId,
    /// `s_{n+1}`
    pub assignment_exit: VertexId,
    /// `s_{n+1} -> c_1`
    pub clause_bridge: ArcId,
    /// `s_{n+1} -> v`
    pub escape_bridge: ArcId,
    /// `v`
    pub bridge_vertex: VertexId,
    /// `v -> z`
    pub bridge_escape: ArcId,
    /// `c_{m+1}`
    pub final_node: VertexId,
    /// `c_{m+1} -> z`
    pub final_arc: ArcId,
}

struct Builder {
    vertices: u32,
    arcs: Vec<ArcSpec>,
}

impl Builder {
    fn vertex(&mut self) -> VertexId {
        self.vertices += 1;
        VertexId(self.vertices)
    }

    fn arc(&mut self, tail: VertexId, head: VertexId, label: Time) -> ArcId {
        self.arcs.push(ArcSpec { tail, head, label, traversal: 1 });
        ArcId(self.arcs.len() as u32)
    }
}

pub fn reduce(qbf: &Qbf) -> (RcgInstance, GadgetMap) {
    reduce_with(qbf, BudgetRule::Tight)
}

pub fn reduce_with(qbf: &Qbf, rule: BudgetRule) -> (RcgInstance, GadgetMap) {
    let n = qbf.variable_count();
    let m = qbf.clause_count();
    let schedule = Schedule { variables: n, clauses: m };
    let mut b = Builder { vertices: 0, arcs: Vec::new() };

    let s: Vec<VertexId> = (0..=n).map(|_| b.vertex()).collect();
    let bridge_vertex = b.vertex();
    let c: Vec<VertexId> = (0..=m).map(|_| b.vertex()).collect();
    let z = b.vertex();

    let mut variables = Vec::with_capacity(n);
    for (i, &(quantifier, variable)) in qbf.prefix().iter().enumerate() {
        let (entry, exit) = (s[i], s[i + 1]);
        let t0 = schedule.variable_start(i + 1);
        let universal = quantifier == Quantifier::Forall;

        let mut side = |extra_pair: bool, early: bool| {
            let pairs = if extra_pair { m + 1 } else { m };
            let mut side = Side::default();
            for j in 1..=pairs {
                let u = b.vertex();
                let w = b.vertex();
                side.path_vertices.push(u);
                side.escape_vertices.push(w);
                let t = schedule.clause_start(j);
                side.literal_arcs.push(b.arc(u, w, t));
                side.escape_arcs.push(b.arc(w, z, t + 1));
            }
            let stops: Vec<VertexId> =
                std::iter::once(entry).chain(side.path_vertices.iter().copied()).chain([exit]).collect();
            for (k, pair) in stops.windows(2).enumerate() {
                let k = k as Time;
                let label = if early && k > 0 { t0 + 2 * k - 1 } else { t0 + 2 * k };
                side.path_arcs.push(b.arc(pair[0], pair[1], label));
            }
            side
        };
        let positive = side(universal, universal);
        let negative = side(false, false);
        variables.push(VariableGadget { variable, quantifier, entry, exit, positive, negative });
    }

    let t_exit = schedule.variable_start(n + 1);
    let clause_bridge = b.arc(s[n], c[0], t_exit);
    let escape_bridge = b.arc(s[n], bridge_vertex, t_exit);
    let bridge_escape = b.arc(bridge_vertex, z, t_exit + 1);

    let mut clauses = Vec::with_capacity(m);
    for (j, lits) in qbf.clauses().iter().enumerate() {
        let t = schedule.clause_start(j + 1);
        let mut gadget = ClauseGadget {
            entry: c[j],
            exit: c[j + 1],
            literals: lits.clone(),
            entry_arcs: Vec::new(),
            exit_arcs: Vec::new(),
            literal_arcs: Vec::new(),
        };
        for &lit in lits {
            let i = qbf.position(lit.unsigned_abs()).expect("literal bound by prefix");
            let side = variables[i].side(lit > 0);
            let (u, w) = (side.path_vertices[j], side.escape_vertices[j]);
            gadget.literal_arcs.push(side.literal_arcs[j]);
            gadget.entry_arcs.push(b.arc(c[j], u, t));
            gadget.exit_arcs.push(b.arc(w, c[j + 1], t + 2));
        }
        clauses.push(gadget);
    }
    let final_arc = b.arc(c[m], z, schedule.clause_start(m + 1));

    let budget = rule.budget(n, m, qbf.universal_count());
    let graph = TemporalGraph::new(b.vertices, b.arcs).expect("gadget arcs are well formed");
    let inst = RcgInstance::new(graph, s[0], z, budget, 1).expect("budget is below the arc count");
    let map = GadgetMap {
        schedule,
        variables,
        clauses,
        start: s[0],
        target: z,
        assignment_exit: s[n],
        clause_bridge,
        escape_bridge,
        bridge_vertex,
        bridge_escape,
        final_node: c[m],
        final_arc,
    };
    (inst, map)
}

impl GadgetMap {
    /// Every arc id the map mentions, in map order (duplicates included).
    pub fn arc_ids(&self) -> Vec<ArcId> {
        let mut ids: Vec<ArcId> = self.variables.iter().flat_map(|g| g.arcs()).collect();
        ids.extend([self.clause_bridge, self.escape_bridge, self.bridge_escape]);
        for c in &self.clauses {
            ids.extend(c.entry_arcs.iter().chain(&c.exit_arcs));
        }
        ids.push(self.final_arc);
        ids
    }

    /// Plain-text map, one entity per line:
    /// `var <i> <role> <ids...>`, `clause <j> <role> <ids...>`, `special <name> <id>`.
    pub fn to_map_text(&self) -> String {
        fn line<T: Copy>(out: &mut String, kind: &str, idx: usize, role: &str, ids: &[T], f: impl Fn(T) -> i64) {
            let _ = write!(out, "{kind} {idx} {role}");
            for &x in ids {
                let _ = write!(out, " {}", f(x));
            }
            out.push('\n');
        }
        let v = |x: VertexId| x.0 as i64;
        let a = |x: ArcId| x.0 as i64;
        let mut out = String::new();
        for (i, g) in self.variables.iter().enumerate() {
            let i = i + 1;
            line(&mut out, "var", i, "variable", &[g.variable], |x| x as i64);
            let q = if g.quantifier == Quantifier::Forall { 1 } else { 0 };
            line(&mut out, "var", i, "universal", &[q], |x| x);
            line(&mut out, "var", i, "entry", &[g.entry], v);
            line(&mut out, "var", i, "exit", &[g.exit], v);
            for (name, side) in [("pos", &g.positive), ("neg", &g.negative)] {
                line(&mut out, "var", i, &format!("{name}-path"), &side.path_arcs, a);
                line(&mut out, "var", i, &format!("{name}-path-vertices"), &side.path_vertices, v);
                line(&mut out, "var", i, &format!("{name}-literal"), &side.literal_arcs, a);
                line(&mut out, "var", i, &format!("{name}-escape-vertices"), &side.escape_vertices, v);
                line(&mut out, "var", i, &format!("{name}-escape"), &side.escape_arcs, a);
            }
        }
        for (j, c) in self.clauses.iter().enumerate() {
            let j = j + 1;
            line(&mut out, "clause", j, "entry", &[c.entry], v);
            line(&mut out, "clause", j, "exit", &[c.exit], v);
            line(&mut out, "clause", j, "literals", &c.literals, |x| x as i64);
            line(&mut out, "clause", j, "entry-arcs", &c.entry_arcs, a);
            line(&mut out, "clause", j, "exit-arcs", &c.exit_arcs, a);
            line(&mut out, "clause", j, "literal-arcs", &c.literal_arcs, a);
        }
        for (name, id) in [
            ("start", self.start.0),
            ("target", self.target.0),
            ("assignment-exit", self.assignment_exit.0),
            ("clause-bridge", self.clause_bridge.0),
            ("escape-bridge", self.escape_bridge.0),
            ("bridge-vertex", self.bridge_vertex.0),
            ("bridge-escape", self.bridge_escape.0),
            ("final-node", self.final_node.0),
            ("final-arc", self.final_arc.0),
        ] {
            let _ = writeln!(out, "special {name} {id}");
        }
        out
    }

    pub fn parse_map_text(text: &str) -> Result<GadgetMap, MapParseError> {
        let mut vars: BTreeMap<usize, BTreeMap<String, Vec<i64>>> = BTreeMap::new();
        let mut clauses: BTreeMap<usize, BTreeMap<String, Vec<i64>>> = BTreeMap::new();
        let mut special: BTreeMap<String, i64> = BTreeMap::new();
        let mut last = 1;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last = line;
            let toks: Vec<&str> = raw.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            let fail = |message: &str| MapParseError { line, message: message.to_string() };
            let nums = |toks: &[&str]| -> Result<Vec<i64>, MapParseError> {
                toks.iter().map(|t| t.parse::<i64>().map_err(|_| fail(&format!("`{t}` is not an integer")))).collect()
            };
            match toks[0] {
                "var" | "clause" if toks.len() >= 3 => {
                    let k: usize = toks[1].parse().map_err(|_| fail("bad index"))?;
                    let table = if toks[0] == "var" { &mut vars } else { &mut clauses };
                    let roles = table.entry(k).or_default();
                    if roles.insert(toks[2].to_string(), nums(&toks[3..])?).is_some() {
                        return Err(fail("duplicate role"));
                    }
                }
                "special" if toks.len() == 3 => {
                    special.insert(toks[1].to_string(), nums(&toks[2..])?[0]);
                }
                _ => return Err(fail("expected `var`, `clause` or `special` line")),
            }
        }
        let fail = |message: String| MapParseError { line: last, message };
        let get = |roles: &BTreeMap<String, Vec<i64>>, role: &str| -> Result<Vec<i64>, MapParseError> {
            roles.get(role).cloned().ok_or_else(|| fail(format!("missing role `{role}`")))
        };
        let one = |roles: &BTreeMap<String, Vec<i64>>, role: &str| -> Result<i64, MapParseError> {
            match get(roles, role)?.as_slice() {
                [x] => Ok(*x),
                _ => Err(fail(format!("role `{role}` needs exactly one id"))),
            }
        };
        let sp = |name: &str| special.get(name).copied().ok_or_else(|| fail(format!("missing special `{name}`")));
        let vs = |x: Vec<i64>| x.into_iter().map(|v| VertexId(v as u32)).collect::<Vec<_>>();
        let arcs = |x: Vec<i64>| x.into_iter().map(|a| ArcId(a as u32)).collect::<Vec<_>>();

        let mut variables = Vec::new();
        for (k, (i, roles)) in vars.iter().enumerate() {
            if *i != k + 1 {
                return Err(fail(format!("variable gadgets must be numbered from 1, found {i}")));
            }
            let side = |name: &str| -> Result<Side, MapParseError> {
                Ok(Side {
                    path_arcs: arcs(get(roles, &format!("{name}-path"))?),
                    path_vertices: vs(get(roles, &format!("{name}-path-vertices"))?),
                    literal_arcs: arcs(get(roles, &format!("{name}-literal"))?),
                    escape_vertices: vs(get(roles, &format!("{name}-escape-vertices"))?),
                    escape_arcs: arcs(get(roles, &format!("{name}-escape"))?),
                })
            };
            variables.push(VariableGadget {
                variable: one(roles, "variable")? as u32,
                quantifier: if one(roles, "universal")? == 1 { Quantifier::Forall } else { Quantifier::Exists },
                entry: VertexId(one(roles, "entry")? as u32),
                exit: VertexId(one(roles, "exit")? as u32),
                positive: side("pos")?,
                negative: side("neg")?,
            });
        }
        let mut gadgets = Vec::new();
        for (k, (j, roles)) in clauses.iter().enumerate() {
            if *j != k + 1 {
                return Err(fail(format!("clause gadgets must be numbered from 1, found {j}")));
            }
            gadgets.push(ClauseGadget {
                entry: VertexId(one(roles, "entry")? as u32),
                exit: VertexId(one(roles, "exit")? as u32),
                literals: get(roles, "literals")?.into_iter().map(|l| l as i32).collect(),
                entry_arcs: arcs(get(roles, "entry-arcs")?),
                exit_arcs: arcs(get(roles, "exit-arcs")?),
                literal_arcs: arcs(get(roles, "literal-arcs")?),
            });
        }
        Ok(GadgetMap {
            schedule: Schedule { variables: variables.len(), clauses: gadgets.len() },
            variables,
            clauses: gadgets,
            start: VertexId(sp("start")? as u32),
            target: VertexId(sp("target")? as u32),
            assignment_exit: VertexId(sp("assignment-exit")? as u32),
            clause_bridge: ArcId(sp("clause-bridge")? as u32),
            escape_bridge: ArcId(sp("escape-bridge")? as u32),
            bridge_vertex: VertexId(sp("bridge-vertex")? as u32),
            bridge_escape: ArcId(sp("bridge-escape")? as u32),
            final_node: VertexId(sp("final-node")? as u32),
            final_arc: ArcId(sp("final-arc")? as u32),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct MapParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InterpretError {
    #[error("gadget of variable {0} was traversed on both sides")]
    MixedSides(u32),
}

/// Truth values read off the traveler's path choices; `None` for gadgets the
/// traveler did not cross completely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialAssignment(pub Vec<(u32, Option<bool>)>);

impl PartialAssignment {
    pub fn get(&self, variable: u32) -> Option<bool> {
        self.0.iter().find(|(v, _)| *v == variable).and_then(|&(_, value)| value)
    }
}

pub fn interpret_transcript(map: &GadgetMap, transcript: &Transcript) -> Result<PartialAssignment, InterpretError> {
    let moved: std::collections::BTreeSet<ArcId> = transcript.rounds.iter().map(|r| r.moved).collect();
    let mut values = Vec::with_capacity(map.variables.len());
    for g in &map.variables {
        let used = |side: &Side| side.path_arcs.iter().any(|a| moved.contains(a));
        let crossed = |side: &Side| side.path_arcs.last().is_some_and(|a| moved.contains(a));
        if used(&g.positive) && used(&g.negative) {
            return Err(InterpretError::MixedSides(g.variable));
        }
        let value = if crossed(&g.positive) {
            Some(true)
        } else if crossed(&g.negative) {
            Some(false)
        } else {
            None
        };
        values.push((g.variable, value));
    }
    Ok(PartialAssignment(values))
}
