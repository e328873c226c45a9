//! Seeded instance and formula generators. Output depends only on the seed
//! and parameters.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::reduction::{reduce, GadgetMap, Qbf, Quantifier};
use crate::temporal::{ArcSpec, RcgInstance, TemporalGraph, Time, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("{0} must be at least {1}")]
    TooSmall(&'static str, usize),
    #[error("budget {budget} exceeds the {arcs} arcs of the instance")]
    BudgetTooLarge { budget: usize, arcs: usize },
}

fn at_least(name: &'static str, value: usize, min: usize) -> Result<(), GenError> {
    if value < min {
        return Err(GenError::TooSmall(name, min));
    }
    Ok(())
}

/// Path `1 -> 2 -> ... -> length+1`, arc `i` departing at time `i`, all
/// traversals 1, δ = 1.
pub fn chain(length: usize, budget: usize) -> Result<RcgInstance, GenError> {
    at_least("length", length, 1)?;
    if budget > length {
        return Err(GenError::BudgetTooLarge { budget, arcs: length });
    }
    let specs = (1..=length as u32).map(|i| ArcSpec::new(i, i + 1, i as Time, 1));
    let graph = TemporalGraph::new(length as u32 + 1, specs).expect("chain arcs are valid");
    Ok(RcgInstance::new(graph, VertexId(1), VertexId(length as u32 + 1), budget, 1).expect("budget checked"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomParams {
    pub max_vertices: u32,
    pub max_arcs: usize,
    pub max_label: Time,
    pub max_traversal: Time,
    pub max_budget: usize,
    pub deltas: Vec<Time>,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            max_vertices: 6,
            max_arcs: 10,
            max_label: 8,
            max_traversal: 2,
            max_budget: 3,
            deltas: vec![1, 2],
        }
    }
}

/// Uniform-ish random instance: 2..=max_vertices vertices, 1..=max_arcs arcs
/// between distinct endpoints, distinct start and target.
pub fn random(seed: u64, params: &RandomParams) -> Result<RcgInstance, GenError> {
    at_least("max_vertices", params.max_vertices as usize, 2)?;
    at_least("max_arcs", params.max_arcs, 1)?;
    at_least("max_label", params.max_label as usize, 1)?;
    at_least("max_traversal", params.max_traversal as usize, 1)?;
    at_least("deltas", params.deltas.len(), 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = rng.random_range(2..=params.max_vertices);
    let a = rng.random_range(1..=params.max_arcs);
    let specs: Vec<ArcSpec> = (0..a)
        .map(|_| {
            let tail = rng.random_range(1..=v);
            let mut head = rng.random_range(1..v);
            if head >= tail {
                head += 1;
            }
            ArcSpec::new(tail, head, rng.random_range(1..=params.max_label), rng.random_range(1..=params.max_traversal))
        })
        .collect();
    let budget = rng.random_range(0..=params.max_budget.min(a));
    let delta = *params.deltas.choose(&mut rng).expect("nonempty");
    let start = rng.random_range(1..=v);
    let mut target = rng.random_range(1..v);
    if target >= start {
        target += 1;
    }
    let graph = TemporalGraph::new(v, specs).expect("random arcs are valid");
    Ok(RcgInstance::new(graph, VertexId(start), VertexId(target), budget, delta).expect("budget bounded by arcs"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LayeredParams {
    pub layers: usize,
    pub width: usize,
    pub budget: usize,
}

/// Start, `layers` layers of `width` vertices, target. The start reaches
/// every first-layer vertex; each vertex links to one to `width` random
/// vertices of the next layer; the last layer links to the target. Arcs
/// leaving layer `k` depart at `2k + 1` or `2k + 2`, so one delay may or may
/// not break a connection.
pub fn layered(seed: u64, params: LayeredParams) -> Result<RcgInstance, GenError> {
    at_least("layers", params.layers, 1)?;
    at_least("width", params.width, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = params.width as u32;
    let vertex = |layer: usize, k: u32| VertexId(2 + layer as u32 * w + k);
    let target = VertexId(2 + params.layers as u32 * w);
    let mut specs = Vec::new();
    for k in 0..w {
        specs.push(ArcSpec::new(1, vertex(0, k).0, 1, 1));
    }
    for layer in 0..params.layers {
        let label = |rng: &mut ChaCha8Rng| 2 * (layer as Time + 1) + rng.random_range(1..=2);
        for k in 0..w {
            let tail = vertex(layer, k).0;
            if layer + 1 == params.layers {
                let l = label(&mut rng);
                specs.push(ArcSpec::new(tail, target.0, l, 1));
                continue;
            }
            let mut heads: Vec<u32> = (0..w).collect();
            heads.shuffle(&mut rng);
            heads.truncate(rng.random_range(1..=w as usize));
            heads.sort_unstable();
            for h in heads {
                let l = label(&mut rng);
                specs.push(ArcSpec::new(tail, vertex(layer + 1, h).0, l, 1));
            }
        }
    }
    if params.budget > specs.len() {
        return Err(GenError::BudgetTooLarge { budget: params.budget, arcs: specs.len() });
    }
    let graph = TemporalGraph::new(target.0, specs).expect("layered arcs are valid");
    Ok(RcgInstance::new(graph, VertexId(1), target, params.budget, 1).expect("budget checked"))
}

/// Closed prenex CNF over variables `1..=vars` with random quantifiers and
/// `clauses` clauses of one to three distinct variables each.
pub fn random_qbf(seed: u64, vars: usize, clauses: usize) -> Result<Qbf, GenError> {
    at_least("vars", vars, 1)?;
    at_least("clauses", clauses, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prefix = (1..=vars as u32)
        .map(|v| (if rng.random_bool(0.5) { Quantifier::Forall } else { Quantifier::Exists }, v))
        .collect();
    let matrix = (0..clauses)
        .map(|_| {
            let mut pool: Vec<i32> = (1..=vars as i32).collect();
            pool.shuffle(&mut rng);
            pool.truncate(rng.random_range(1..=vars.min(3)));
            pool.sort_unstable();
            pool.into_iter().map(|v| if rng.random_bool(0.5) { -v } else { v }).collect()
        })
        .collect();
    Ok(Qbf::new(prefix, matrix).expect("distinct variables never form a tautology"))
}

/// Reduction of [`random_qbf`] with the same arguments.
pub fn qbf_family(seed: u64, vars: usize, clauses: usize) -> Result<(Qbf, RcgInstance, GadgetMap), GenError> {
    let qbf = random_qbf(seed, vars, clauses)?;
    let (inst, map) = reduce(&qbf);
    Ok((qbf, inst, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::temporal::{parse_instance, serialize_instance};

    #[test]
    fn chain_of_two_is_the_reference_chain() {
        let expected = parse_instance("p rcg 3 2 1 1\ns 1\nz 3\na 1 2 1 1\na 2 3 2 1\n").unwrap();
        assert_eq!(chain(2, 1).unwrap(), expected);
        assert!(chain(2, 3).is_err());
        assert!(chain(0, 0).is_err());
    }

    #[test]
    fn random_is_deterministic_and_within_bounds() {
        let p = RandomParams::default();
        for seed in 0..200 {
            let a = random(seed, &p).unwrap();
            assert_eq!(serialize_instance(&a), serialize_instance(&random(seed, &p).unwrap()));
            assert!(a.graph().vertex_count() <= 6 && a.graph().arc_count() <= 10 && a.budget() <= 3);
            assert!(a.graph().arcs().iter().all(|e| e.label <= 8 && e.traversal <= 2));
            assert!([1, 2].contains(&a.delta()));
            assert_ne!(a.start(), a.target());
            assert_eq!(parse_instance(&serialize_instance(&a)).unwrap(), a);
        }
        assert_ne!(serialize_instance(&random(1, &p).unwrap()), serialize_instance(&random(2, &p).unwrap()));
    }

    #[test]
    fn layered_shape() {
        let inst = layered(5, LayeredParams { layers: 3, width: 2, budget: 2 }).unwrap();
        assert_eq!(inst.graph().vertex_count(), 8);
        assert_eq!(inst.target(), VertexId(8));
        assert_eq!(inst.graph().out_arcs(VertexId(1)).len(), 2);
        assert!(layered(5, LayeredParams { layers: 1, width: 1, budget: 3 }).is_err());
        assert_eq!(inst, layered(5, LayeredParams { layers: 3, width: 2, budget: 2 }).unwrap());
    }

    #[test]
    fn random_formulas_are_closed_and_seeded() {
        for seed in 0..100 {
            let q = random_qbf(seed, 3, 3).unwrap();
            assert_eq!((q.variable_count(), q.clause_count()), (3, 3));
            assert_eq!(q, random_qbf(seed, 3, 3).unwrap());
        }
        let (q, inst, _) = qbf_family(3, 2, 2).unwrap();
        assert_eq!(inst, reduce(&q).0);
    }
}
