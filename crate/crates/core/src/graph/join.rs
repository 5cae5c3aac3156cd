use itertools::Itertools;

use super::{DistanceSimilarPartition, GraphKind, IdealGraph, SimpleGraph};
use crate::arithmetic::{Caps, FactoredInteger};
use crate::error::{Error, Result};
use crate::ideals::{ClassPartition, Ideal, IndexSet};

/// Generalized join `G[H_1, .., H_t]`: vertex `i` of the template is
/// replaced by `parts[i]`, and every vertex of `parts[i]` is joined to every
/// vertex of `parts[j]` whenever `i ~ j` in the template.
///
/// Vertices of the result are numbered part by part.
pub fn generalized_join(template: &SimpleGraph, parts: &[SimpleGraph]) -> SimpleGraph {
    assert_eq!(template.order(), parts.len(), "one part per template vertex");
    let offsets: Vec<usize> = parts
        .iter()
        .scan(0, |acc, p| {
            let start = *acc;
            *acc += p.order();
            Some(start)
        })
        .collect();
    let total = parts.iter().map(SimpleGraph::order).sum();
    let mut edges = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        edges.extend(part.edges().map(|(a, b)| (offsets[i] + a, offsets[i] + b)));
    }
    for (i, j) in template.edges() {
        for a in 0..parts[i].order() {
            for b in 0..parts[j].order() {
                edges.push((offsets[i] + a, offsets[j] + b));
            }
        }
    }
    SimpleGraph::from_edges(total, edges)
}

/// Exponent vectors of one class: `r_i = m_i` on `xi`, `0 <= r_i < m_i`
/// elsewhere, skipping the unit ideal.
fn class_members(f: &FactoredInteger, xi: IndexSet) -> Vec<Vec<u32>> {
    f.exponents()
        .enumerate()
        .map(|(i, m)| if xi.contains(i) { m..m + 1 } else { 0..m })
        .multi_cartesian_product()
        .filter(|r| r.iter().any(|&e| e > 0))
        .collect()
}

/// Rebuilds the essential graph as `K_m` joined with the generalized join of
/// null graphs on the non-essential classes, then relabels into ascending
/// generator order. For squarefree `n` the `K_m` part is empty.
pub fn build_join_construction(f: &FactoredInteger, caps: &Caps) -> Result<IdealGraph> {
    caps.check(f)?;
    let k = f.k();
    let keys: Vec<IndexSet> = std::iter::once(IndexSet::EMPTY)
        .chain(IndexSet::nonempty_proper(k))
        .collect();
    let members: Vec<Vec<Vec<u32>>> = keys.iter().map(|&xi| class_members(f, xi)).collect();

    // template: the essential class is joined to everything, other classes
    // are joined when their keys are disjoint
    let template = SimpleGraph::from_fn(keys.len(), |i, j| i == 0 || keys[i].is_disjoint(keys[j]));
    let parts: Vec<SimpleGraph> = members
        .iter()
        .enumerate()
        .map(|(i, ms)| {
            if i == 0 {
                SimpleGraph::complete(ms.len())
            } else {
                SimpleGraph::empty(ms.len())
            }
        })
        .collect();
    let joined = generalized_join(&template, &parts);

    let block_order: Vec<Ideal> = members
        .into_iter()
        .flatten()
        .map(|r| Ideal::from_exponents(f, r))
        .collect::<Result<_>>()?;
    if block_order.len() as u64 != f.vertex_count() {
        return Err(Error::Inconsistency(format!(
            "join construction produced {} vertices, expected {}",
            block_order.len(),
            f.vertex_count()
        )));
    }
    // position in canonical order of each block-ordered vertex
    let mut order: Vec<usize> = (0..block_order.len()).collect();
    order.sort_by_key(|&i| block_order[i].generator());
    let mut canonical_pos = vec![0; order.len()];
    for (pos, &i) in order.iter().enumerate() {
        canonical_pos[i] = pos;
    }
    let graph = SimpleGraph::from_edges(
        order.len(),
        joined.edges().map(|(a, b)| (canonical_pos[a], canonical_pos[b])),
    );
    let vertices = order.into_iter().map(|i| block_order[i].clone()).collect();
    Ok(IdealGraph::from_parts(GraphKind::Essential, f.clone(), vertices, graph))
}

/// Distance-similarity blocks predicted from the class structure alone.
///
/// Each class is a block, except that every universal vertex is similar to
/// every other one. A non-essential class is universal when it is a single
/// vertex and every other class key is disjoint from its own; this happens
/// only for two primes with one exponent equal to 1.
pub fn predicted_similarity_blocks(classes: &ClassPartition) -> DistanceSimilarPartition {
    let mut universal: Vec<usize> = classes.essential().to_vec();
    let mut blocks = Vec::new();
    for (&xi, members) in classes.classes() {
        let is_universal = members.len() == 1
            && classes
                .classes()
                .keys()
                .all(|&other| other == xi || other.is_disjoint(xi));
        if is_universal {
            universal.extend(members);
        } else {
            blocks.push(members.clone());
        }
    }
    blocks.push(universal);
    DistanceSimilarPartition::new(blocks)
}
