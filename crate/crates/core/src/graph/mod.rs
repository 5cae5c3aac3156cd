//! Essential ideal graphs, annihilating ideal graphs and the field-product
//! model, plus the structural checks that relate them.

mod export;
mod join;
mod simple;

pub use export::{to_dot, to_json, GraphJson, VertexJson};
pub use join::{build_join_construction, generalized_join, predicted_similarity_blocks};
pub use simple::{DistanceMatrix, DistanceSimilarPartition, SimpleGraph};

use num_integer::Integer;
use serde::Serialize;

use crate::arithmetic::{Caps, FactoredInteger};
use crate::error::{Error, Result};
use crate::ideals::{enumerate_vertices, Ideal, IndexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphKind {
    Essential,
    Annihilating,
    FieldProductModel,
}

/// A graph whose vertices are the nonzero proper ideals of `Z_n` in
/// ascending generator order.
#[derive(Debug, Clone)]
pub struct IdealGraph {
    kind: GraphKind,
    factored: FactoredInteger,
    vertices: Vec<Ideal>,
    graph: SimpleGraph,
}

impl IdealGraph {
    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn factored(&self) -> &FactoredInteger {
        &self.factored
    }

    pub fn n(&self) -> u64 {
        self.factored.n()
    }

    pub fn vertices(&self) -> &[Ideal] {
        &self.vertices
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    /// `T`.
    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn generator(&self, v: usize) -> u64 {
        self.vertices[v].generator()
    }

    pub fn index_of(&self, d: u64) -> Option<usize> {
        self.vertices.binary_search_by_key(&d, Ideal::generator).ok()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.graph.has_edge(a, b)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.graph.degree(v)
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Edges as generator pairs `(d_a, d_b)` with `d_a < d_b`.
    pub fn generator_edges(&self) -> Vec<(u64, u64)> {
        self.graph
            .edges()
            .map(|(a, b)| (self.generator(a), self.generator(b)))
            .collect()
    }

    pub fn all_pairs_distances(&self) -> Result<DistanceMatrix> {
        self.graph.all_pairs_distances()
    }

    pub fn diameter(&self) -> Result<u32> {
        self.graph.diameter()
    }

    pub fn distance_similar_partition(&self) -> DistanceSimilarPartition {
        self.graph.distance_similar_partition()
    }

    pub(crate) fn from_parts(
        kind: GraphKind,
        factored: FactoredInteger,
        vertices: Vec<Ideal>,
        graph: SimpleGraph,
    ) -> Self {
        debug_assert_eq!(vertices.len(), graph.order());
        Self {
            kind,
            factored,
            vertices,
            graph,
        }
    }
}

/// `<a> ~ <b>` iff `<a> + <b>` is essential, i.e. the saturated index sets
/// are disjoint.
pub fn build_essential_graph(f: &FactoredInteger, caps: &Caps) -> Result<IdealGraph> {
    caps.check(f)?;
    let vertices = enumerate_vertices(f)?;
    let graph = SimpleGraph::from_fn(vertices.len(), |i, j| vertices[i].xi().is_disjoint(vertices[j].xi()));
    Ok(IdealGraph::from_parts(GraphKind::Essential, f.clone(), vertices, graph))
}

/// `<a> ~ <b>` iff `<a><b> = 0`, i.e. `n | ab`.
pub fn build_aig(f: &FactoredInteger, caps: &Caps) -> Result<IdealGraph> {
    caps.check(f)?;
    let vertices = enumerate_vertices(f)?;
    let n = u128::from(f.n());
    let graph = SimpleGraph::from_fn(vertices.len(), |i, j| {
        (u128::from(vertices[i].generator()) * u128::from(vertices[j].generator())) % n == 0
    });
    Ok(IdealGraph::from_parts(
        GraphKind::Annihilating,
        f.clone(),
        vertices,
        graph,
    ))
}

/// Closed-form distance in the essential graph of squarefree `n`:
/// 1 when the generators are coprime, otherwise 3 when their lcm is `n`
/// and 2 when it is not.
pub fn squarefree_distance(f: &FactoredInteger, a: &Ideal, b: &Ideal) -> Result<u8> {
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree(f.n()));
    }
    if a == b {
        return Err(Error::InvalidArgument("distance requires distinct vertices".into()));
    }
    let (x, y) = (a.generator(), b.generator());
    Ok(if x.gcd(&y) == 1 {
        1
    } else if x.lcm(&y) == f.n() {
        3
    } else {
        2
    })
}

/// Vertex of the essential graph of a product of `k` fields: the set of
/// coordinates where the ideal is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldProductVertex {
    pub theta: IndexSet,
}

/// Essential ideal graph of `F_1 x .. x F_k`: one vertex per nonempty proper
/// zero-coordinate set, adjacent when those sets are disjoint.
#[derive(Debug, Clone)]
pub struct FieldProductModel {
    k: usize,
    vertices: Vec<FieldProductVertex>,
    graph: SimpleGraph,
}

impl FieldProductModel {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> &[FieldProductVertex] {
        &self.vertices
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn kind(&self) -> GraphKind {
        GraphKind::FieldProductModel
    }
}

pub fn build_field_product_model(k: usize, caps: &Caps) -> Result<FieldProductModel> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "field-product model needs k >= 2, got {k}"
        )));
    }
    if k > caps.max_primes {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds the cap of {}",
            caps.max_primes
        )));
    }
    let vertices: Vec<FieldProductVertex> = IndexSet::nonempty_proper(k)
        .map(|theta| FieldProductVertex { theta })
        .collect();
    if vertices.len() as u64 > caps.max_vertices {
        return Err(Error::InvalidArgument(format!(
            "k = {k} gives more than {} vertices",
            caps.max_vertices
        )));
    }
    let graph = SimpleGraph::from_fn(vertices.len(), |i, j| vertices[i].theta.is_disjoint(vertices[j].theta));
    Ok(FieldProductModel { k, vertices, graph })
}

/// `psi(theta) = prod_{i not in theta} p_i`.
pub fn psi(f: &FactoredInteger, theta: IndexSet) -> u64 {
    f.primes()
        .enumerate()
        .filter(|&(i, _)| !theta.contains(i))
        .map(|(_, p)| p)
        .product()
}

/// Result of testing an explicit vertex bijection between two graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoCheck {
    pub isomorphic: bool,
    /// `(source generator, image generator)` in source vertex order.
    pub mapping: Vec<(u64, u64)>,
    pub source_edges: usize,
    pub target_edges: usize,
    /// First source pair whose adjacency is not preserved.
    pub mismatch: Option<(u64, u64)>,
}

fn check_bijection(
    source: &SimpleGraph,
    target: &SimpleGraph,
    map: &[usize],
    label_source: impl Fn(usize) -> u64,
    label_target: impl Fn(usize) -> u64,
) -> IsoCheck {
    let t = source.order();
    let mut seen = vec![false; target.order()];
    let mut bijective = t == target.order();
    for &image in map {
        if image >= seen.len() || std::mem::replace(&mut seen[image], true) {
            bijective = false;
        }
    }
    let mut mismatch = None;
    if bijective {
        'outer: for a in 0..t {
            for b in (a + 1)..t {
                if source.has_edge(a, b) != target.has_edge(map[a], map[b]) {
                    mismatch = Some((label_source(a), label_source(b)));
                    break 'outer;
                }
            }
        }
    }
    IsoCheck {
        isomorphic: bijective && mismatch.is_none(),
        mapping: map
            .iter()
            .enumerate()
            .map(|(a, &b)| (label_source(a), label_target(b)))
            .collect(),
        source_edges: source.edge_count(),
        target_edges: target.edge_count(),
        mismatch,
    }
}

/// Tests whether `d -> n/d` carries the essential graph onto the
/// annihilating ideal graph. Non-squarefree inputs are evaluated too; the
/// map is then expected to fail except on the tiny graphs with `T <= 2`.
pub fn check_divisor_conjugate_iso(f: &FactoredInteger, caps: &Caps) -> Result<IsoCheck> {
    let essential = build_essential_graph(f, caps)?;
    let aig = build_aig(f, caps)?;
    let n = f.n();
    let map: Vec<usize> = essential
        .vertices()
        .iter()
        .map(|v| {
            aig.index_of(n / v.generator())
                .expect("conjugate of a proper divisor is a proper divisor")
        })
        .collect();
    Ok(check_bijection(
        essential.graph(),
        aig.graph(),
        &map,
        |v| essential.generator(v),
        |v| aig.generator(v),
    ))
}

/// Tests whether `psi` carries the field-product model onto the annihilating
/// ideal graph of squarefree `n` with the same number of primes. Source
/// labels in the mapping are the `theta` bitmasks.
pub fn check_field_product_psi(f: &FactoredInteger, caps: &Caps) -> Result<IsoCheck> {
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree(f.n()));
    }
    let model = build_field_product_model(f.k(), caps)?;
    let aig = build_aig(f, caps)?;
    let map: Vec<usize> = model
        .vertices()
        .iter()
        .map(|v| {
            aig.index_of(psi(f, v.theta))
                .ok_or_else(|| Error::Inconsistency(format!("psi({}) is not a vertex", v.theta)))
        })
        .collect::<Result<_>>()?;
    Ok(check_bijection(
        model.graph(),
        aig.graph(),
        &map,
        |v| u64::from(model.vertices()[v].theta.0),
        |v| aig.generator(v),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::factor;

    fn essential(n: u64) -> IdealGraph {
        build_essential_graph(&factor(n).unwrap(), &Caps::default()).unwrap()
    }

    fn aig(n: u64) -> IdealGraph {
        build_aig(&factor(n).unwrap(), &Caps::default()).unwrap()
    }

    #[test]
    fn essential_graph_of_12() {
        let g = essential(12);
        assert_eq!(g.generator_edges(), vec![(2, 3), (2, 4), (2, 6), (3, 4), (4, 6)]);
        assert_eq!(g.diameter(), Ok(2));
    }

    #[test]
    fn essential_graph_of_30_is_coprimality() {
        let g = essential(30);
        let mut expected = Vec::new();
        for a in g.vertices() {
            for b in g.vertices() {
                if a.generator() < b.generator() && a.generator().gcd(&b.generator()) == 1 {
                    expected.push((a.generator(), b.generator()));
                }
            }
        }
        assert_eq!(expected.len(), 6);
        assert_eq!(g.generator_edges(), expected);
        assert_eq!(g.diameter(), Ok(3));
    }

    #[test]
    fn degree_in_2700() {
        let g = essential(2700);
        assert_eq!(g.degree(g.index_of(4).unwrap()), 23);
    }

    #[test]
    fn aig_examples() {
        assert_eq!(aig(12).generator_edges(), vec![(2, 6), (3, 4), (4, 6)]);
        assert_eq!(
            aig(30).generator_edges(),
            vec![(2, 15), (3, 10), (5, 6), (6, 10), (6, 15), (10, 15)]
        );
        let g = aig(9);
        assert_eq!(g.order(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn distances_in_30() {
        let g = essential(30);
        let d = g.all_pairs_distances().unwrap();
        let at = |a, b| d.get(g.index_of(a).unwrap(), g.index_of(b).unwrap());
        assert_eq!(at(2, 3), 1);
        assert_eq!(at(2, 6), 2);
        assert_eq!(at(6, 10), 3);
    }

    #[test]
    fn squarefree_distance_examples() {
        let f = factor(30).unwrap();
        let i = |d| Ideal::from_generator(&f, d).unwrap();
        assert_eq!(squarefree_distance(&f, &i(2), &i(15)), Ok(1));
        assert_eq!(squarefree_distance(&f, &i(2), &i(6)), Ok(2));
        let f = factor(210).unwrap();
        let i = |d| Ideal::from_generator(&f, d).unwrap();
        assert_eq!(squarefree_distance(&f, &i(6), &i(35)), Ok(1));
        assert_eq!(squarefree_distance(&f, &i(30), &i(42)), Ok(3));
        let g = essential(210);
        let d = g.all_pairs_distances().unwrap();
        assert_eq!(d.get(g.index_of(30).unwrap(), g.index_of(42).unwrap()), 3);
        let f = factor(12).unwrap();
        let i = |d| Ideal::from_generator(&f, d).unwrap();
        assert_eq!(squarefree_distance(&f, &i(2), &i(3)), Err(Error::NotSquarefree(12)));
    }

    #[test]
    fn diameters() {
        assert_eq!(essential(32).diameter(), Ok(1));
        assert!(essential(32).graph().is_complete());
        assert_eq!(essential(4).diameter(), Ok(0));
    }

    #[test]
    fn similarity_blocks() {
        let g = essential(30);
        let p = g.distance_similar_partition();
        assert_eq!(p.len(), 6);
        assert_eq!(p.singleton_count(), 6);

        let g = essential(2700);
        let mut sizes = g.distance_similar_partition().sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 2, 3, 4, 6, 6, 11]);

        // <4> is universal in E(Z_12) and therefore similar to the essential <2>
        let g = essential(12);
        let gens: Vec<Vec<u64>> = g
            .distance_similar_partition()
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&v| g.generator(v)).collect())
            .collect();
        assert_eq!(gens, vec![vec![2, 4], vec![3, 6]]);
    }

    #[test]
    fn field_product_model() {
        let caps = Caps::default();
        let m = build_field_product_model(2, &caps).unwrap();
        assert_eq!((m.graph().order(), m.graph().edge_count()), (2, 1));
        let m = build_field_product_model(3, &caps).unwrap();
        assert_eq!((m.graph().order(), m.graph().edge_count()), (6, 6));
        assert!(build_field_product_model(1, &caps).is_err());
        let check = check_field_product_psi(&factor(30).unwrap(), &caps).unwrap();
        assert!(check.isomorphic);
    }

    #[test]
    fn divisor_conjugate() {
        let caps = Caps::default();
        let check = check_divisor_conjugate_iso(&factor(30).unwrap(), &caps).unwrap();
        assert!(check.isomorphic);
        assert!(check.mapping.contains(&(2, 15)));
        assert!(
            check_divisor_conjugate_iso(&factor(2310).unwrap(), &caps)
                .unwrap()
                .isomorphic
        );
        let check = check_divisor_conjugate_iso(&factor(12).unwrap(), &caps).unwrap();
        assert!(!check.isomorphic);
        assert_eq!((check.source_edges, check.target_edges), (5, 3));
    }
}
