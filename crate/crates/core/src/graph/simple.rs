use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Marker for "no path" inside a [`DistanceMatrix`] row before validation.
const UNREACHED: u8 = u8::MAX;

/// Undirected simple graph on `0..t` with one bitset row per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    rows: Vec<FixedBitSet>,
    degrees: Vec<usize>,
}

impl SimpleGraph {
    /// Graph on `t` vertices with `i ~ j` iff `adjacent(i, j)`; the predicate
    /// is evaluated for `i < j` only.
    pub fn from_fn(t: usize, adjacent: impl Fn(usize, usize) -> bool + Sync) -> Self {
        let mut rows: Vec<FixedBitSet> = (0..t)
            .into_par_iter()
            .map(|i| {
                let mut row = FixedBitSet::with_capacity(t);
                for j in (i + 1)..t {
                    if adjacent(i, j) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        // mirror the upper triangle
        for i in 0..t {
            let upper: Vec<usize> = rows[i].ones().filter(|&j| j > i).collect();
            for j in upper {
                rows[j].insert(i);
            }
        }
        Self::from_rows(rows)
    }

    pub fn from_edges(t: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut rows = vec![FixedBitSet::with_capacity(t); t];
        for (a, b) in edges {
            assert!(a != b && a < t && b < t, "bad edge ({a}, {b})");
            rows[a].insert(b);
            rows[b].insert(a);
        }
        Self::from_rows(rows)
    }

    fn from_rows(rows: Vec<FixedBitSet>) -> Self {
        let degrees = rows.iter().map(|r| r.count_ones(..)).collect();
        Self { rows, degrees }
    }

    pub fn empty(t: usize) -> Self {
        Self::from_edges(t, [])
    }

    pub fn complete(t: usize) -> Self {
        Self::from_fn(t, |_, _| true)
    }

    /// Vertex count.
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.rows[a].contains(b)
    }

    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn edge_count(&self) -> usize {
        self.degrees.iter().sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.ones().filter(move |&j| j > i).map(move |j| (i, j)))
    }

    pub fn is_complete(&self) -> bool {
        let t = self.order();
        self.degrees.iter().all(|&d| d + 1 == t)
    }

    /// Single-source BFS; unreachable vertices get `None`.
    pub fn bfs(&self, source: usize) -> Vec<Option<u32>> {
        let t = self.order();
        let mut dist = vec![None; t];
        dist[source] = Some(0);
        let mut frontier = vec![source];
        let mut seen = FixedBitSet::with_capacity(t);
        seen.insert(source);
        let mut level = 0;
        while !frontier.is_empty() {
            level += 1;
            let mut next = Vec::new();
            for &u in &frontier {
                for v in self.rows[u].ones() {
                    if !seen.put(v) {
                        dist[v] = Some(level);
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        dist
    }

    /// BFS from every vertex. A disconnected graph is an error.
    pub fn all_pairs_distances(&self) -> Result<DistanceMatrix> {
        let t = self.order();
        let mut data = vec![UNREACHED; t * t];
        if t == 0 {
            return Ok(DistanceMatrix { t, data });
        }
        data.par_chunks_mut(t).enumerate().for_each(|(s, row)| {
            for (slot, d) in row.iter_mut().zip(self.bfs(s)) {
                if let Some(d) = d {
                    *slot = u8::try_from(d)
                        .ok()
                        .filter(|&d| d != UNREACHED)
                        .unwrap_or(UNREACHED - 1);
                }
            }
        });
        if let Some(pos) = data.iter().position(|&d| d == UNREACHED) {
            return Err(Error::Disconnected(pos / t, pos % t));
        }
        if data.contains(&(UNREACHED - 1)) {
            return Err(Error::Inconsistency("distance exceeds 253".into()));
        }
        Ok(DistanceMatrix { t, data })
    }

    /// Largest distance; 0 for a single vertex.
    pub fn diameter(&self) -> Result<u32> {
        Ok(self.all_pairs_distances()?.max())
    }

    /// The distance-similarity partition.
    ///
    /// Non-adjacent vertices are similar when their open neighbourhoods
    /// agree, adjacent ones when their closed neighbourhoods agree. Equal
    /// open neighbourhoods force non-adjacency and equal closed ones force
    /// adjacency, so grouping by each key and merging gives the relation.
    pub fn distance_similar_partition(&self) -> DistanceSimilarPartition {
        let t = self.order();
        let mut parent: Vec<usize> = (0..t).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        };

        let mut open: HashMap<&FixedBitSet, usize> = HashMap::new();
        for v in 0..t {
            let first = *open.entry(&self.rows[v]).or_insert(v);
            union(&mut parent, first, v);
        }
        let closed_rows: Vec<FixedBitSet> = (0..t)
            .map(|v| {
                let mut row = self.rows[v].clone();
                row.insert(v);
                row
            })
            .collect();
        let mut closed: HashMap<&FixedBitSet, usize> = HashMap::new();
        for (v, row) in closed_rows.iter().enumerate() {
            let first = *closed.entry(row).or_insert(v);
            union(&mut parent, first, v);
        }

        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of_root: HashMap<usize, usize> = HashMap::new();
        for v in 0..t {
            let r = find(&mut parent, v);
            let b = *block_of_root.entry(r).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(v);
        }
        DistanceSimilarPartition::new(blocks)
    }
}

/// Dense `t x t` distance table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    t: usize,
    data: Vec<u8>,
}

impl DistanceMatrix {
    pub fn order(&self) -> usize {
        self.t
    }

    pub fn get(&self, a: usize, b: usize) -> u8 {
        self.data[a * self.t + b]
    }

    pub fn row(&self, a: usize) -> &[u8] {
        &self.data[a * self.t..(a + 1) * self.t]
    }

    pub fn max(&self) -> u32 {
        self.data.iter().copied().max().unwrap_or(0).into()
    }
}

/// Blocks of mutually distance-similar vertices, each sorted, ordered by
/// smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceSimilarPartition {
    blocks: Vec<Vec<usize>>,
}

impl DistanceSimilarPartition {
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Self {
        blocks.retain(|b| !b.is_empty());
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        Self { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Number of single-vertex blocks.
    pub fn singleton_count(&self) -> usize {
        self.blocks.iter().filter(|b| b.len() == 1).count()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(t: usize) -> SimpleGraph {
        SimpleGraph::from_edges(t, (1..t).map(|i| (i - 1, i)))
    }

    #[test]
    fn path_distances() {
        let d = path(5).all_pairs_distances().unwrap();
        assert_eq!(d.row(0), &[0, 1, 2, 3, 4]);
        assert_eq!(d.max(), 4);
    }

    #[test]
    fn disconnected_is_an_error() {
        let g = SimpleGraph::from_edges(4, [(0, 1), (2, 3)]);
        assert_eq!(g.all_pairs_distances(), Err(Error::Disconnected(0, 2)));
    }

    #[test]
    fn single_vertex() {
        let g = SimpleGraph::empty(1);
        assert_eq!(g.diameter(), Ok(0));
        assert!(g.is_complete());
        assert_eq!(g.distance_similar_partition().sizes(), vec![1]);
    }

    #[test]
    fn twins_in_a_star_and_a_clique() {
        // star: leaves are open twins
        let star = SimpleGraph::from_edges(4, [(0, 1), (0, 2), (0, 3)]);
        assert_eq!(star.distance_similar_partition().blocks(), &[vec![0], vec![1, 2, 3]]);
        assert_eq!(SimpleGraph::complete(5).distance_similar_partition().len(), 1);
        let p = path(4).distance_similar_partition();
        assert_eq!(p.len(), 4);
        assert_eq!(p.singleton_count(), 4);
    }

    #[test]
    fn from_fn_matches_from_edges() {
        let g = SimpleGraph::from_fn(6, |i, j| (i + j) % 3 == 0);
        let h = SimpleGraph::from_edges(6, g.edges().collect::<Vec<_>>());
        assert_eq!(g, h);
        assert_eq!(
            g.edges().collect::<Vec<_>>(),
            vec![(0, 3), (1, 2), (1, 5), (2, 4), (4, 5)]
        );
    }
}
