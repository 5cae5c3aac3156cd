//! Resolving sets and metric dimension of the essential ideal graph.
//!
//! Three routes are provided and are meant to be checked against each
//! other: a closed form driven by the factorization, explicit resolving sets
//! built from the class structure, and an exact search over candidate sets
//! pruned by distance similarity (a resolving set must contain all but at
//! most one vertex of every similarity block).

use std::collections::HashMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::arithmetic::FactoredInteger;
use crate::error::{Error, Result};
use crate::graph::{DistanceMatrix, DistanceSimilarPartition, IdealGraph};
use crate::ideals::{canonical_representative, ClassPartition, IndexSet};

/// Default cap on the number of candidate sets the exact search examines.
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DimMethod {
    Formula,
    BruteForce,
    Constructive,
}

/// Outcome of a metric dimension computation.
///
/// When `exact` is false, `dim` is an upper bound and `lower_bound` is the
/// best lower bound known to the producing method.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimReport {
    pub n: u64,
    pub t: usize,
    pub dim: usize,
    pub exact: bool,
    pub method: DimMethod,
    pub lower_bound: usize,
    /// Set for the one-vertex graph of `n = p^2`, whose dimension is taken
    /// to be 0.
    pub degenerate: bool,
    /// Vertex indices, ascending.
    pub witness: Option<Vec<usize>>,
    pub witness_generators: Option<Vec<u64>>,
    /// `r(v|W)` for every `v` outside the witness, keyed by generator.
    pub representations: Vec<(u64, Vec<u8>)>,
}

impl DimReport {
    fn bare(n: u64, t: usize, method: DimMethod) -> Self {
        DimReport {
            n,
            t,
            dim: 0,
            exact: true,
            method,
            lower_bound: 0,
            degenerate: false,
            witness: None,
            witness_generators: None,
            representations: Vec::new(),
        }
    }

    fn degenerate(n: u64, t: usize, method: DimMethod) -> Self {
        DimReport {
            degenerate: true,
            ..Self::bare(n, t, method)
        }
    }

    fn attach_witness(&mut self, g: &IdealGraph, resolution: &Resolution, witness: Vec<usize>) {
        self.witness_generators = Some(witness.iter().map(|&v| g.generator(v)).collect());
        self.witness = Some(witness);
        self.representations = resolution
            .representations
            .iter()
            .map(|(v, r)| (g.generator(*v), r.clone()))
            .collect();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Representations<'a>(&'a [(u64, Vec<u8>)]);

impl Serialize for Representations<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (d, r) in self.0 {
            map.serialize_entry(&d.to_string(), r)?;
        }
        map.end()
    }
}

impl Serialize for DimReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DimReport", 9)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("T", &self.t)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("exact", &self.exact)?;
        st.serialize_field("method", &self.method)?;
        st.serialize_field("lower_bound", &self.lower_bound)?;
        st.serialize_field("degenerate", &self.degenerate)?;
        st.serialize_field("witness", &self.witness_generators)?;
        st.serialize_field("representations", &Representations(&self.representations))?;
        st.end()
    }
}

/// Result of checking one candidate set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub resolving: bool,
    /// `(v, r(v|W))` for each `v` outside `W`, in vertex order; coordinates
    /// follow the order `W` was given in.
    pub representations: Vec<(usize, Vec<u8>)>,
    /// Two vertices outside `W` sharing a representation.
    pub collision: Option<(usize, usize)>,
}

/// Checks whether `w` resolves the graph whose distances are `dist`.
pub fn is_resolving(dist: &DistanceMatrix, w: &[usize]) -> Result<Resolution> {
    let t = dist.order();
    if w.is_empty() {
        return Err(Error::InvalidVertexSet("empty set".into()));
    }
    let mut in_w = vec![false; t];
    for &v in w {
        if v >= t {
            return Err(Error::InvalidVertexSet(format!(
                "vertex {v} is not in a graph of order {t}"
            )));
        }
        if std::mem::replace(&mut in_w[v], true) {
            return Err(Error::InvalidVertexSet(format!("vertex {v} listed twice")));
        }
    }
    let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut representations = Vec::with_capacity(t - w.len());
    let mut collision = None;
    for v in (0..t).filter(|&v| !in_w[v]) {
        let row = dist.row(v);
        let rep: Vec<u8> = w.iter().map(|&x| row[x]).collect();
        if let Some(&u) = seen.get(&rep) {
            collision.get_or_insert((u, v));
        } else {
            seen.insert(rep.clone(), v);
        }
        representations.push((v, rep));
    }
    Ok(Resolution {
        resolving: collision.is_none(),
        representations,
        collision,
    })
}

/// `T` minus the number of similarity blocks, floored at 1 for `T >= 2`.
pub fn dim_lower_bound(partition: &DistanceSimilarPartition, t: usize) -> usize {
    if t < 2 {
        return 0;
    }
    t.saturating_sub(partition.len()).max(1)
}

/// The same bound computed from the class structure: `T` minus the number of
/// nonempty classes (`T - (2^k - 1)` when the essential class is nonempty).
pub fn class_lower_bound(classes: &ClassPartition) -> usize {
    let t = classes.t();
    if t < 2 {
        return 0;
    }
    let count = classes.classes().len() + usize::from(classes.m() > 0);
    t.saturating_sub(count).max(1)
}

pub fn completeness_check(g: &IdealGraph) -> bool {
    g.graph().is_complete()
}

/// `T <= 4^dim + dim`.
pub fn finiteness_bound_check(dim: usize, t: usize) -> bool {
    let pow = u32::try_from(dim)
        .ok()
        .and_then(|d| 4u128.checked_pow(d))
        .unwrap_or(u128::MAX);
    (t as u128) <= pow.saturating_add(dim as u128)
}

/// Elementary symmetric polynomial `e_r` of `sizes`, saturating.
fn elementary_symmetric(sizes: &[usize], r: usize) -> u128 {
    let mut e = vec![0u128; r + 1];
    e[0] = 1;
    for &s in sizes {
        for j in (1..=r).rev() {
            e[j] = e[j].saturating_add(e[j - 1].saturating_mul(s as u128));
        }
    }
    e[r]
}

/// True when every pair of omitted vertices is told apart by some vertex
/// that is not omitted.
fn omitted_set_is_resolved(dist: &DistanceMatrix, omitted: &[usize], mask: &[bool]) -> bool {
    for (i, &u) in omitted.iter().enumerate() {
        let ru = dist.row(u);
        for &v in &omitted[i + 1..] {
            let rv = dist.row(v);
            let separated = ru.iter().zip(rv).enumerate().any(|(x, (a, b))| a != b && !mask[x]);
            if !separated {
                return false;
            }
        }
    }
    true
}

/// Lexicographically least resolving set among candidates omitting exactly
/// one vertex from each of `r` blocks.
fn search_size(dist: &DistanceMatrix, blocks: &[Vec<usize>], r: usize) -> Option<Vec<usize>> {
    let t = dist.order();
    (0..blocks.len())
        .combinations(r)
        .par_bridge()
        .map_init(
            || vec![false; t],
            |mask, chosen| {
                let mut best: Option<Vec<usize>> = None;
                let choices = chosen.iter().map(|&b| blocks[b].iter().copied());
                for omitted in choices.multi_cartesian_product() {
                    for &v in &omitted {
                        mask[v] = true;
                    }
                    if omitted_set_is_resolved(dist, &omitted, mask) {
                        let w: Vec<usize> = (0..t).filter(|&v| !mask[v]).collect();
                        if best.as_ref().is_none_or(|b| w < *b) {
                            best = Some(w);
                        }
                    }
                    for &v in &omitted {
                        mask[v] = false;
                    }
                }
                best
            },
        )
        .flatten()
        .min()
}

/// Exact metric dimension by pruned exhaustive search.
///
/// Sizes are tried upward from [`dim_lower_bound`]; the returned witness is
/// the lexicographically least resolving set of minimum size. If the
/// candidate count would exceed `budget`, the search stops and returns a
/// non-exact report whose `dim` is the trivial upper bound `T - 1`.
pub fn dim_bruteforce(
    g: &IdealGraph,
    dist: &DistanceMatrix,
    partition: &DistanceSimilarPartition,
    budget: u64,
) -> Result<DimReport> {
    let t = g.order();
    let mut report = DimReport::bare(g.n(), t, DimMethod::BruteForce);
    if t < 2 {
        return Ok(DimReport::degenerate(g.n(), t, DimMethod::BruteForce));
    }
    let lower = dim_lower_bound(partition, t);
    report.lower_bound = lower;
    let blocks = partition.blocks();
    let sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
    let mut spent: u128 = 0;
    for size in lower..t {
        let r = t - size;
        if r > blocks.len() {
            continue;
        }
        spent = spent.saturating_add(elementary_symmetric(&sizes, r));
        if spent > u128::from(budget) {
            report.exact = false;
            report.lower_bound = size;
            report.dim = t - 1;
            return Ok(report);
        }
        if let Some(w) = search_size(dist, blocks, r) {
            let resolution = is_resolving(dist, &w)?;
            if !resolution.resolving {
                return Err(Error::Inconsistency("search accepted a non-resolving set".into()));
            }
            report.dim = w.len();
            report.attach_witness(g, &resolution, w);
            return Ok(report);
        }
    }
    // unreachable for a connected graph: any T - 1 vertices resolve
    Err(Error::Inconsistency(format!(
        "no resolving set found for n = {}",
        g.n()
    )))
}

/// Metric dimension from the factorization alone.
///
/// * `n = p^m` or `n = p q`: the graph is complete, `T - 1`.
/// * squarefree with 3 or 4 primes: `k - 1`; with 5 primes: 5.
/// * squarefree with `k >= 6`: `k` as an upper bound only.
/// * at least two exponents above 1: `T - (2^k - 1)`.
/// * exactly one exponent above 1: `T - (2^k - 2)`.
pub fn dim_formula(f: &FactoredInteger) -> Result<DimReport> {
    if f.is_prime() {
        return Err(Error::PrimeInput(f.n()));
    }
    let t = usize::try_from(f.vertex_count()).map_err(|_| Error::Overflow("vertex count"))?;
    let k = f.k();
    let mut report = DimReport::bare(f.n(), t, DimMethod::Formula);
    if t < 2 {
        return Ok(DimReport::degenerate(f.n(), t, DimMethod::Formula));
    }
    let classes = if f.is_squarefree() {
        (1usize << k) - 2
    } else {
        (1usize << k) - 1
    };
    report.lower_bound = t.saturating_sub(classes).max(1);
    report.dim = if k == 1 || (k == 2 && f.is_squarefree()) {
        t - 1
    } else if f.is_squarefree() {
        match k {
            3 | 4 => k - 1,
            5 => 5,
            _ => {
                report.exact = false;
                k
            }
        }
    } else if f.repeated_prime_count() >= 2 {
        t - ((1 << k) - 1)
    } else {
        t - ((1 << k) - 2)
    };
    Ok(report)
}

/// Resolving set prescribed by the class structure.
///
/// * `n = p^m`: all but one vertex.
/// * squarefree, `k >= 6`: the `k` minimal ideals `<n/p_i>` (an upper
///   bound certificate); for `k <= 5` the exact search supplies the witness.
/// * otherwise: every class minus its canonical representative, plus
///   `<p_a^{m_a}>` when `a` is the only prime with exponent above 1.
///
/// The set is verified before it is returned; a failure, or a size that
/// disagrees with [`dim_formula`] in an exact case, is an inconsistency.
pub fn constructive_resolving_set(
    g: &IdealGraph,
    dist: &DistanceMatrix,
    classes: &ClassPartition,
    budget: u64,
) -> Result<DimReport> {
    let f = g.factored();
    let t = g.order();
    if t < 2 {
        return Ok(DimReport::degenerate(f.n(), t, DimMethod::Constructive));
    }
    let formula = dim_formula(f)?;
    let k = f.k();
    let index = |d: u64| {
        g.index_of(d)
            .ok_or_else(|| Error::Inconsistency(format!("{d} is not a vertex of E(Z_{})", f.n())))
    };

    let mut report = DimReport::bare(f.n(), t, DimMethod::Constructive);
    report.lower_bound = class_lower_bound(classes);
    let witness: Vec<usize> = if f.is_squarefree() && k >= 2 {
        if k <= 5 {
            let partition = g.distance_similar_partition();
            return dim_bruteforce(g, dist, &partition, budget);
        }
        report.exact = false;
        f.primes()
            .map(|p| index(f.n() / p))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sorted()
            .collect()
    } else {
        let mut excluded = Vec::new();
        let keys = std::iter::once(IndexSet::EMPTY).chain(classes.classes().keys().copied());
        for xi in keys {
            if classes.class(xi).is_empty() {
                continue;
            }
            excluded.push(index(canonical_representative(f, xi).generator(f))?);
        }
        let mut w: Vec<usize> = (0..t).filter(|v| !excluded.contains(v)).collect();
        if k >= 2 && f.repeated_prime_count() == 1 {
            let (a, (p, m)) = f
                .factors()
                .iter()
                .copied()
                .find_position(|&(_, m)| m > 1)
                .expect("one repeated prime");
            let extra = index(p.pow(m))?;
            debug_assert!(g.vertices()[extra].xi() == IndexSet::singleton(a));
            if !w.contains(&extra) {
                w.push(extra);
                w.sort_unstable();
            }
        }
        w
    };

    let resolution = is_resolving(dist, &witness)?;
    if !resolution.resolving {
        let (u, v) = resolution.collision.expect("collision reported");
        return Err(Error::Inconsistency(format!(
            "constructed set for n = {} does not resolve <{}> and <{}>",
            f.n(),
            g.generator(u),
            g.generator(v)
        )));
    }
    report.dim = witness.len();
    if report.exact && report.dim != formula.dim {
        return Err(Error::Inconsistency(format!(
            "constructed set for n = {} has size {}, closed form gives {}",
            f.n(),
            report.dim,
            formula.dim
        )));
    }
    report.attach_witness(g, &resolution, witness);
    Ok(report)
}

/// Closed form cross-checked by a verified construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certification {
    pub formula: DimReport,
    pub constructive: DimReport,
    /// The construction resolves and matches the closed form in size.
    pub certified: bool,
    /// Similarity lower bound equals the value, proving minimality outright.
    pub lower_bound_tight: bool,
    pub complete: bool,
}

pub fn certify_dimension(
    g: &IdealGraph,
    dist: &DistanceMatrix,
    classes: &ClassPartition,
    budget: u64,
) -> Result<Certification> {
    let formula = dim_formula(g.factored())?;
    let constructive = constructive_resolving_set(g, dist, classes, budget)?;
    let similarity_bound = dim_lower_bound(&g.distance_similar_partition(), g.order());
    let certified = constructive.dim == formula.dim && (formula.degenerate || constructive.witness.is_some());
    Ok(Certification {
        lower_bound_tight: formula.exact && similarity_bound == formula.dim,
        complete: completeness_check(g),
        certified,
        formula,
        constructive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{factor, Caps};
    use crate::graph::build_essential_graph;
    use crate::ideals::{class_partition, enumerate_vertices};

    fn setup(n: u64) -> (IdealGraph, DistanceMatrix, ClassPartition) {
        let f = factor(n).unwrap();
        let g = build_essential_graph(&f, &Caps::default()).unwrap();
        let d = g.all_pairs_distances().unwrap();
        let c = class_partition(&f, &enumerate_vertices(&f).unwrap());
        (g, d, c)
    }

    fn idx(g: &IdealGraph, ds: &[u64]) -> Vec<usize> {
        ds.iter().map(|&d| g.index_of(d).unwrap()).collect()
    }

    #[test]
    fn resolving_examples_for_12() {
        let (g, d, _) = setup(12);
        let r = is_resolving(&d, &idx(&g, &[3, 4])).unwrap();
        assert!(r.resolving);
        let six = g.index_of(6).unwrap();
        assert_eq!(r.representations.iter().find(|(v, _)| *v == six).unwrap().1, vec![2, 1]);

        let r = is_resolving(&d, &idx(&g, &[2])).unwrap();
        assert!(!r.resolving);
        let (u, v) = r.collision.unwrap();
        assert_eq!((g.generator(u), g.generator(v)), (3, 4));
    }

    #[test]
    fn invalid_witnesses() {
        let (_, d, _) = setup(12);
        assert!(matches!(is_resolving(&d, &[]), Err(Error::InvalidVertexSet(_))));
        assert!(matches!(is_resolving(&d, &[9]), Err(Error::InvalidVertexSet(_))));
        assert!(matches!(is_resolving(&d, &[1, 1]), Err(Error::InvalidVertexSet(_))));
    }

    #[test]
    fn brute_force_small() {
        for (n, dim, witness) in [(12u64, 2usize, vec![2u64, 3]), (30, 2, vec![2, 3]), (8, 1, vec![2])] {
            let (g, d, _) = setup(n);
            let r = dim_bruteforce(&g, &d, &g.distance_similar_partition(), DEFAULT_SEARCH_BUDGET).unwrap();
            assert!(r.exact);
            assert_eq!(r.dim, dim, "n = {n}");
            assert_eq!(r.witness_generators.unwrap(), witness, "n = {n}");
        }
    }

    #[test]
    fn brute_force_degenerate_and_budget() {
        let (g, d, _) = setup(4);
        let r = dim_bruteforce(&g, &d, &g.distance_similar_partition(), 10).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.dim, 0);

        let (g, d, _) = setup(210);
        let r = dim_bruteforce(&g, &d, &g.distance_similar_partition(), 20).unwrap();
        assert!(!r.exact);
        assert_eq!(r.dim, 13);
        assert!(r.lower_bound <= 3);
    }

    #[test]
    fn formula_examples() {
        let dim = |n| dim_formula(&factor(n).unwrap()).unwrap();
        assert_eq!(dim(36).dim, 4);
        assert_eq!(dim(24).dim, 4);
        assert_eq!(dim(2700).dim, 27);
        assert_eq!(dim(2700).lower_bound, 27);
        assert_eq!(dim(8).dim, 1);
        assert_eq!(dim(30).dim, 2);
        assert_eq!(dim(2310).dim, 5);
        let r = dim(30030);
        assert_eq!((r.dim, r.exact), (6, false));
        assert!(dim(9).degenerate);
        assert_eq!(dim_formula(&factor(7).unwrap()), Err(Error::PrimeInput(7)));
    }

    #[test]
    fn constructive_examples() {
        let (g, d, c) = setup(2700);
        let r = constructive_resolving_set(&g, &d, &c, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(r.dim, 27);
        assert_eq!(r.lower_bound, 27);

        let (g, d, c) = setup(60);
        let r = constructive_resolving_set(&g, &d, &c, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(r.dim, 4);
        assert!(r.witness_generators.as_ref().unwrap().contains(&4));
        assert_eq!(dim_lower_bound(&g.distance_similar_partition(), g.order()), 3);

        let (g, d, c) = setup(30030);
        let r = constructive_resolving_set(&g, &d, &c, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(
            r.witness_generators.unwrap(),
            vec![2310, 2730, 4290, 6006, 10010, 15015]
        );
        assert!(!r.exact);
    }

    #[test]
    fn lower_bounds() {
        let (g, _, c) = setup(30);
        assert_eq!(dim_lower_bound(&g.distance_similar_partition(), g.order()), 1);
        assert_eq!(class_lower_bound(&c), 1);
        let (g, _, _) = setup(2700);
        assert_eq!(dim_lower_bound(&g.distance_similar_partition(), g.order()), 27);
    }

    #[test]
    fn completeness() {
        assert!(completeness_check(&setup(32).0));
        assert!(completeness_check(&setup(6).0));
        assert!(!completeness_check(&setup(12).0));
    }

    #[test]
    fn finiteness() {
        assert!(finiteness_bound_check(2, 6));
        assert!(finiteness_bound_check(5, 30));
        assert!(finiteness_bound_check(2, 4));
        assert!(!finiteness_bound_check(1, 6));
        assert!(finiteness_bound_check(200, 5));
    }

    #[test]
    fn json_shape() {
        let (g, d, c) = setup(12);
        let r = constructive_resolving_set(&g, &d, &c, DEFAULT_SEARCH_BUDGET).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["n"], 12);
        assert_eq!(v["T"], 4);
        assert_eq!(v["dim"], 2);
        assert_eq!(v["method"], "constructive");
        assert!(v["witness"].is_array());
        assert!(v["representations"].is_object());
    }
}
