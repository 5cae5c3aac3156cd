//! First and second Zagreb indices, by definition and in closed form.
//!
//! `M1 = Σ deg(v)^2`, `M2 = Σ deg(u) deg(v)` over edges, each edge once.
//! For squarefree `n` a second convention for `M2` is also exposed: it counts
//! edges inside one level of the divisor lattice twice and reproduces the
//! published worked values (63 for three primes, 922 for four).

use serde::Serialize;

use crate::arithmetic::FactoredInteger;
use crate::error::{Error, Result};
use crate::graph::{IdealGraph, SimpleGraph};
use crate::ideals::{class_partition, enumerate_vertices, ClassPartition};

/// Column order of [`ZagrebReport::csv_row`].
pub const CSV_HEADER: &str = "n,k,T,M1_def,M2_def,M1_closed,M2_closed,M2_paper_convention,flags";

fn overflow() -> Error {
    Error::Overflow("Zagreb index")
}

fn add(a: u128, b: u128) -> Result<u128> {
    a.checked_add(b).ok_or_else(overflow)
}

fn mul(a: u128, b: u128) -> Result<u128> {
    a.checked_mul(b).ok_or_else(overflow)
}

fn binomial(n: u32, r: u32) -> Result<u128> {
    if r > n {
        return Ok(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // exact at every step: acc * (n - i) is divisible by i + 1
        acc = mul(acc, u128::from(n - i))? / u128::from(i + 1);
    }
    Ok(acc)
}

/// `(M1, M2)` straight from the degrees of `g`.
pub fn zagreb_by_definition(g: &SimpleGraph) -> (u128, u128) {
    let deg = |v: usize| g.degree(v) as u128;
    let m1 = (0..g.order()).map(|v| deg(v) * deg(v)).sum();
    let m2 = g.edges().map(|(u, v)| deg(u) * deg(v)).sum();
    (m1, m2)
}

/// `n = p^m`: the graph is `K_{m-1}`, so `M1 = (m-1)(m-2)^2` and
/// `M2 = C(m-1, 2)(m-2)^2`. For `m = 2` the single vertex gives `(0, 0)`.
pub fn zagreb_prime_power(m: u32) -> Result<(u128, u128)> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("exponent {m} leaves no vertices")));
    }
    let t = u128::from(m - 1);
    let sq = (t - 1) * (t - 1);
    Ok((mul(t, sq)?, mul(binomial(m - 1, 2)?, sq)?))
}

/// Closed forms for squarefree `n` with `k` primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SquarefreeZagreb {
    pub m1: u128,
    pub m2_edge_once: u128,
    pub m2_paper_convention: u128,
    /// Contribution of edges joining two vertices of the same level.
    pub within_level: u128,
}

/// Degree of a level-`i` vertex in the squarefree graph on `k` primes.
pub fn level_degree(k: u32, i: u32) -> u128 {
    (1u128 << (k - i)) - 1
}

pub fn zagreb_squarefree_closed(k: u32) -> Result<SquarefreeZagreb> {
    if !(2..=100).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "squarefree closed form needs 2 <= k <= 100, got {k}"
        )));
    }
    let a = |t: u32| level_degree(k, t);

    let mut m1 = 0;
    for i in 1..k {
        m1 = add(m1, mul(binomial(k, i)?, mul(a(i), a(i))?)?)?;
    }

    let mut within = 0;
    let mut cross = 0;
    for t in 1..k {
        // ordered pairs of disjoint t-sets, halved
        let pairs = mul(binomial(k, t)?, binomial(k - t, t)?)?;
        within = add(within, mul(pairs, mul(a(t), a(t))?)? / 2)?;
        for s in (t + 1)..=(k - t) {
            let pairs = mul(binomial(k, t)?, binomial(k - t, s)?)?;
            cross = add(cross, mul(pairs, mul(a(t), a(s))?)?)?;
        }
    }

    let mut paper = 0;
    for t in 1..=k / 2 {
        let mut inner = 0;
        for s in t..=(k - t) {
            inner = add(inner, mul(binomial(k - t, s)?, a(s))?)?;
        }
        paper = add(paper, mul(mul(binomial(k, t)?, a(t))?, inner)?)?;
    }

    Ok(SquarefreeZagreb {
        m1,
        m2_edge_once: add(within, cross)?,
        m2_paper_convention: paper,
        within_level: within,
    })
}

/// Vertices of a squarefree graph grouped by the number of primes dividing
/// the generator; `levels[i - 1]` holds level `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelPartition {
    k: usize,
    levels: Vec<Vec<usize>>,
}

impl LevelPartition {
    pub fn new(g: &IdealGraph) -> Result<Self> {
        let f = g.factored();
        if !f.is_squarefree() {
            return Err(Error::NotSquarefree(f.n()));
        }
        let k = f.k();
        let mut levels = vec![Vec::new(); k.saturating_sub(1)];
        for (v, ideal) in g.vertices().iter().enumerate() {
            let i = ideal.exponents().iter().filter(|&&e| e == 1).count();
            levels[i - 1].push(v);
        }
        Ok(LevelPartition { k, levels })
    }

    pub fn level(&self, i: usize) -> &[usize] {
        &self.levels[i - 1]
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    /// Sizes are `C(k, i)` and every level-`i` degree is `2^{k-i} - 1`.
    pub fn degree_law_holds(&self, g: &IdealGraph) -> bool {
        let k = self.k as u32;
        self.levels.iter().zip(1u32..).all(|(members, i)| {
            binomial(k, i).is_ok_and(|c| c == members.len() as u128)
                && members.iter().all(|&v| g.degree(v) as u128 == level_degree(k, i))
        })
    }
}

/// Closed form for `n` with at least one repeated prime, from the class
/// structure: the essential class is universal and a vertex of `X_Ξ` has
/// degree `m + Σ |X_Ξ'|` over classes with `Ξ'` disjoint from `Ξ`.
pub fn zagreb_general_closed(classes: &ClassPartition) -> Result<(u128, u128)> {
    let m = classes.m() as u128;
    if m == 0 {
        return Err(Error::InvalidArgument(
            "no essential vertices; use the squarefree closed form".into(),
        ));
    }
    let t1 = classes.t() as u128 - 1;
    let entries: Vec<_> = classes
        .classes()
        .iter()
        .map(|(&xi, members)| (xi, members.len() as u128, classes.class_degree(xi) as u128))
        .collect();

    let mut m1 = mul(m, mul(t1, t1)?)?;
    let mut weighted = 0;
    for &(_, size, deg) in &entries {
        m1 = add(m1, mul(size, mul(deg, deg)?)?)?;
        weighted = add(weighted, mul(size, deg)?)?;
    }

    let mut ordered_pairs = 0;
    for &(xi, size, deg) in &entries {
        for &(other, osize, odeg) in &entries {
            if xi != other && xi.is_disjoint(other) {
                ordered_pairs = add(ordered_pairs, mul(mul(size, osize)?, mul(deg, odeg)?)?)?;
            }
        }
    }
    let m2 = add(
        add(mul(m * (m - 1) / 2, mul(t1, t1)?)?, mul(mul(m, t1)?, weighted)?)?,
        ordered_pairs / 2,
    )?;
    Ok((m1, m2))
}

/// `n = p1^m1 p2^m2` with at least one exponent above 1.
pub fn zagreb_two_prime(f: &FactoredInteger) -> Result<(u128, u128)> {
    if f.k() != 2 || f.is_squarefree() {
        return Err(Error::InvalidArgument(format!(
            "{} is not p^a q^b with a repeated prime",
            f.n()
        )));
    }
    zagreb_general_closed(&class_partition(f, &enumerate_vertices(f)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedForm {
    PrimePower,
    Squarefree,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZagrebFlags {
    pub m1_agrees: bool,
    pub m2_agrees: bool,
    /// Present for squarefree `n`; false is expected and informational.
    pub paper_convention_agrees: Option<bool>,
}

impl ZagrebFlags {
    pub fn all_agree(&self) -> bool {
        self.m1_agrees && self.m2_agrees
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZagrebReport {
    pub n: u64,
    pub k: usize,
    #[serde(rename = "T")]
    pub t: usize,
    #[serde(rename = "M1_definition")]
    pub m1_definition: u128,
    #[serde(rename = "M2_definition")]
    pub m2_definition: u128,
    #[serde(rename = "M1_closed")]
    pub m1_closed: u128,
    #[serde(rename = "M2_closed")]
    pub m2_closed: u128,
    #[serde(rename = "M2_paper_convention")]
    pub m2_paper_convention: Option<u128>,
    pub closed_form: ClosedForm,
    pub flags: ZagrebFlags,
}

impl ZagrebReport {
    /// Definition values for `g` together with the matching closed form.
    pub fn compute(g: &IdealGraph) -> Result<Self> {
        let f = g.factored();
        let (m1_definition, m2_definition) = zagreb_by_definition(g.graph());
        let (closed_form, (m1_closed, m2_closed), paper) = if f.k() == 1 {
            (ClosedForm::PrimePower, zagreb_prime_power(f.factors()[0].1)?, None)
        } else if f.is_squarefree() {
            let z = zagreb_squarefree_closed(f.k() as u32)?;
            (
                ClosedForm::Squarefree,
                (z.m1, z.m2_edge_once),
                Some(z.m2_paper_convention),
            )
        } else {
            (
                ClosedForm::General,
                zagreb_general_closed(&class_partition(f, g.vertices()))?,
                None,
            )
        };
        Ok(ZagrebReport {
            n: f.n(),
            k: f.k(),
            t: g.order(),
            m1_definition,
            m2_definition,
            m1_closed,
            m2_closed,
            m2_paper_convention: paper,
            closed_form,
            flags: ZagrebFlags {
                m1_agrees: m1_closed == m1_definition,
                m2_agrees: m2_closed == m2_definition,
                paper_convention_agrees: paper.map(|p| p == m2_definition),
            },
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line in [`CSV_HEADER`] order; flags are `;`-separated.
    pub fn csv_row(&self) -> String {
        let mut flags = vec![
            if self.flags.m1_agrees {
                "m1-agrees"
            } else {
                "m1-differs"
            },
            if self.flags.m2_agrees {
                "m2-agrees"
            } else {
                "m2-differs"
            },
        ];
        match self.flags.paper_convention_agrees {
            Some(true) => flags.push("paper-convention-agrees"),
            Some(false) => flags.push("paper-convention-differs"),
            None => {}
        }
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            self.k,
            self.t,
            self.m1_definition,
            self.m2_definition,
            self.m1_closed,
            self.m2_closed,
            self.m2_paper_convention.map(|v| v.to_string()).unwrap_or_default(),
            flags.join(";")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{factor, Caps};
    use crate::graph::build_essential_graph;

    fn graph(n: u64) -> IdealGraph {
        build_essential_graph(&factor(n).unwrap(), &Caps::default()).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2).unwrap(), 10);
        assert_eq!(binomial(12, 6).unwrap(), 924);
        assert_eq!(binomial(3, 4).unwrap(), 0);
        assert_eq!(binomial(100, 50).unwrap(), 100891344545564193334812497256);
    }

    #[test]
    fn definition_small() {
        assert_eq!(zagreb_by_definition(graph(30).graph()), (30, 36));
        assert_eq!(zagreb_by_definition(graph(32).graph()), (36, 54));
        assert_eq!(zagreb_by_definition(graph(9).graph()), (0, 0));
    }

    #[test]
    fn prime_power() {
        assert_eq!(zagreb_prime_power(5).unwrap(), (36, 54));
        assert_eq!(zagreb_prime_power(3).unwrap(), (2, 1));
        assert_eq!(zagreb_prime_power(2).unwrap(), (0, 0));
        assert!(zagreb_prime_power(1).is_err());
    }

    #[test]
    fn squarefree_worked_values() {
        let z = zagreb_squarefree_closed(3).unwrap();
        assert_eq!(
            (z.m1, z.m2_edge_once, z.m2_paper_convention, z.within_level),
            (30, 36, 63, 27)
        );
        let z = zagreb_squarefree_closed(4).unwrap();
        assert_eq!(
            (z.m1, z.m2_edge_once, z.m2_paper_convention, z.within_level),
            (254, 601, 922, 321)
        );
        let z = zagreb_squarefree_closed(2).unwrap();
        assert_eq!((z.m1, z.m2_edge_once), (2, 1));
    }

    #[test]
    fn general_2700() {
        let g = graph(2700);
        let c = class_partition(g.factored(), g.vertices());
        assert_eq!(zagreb_general_closed(&c).unwrap(), (22862, 300666));
        assert_eq!(zagreb_by_definition(g.graph()), (22862, 300666));
    }

    #[test]
    fn general_rejects_squarefree() {
        let g = graph(30);
        assert!(zagreb_general_closed(&class_partition(g.factored(), g.vertices())).is_err());
    }

    #[test]
    fn two_prime_36() {
        assert_eq!(zagreb_two_prime(&factor(36).unwrap()).unwrap().0, 208);
        assert!(zagreb_two_prime(&factor(30).unwrap()).is_err());
    }

    #[test]
    fn levels_of_210() {
        let g = graph(210);
        let l = LevelPartition::new(&g).unwrap();
        assert_eq!(l.levels().iter().map(Vec::len).collect::<Vec<_>>(), vec![4, 6, 4]);
        assert!(l.degree_law_holds(&g));
        assert!(LevelPartition::new(&graph(12)).is_err());
    }

    #[test]
    fn report_flags() {
        let r = ZagrebReport::compute(&graph(30)).unwrap();
        assert!(r.flags.all_agree());
        assert_eq!(r.flags.paper_convention_agrees, Some(false));
        assert_eq!(
            r.csv_row(),
            "30,3,6,30,36,30,36,63,m1-agrees;m2-agrees;paper-convention-differs"
        );
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["M2_paper_convention"], 63);

        let r = ZagrebReport::compute(&graph(2700)).unwrap();
        assert_eq!(r.closed_form, ClosedForm::General);
        assert!(r.flags.all_agree());
        assert_eq!(r.csv_row().split(',').nth(7), Some(""));
    }
}
