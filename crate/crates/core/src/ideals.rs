//! The ideal lattice of `Z_n`.
//!
//! Every ideal of `Z_n` is principal, generated by a divisor `d` of `n`, and
//! is identified here with its exponent vector `r` (`d = prod p_i^{r_i}`).
//! Sum, intersection and product become componentwise `min`, `max` and
//! capped addition on those vectors.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arithmetic::FactoredInteger;
use crate::error::{Error, Result};

/// A subset of the prime indices `{0, .., k-1}` stored as a bitmask.
///
/// Used both for the saturated index set of an ideal (primes carried with
/// full exponent) and for the zero coordinates of a field-product vertex.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet(pub u32);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn full(k: usize) -> Self {
        IndexSet(if k >= 32 { u32::MAX } else { (1u32 << k) - 1 })
    }

    pub fn singleton(i: usize) -> Self {
        IndexSet(1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_disjoint(self, other: IndexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// All nonempty proper subsets of `{0, .., k-1}` in mask order.
    pub fn nonempty_proper(k: usize) -> impl Iterator<Item = IndexSet> {
        (1..IndexSet::full(k).0).map(IndexSet)
    }
}

impl fmt::Display for IndexSet {
    /// One-based, e.g. `{1,3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// An exponent vector that may fall outside the vertex set: the all-zero
/// vector is the unit ideal `Z_n`, the vector equal to `(m_i)` is the zero
/// ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&r| r == 0)
    }

    pub fn is_zero(&self, f: &FactoredInteger) -> bool {
        self.0.iter().zip(f.exponents()).all(|(&r, m)| r == m)
    }

    pub fn generator(&self, f: &FactoredInteger) -> u64 {
        generator_of(f, &self.0)
    }

    /// An ideal is essential when it meets every nonzero ideal; the unit
    /// ideal counts as essential.
    pub fn is_essential(&self, f: &FactoredInteger) -> bool {
        self.0.iter().zip(f.exponents()).all(|(&r, m)| r < m)
    }

    /// The vertex with these exponents, if it is a nonzero proper ideal.
    pub fn to_ideal(&self, f: &FactoredInteger) -> Option<Ideal> {
        if self.is_unit() || self.is_zero(f) {
            None
        } else {
            Ideal::from_exponents(f, self.0.clone()).ok()
        }
    }
}

fn generator_of(f: &FactoredInteger, exps: &[u32]) -> u64 {
    f.primes().zip(exps).map(|(p, &r)| p.pow(r)).product()
}

/// A nonzero proper ideal `<d>` of `Z_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ideal {
    exponents: Vec<u32>,
    generator: u64,
    xi: IndexSet,
}

impl Ideal {
    pub fn from_exponents(f: &FactoredInteger, exponents: Vec<u32>) -> Result<Self> {
        if exponents.len() != f.k() || exponents.iter().zip(f.exponents()).any(|(&r, m)| r > m) {
            return Err(Error::InvalidArgument(format!(
                "exponent vector {exponents:?} does not fit n = {}",
                f.n()
            )));
        }
        let generator = generator_of(f, &exponents);
        if generator == 1 || generator == f.n() {
            return Err(Error::NotAVertex(generator));
        }
        let mut xi = IndexSet::EMPTY;
        for (i, (&r, m)) in exponents.iter().zip(f.exponents()).enumerate() {
            if r == m {
                xi.insert(i);
            }
        }
        Ok(Self {
            exponents,
            generator,
            xi,
        })
    }

    pub fn from_generator(f: &FactoredInteger, d: u64) -> Result<Self> {
        if d <= 1 || d >= f.n() || !f.n().is_multiple_of(d) {
            return Err(Error::NotAVertex(d));
        }
        let mut rest = d;
        let exponents = f
            .primes()
            .map(|p| {
                let mut r = 0;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    r += 1;
                }
                r
            })
            .collect();
        Self::from_exponents(f, exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Indices `i` with `r_i = m_i`.
    pub fn xi(&self) -> IndexSet {
        self.xi
    }

    pub fn is_essential(&self) -> bool {
        self.xi.is_empty()
    }

    /// `<d1> + <d2> = <gcd(d1, d2)>`.
    pub fn sum(&self, other: &Ideal) -> ExponentVector {
        ExponentVector(self.zip_with(other, |a, b| a.min(b)))
    }

    /// `<d1> ∩ <d2> = <lcm(d1, d2)>`.
    pub fn intersection(&self, other: &Ideal) -> ExponentVector {
        ExponentVector(self.zip_with(other, |a, b| a.max(b)))
    }

    /// `<d1><d2> = <gcd(d1 d2, n)>`.
    pub fn product(&self, other: &Ideal, f: &FactoredInteger) -> ExponentVector {
        ExponentVector(
            self.exponents
                .iter()
                .zip(&other.exponents)
                .zip(f.exponents())
                .map(|((&a, &b), m)| (a + b).min(m))
                .collect(),
        )
    }

    fn zip_with(&self, other: &Ideal, op: impl Fn(u32, u32) -> u32) -> Vec<u32> {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .map(|(&a, &b)| op(a, b))
            .collect()
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.generator)
    }
}

/// All nonzero proper ideals of `Z_n`, ascending by generator.
///
/// This ordering is the canonical vertex order used by every graph.
pub fn enumerate_vertices(f: &FactoredInteger) -> Result<Vec<Ideal>> {
    if f.is_prime() {
        return Err(Error::PrimeInput(f.n()));
    }
    let n = f.n();
    f.divisors()
        .into_iter()
        .filter(|&d| d != 1 && d != n)
        .map(|d| Ideal::from_generator(f, d))
        .collect()
}

/// The class member the resolving-set construction leaves out:
/// `r_i = m_i` on `xi` and `r_i = m_i - 1` elsewhere.
pub fn canonical_representative(f: &FactoredInteger, xi: IndexSet) -> ExponentVector {
    ExponentVector(
        f.exponents()
            .enumerate()
            .map(|(i, m)| if xi.contains(i) { m } else { m - 1 })
            .collect(),
    )
}

/// Vertices grouped by saturated index set.
///
/// Members are stored as indices into the canonical vertex list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    k: usize,
    essential: Vec<usize>,
    classes: BTreeMap<IndexSet, Vec<usize>>,
    total: usize,
}

impl ClassPartition {
    pub fn k(&self) -> usize {
        self.k
    }

    /// The essential class `X` (empty index set).
    pub fn essential(&self) -> &[usize] {
        &self.essential
    }

    /// `m = |X|`.
    pub fn m(&self) -> usize {
        self.essential.len()
    }

    /// Total vertex count `T`.
    pub fn t(&self) -> usize {
        self.total
    }

    /// Non-essential classes keyed by nonempty proper index set.
    pub fn classes(&self) -> &BTreeMap<IndexSet, Vec<usize>> {
        &self.classes
    }

    pub fn class(&self, xi: IndexSet) -> &[usize] {
        if xi.is_empty() {
            &self.essential
        } else {
            self.classes.get(&xi).map(Vec::as_slice).unwrap_or(&[])
        }
    }

    /// `deg = m + sum |X_J|` over classes `J` disjoint from `xi`.
    pub fn class_degree(&self, xi: IndexSet) -> usize {
        if xi.is_empty() {
            return self.total - 1;
        }
        self.m()
            + self
                .classes
                .iter()
                .filter(|(other, _)| other.is_disjoint(xi))
                .map(|(_, members)| members.len())
                .sum::<usize>()
    }

    /// Class sizes in a fixed order: singletons by index, then pairs, and so
    /// on, matching the usual `X_1 .. X_{2^k-2}` listing.
    pub fn ordered_keys(&self) -> Vec<IndexSet> {
        let mut keys: Vec<IndexSet> = self.classes.keys().copied().collect();
        keys.sort_by_key(|s| (s.len(), s.iter().collect::<Vec<_>>()));
        keys
    }
}

/// Groups vertices by index set.
pub fn class_partition(f: &FactoredInteger, vertices: &[Ideal]) -> ClassPartition {
    let mut essential = Vec::new();
    let mut classes: BTreeMap<IndexSet, Vec<usize>> = BTreeMap::new();
    for (i, v) in vertices.iter().enumerate() {
        if v.is_essential() {
            essential.push(i);
        } else {
            classes.entry(v.xi()).or_default().push(i);
        }
    }
    ClassPartition {
        k: f.k(),
        essential,
        classes,
        total: vertices.len(),
    }
}

/// Evaluates both sides of `gcd(d1, d2) = 1 <=> n | (n/d1)(n/d2)` for
/// squarefree `n` and reports whether they agree.
pub fn gcd_lemma_check(n: u64, d1: u64, d2: u64) -> Result<bool> {
    gcd_lemma_holds(&crate::arithmetic::factor(n)?, d1, d2)
}

/// [`gcd_lemma_check`] against an existing factorization.
pub fn gcd_lemma_holds(f: &FactoredInteger, d1: u64, d2: u64) -> Result<bool> {
    let n = f.n();
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree(n));
    }
    for d in [d1, d2] {
        if d <= 1 || d >= n || !n.is_multiple_of(d) {
            return Err(Error::NotAVertex(d));
        }
    }
    if d1 == d2 {
        return Err(Error::InvalidArgument("divisors must be distinct".into()));
    }
    let coprime = d1.gcd(&d2) == 1;
    let divides = ((n / d1) as u128 * (n / d2) as u128).is_multiple_of(n as u128);
    Ok(coprime == divides)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::factor;

    fn ideal(n: u64, d: u64) -> (FactoredInteger, Ideal) {
        let f = factor(n).unwrap();
        let i = Ideal::from_generator(&f, d).unwrap();
        (f, i)
    }

    #[test]
    fn vertex_enumeration() {
        let gens = |n| {
            enumerate_vertices(&factor(n).unwrap())
                .unwrap()
                .iter()
                .map(Ideal::generator)
                .collect::<Vec<_>>()
        };
        assert_eq!(gens(12), vec![2, 3, 4, 6]);
        assert_eq!(gens(8), vec![2, 4]);
        assert_eq!(gens(2700).len(), 34);
        assert_eq!(enumerate_vertices(&factor(7).unwrap()), Err(Error::PrimeInput(7)));
    }

    #[test]
    fn essentiality() {
        assert!(ideal(12, 2).1.is_essential());
        assert!(!ideal(12, 4).1.is_essential());
        let (_, i) = ideal(2700, 675);
        assert!(!i.is_essential());
        assert_eq!(i.xi(), IndexSet(0b110));
        assert_eq!(i.xi().to_string(), "{2,3}");
    }

    #[test]
    fn lattice_operations() {
        let (f, a) = ideal(12, 4);
        let b = Ideal::from_generator(&f, 6).unwrap();
        let c = Ideal::from_generator(&f, 3).unwrap();
        let two = Ideal::from_generator(&f, 2).unwrap();
        assert_eq!(a.sum(&b).generator(&f), 2);
        assert!(c.sum(&a).is_unit());
        assert!(a.intersection(&b).is_zero(&f));
        assert!(a.product(&b, &f).is_zero(&f));
        assert_eq!(two.product(&c, &f).generator(&f), 6);

        let (f, a) = ideal(2700, 108);
        let b = Ideal::from_generator(&f, 675).unwrap();
        assert_eq!(a.sum(&b).generator(&f), 27);

        let (f, a) = ideal(30, 2);
        let six = Ideal::from_generator(&f, 6).unwrap();
        let ten = Ideal::from_generator(&f, 10).unwrap();
        assert_eq!(a.intersection(&six).generator(&f), 6);
        assert!(six.intersection(&ten).is_zero(&f));
        assert!(six.product(&ten, &f).is_zero(&f));
    }

    #[test]
    fn partition_of_12() {
        let f = factor(12).unwrap();
        let v = enumerate_vertices(&f).unwrap();
        let p = class_partition(&f, &v);
        let gens = |idx: &[usize]| idx.iter().map(|&i| v[i].generator()).collect::<Vec<_>>();
        assert_eq!(gens(p.essential()), vec![2]);
        assert_eq!(gens(p.class(IndexSet(0b01))), vec![4]);
        assert_eq!(gens(p.class(IndexSet(0b10))), vec![3, 6]);
    }

    #[test]
    fn partition_of_2700() {
        let f = factor(2700).unwrap();
        let p = class_partition(&f, &enumerate_vertices(&f).unwrap());
        assert_eq!(p.m(), 11);
        let sizes: Vec<usize> = p.ordered_keys().iter().map(|&x| p.class(x).len()).collect();
        assert_eq!(sizes, vec![6, 4, 6, 2, 3, 2]);
        let degs: Vec<usize> = p.ordered_keys().iter().map(|&x| p.class_degree(x)).collect();
        assert_eq!(degs, vec![23, 26, 23, 17, 15, 17]);
    }

    #[test]
    fn squarefree_partition_is_all_singletons() {
        let f = factor(30).unwrap();
        let p = class_partition(&f, &enumerate_vertices(&f).unwrap());
        assert_eq!(p.m(), 0);
        assert_eq!(p.classes().len(), 6);
        assert!(p.classes().values().all(|c| c.len() == 1));
    }

    #[test]
    fn canonical_representatives() {
        let f = factor(2700).unwrap();
        assert_eq!(canonical_representative(&f, IndexSet::EMPTY).generator(&f), 2 * 9 * 5);
        assert_eq!(canonical_representative(&f, IndexSet(0b001)).generator(&f), 4 * 9 * 5);
        let f = factor(60).unwrap();
        assert_eq!(canonical_representative(&f, IndexSet(0b001)).generator(&f), 4);
    }

    #[test]
    fn gcd_lemma_examples() {
        assert_eq!(gcd_lemma_check(30, 2, 15), Ok(true));
        assert_eq!(gcd_lemma_check(30, 6, 10), Ok(true));
        assert_eq!(gcd_lemma_check(210, 6, 35), Ok(true));
        assert_eq!(gcd_lemma_check(12, 2, 3), Err(Error::NotSquarefree(12)));
        assert_eq!(gcd_lemma_check(30, 4, 3), Err(Error::NotAVertex(4)));
    }

    #[test]
    fn sum_essential_iff_disjoint_index_sets() {
        for n in 4..=10_000u64 {
            let f = factor(n).unwrap();
            if f.is_prime() {
                continue;
            }
            let v = enumerate_vertices(&f).unwrap();
            for a in &v {
                for b in &v {
                    assert_eq!(
                        a.sum(b).is_essential(&f),
                        a.xi().is_disjoint(b.xi()),
                        "n = {n}, {a} + {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn class_sizes_follow_exponents() {
        for n in 4..=20_000u64 {
            let f = factor(n).unwrap();
            if f.is_prime() {
                continue;
            }
            let p = class_partition(&f, &enumerate_vertices(&f).unwrap());
            let m: Vec<u32> = f.exponents().collect();
            assert_eq!(p.m() as u64, f.essential_count());
            let mut total = p.m();
            for xi in IndexSet::nonempty_proper(f.k()) {
                let expected: usize = (0..f.k()).filter(|&i| !xi.contains(i)).map(|i| m[i] as usize).product();
                assert_eq!(p.class(xi).len(), expected, "n = {n}, xi = {xi}");
                total += expected;
            }
            assert_eq!(total as u64, f.vertex_count());
            assert_eq!(p.classes().len(), (1 << f.k()) - 2);
        }
    }

    #[test]
    fn product_zero_iff_n_divides() {
        for n in [12u64, 30, 36, 60, 210, 360, 2700] {
            let f = factor(n).unwrap();
            let v = enumerate_vertices(&f).unwrap();
            for a in &v {
                for b in &v {
                    let by_int = (a.generator() * b.generator()) % n == 0;
                    assert_eq!(a.product(b, &f).is_zero(&f), by_int);
                    assert_eq!(a.product(b, &f).generator(&f), (a.generator() * b.generator()).gcd(&n));
                }
            }
        }
    }
}
