//! Brute-force oracles built from the definitions alone: ideals of `Z_n` are
//! `<d>` for divisors `d`, `<a> + <b> = <gcd(a, b)>`, `<a> ∩ <b> = <lcm(a, b)>`
//! and `<a><b> = <ab mod n>`. Nothing here uses exponent vectors.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u128 {
    u128::from(a / gcd(a, b)) * u128::from(b)
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && divisors(n).len() == 2
}

pub fn is_squarefree(n: u64) -> bool {
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d * d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Vertices: generators `1 < d < n`, ascending.
pub fn vertices(n: u64) -> Vec<u64> {
    divisors(n).into_iter().filter(|&d| d != 1 && d != n).collect()
}

/// `<d>` meets every nonzero ideal `<h>` nontrivially, i.e. `lcm(d, h) != n`.
pub fn is_essential(n: u64, d: u64) -> bool {
    divisors(n)
        .into_iter()
        .filter(|&h| h != n)
        .all(|h| lcm(d, h) != u128::from(n))
}

pub struct Oracle {
    pub n: u64,
    pub vertices: Vec<u64>,
    pub adj: Vec<Vec<bool>>,
}

impl Oracle {
    /// Essential ideal graph: `<a> ~ <b>` iff `<gcd(a, b)>` is essential.
    pub fn essential(n: u64) -> Self {
        let vertices = vertices(n);
        let essential: HashSet<u64> = divisors(n)
            .into_iter()
            .filter(|&d| d != n && is_essential(n, d))
            .collect();
        let t = vertices.len();
        let mut adj = vec![vec![false; t]; t];
        for i in 0..t {
            for j in 0..t {
                adj[i][j] = i != j && essential.contains(&gcd(vertices[i], vertices[j]));
            }
        }
        Oracle { n, vertices, adj }
    }

    /// Annihilating ideal graph: `<a> ~ <b>` iff `ab = 0` in `Z_n`.
    pub fn annihilating(n: u64) -> Self {
        let vertices = vertices(n);
        let t = vertices.len();
        let mut adj = vec![vec![false; t]; t];
        for i in 0..t {
            for j in 0..t {
                adj[i][j] = i != j && (u128::from(vertices[i]) * u128::from(vertices[j])) % u128::from(n) == 0;
            }
        }
        Oracle { n, vertices, adj }
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&e| e).count()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.order()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn distances(&self) -> Vec<Vec<u32>> {
        let t = self.order();
        (0..t)
            .map(|s| {
                let mut dist = vec![u32::MAX; t];
                dist[s] = 0;
                let mut queue = VecDeque::from([s]);
                while let Some(u) = queue.pop_front() {
                    for v in 0..t {
                        if self.adj[u][v] && dist[v] == u32::MAX {
                            dist[v] = dist[u] + 1;
                            queue.push_back(v);
                        }
                    }
                }
                dist
            })
            .collect()
    }

    pub fn zagreb(&self) -> (u128, u128) {
        let t = self.order();
        let deg: Vec<u128> = (0..t).map(|v| self.degree(v) as u128).collect();
        let m1 = deg.iter().map(|d| d * d).sum();
        let mut m2 = 0;
        for i in 0..t {
            for j in (i + 1)..t {
                if self.adj[i][j] {
                    m2 += deg[i] * deg[j];
                }
            }
        }
        (m1, m2)
    }
}

/// Every vertex gets a distinct vector of distances to `w`.
pub fn resolves(dist: &[Vec<u32>], w: &[usize]) -> bool {
    let mut seen = HashSet::new();
    (0..dist.len()).all(|v| seen.insert(w.iter().map(|&x| dist[v][x]).collect::<Vec<_>>()))
}

/// Smallest resolving set size by trying every subset; `None` past 16
/// vertices.
pub fn naive_dim(dist: &[Vec<u32>]) -> Option<usize> {
    let t = dist.len();
    if t > 16 {
        return None;
    }
    if t <= 1 {
        return Some(0);
    }
    (1..=t).find(|&size| {
        (0u32..1 << t).filter(|m| m.count_ones() as usize == size).any(|mask| {
            let w: Vec<usize> = (0..t).filter(|&i| mask >> i & 1 == 1).collect();
            resolves(dist, &w)
        })
    })
}

/// Product of the first `k` primes.
pub fn primorial(k: usize) -> u64 {
    (2u64..).filter(|&p| is_prime(p)).take(k).product()
}

pub fn composites(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo.max(4)..=hi).filter(|&n| !is_prime(n))
}
