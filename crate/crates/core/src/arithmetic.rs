//! Integer factorization and divisor counting for `n < 2^63`.
//!
//! Small factors are stripped by trial division up to [`TRIAL_LIMIT`]. A
//! cofactor left over after that is either prime (certified by a
//! deterministic Miller-Rabin test) or split with Pollard's rho.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trial division bound.
pub const TRIAL_LIMIT: u64 = 1_000_000;

/// Largest accepted input, exclusive.
pub const MAX_N: u64 = 1 << 63;

/// `n` together with its prime factorization, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactoredInteger {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    /// Builds a factorization from explicit prime powers. The primes are
    /// sorted; the caller is trusted on primality.
    pub fn from_factors(mut factors: Vec<(u64, u32)>) -> Result<Self> {
        factors.sort_unstable();
        let mut n: u64 = 1;
        for w in factors.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidArgument(format!("repeated prime {}", w[0].0)));
            }
        }
        for &(p, m) in &factors {
            if p < 2 || m == 0 {
                return Err(Error::InvalidArgument(format!("bad prime power {p}^{m}")));
            }
            for _ in 0..m {
                n = n.checked_mul(p).ok_or(Error::Overflow("product of prime powers"))?;
            }
        }
        if !(2..MAX_N).contains(&n) {
            return Err(Error::OutOfRange(n));
        }
        Ok(Self { n, factors })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(p_i, m_i)` pairs in increasing prime order.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.factors.iter().map(|&(_, m)| m)
    }

    /// Number of distinct primes.
    pub fn k(&self) -> usize {
        self.factors.len()
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, m)| m == 1)
    }

    /// Number of primes whose exponent exceeds one.
    pub fn repeated_prime_count(&self) -> usize {
        self.factors.iter().filter(|&&(_, m)| m > 1).count()
    }

    /// `prod (m_i + 1)`, saturating at `u64::MAX`.
    pub fn divisor_count(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(_, m)| acc.saturating_mul(u64::from(m) + 1))
    }

    /// Vertex count `T = prod (m_i + 1) - 2` of the ideal graphs.
    pub fn vertex_count(&self) -> u64 {
        self.divisor_count().saturating_sub(2)
    }

    /// Essential vertex count `m = prod m_i - 1`.
    pub fn essential_count(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(_, m)| acc.saturating_mul(u64::from(m)))
            - 1
    }

    /// All divisors in ascending order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, m) in &self.factors {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..m {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Human-readable form such as `2^2 * 3^3 * 5^2`.
    pub fn pretty(&self) -> String {
        self.factors
            .iter()
            .map(|&(p, m)| if m == 1 { p.to_string() } else { format!("{p}^{m}") })
            .collect::<Vec<_>>()
            .join(" * ")
    }
}

/// Factors `2 <= n < 2^63`.
pub fn factor(n: u64) -> Result<FactoredInteger> {
    if !(2..MAX_N).contains(&n) {
        return Err(Error::OutOfRange(n));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut push = |p: u64, rest: &mut u64| {
        let mut m = 0u32;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            m += 1;
        }
        if m > 0 {
            factors.push((p, m));
        }
    };
    push(2, &mut rest);
    let mut d = 3u64;
    while d <= TRIAL_LIMIT && d * d <= rest {
        push(d, &mut rest);
        d += 2;
    }
    if rest > 1 {
        if rest <= TRIAL_LIMIT * TRIAL_LIMIT || is_prime_u64(rest) {
            factors.push((rest, 1));
        } else {
            let mut big = Vec::new();
            split_large(rest, &mut big);
            big.sort_unstable();
            for chunk in big.chunk_by(|a, b| a == b) {
                factors.push((chunk[0], chunk.len() as u32));
            }
        }
    }
    factors.sort_unstable();
    Ok(FactoredInteger { n, factors })
}

/// Recursively splits a cofactor with no prime factor below [`TRIAL_LIMIT`].
fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; these twelve bases are exact for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard's rho. `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    use num_integer::Integer;
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        while g == 1 {
            x = f(x);
            y = f(f(y));
            g = x.abs_diff(y).gcd(&n);
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Size limits applied before any graph is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub max_primes: usize,
    pub max_vertices: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            max_primes: 20,
            max_vertices: 20_000,
        }
    }
}

impl Caps {
    /// Checks that `f` describes a ring with at least one nonzero proper
    /// ideal and that the resulting graph stays within the caps.
    pub fn check(&self, f: &FactoredInteger) -> Result<()> {
        if f.is_prime() {
            return Err(Error::PrimeInput(f.n()));
        }
        if f.k() > self.max_primes {
            return Err(Error::TooManyPrimes {
                n: f.n(),
                k: f.k(),
                max: self.max_primes,
            });
        }
        let t = f.vertex_count();
        if t > self.max_vertices {
            return Err(Error::TooManyVertices {
                n: f.n(),
                t,
                max: self.max_vertices,
            });
        }
        Ok(())
    }
}
