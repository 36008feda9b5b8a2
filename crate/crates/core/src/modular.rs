//! Exact arithmetic modulo an odd prime, roots of unity and the action of
//! `PGL_2(F_p)` on the projective line.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible modulus (exclusive).
pub const MAX_PRIME: u64 = 1 << 31;

/// An odd prime `3 <= p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct OddPrime(u64);

impl OddPrime {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_PRIME {
            return Err(Error::domain(format!("modulus {p} exceeds 2^31")));
        }
        if !is_odd_prime(p) {
            return Err(Error::domain(format!("{p} is not an odd prime")));
        }
        Ok(OddPrime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn sqrt(self) -> f64 {
        (self.0 as f64).sqrt()
    }

    /// Reduce a signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, k: i64) -> u64 {
        k.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a * b) % self.0
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.0
    }

    pub fn pow(self, base: u64, exp: u64) -> u64 {
        pow_mod(base % self.0, exp, self.0)
    }
}

impl TryFrom<u64> for OddPrime {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        OddPrime::new(p)
    }
}

impl From<OddPrime> for u64 {
    fn from(p: OddPrime) -> u64 {
        p.0
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[inline]
fn mul_mod64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod64(acc, base, m);
        }
        base = mul_mod64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for odd primes below `2^63`.
///
/// Miller-Rabin with the first twelve prime bases, which has no
/// pseudoprimes below `3.3 * 10^24`.
pub fn is_odd_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 3 || n % 2 == 0 {
        return false;
    }
    for &q in &BASES[1..] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Inverse of `x` modulo `p` by the extended Euclidean algorithm.
pub fn mod_inverse(x: u64, p: OddPrime) -> Result<u64> {
    let m = p.get() as i64;
    let x = x % p.get();
    if x == 0 {
        return Err(Error::domain("0 has no inverse modulo p"));
    }
    let (mut r0, mut r1) = (m, x as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    Ok(s0.rem_euclid(m) as u64)
}

/// All inverses `1..p` in O(p) using `inv(i) = -(p / i) * inv(p mod i)`.
/// Entry 0 is set to 0.
pub fn inverse_table(p: OddPrime) -> Vec<u32> {
    let n = p.as_usize();
    let pm = p.get();
    let mut inv = vec![0u32; n];
    if n > 1 {
        inv[1] = 1;
    }
    for i in 2..n {
        let q = pm / i as u64;
        let r = inv[(pm % i as u64) as usize] as u64;
        inv[i] = ((pm - q) * r % pm) as u32;
    }
    inv
}

/// `e(k/p) = exp(2 pi i k / p)` with `k` reduced modulo `p` first.
pub fn root_of_unity(k: i64, p: OddPrime) -> Complex64 {
    let r = p.reduce(k);
    phase_to_complex(r, p.get())
}

#[inline]
pub(crate) fn phase_to_complex(r: u64, p: u64) -> Complex64 {
    // fold to (-p/2, p/2] so the angle stays small
    let signed = if 2 * r > p {
        r as f64 - p as f64
    } else {
        r as f64
    };
    let (s, c) = (TAU * signed / p as f64).sin_cos();
    Complex64::new(c, s)
}

/// Table of `e(k/p)` for `k = 0..p`.
pub fn roots_table(p: OddPrime) -> Vec<Complex64> {
    (0..p.get()).map(|k| phase_to_complex(k, p.get())).collect()
}

/// A point of the projective line `P^1(F_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProjPoint {
    Finite(u64),
    Infinity,
}

impl ProjPoint {
    pub fn finite(self) -> Option<u64> {
        match self {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }
}

/// A Moebius transformation `a -> (alpha a + beta) / (gamma a + delta)`
/// with nonzero determinant, i.e. an element of `PGL_2(F_p)`.
///
/// Equality is projective: two maps are equal when their matrices agree
/// up to a common nonzero scalar.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MoebiusMap {
    p: OddPrime,
    entries: [u64; 4],
}

impl MoebiusMap {
    pub fn new(alpha: i64, beta: i64, gamma: i64, delta: i64, p: OddPrime) -> Result<Self> {
        let entries = [alpha, beta, gamma, delta].map(|e| p.reduce(e));
        let m = MoebiusMap { p, entries };
        if m.determinant() == 0 {
            return Err(Error::domain(format!(
                "degenerate Moebius map [[{alpha},{beta}],[{gamma},{delta}]] mod {p}"
            )));
        }
        Ok(m)
    }

    pub fn identity(p: OddPrime) -> Self {
        MoebiusMap {
            p,
            entries: [1, 0, 0, 1],
        }
    }

    /// `a -> a + y`.
    pub fn translation(y: i64, p: OddPrime) -> Self {
        MoebiusMap {
            p,
            entries: [1, p.reduce(y), 0, 1],
        }
    }

    /// `a -> y a`; fails for `y = 0 mod p`.
    pub fn dilation(y: i64, p: OddPrime) -> Result<Self> {
        MoebiusMap::new(y, 0, 0, 1, p)
    }

    pub fn prime(&self) -> OddPrime {
        self.p
    }

    pub fn entries(&self) -> [u64; 4] {
        self.entries
    }

    pub fn determinant(&self) -> u64 {
        let [a, b, c, d] = self.entries;
        let p = self.p.get();
        (self.p.mul(a, d) + p - self.p.mul(b, c)) % p
    }

    pub fn apply(&self, x: ProjPoint) -> ProjPoint {
        let [a, b, c, d] = self.entries;
        let p = self.p;
        match x {
            ProjPoint::Infinity => {
                if c == 0 {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(p.mul(a, mod_inverse(c, p).expect("c != 0")))
                }
            }
            ProjPoint::Finite(x) => {
                let num = p.add(p.mul(a, x), b);
                let den = p.add(p.mul(c, x), d);
                if den == 0 {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(p.mul(num, mod_inverse(den, p).expect("den != 0")))
                }
            }
        }
    }

    /// Inverse map, given by the adjugate matrix.
    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.entries;
        let p = self.p.get();
        let neg = |x: u64| (p - x) % p;
        MoebiusMap {
            p: self.p,
            entries: [d, neg(b), neg(c), a],
        }
    }

    pub fn compose(&self, other: &MoebiusMap) -> Self {
        let [a, b, c, d] = self.entries;
        let [e, f, g, h] = other.entries;
        let p = self.p;
        let entries = [
            p.add(p.mul(a, e), p.mul(b, g)),
            p.add(p.mul(a, f), p.mul(b, h)),
            p.add(p.mul(c, e), p.mul(d, g)),
            p.add(p.mul(c, f), p.mul(d, h)),
        ];
        MoebiusMap { p: self.p, entries }
    }

    /// Representative scaled so that the first nonzero entry is 1.
    pub fn normalized(&self) -> [u64; 4] {
        let lead = self
            .entries
            .iter()
            .copied()
            .find(|&e| e != 0)
            .expect("nondegenerate");
        let s = mod_inverse(lead, self.p).expect("lead != 0");
        self.entries.map(|e| self.p.mul(e, s))
    }
}

impl PartialEq for MoebiusMap {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.normalized() == other.normalized()
    }
}

impl Eq for MoebiusMap {}

impl std::hash::Hash for MoebiusMap {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.normalized().hash(state);
    }
}
