//! Reference computations written from the definitions, sharing no code
//! with the library beyond `OddPrime`.
#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

/// Inverses by Fermat's little theorem.
pub fn inverses(p: u64) -> Vec<u64> {
    (0..p)
        .map(|x| if x == 0 { 0 } else { pow_mod(x, p - 2, p) })
        .collect()
}

/// `e(k/p)` for `0 <= k < p`.
pub fn roots(p: u64) -> Vec<Complex64> {
    (0..p)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / p as f64))
        .collect()
}

/// `(1/sqrt p) sum_{x != 0} e((a x + b xbar)/p)`, plain summation.
pub fn kloosterman(a: u64, b: u64, p: u64, inv: &[u64], w: &[Complex64]) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for x in 1..p {
        let k = (a * x % p + b * inv[x as usize] % p) % p;
        s += w[k as usize];
    }
    s / (p as f64).sqrt()
}

/// `(1/sqrt p) sum_{x in F_p} e((a x + b x^3)/p)`.
pub fn birch(a: u64, b: u64, p: u64, w: &[Complex64]) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for x in 0..p {
        let c = x * x % p * x % p;
        let k = (a * x % p + b * c % p) % p;
        s += w[k as usize];
    }
    s / (p as f64).sqrt()
}

/// `max_{0 <= H < p} |(1/sqrt p) sum_{n < H} t(n)|` with a plain running sum.
pub fn brute_max(t: &[Complex64]) -> f64 {
    let p = t.len();
    let mut s = Complex64::new(0.0, 0.0);
    let mut best: f64 = 0.0;
    for v in &t[..p - 1] {
        s += v;
        best = best.max(s.norm());
    }
    best / (p as f64).sqrt()
}

/// `t(x) = e(a xbar / p)` with `t(0) = 0`.
pub fn dilate_samples(a: u64, p: u64, inv: &[u64], w: &[Complex64]) -> Vec<Complex64> {
    (0..p)
        .map(|x| {
            if x == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                w[(a * inv[x as usize] % p) as usize]
            }
        })
        .collect()
}

/// `t(x) = e((a x + xbar)/p)` with `t(0) = 0`.
pub fn shift_samples(a: u64, p: u64, inv: &[u64], w: &[Complex64]) -> Vec<Complex64> {
    (0..p)
        .map(|x| {
            if x == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                w[((a * x + inv[x as usize]) % p) as usize]
            }
        })
        .collect()
}

/// `(1/sqrt p) sum_x t(x) e(x y / p)` for a single `y`.
pub fn dft_entry(t: &[Complex64], y: u64, w: &[Complex64]) -> Complex64 {
    let p = t.len() as u64;
    let mut s = Complex64::new(0.0, 0.0);
    for (x, v) in t.iter().enumerate() {
        s += v * w[((x as u64 * y) % p) as usize];
    }
    s / (p as f64).sqrt()
}

pub fn verdict(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {id:>2} [{}] {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}
