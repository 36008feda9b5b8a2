//! Incomplete sums `S(t, H) = (1/sqrt p) sum_{0 <= n < H} t(n)`, their
//! maximum `M(t)`, range sums and short-interval extrema.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{FamilyEvaluator, FamilySpec, SumTable, TableSource};
use crate::modular::OddPrime;
use crate::summation::ComplexSum;

/// Result of a full prefix scan of one function.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrefixProfile {
    pub p: OddPrime,
    pub family: Option<FamilySpec>,
    pub parameter: Option<u64>,
    /// `M(t) = max_{0 <= H < p} |S(t, H)|`.
    pub max: f64,
    /// Smallest `H` attaining the maximum.
    pub argmax_h: u64,
    /// `S(t, H)` for every `H in [0, p)`, when requested.
    #[serde(skip)]
    pub full_prefix: Option<Vec<Complex64>>,
}

/// Streaming scan over `H in [0, p)`; never exits early.
fn scan<I: Iterator<Item = Complex64>>(
    terms: I,
    p: OddPrime,
    keep: bool,
) -> (f64, u64, Option<Vec<Complex64>>) {
    let norm = 1.0 / p.sqrt();
    let mut acc = ComplexSum::default();
    let mut best = 0.0;
    let mut arg = 0u64;
    let mut path = keep.then(|| Vec::with_capacity(p.as_usize()));
    // H = 0 is the empty sum
    if let Some(v) = path.as_mut() {
        v.push(Complex64::new(0.0, 0.0));
    }
    for (n, t) in terms.take(p.as_usize() - 1).enumerate() {
        acc.add(t);
        let s = acc.value() * norm;
        let m = s.norm();
        if m > best {
            best = m;
            arg = n as u64 + 1;
        }
        if let Some(v) = path.as_mut() {
            v.push(s);
        }
    }
    (best, arg, path)
}

/// Prefix profile of arbitrary samples `t(0..p)`.
pub fn profile_of_samples(
    samples: &[Complex64],
    p: OddPrime,
    keep_path: bool,
) -> Result<PrefixProfile> {
    if samples.len() != p.as_usize() {
        return Err(Error::domain(format!(
            "expected {p} samples, got {}",
            samples.len()
        )));
    }
    let (max, argmax_h, full_prefix) = scan(samples.iter().copied(), p, keep_path);
    Ok(PrefixProfile {
        p,
        family: None,
        parameter: None,
        max,
        argmax_h,
        full_prefix,
    })
}

/// Prefix profile of `t_a` using a prepared evaluator.
pub fn profile_with(ev: &FamilyEvaluator, a: u64, keep_path: bool) -> PrefixProfile {
    let p = ev.prime();
    let (max, argmax_h, full_prefix) = scan((0..p.get()).map(|x| ev.value(a, x)), p, keep_path);
    PrefixProfile {
        p,
        family: Some(ev.family().clone()),
        parameter: Some(a),
        max,
        argmax_h,
        full_prefix,
    }
}

/// `M(t_a)` and its argmax in a single compensated O(p) pass.
pub fn prefix_profile(family: &FamilySpec, a: u64, p: OddPrime) -> Result<PrefixProfile> {
    family.validate_parameter(a, p)?;
    let ev = FamilyEvaluator::new(family, p)?;
    Ok(profile_with(&ev, a, p.get() <= 100_003))
}

/// Unnormalized `sum_{N <= x <= N + H} t_a(x)`.
pub fn range_sum(
    family: &FamilySpec,
    a: u64,
    p: OddPrime,
    start: u64,
    len: u64,
) -> Result<Complex64> {
    family.validate_parameter(a, p)?;
    if start < 1 || start + len >= p.get() {
        return Err(Error::domain(format!(
            "range [{start}, {start}+{len}] not inside [1, {p})"
        )));
    }
    let ev = FamilyEvaluator::new(family, p)?;
    let mut acc = ComplexSum::default();
    for x in start..=start + len {
        acc.add(ev.value(a, x));
    }
    Ok(acc.value())
}

/// `M / (||K||_oo log 3p)`; the Polya-Vinogradov bound says this is <= 1.
pub fn pv_ratio(profile: &PrefixProfile, table: &SumTable) -> Result<f64> {
    if profile.p != table.p {
        return Err(Error::domain("profile and table are over different primes"));
    }
    if let (Some(f), TableSource::Member { family, parameter }) = (&profile.family, &table.source) {
        if f != family || profile.parameter != Some(*parameter) {
            return Err(Error::domain(
                "profile and table describe different functions",
            ));
        }
    }
    let sup = table.sup_norm();
    if sup == 0.0 {
        return Ok(0.0);
    }
    Ok(profile.max / (sup * (3.0 * table.p.get() as f64).ln()))
}

/// Short-interval extremum `max_N |sum_{N <= x <= N+H} t_a(x)|`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShortSumReport {
    pub p: OddPrime,
    pub parameter: u64,
    pub window: u64,
    pub max: f64,
    pub argmax_start: u64,
    /// `H^{1 - 0.05}`.
    pub ref_eps_005: f64,
    /// `H^{1 - 0.1}`.
    pub ref_eps_010: f64,
    /// `2 sqrt(H) log p`.
    pub envelope: f64,
}

/// Sliding-window maximum over `N in [1, p - H - 1]` in O(p).
pub fn short_sum_extremum(
    family: &FamilySpec,
    a: u64,
    p: OddPrime,
    window: u64,
) -> Result<ShortSumReport> {
    family.validate_parameter(a, p)?;
    if window < 1 || window >= p.get() - 1 {
        return Err(Error::domain(format!(
            "window H = {window} outside [1, p - 1)"
        )));
    }
    let ev = FamilyEvaluator::new(family, p)?;
    Ok(short_sum_with(&ev, a, window))
}

pub fn short_sum_with(ev: &FamilyEvaluator, a: u64, window: u64) -> ShortSumReport {
    let p = ev.prime();
    let n = p.as_usize();
    let mut prefix = Vec::with_capacity(n + 1);
    let mut acc = ComplexSum::default();
    prefix.push(Complex64::new(0.0, 0.0));
    for x in 0..p.get() {
        acc.add(ev.value(a, x));
        prefix.push(acc.value());
    }
    let mut best = -1.0;
    let mut arg = 1;
    for start in 1..p.get() - window {
        let v = (prefix[(start + window + 1) as usize] - prefix[start as usize]).norm();
        if v > best {
            best = v;
            arg = start;
        }
    }
    let h = window as f64;
    ShortSumReport {
        p,
        parameter: a,
        window,
        max: best,
        argmax_start: arg,
        ref_eps_005: h.powf(0.95),
        ref_eps_010: h.powf(0.9),
        envelope: 2.0 * h.sqrt() * (p.get() as f64).ln(),
    }
}

/// The sampled windows `ceil(p^0.45)`, `ceil(p^0.5)`, `ceil(p^0.55)`.
pub fn default_windows(p: OddPrime) -> [u64; 3] {
    let x = p.get() as f64;
    [0.45, 0.5, 0.55].map(|e| x.powf(e).ceil() as u64)
}
