//! The Fejér kernel, the truncated Fourier expansion of prefix sums, and the
//! maximum lower-bound estimator built from it.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::SumTable;
use crate::modular::OddPrime;
use crate::summation::ComplexSum;

/// `Phi_N(theta) = (1/N) (sin(pi N theta) / sin(pi theta))^2`, with the value
/// `N` at integer `theta`.
pub fn fejer_kernel(n: u64, theta: f64) -> f64 {
    assert!(n >= 1, "Fejér kernel needs N >= 1");
    let t = theta - theta.floor();
    let nf = n as f64;
    if t == 0.0 {
        return nf;
    }
    let s = (PI * t).sin();
    let r = (PI * nf * t).sin() / s;
    r * r / nf
}

/// `sum_{|a| <= N} (1 - |a|/N) e(a theta)`, summed term by term.
pub fn fejer_kernel_sum(n: u64, theta: f64) -> f64 {
    let nf = n as f64;
    let mut acc = 1.0;
    for a in 1..n {
        acc += 2.0 * (1.0 - a as f64 / nf) * (2.0 * PI * a as f64 * theta).cos();
    }
    acc
}

fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

/// `K(n)/n (1 - e(-alpha n)) + K(-n)/(-n) (1 - e(alpha n))`.
fn harmonic_pair(table: &SumTable, alpha: f64, n: u64) -> Complex64 {
    let nf = n as f64;
    let one = Complex64::new(1.0, 0.0);
    table.signed(n as i64) / nf * (one - e(-alpha * nf))
        - table.signed(-(n as i64)) / nf * (one - e(alpha * nf))
}

/// Truncated expansion of `S(t, alpha p)` from the Fourier table:
/// `sigma [ (1/2 pi i) sum_{1<=|n|<=N} K(n)/n (1 - e(-alpha n)) + alpha K(0) ]`
/// where `sigma` is the table's sign factor (so the harmonic part reads with
/// a leading minus under the default convention).
pub fn fourier_partial(table: &SumTable, alpha: f64, n_max: u64) -> Result<Complex64> {
    let p = table.p.get();
    if n_max < 1 || n_max > (p - 1) / 2 {
        return Err(Error::domain(format!("N = {n_max} outside [1, (p-1)/2]")));
    }
    let mut acc = ComplexSum::default();
    for n in 1..=n_max {
        acc.add(harmonic_pair(table, alpha, n));
    }
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let sign = table.source.sign().factor();
    Ok(sign * (acc.value() / two_pi_i + alpha * table.get(0)))
}

/// `|fourier_partial(alpha') - S(t, H)|` with `H = floor(alpha p)` and the
/// snapped `alpha' = H / p`. `prefix` holds `S(t, H)` for `0 <= H < p`.
pub fn reconstruction_error(
    table: &SumTable,
    prefix: &[Complex64],
    alpha: f64,
    n_max: u64,
) -> Result<f64> {
    let p = table.p.get();
    if prefix.len() != p as usize {
        return Err(Error::domain("prefix path must have p entries"));
    }
    let h = ((alpha * p as f64).floor() as u64).min(p - 1);
    let snapped = h as f64 / p as f64;
    Ok((fourier_partial(table, snapped, n_max)? - prefix[h as usize]).norm())
}

/// Fitted constant `C` in `error <= C sqrt(p) log p / N`.
pub fn fitted_constant(error: f64, p: OddPrime, n_max: u64) -> f64 {
    error * n_max as f64 / (p.sqrt() * (p.get() as f64).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub value: f64,
    pub best_alpha: f64,
    pub best_n: u64,
    /// Number of harmonics `n` with `1 <= |n| < best_N`.
    pub terms_used: u64,
}

/// Evaluates `(1/4 pi) |sum_{1<=|n|<N} K(n)/n (1 - e(-alpha n))|` at one point.
pub fn estimator_at(table: &SumTable, alpha: f64, n_max: u64) -> f64 {
    let mut acc = ComplexSum::default();
    for n in 1..n_max {
        acc.add(harmonic_pair(table, alpha, n));
    }
    acc.value().norm() / (4.0 * PI)
}

/// Grid maximum of the estimator; ties go to the smallest `N`, then the
/// smallest `alpha`, independent of thread scheduling.
pub fn estimator_lower_bound(
    table: &SumTable,
    n_list: &[u64],
    alpha_grid: &[f64],
) -> Result<EstimatorResult> {
    if n_list.is_empty() || alpha_grid.is_empty() {
        return Err(Error::domain("estimator grids must be nonempty"));
    }
    let p = table.p.get();
    if let Some(&bad) = n_list.iter().find(|&&n| n < 1 || n >= p) {
        return Err(Error::domain(format!("N = {bad} outside [1, p)")));
    }
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut alphas = alpha_grid.to_vec();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    let top = *ns.last().unwrap();

    // one cumulative pass per alpha covers every N
    let columns: Vec<Vec<f64>> = alphas
        .par_iter()
        .map(|&alpha| {
            let mut acc = ComplexSum::default();
            let mut out = Vec::with_capacity(ns.len());
            let mut next = 0;
            for n in 1..=top {
                while next < ns.len() && ns[next] == n {
                    out.push(acc.value().norm() / (4.0 * PI));
                    next += 1;
                }
                acc.add(harmonic_pair(table, alpha, n));
            }
            out
        })
        .collect();

    let mut best = EstimatorResult {
        value: -1.0,
        best_alpha: alphas[0],
        best_n: ns[0],
        terms_used: 0,
    };
    for (i, &n) in ns.iter().enumerate() {
        for (j, &alpha) in alphas.iter().enumerate() {
            let v = columns[j][i];
            if v > best.value {
                best = EstimatorResult {
                    value: v,
                    best_alpha: alpha,
                    best_n: n,
                    terms_used: 2 * (n - 1),
                };
            }
        }
    }
    Ok(best)
}

/// `{j/64 : 1 <= j < 64}`.
pub fn default_alpha_grid() -> Vec<f64> {
    (1..64).map(|j| j as f64 / 64.0).collect()
}

/// Powers of two up to `(p - 1)/2`.
pub fn default_n_list(p: OddPrime) -> Vec<u64> {
    let cap = (p.get() - 1) / 2;
    std::iter::successors(Some(1u64), |n| Some(n * 2))
        .take_while(|&n| n <= cap)
        .collect()
}

/// `(1/4 pi) |sum_{odd 1<=|n|<=z} v_n 2/n|`, the `alpha = 1/2` case of the
/// estimator. `values` must hold every odd `n` with `|n| <= z`.
pub fn odd_harmonic_bound(values: &BTreeMap<i64, f64>, z: u64) -> Result<f64> {
    if z % 2 == 0 {
        return Err(Error::domain(format!("z = {z} must be odd")));
    }
    let mut acc = 0.0;
    for m in (1..=z as i64).step_by(2) {
        for n in [m, -m] {
            let v = values
                .get(&n)
                .ok_or_else(|| Error::domain(format!("missing harmonic value for n = {n}")))?;
            acc += v * 2.0 / n as f64;
        }
    }
    Ok(acc.abs() / (4.0 * PI))
}

/// `(sqrt 2 / pi) sum_{odd 1<=n<=z} 1/n`, the floor forced by the thresholds.
pub fn odd_harmonic_floor(z: u64) -> f64 {
    let h: f64 = (1..=z).step_by(2).map(|n| 1.0 / n as f64).sum();
    std::f64::consts::SQRT_2 / PI * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{SignConvention, TransformMethod};
    use crate::quadrature::integrate_with_breaks;
    use std::f64::consts::SQRT_2;

    fn p(n: u64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    fn table_from(values: Vec<Complex64>, q: OddPrime) -> SumTable {
        // a table whose values are given directly
        let mut t = SumTable::from_samples(
            &vec![Complex64::new(0.0, 0.0); q.as_usize()],
            q,
            SignConvention::Minus,
            TransformMethod::Direct,
        )
        .unwrap();
        t.values = values;
        t
    }

    #[test]
    fn kernel_closed_form() {
        for n in [1u64, 4, 64, 1024] {
            assert_eq!(fejer_kernel(n, 0.0), n as f64);
            let th = 1.0 / (2.0 * n as f64);
            assert!((fejer_kernel(n, th) - fejer_kernel_sum(n, th)).abs() < 1e-10);
            assert!((fejer_kernel(n, 0.3) - fejer_kernel(n, 0.7)).abs() < 1e-9 * n as f64);
        }
        for n in [4u64, 64, 1024] {
            let breaks: Vec<f64> = (0..=n).map(|j| j as f64 / n as f64).collect();
            let v = integrate_with_breaks(|t| fejer_kernel(n, t), &breaks, 1e-12).unwrap();
            assert!((v - 1.0).abs() < 1e-9, "N={n}: {v}");
        }
    }

    #[test]
    fn constant_term_only() {
        let q = p(101);
        let mut vals = vec![Complex64::new(0.0, 0.0); 101];
        vals[0] = Complex64::new(1.5, 0.0);
        let t = table_from(vals, q);
        let v = fourier_partial(&t, 0.3, 50).unwrap();
        // default sign convention flips the constant term
        assert!((v - Complex64::new(-0.45, 0.0)).norm() < 1e-15);
        assert!(fourier_partial(&t, 0.3, 51).is_err());
        assert!(fourier_partial(&t, 0.3, 0).is_err());
    }

    #[test]
    fn single_frequency_estimator() {
        let q = p(101);
        let c = 0.8;
        let mut vals = vec![Complex64::new(0.0, 0.0); 101];
        vals[1] = Complex64::new(c, 0.0);
        vals[100] = Complex64::new(-c, 0.0);
        let t = table_from(vals, q);
        let r = estimator_lower_bound(&t, &[2], &[0.5]).unwrap();
        assert!((r.value - c / PI).abs() < 1e-12);
        assert_eq!(r.terms_used, 2);
        assert!((estimator_at(&t, 0.5, 2) - r.value).abs() < 1e-12);

        let zero = table_from(vec![Complex64::new(0.0, 0.0); 101], q);
        let r = estimator_lower_bound(&zero, &default_n_list(q), &default_alpha_grid()).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!((r.best_n, r.best_alpha), (1, 1.0 / 64.0));
    }

    #[test]
    fn odd_harmonics() {
        let mk = |z: i64, v: f64| -> BTreeMap<i64, f64> {
            (1..=z)
                .step_by(2)
                .flat_map(|n| [(n, v), (-n, -v)])
                .collect()
        };
        assert_eq!(odd_harmonic_bound(&mk(3, 0.0), 3).unwrap(), 0.0);
        assert!((odd_harmonic_bound(&mk(1, SQRT_2), 1).unwrap() - 0.450158).abs() < 1e-6);
        assert!((odd_harmonic_bound(&mk(5, SQRT_2), 5).unwrap() - 0.690243).abs() < 1e-6);
        assert!((odd_harmonic_floor(3) - 0.600211).abs() < 1e-6);
        assert!(odd_harmonic_bound(&mk(1, SQRT_2), 3).is_err());
        assert!(odd_harmonic_bound(&mk(3, SQRT_2), 2).is_err());
    }
}
