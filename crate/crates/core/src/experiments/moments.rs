use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{FamilyEvaluator, FamilySpec};
use crate::incomplete::profile_with;
use crate::modular::OddPrime;
use crate::summation::{ComplexSum, NeumaierSum};

/// Largest prime scanned exhaustively (O(p^2) work).
pub const EXHAUSTIVE_CAP: u64 = 30_000;
pub const DEFAULT_SAMPLE: usize = 1_000;
pub const DEFAULT_SEED: u64 = 0x5eed_0001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Sampling {
    Exhaustive,
    Sampled { size: usize, seed: u64 },
}

impl Sampling {
    /// Exhaustive up to the cap, otherwise a seeded sample.
    pub fn for_prime(p: OddPrime, seed: u64) -> Self {
        if p.get() <= EXHAUSTIVE_CAP {
            Sampling::Exhaustive
        } else {
            Sampling::Sampled {
                size: DEFAULT_SAMPLE,
                seed,
            }
        }
    }

    /// Parameters to scan, ascending.
    pub fn parameters(self, p: OddPrime) -> Result<Vec<u64>> {
        match self {
            Sampling::Exhaustive => {
                if p.get() > EXHAUSTIVE_CAP {
                    return Err(Error::domain(format!(
                        "exhaustive scans are capped at p <= {EXHAUSTIVE_CAP}"
                    )));
                }
                Ok((1..p.get()).collect())
            }
            Sampling::Sampled { size, seed } => {
                let n = (p.get() - 1) as usize;
                if size == 0 || size > n {
                    return Err(Error::domain(format!(
                        "sample size {size} outside [1, {n}]"
                    )));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut a: Vec<u64> = sample(&mut rng, n, size)
                    .into_iter()
                    .map(|i| i as u64 + 1)
                    .collect();
                a.sort_unstable();
                Ok(a)
            }
        }
    }
}

/// `M(t_a)` and its argmax for a set of parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MaxScan {
    pub p: OddPrime,
    pub family: FamilySpec,
    pub sampling: Sampling,
    pub parameters: Vec<u64>,
    pub maxima: Vec<f64>,
    pub argmax: Vec<u64>,
}

pub fn max_scan(family: &FamilySpec, p: OddPrime, sampling: Sampling) -> Result<MaxScan> {
    let parameters = sampling.parameters(p)?;
    let ev = FamilyEvaluator::new(family, p)?;
    let (maxima, argmax) = parameters
        .par_iter()
        .map(|&a| {
            let pr = profile_with(&ev, a, false);
            (pr.max, pr.argmax_h)
        })
        .unzip();
    Ok(MaxScan {
        p,
        family: family.clone(),
        sampling,
        parameters,
        maxima,
        argmax,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentReport {
    pub p: OddPrime,
    pub family: String,
    pub sampling: Sampling,
    pub ks: Vec<u32>,
    /// `(1/#a) sum_a M(t_a)^{2k}` per `k`.
    pub moments: Vec<f64>,
    /// `(log k)^{2k}`.
    pub logk_curve: Vec<f64>,
    /// `(log log p)^{2k}`.
    pub loglogp_curve: Vec<f64>,
    /// `exp(4k log log k + k log log log k)`; NaN where undefined.
    pub pk_curve: Vec<f64>,
}

impl MomentReport {
    /// `moment_k^{1/2k}`.
    pub fn roots(&self) -> Vec<f64> {
        self.ks
            .iter()
            .zip(&self.moments)
            .map(|(&k, m)| m.powf(1.0 / (2.0 * k as f64)))
            .collect()
    }
}

fn p_curve(k: f64) -> f64 {
    let ll = k.ln().ln();
    let lll = ll.ln();
    if ll.is_finite() && lll.is_finite() {
        (4.0 * k * ll + k * lll).exp()
    } else {
        f64::NAN
    }
}

/// Moments of the maxima, summed in ascending `a` with compensation.
pub fn moments_from_scan(scan: &MaxScan, ks: &[u32]) -> Result<MomentReport> {
    if ks.is_empty() || ks.contains(&0) {
        return Err(Error::domain("moment orders must be positive"));
    }
    let n = scan.maxima.len() as f64;
    let moments = ks
        .iter()
        .map(|&k| {
            scan.maxima
                .iter()
                .map(|m| m.powi(2 * k as i32))
                .collect::<NeumaierSum>()
                .value()
                / n
        })
        .collect();
    let llp = (scan.p.get() as f64).ln().ln();
    Ok(MomentReport {
        p: scan.p,
        family: scan.family.slug(),
        sampling: scan.sampling,
        ks: ks.to_vec(),
        moments,
        logk_curve: ks
            .iter()
            .map(|&k| (k as f64).ln().powi(2 * k as i32))
            .collect(),
        loglogp_curve: ks.iter().map(|&k| llp.powi(2 * k as i32)).collect(),
        pk_curve: ks.iter().map(|&k| p_curve(k as f64)).collect(),
    })
}

pub fn max_moments(
    family: &FamilySpec,
    p: OddPrime,
    ks: &[u32],
    sampling: Sampling,
) -> Result<MomentReport> {
    moments_from_scan(&max_scan(family, p, sampling)?, ks)
}

/// Fraction of scanned `a` with `M(t_a) > A`, for each `A` as given.
pub fn tail_distribution(scan: &MaxScan, grid: &[f64]) -> Vec<(f64, f64)> {
    let n = scan.maxima.len() as f64;
    grid.iter()
        .map(|&a| (a, scan.maxima.iter().filter(|&&m| m > a).count() as f64 / n))
        .collect()
}

/// `(1/(p-1)) sum_a |(1/sqrt p) sum_{alpha p < x <= beta p} t_a(x)|^{2k}`.
pub fn block_moment(
    family: &FamilySpec,
    p: OddPrime,
    alpha: f64,
    beta: f64,
    k: u32,
) -> Result<f64> {
    if !(0.0 <= alpha && alpha < beta && beta <= 1.0) {
        return Err(Error::domain(format!(
            "need 0 <= alpha < beta <= 1, got ({alpha}, {beta})"
        )));
    }
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    if p.get() > EXHAUSTIVE_CAP {
        return Err(Error::domain(format!(
            "block moments are capped at p <= {EXHAUSTIVE_CAP}"
        )));
    }
    let pf = p.get() as f64;
    let lo = (alpha * pf).floor() as u64 + 1;
    let hi = ((beta * pf).floor() as u64).min(p.get() - 1);
    let ev = FamilyEvaluator::new(family, p)?;
    let norm = p.sqrt();
    let terms: Vec<f64> = (1..p.get())
        .into_par_iter()
        .map(|a| {
            let mut acc = ComplexSum::default();
            for x in lo..=hi {
                acc.add(ev.value(a, x));
            }
            (acc.value().norm() / norm).powi(2 * k as i32)
        })
        .collect();
    Ok(terms.into_iter().collect::<NeumaierSum>().value() / (pf - 1.0))
}

/// `gamma^{2k} (log k)^{2k} (pi/width)^{-2k/log k} + delta^{2k} p^{-1/2} (log p)^{2k}`.
pub fn block_shape(k: u32, width: f64, p: OddPrime, gamma: f64, delta: f64) -> f64 {
    let kf = k as f64;
    let two_k = 2 * k as i32;
    let lk = kf.ln();
    let head =
        gamma.powi(two_k) * lk.powi(two_k) * (std::f64::consts::PI / width).powf(-2.0 * kf / lk);
    let lp = (p.get() as f64).ln();
    head + delta.powi(two_k) * (p.get() as f64).powf(-0.5) * lp.powi(two_k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_maxima() {
        let p = OddPrime::new(101).unwrap();
        let scan = MaxScan {
            p,
            family: FamilySpec::kloosterman(1),
            sampling: Sampling::Exhaustive,
            parameters: (1..101).collect(),
            maxima: vec![1.3; 100],
            argmax: vec![0; 100],
        };
        let r = moments_from_scan(&scan, &[1, 2, 3]).unwrap();
        for (k, m) in r.ks.iter().zip(&r.moments) {
            assert!((m - 1.3f64.powi(2 * *k as i32)).abs() < 1e-12);
        }
        assert!(r.pk_curve[0].is_nan() && r.pk_curve[1].is_nan());
        assert!(r.pk_curve[2].is_finite());
        assert_eq!(r.logk_curve[0], 0.0);
        let tails = tail_distribution(&scan, &[0.0, 1.3, 2.0]);
        assert_eq!(tails, vec![(0.0, 1.0), (1.3, 0.0), (2.0, 0.0)]);
    }

    #[test]
    fn sampling_is_seeded() {
        let p = OddPrime::new(100_003).unwrap();
        let a = Sampling::Sampled { size: 50, seed: 7 }
            .parameters(p)
            .unwrap();
        let b = Sampling::Sampled { size: 50, seed: 7 }
            .parameters(p)
            .unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert!(Sampling::Exhaustive.parameters(p).is_err());
        assert_eq!(
            Sampling::for_prime(p, 7),
            Sampling::Sampled {
                size: DEFAULT_SAMPLE,
                seed: 7
            }
        );
    }

    #[test]
    fn block_moment_full_range() {
        let p = OddPrime::new(101).unwrap();
        let f = FamilySpec::kloosterman(1);
        let v = block_moment(&f, p, 0.0, 1.0, 1).unwrap();
        let mut direct = 0.0;
        for a in 1..101u64 {
            let s: num_complex::Complex64 = (1..101)
                .map(|x| crate::families::phase_value(&f, a, x, p))
                .sum();
            direct += s.norm_sqr() / 101.0;
        }
        assert!((v - direct / 100.0).abs() < 1e-10);
        assert!(block_moment(&f, p, 0.5, 0.5, 1).is_err());
    }
}
