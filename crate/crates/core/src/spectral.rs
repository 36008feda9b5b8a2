//! Normalized length-`p` discrete Fourier transforms.
//!
//! `p` is prime, so the transform is computed with the chirp (Bluestein)
//! identity `xy = (x^2 + y^2 - (y - x)^2) / 2`, which turns it into a
//! linear convolution evaluated with power-of-two FFTs.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::modular::{phase_to_complex, OddPrime};
use crate::summation::ComplexSum;

/// Entries probed against direct summation to estimate the transform error.
const PROBES: usize = 8;

/// Largest tolerated estimated entrywise error of a chirp transform.
pub const MAX_TRANSFORM_ERROR: f64 = 1e-5;

/// Orientation of the exponential kernel `e(sign * x y / p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Positive,
    Negative,
}

impl Kernel {
    fn sign(self) -> i64 {
        match self {
            Kernel::Positive => 1,
            Kernel::Negative => -1,
        }
    }
}

/// `(1/sqrt p) * sum_x values[x] e(sign * x y / p)` for every `y`, by direct
/// O(p^2) summation with exact integer phases.
pub fn direct_dft(values: &[Complex64], p: OddPrime, kernel: Kernel) -> Vec<Complex64> {
    (0..p.get())
        .map(|y| direct_entry(values, p, kernel, y))
        .collect()
}

/// A single entry of [`direct_dft`].
pub fn direct_entry(values: &[Complex64], p: OddPrime, kernel: Kernel, y: u64) -> Complex64 {
    let m = p.get();
    let step = p.reduce(kernel.sign() * y as i64);
    let mut acc = ComplexSum::default();
    let mut phase = 0u64;
    for &v in values {
        if v != Complex64::new(0.0, 0.0) {
            acc.add(v * phase_to_complex(phase, m));
        }
        phase += step;
        if phase >= m {
            phase -= m;
        }
    }
    acc.value() / p.sqrt()
}

/// `e(sign * k^2 / (2p))` with `k^2` reduced exactly modulo `2p`.
fn chirp(k: u64, p: u64, sign: i64) -> Complex64 {
    let two_p = 2 * p;
    let r = (k * k) % two_p;
    let folded = if r > p {
        r as f64 - two_p as f64
    } else {
        r as f64
    };
    let (s, c) = (PI * sign as f64 * folded / p as f64).sin_cos();
    Complex64::new(c, s)
}

/// Chirp-z transform: same output as [`direct_dft`] in O(p log p).
///
/// Returns the transform together with an error estimate obtained by
/// re-evaluating a few entries by direct summation.
pub fn chirp_dft(
    values: &[Complex64],
    p: OddPrime,
    kernel: Kernel,
) -> Result<(Vec<Complex64>, f64)> {
    let n = p.as_usize();
    if values.len() != n {
        return Err(Error::domain(format!(
            "expected {n} samples, got {}",
            values.len()
        )));
    }
    let sign = kernel.sign();
    let m = (2 * n - 1).next_power_of_two();
    let chirps: Vec<Complex64> = (0..n as u64).map(|k| chirp(k, p.get(), sign)).collect();

    let mut a = vec![Complex64::new(0.0, 0.0); m];
    for (slot, (&v, &c)) in a.iter_mut().zip(values.iter().zip(&chirps)) {
        *slot = v * c;
    }
    let mut b = vec![Complex64::new(0.0, 0.0); m];
    b[0] = chirps[0].conj();
    for k in 1..n {
        b[k] = chirps[k].conj();
        b[m - k] = chirps[k].conj();
    }

    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(m);
    let inv = planner.plan_fft_inverse(m);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    inv.process(&mut a);

    let scale = 1.0 / (m as f64 * p.sqrt());
    let out: Vec<Complex64> = (0..n).map(|y| a[y] * chirps[y] * scale).collect();

    let mut err = 0f64;
    for j in 0..PROBES.min(n) {
        let y = (j as u64 * (p.get() / PROBES as u64 + 1) + j as u64) % p.get();
        let exact = direct_entry(values, p, kernel, y);
        err = err.max((exact - out[y as usize]).norm());
    }
    Ok((out, err))
}
