//! Selberg-type approximants of interval indicators on the Sato-Tate circle.
//!
//! An interval `[u, v]` of `x = theta/pi` is extended evenly to the circle
//! `w = theta/(2 pi)` mod 1 and approximated by Vaaler's polynomial of degree
//! `D = 2L` in `w`. Both `alpha` and the error majorant `beta` are then cosine
//! polynomials in `theta`, so their Chebyshev-U expansions stop at `2L`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::chebyshev::{st_integrate_with_breaks, ChebCoeffs, ST_TOL};
use crate::error::{Error, Result};

/// Lower bound on the degree parameter from `choose_l`.
pub const L_FLOOR: u64 = 47;
/// Points in the verification grid on `[0, 1]`.
pub const CHECK_GRID: usize = 10_000;
/// Grid points excluded within this distance of `u` and `v`.
pub const ENDPOINT_GAP: f64 = 1e-3;
const TILT_GRID: usize = 1 << 16;
const TILT_SAFETY: f64 = 1.25;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelbergPair {
    pub u: f64,
    pub v: f64,
    pub l: u64,
    /// `alpha(theta) = sum_k alpha[k] cos(k theta)`, `k <= 2L`.
    pub alpha: Vec<f64>,
    /// Same layout for the majorant of `|chi - alpha|`.
    pub beta: Vec<f64>,
    /// Multiple of `beta` added to Vaaler's polynomial to keep `alpha >= 0`.
    pub tilt: f64,
    /// Factor `<= 1` applied afterwards to keep `alpha <= 1`.
    pub scale: f64,
    pub alpha_cheb: ChebCoeffs,
    pub beta_cheb: ChebCoeffs,
}

/// Vaaler's weight `pi t (1 - t) cot(pi t) + t` on `(0, 1)`.
fn vaaler_weight(t: f64) -> f64 {
    PI * t * (1.0 - t) / (PI * t).tan() + t
}

/// `sum_k a[k] cos(k theta)` by Clenshaw's recurrence.
pub fn cosine_eval(a: &[f64], theta: f64) -> f64 {
    let c = theta.cos();
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ak in a.iter().skip(1).rev() {
        let b0 = ak + 2.0 * c * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    a.first().copied().unwrap_or(0.0) + c * b1 - b2
}

impl SelbergPair {
    pub fn degree(&self) -> u64 {
        2 * self.l
    }

    /// `alpha` at `x = theta / pi`.
    pub fn alpha_at(&self, x: f64) -> f64 {
        cosine_eval(&self.alpha, PI * x)
    }

    pub fn beta_at(&self, x: f64) -> f64 {
        cosine_eval(&self.beta, PI * x)
    }

    pub fn indicator(&self, x: f64) -> f64 {
        if (self.u..=self.v).contains(&x) {
            1.0
        } else {
            0.0
        }
    }

    /// `int alpha dmu_ST`, the constant Chebyshev coefficient.
    pub fn alpha_integral(&self) -> f64 {
        self.alpha_cheb.coefficients[0]
    }

    pub fn beta_integral(&self) -> f64 {
        self.beta_cheb.coefficients[0]
    }

    /// `int_0^1 beta(x)^2 dx` by Parseval.
    pub fn beta_l2_squared(&self) -> f64 {
        cosine_l2_squared(&self.beta)
    }

    /// `int chi_[u,v] dmu_ST`.
    pub fn target_integral(&self) -> f64 {
        crate::chebyshev::st_mass_below(PI * self.v) - crate::chebyshev::st_mass_below(PI * self.u)
    }

    /// Chebyshev coefficients of `alpha` recomputed by quadrature to
    /// absolute tolerance `tol`.
    pub fn alpha_cheb_by_quadrature(&self, degree: usize, tol: f64) -> Result<ChebCoeffs> {
        ChebCoeffs::by_quadrature(|t| cosine_eval(&self.alpha, t), degree, &[], tol)
    }

    /// `int beta dmu_ST` by quadrature.
    pub fn beta_integral_by_quadrature(&self) -> Result<f64> {
        cosine_st_integral(&self.beta)
    }

    /// Largest violation of `0 <= alpha <= 1` and of `|chi - alpha| <= beta`
    /// on the check grid; both are `<= 0` when the pair is valid.
    pub fn grid_violations(&self) -> (f64, f64) {
        let mut range = f64::NEG_INFINITY;
        let mut sandwich = f64::NEG_INFINITY;
        for i in 0..CHECK_GRID {
            let x = i as f64 / (CHECK_GRID - 1) as f64;
            let a = self.alpha_at(x);
            range = range.max(-a).max(a - 1.0);
            if (x - self.u).abs() < ENDPOINT_GAP || (x - self.v).abs() < ENDPOINT_GAP {
                continue;
            }
            sandwich = sandwich.max((self.indicator(x) - a).abs() - self.beta_at(x));
        }
        (range, sandwich)
    }
}

/// Maximum of `f` on `[0, pi]`: an `n`-cell grid scan, then golden-section
/// refinement inside the two cells around every grid-local maximum.
fn refined_max<F: Fn(f64) -> f64>(f: F, n: usize) -> f64 {
    let h = PI / n as f64;
    let vals: Vec<f64> = (0..=n).map(|i| f(i as f64 * h)).collect();
    let mut best = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    for i in 1..n {
        if !(vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] && vals[i] > 0.0) {
            continue;
        }
        let (mut lo, mut hi) = ((i - 1) as f64 * h, (i + 1) as f64 * h);
        let mut c = hi - inv_phi * (hi - lo);
        let mut d = lo + inv_phi * (hi - lo);
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..60 {
            if fc > fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - inv_phi * (hi - lo);
                fc = f(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + inv_phi * (hi - lo);
                fd = f(d);
            }
        }
        best = best.max(fc).max(fd);
    }
    best
}

/// Cosine coefficients of the error majorant for `chi_[u, v]` at degree `L`:
/// `1/(2(D+1))` times the Fejer kernels `F_D` centred at the interior
/// endpoints and their reflections, `D = 2L`.
pub fn majorant(u: f64, v: f64, l: u64) -> Result<Vec<f64>> {
    if !(0.0 <= u && u < v && v <= 1.0) {
        return Err(Error::domain(format!(
            "need 0 <= u < v <= 1, got ({u}, {v})"
        )));
    }
    if l == 0 {
        return Err(Error::domain("L must be positive"));
    }
    let d = 2 * l as usize;
    let m = (d + 1) as f64;
    let mut beta = vec![0.0; d + 1];
    for e in [u, v].into_iter().filter(|&e| e > 0.0 && e < 1.0) {
        beta[0] += 2.0;
        for (k, b) in beta.iter_mut().enumerate().skip(1) {
            let kf = k as f64;
            *b += 4.0 * (1.0 - kf / m) * (PI * kf * e).cos();
        }
    }
    for b in beta.iter_mut() {
        *b /= 2.0 * m;
    }
    Ok(beta)
}

/// `int_0^1 g(x)^2 dx` for `g(x) = sum_k a[k] cos(k pi x)`, by Parseval.
pub fn cosine_l2_squared(a: &[f64]) -> f64 {
    match a.split_first() {
        Some((a0, rest)) => a0 * a0 + rest.iter().map(|b| b * b / 2.0).sum::<f64>(),
        None => 0.0,
    }
}

/// `int sum_k a[k] cos(k theta) dmu_ST` by quadrature.
pub fn cosine_st_integral(a: &[f64]) -> Result<f64> {
    st_integrate_with_breaks(|t| cosine_eval(a, t), &[], ST_TOL)
}

/// Builds and verifies the approximant pair for `chi_[u, v]` at degree `L`.
pub fn selberg_pair(u: f64, v: f64, l: u64) -> Result<SelbergPair> {
    let beta = majorant(u, v, l)?;
    let d = 2 * l as usize;
    let m = (d + 1) as f64;

    let mut alpha = vec![0.0; d + 1];
    alpha[0] = v - u;
    for (k, a) in alpha.iter_mut().enumerate().skip(1) {
        let kf = k as f64;
        *a = 2.0 / PI * vaaler_weight(kf / m) / kf * ((PI * kf * v).sin() - (PI * kf * u).sin());
    }

    let worst = refined_max(
        |th| {
            let a = cosine_eval(&alpha, th);
            if a < 0.0 {
                -a / cosine_eval(&beta, th).max(f64::MIN_POSITIVE)
            } else {
                0.0
            }
        },
        TILT_GRID,
    );
    if !worst.is_finite() {
        return Err(Error::integrity(
            "approximant negative where the majorant vanishes",
        ));
    }
    let tilt = TILT_SAFETY * worst;
    for (a, b) in alpha.iter_mut().zip(&beta) {
        *a += tilt * b;
    }
    // the tilt can push the overshoot inside the interval just above 1
    let top = refined_max(|th| cosine_eval(&alpha, th), TILT_GRID);
    let scale = if top > 1.0 {
        1.0 / (1.0 + TILT_SAFETY * (top - 1.0))
    } else {
        1.0
    };
    if scale != 1.0 {
        alpha.iter_mut().for_each(|a| *a *= scale);
    }

    let pair = SelbergPair {
        u,
        v,
        l,
        alpha_cheb: ChebCoeffs::from_cosine(&alpha),
        beta_cheb: ChebCoeffs::from_cosine(&beta),
        alpha,
        beta,
        tilt,
        scale,
    };
    let (range, sandwich) = pair.grid_violations();
    if range > 0.0 {
        return Err(Error::integrity(format!(
            "alpha leaves [0, 1] by {range:.3e} (u={u}, v={v}, L={l})"
        )));
    }
    if sandwich > 0.0 {
        return Err(Error::integrity(format!(
            "|chi - alpha| exceeds beta by {sandwich:.3e} (u={u}, v={v}, L={l})"
        )));
    }
    if pair.alpha_cheb.degree() > d || pair.beta_cheb.degree() > d {
        return Err(Error::integrity("Chebyshev degree exceeds 2L"));
    }
    Ok(pair)
}

/// Smallest `L >= 47` with `L = -1 mod 2 gamma` and
/// `2L + 2 >= 6 z (1/2 - 1/gamma)^{-2}`.
pub fn choose_l(z: u64, gamma: u64) -> Result<u64> {
    if z == 0 || z % 2 == 0 {
        return Err(Error::domain(format!("z = {z} must be odd and positive")));
    }
    if gamma < 4 || gamma % 2 == 1 {
        return Err(Error::domain(format!(
            "gamma = {gamma} must be even and >= 4"
        )));
    }
    let modulus = 2 * gamma;
    let g2 = (gamma - 2) * (gamma - 2);
    // (2L + 2)(gamma - 2)^2 >= 24 z gamma^2 in integers
    let need = 24 * z * gamma * gamma;
    let mut l = L_FLOOR.div_ceil(modulus) * modulus + modulus - 1;
    if l - modulus >= L_FLOOR {
        l -= modulus;
    }
    while (2 * l + 2) * g2 < need {
        l += modulus;
    }
    Ok(l)
}

/// Pieces of the constant term in the product expansion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaReport {
    pub z: u64,
    pub gamma: u64,
    pub l: u64,
    pub i_plus: f64,
    pub i_minus: f64,
    /// Measured `int beta dmu_ST`, used in place of `1/(L+1)`.
    pub beta_plus: f64,
    pub beta_minus: f64,
    pub value: f64,
    /// `(1/2)(1/2 - 1/gamma)^{z+1}`.
    pub bound: f64,
    /// Set when a measured `int beta` exceeds `2/(L+1)`.
    pub beta_flag: bool,
}

impl DeltaReport {
    pub fn meets_bound(&self) -> bool {
        self.value >= self.bound
    }
}

/// Evaluates the constant term without enforcing the bound.
pub fn delta_report(z: u64, gamma: u64, l: u64) -> Result<DeltaReport> {
    if z == 0 || z % 2 == 0 {
        return Err(Error::domain(format!("z = {z} must be odd and positive")));
    }
    if gamma < 4 || gamma % 2 == 1 {
        return Err(Error::domain(format!(
            "gamma = {gamma} must be even and >= 4"
        )));
    }
    let edge = 0.5 - 1.0 / gamma as f64;
    let plus = selberg_pair(0.0, edge, l)?;
    let minus = selberg_pair(1.0 - edge, 1.0, l)?;
    let (ip, im) = (plus.alpha_integral(), minus.alpha_integral());
    let (bp, bm) = (plus.beta_integral(), minus.beta_integral());
    let h = ((z + 1) / 2) as i32;
    let hf = h as f64;
    let value = ip.powi(h) * im.powi(h)
        - hf * bp * ip.powi(h - 1) * im.powi(h)
        - hf * bm * ip.powi(h) * im.powi(h - 1);
    let cap = 2.0 / (l + 1) as f64;
    Ok(DeltaReport {
        z,
        gamma,
        l,
        i_plus: ip,
        i_minus: im,
        beta_plus: bp,
        beta_minus: bm,
        value,
        bound: 0.5 * edge.powi(z as i32 + 1),
        beta_flag: bp > cap || bm > cap,
    })
}

/// The constant term, failing with an integrity error below the bound.
pub fn delta_constant(z: u64, gamma: u64, l: u64) -> Result<f64> {
    let r = delta_report(z, gamma, l)?;
    if !r.meets_bound() {
        return Err(Error::integrity(format!(
            "constant term {:.6e} below the bound {:.6e} (z={z}, gamma={gamma}, L={l}; I+={:.6}, I-={:.6})",
            r.value, r.bound, r.i_plus, r.i_minus
        )));
    }
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choose_l_rule() {
        assert_eq!(choose_l(1, 4).unwrap(), 47);
        assert_eq!(choose_l(3, 4).unwrap(), 143);
        assert_eq!(choose_l(5, 4).unwrap(), 239);
        for z in [1u64, 3, 5, 7, 9] {
            for gamma in [4u64, 6, 8, 10] {
                let l = choose_l(z, gamma).unwrap();
                assert_eq!((l + 1) % (2 * gamma), 0);
                assert!(l >= L_FLOOR);
                assert!((2 * l + 2) * (gamma - 2).pow(2) >= 24 * z * gamma * gamma);
                let prev = l.checked_sub(2 * gamma);
                if let Some(prev) = prev.filter(|&q| q >= L_FLOOR) {
                    assert!((2 * prev + 2) * (gamma - 2).pow(2) < 24 * z * gamma * gamma);
                }
            }
        }
        assert!(choose_l(2, 4).is_err());
        assert!(choose_l(1, 5).is_err());
    }

    #[test]
    fn clenshaw_matches_direct() {
        let a = [0.2, -0.4, 0.1, 0.7];
        for th in [0.0, 0.3, 1.9, PI] {
            let d: f64 = a
                .iter()
                .enumerate()
                .map(|(k, c)| c * (k as f64 * th).cos())
                .sum();
            assert!((cosine_eval(&a, th) - d).abs() < 1e-14);
        }
    }

    #[test]
    fn small_pair_invariants() {
        let pr = selberg_pair(0.0, 0.25, 47).unwrap();
        let (r, s) = pr.grid_violations();
        assert!(r <= 0.0 && s <= 0.0);
        assert!(pr.alpha_cheb.degree() <= 94);
        assert!(pr.beta_l2_squared() <= (8.0 + 3.0 * 47.0) / (96.0f64 * 96.0));
        assert!((pr.beta_integral() - pr.beta_integral_by_quadrature().unwrap()).abs() < 1e-8);
        assert!(selberg_pair(0.5, 0.5, 9).is_err());
    }
}
