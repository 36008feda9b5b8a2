//! Chebyshev polynomials of the second kind in the normalization
//! `U_n(2 cos theta) = sin((n+1) theta) / sin theta`, and integration against
//! the Sato-Tate measure `(2/pi) sin^2 theta dtheta` on `[0, pi]`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::integrate_with_breaks;

/// Deepest recurrence we agree to run.
pub const MAX_DEGREE: u64 = 1_000_000;

/// Absolute tolerance used for Sato-Tate integrals.
pub const ST_TOL: f64 = 1e-9;

/// `U_n(x)` by the three-term recurrence, `x` in `[-2, 2]`.
pub fn cheb_u(n: u64, x: f64) -> Result<f64> {
    if !(-2.0..=2.0).contains(&x) {
        return Err(Error::domain(format!("U_n argument {x} outside [-2, 2]")));
    }
    if n > MAX_DEGREE {
        return Err(Error::domain(format!("degree {n} above cap {MAX_DEGREE}")));
    }
    Ok(cheb_u_unchecked(n, x))
}

pub(crate) fn cheb_u_unchecked(n: u64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return 1.0;
    }
    for _ in 1..n {
        let next = x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `sin((n+1) theta) / sin theta` with the limits `n+1` and `(-1)^n (n+1)` at
/// the ends of `[0, pi]`.
pub fn cheb_u_angle(n: u64, theta: f64) -> f64 {
    let s = theta.sin();
    if s.abs() < 1e-12 {
        let m = (n + 1) as f64;
        return if theta.cos() > 0.0 || n % 2 == 0 {
            m
        } else {
            -m
        };
    }
    ((n + 1) as f64 * theta).sin() / s
}

/// Sato-Tate density on `[0, pi]`.
pub fn st_density(theta: f64) -> f64 {
    let s = theta.sin();
    2.0 / PI * s * s
}

/// `int_0^pi f dmu_ST` to absolute tolerance `tol`.
pub fn st_integrate<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<f64> {
    st_integrate_with_breaks(f, &[], tol)
}

/// As [`st_integrate`], splitting at the interior points `breaks`
/// (discontinuities of `f`).
pub fn st_integrate_with_breaks<F: Fn(f64) -> f64>(f: F, breaks: &[f64], tol: f64) -> Result<f64> {
    let mut pts = vec![0.0];
    pts.extend(breaks.iter().copied().filter(|&b| b > 0.0 && b < PI));
    pts.push(PI);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    integrate_with_breaks(|t| f(t) * st_density(t), &pts, tol)
}

/// `mu_ST([0, phi]) = (phi - sin phi cos phi) / pi`.
pub fn st_mass_below(phi: f64) -> f64 {
    let phi = phi.clamp(0.0, PI);
    (phi - phi.sin() * phi.cos()) / PI
}

/// Sato-Tate mass of `{theta : 2 cos theta >= t}`.
pub fn st_mass_above_trace(t: f64) -> f64 {
    st_mass_below((t / 2.0).clamp(-1.0, 1.0).acos())
}

/// Coefficients `y(0..=s)` of `Y = sum y(i) U_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChebCoeffs {
    pub coefficients: Vec<f64>,
}

impl ChebCoeffs {
    /// Drops trailing coefficients with `|y| <= tol`, keeping at least `y(0)`.
    pub fn trimmed(mut coefficients: Vec<f64>, tol: f64) -> Self {
        while coefficients.len() > 1 && coefficients.last().is_some_and(|c| c.abs() <= tol) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(0.0);
        }
        ChebCoeffs { coefficients }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// Exact conversion of `a_0 + sum_k a_k cos(k theta)`, using
    /// `cos k theta = (U_k - U_{k-2}) / 2`.
    pub fn from_cosine(a: &[f64]) -> Self {
        let get = |k: usize| a.get(k).copied().unwrap_or(0.0);
        let mut y = Vec::with_capacity(a.len());
        for n in 0..a.len() {
            y.push(if n == 0 {
                get(0) - get(2) / 2.0
            } else {
                (get(n) - get(n + 2)) / 2.0
            });
        }
        ChebCoeffs::trimmed(y, 0.0)
    }

    /// `y(n) = int g U_n dmu_ST` for `n <= degree`, by quadrature.
    pub fn by_quadrature<F: Fn(f64) -> f64 + Sync>(
        g: F,
        degree: usize,
        breaks: &[f64],
        tol: f64,
    ) -> Result<Self> {
        use rayon::prelude::*;
        let y = (0..=degree)
            .into_par_iter()
            .map(|n| st_integrate_with_breaks(|t| g(t) * cheb_u_angle(n as u64, t), breaks, tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(ChebCoeffs { coefficients: y })
    }

    /// `sum y(i) U_i(x)` by Clenshaw's recurrence.
    pub fn evaluate(&self, x: f64) -> f64 {
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coefficients.iter().rev() {
            let b0 = c + x * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        b1
    }

    pub fn max_abs(&self) -> f64 {
        self.coefficients.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(cheb_u(0, 0.3).unwrap(), 1.0);
        let th: f64 = 0.7;
        assert!((cheb_u(1, 2.0 * th.cos()).unwrap() - 2.0 * th.cos()).abs() < 1e-15);
        assert_eq!(cheb_u(3, 2.0).unwrap(), 4.0);
        assert_eq!(cheb_u(3, -2.0).unwrap(), -4.0);
        assert!(cheb_u(1, 2.0 + 1e-9).is_err());
        assert!(cheb_u(MAX_DEGREE + 1, 0.0).is_err());
        assert_eq!(cheb_u_angle(3, 0.0), 4.0);
        assert_eq!(cheb_u_angle(3, PI), -4.0);
    }

    #[test]
    fn recurrence_matches_angle_form() {
        for n in [0u64, 1, 2, 17, 100, 500] {
            for k in 1..50 {
                let th = k as f64 * PI / 50.0 - 1e-3;
                let d = (cheb_u(n, 2.0 * th.cos()).unwrap() - cheb_u_angle(n, th)).abs();
                assert!(d < 1e-8, "n={n} theta={th} diff={d}");
            }
        }
    }

    #[test]
    fn measure_basics() {
        assert!((st_integrate(|_| 1.0, ST_TOL).unwrap() - 1.0).abs() < 1e-9);
        assert!(st_integrate(|t| cheb_u_angle(2, t), ST_TOL).unwrap().abs() < 1e-9);
        let phi = PI / 4.0;
        let v =
            st_integrate_with_breaks(|t| if t <= phi { 1.0 } else { 0.0 }, &[phi], 1e-10).unwrap();
        assert!((v - 0.090845).abs() < 1e-6);
        assert!((st_mass_below(phi) - (0.25 - 0.5 / PI)).abs() < 1e-15);
        assert!((st_mass_above_trace(std::f64::consts::SQRT_2) - st_mass_below(phi)).abs() < 1e-15);
    }

    #[test]
    fn cosine_conversion_round_trip() {
        let a = [0.3, -0.2, 0.5, 0.1, -0.05];
        let y = ChebCoeffs::from_cosine(&a);
        assert_eq!(y.degree(), 4);
        for k in 0..20 {
            let th = 0.05 + k as f64 * 0.15;
            let direct: f64 = a
                .iter()
                .enumerate()
                .map(|(k, c)| c * (k as f64 * th).cos())
                .sum();
            assert!((y.evaluate(2.0 * th.cos()) - direct).abs() < 1e-13);
        }
        let g = |t: f64| {
            a.iter()
                .enumerate()
                .map(|(k, c)| c * (k as f64 * t).cos())
                .sum::<f64>()
        };
        let q = ChebCoeffs::by_quadrature(g, 6, &[], 1e-12).unwrap();
        for n in 0..=6 {
            let exact = y.coefficients.get(n).copied().unwrap_or(0.0);
            assert!((q.coefficients[n] - exact).abs() < 1e-10);
        }
    }
}
