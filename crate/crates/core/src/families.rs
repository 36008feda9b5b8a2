//! One-parameter families of trace functions `t_a : F_p -> C` and their
//! normalized complete sums.
//!
//! Every family is an additive character of a phase `f_a(x)`, so
//! `t_a(x) = e(f_a(x) / p)`. Families whose phase involves `x^{-1}` vanish
//! at `x = 0`; polynomial families take the value `e(f_a(0)/p)` there.
//!
//! The normalized Fourier transform of `t_a` is
//! `K_a(y) = s / sqrt(p) * sum_x t_a(x) e(xy/p)` with `s = -1` for
//! [`SignConvention::Minus`] (the Polya-Vinogradov normalization, the
//! default) and `s = +1` for [`SignConvention::Plus`].

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::{
    inverse_table, mod_inverse, phase_to_complex, roots_table, MoebiusMap, OddPrime, ProjPoint,
};
use crate::spectral::{chirp_dft, direct_dft, Kernel, MAX_TRANSFORM_ERROR};
use crate::summation::ComplexSum;

/// Slack on the Weil bound for pointwise complete sums.
pub const WEIL_SLACK: f64 = 1e-9;
/// Slack on the Weil bound for entries of a batch table.
pub const TABLE_WEIL_SLACK: f64 = 1e-6;
/// Largest imaginary part tolerated in a real-valued table.
pub const TABLE_IMAG_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SignConvention {
    Plus,
    #[default]
    Minus,
}

impl SignConvention {
    pub fn factor(self) -> f64 {
        match self {
            SignConvention::Plus => 1.0,
            SignConvention::Minus => -1.0,
        }
    }
}

/// One monomial `coefficient * x^exponent` of a Laurent phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentTerm {
    pub exponent: i32,
    pub coefficient: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    /// `e((a x + b x^{-1}) / p)`.
    KloostermanShift { b: i64 },
    /// `e(a x^{-1} / p)`, whose Fourier transform is `Kl(a y, 1; p)`.
    KloostermanDilate,
    /// `e((a x + m (a x)^{-1}) / p)`, the family on the curve `xy = m`.
    KloostermanCurve { m: i64 },
    /// `e((a x + x^3) / p)`.
    BirchShift,
    /// `e((x + a x^3) / p)`.
    BirchDilate,
    /// `e((a x + m (a x)^3) / p)`, the family on the curve `x = m y^3`.
    BirchCurve { m: i64 },
    /// `e((a x + sum c_j x^{e_j}) / p)`.
    Laurent { terms: Vec<LaurentTerm> },
}

/// Which family is under study, plus the sign used on the Fourier side.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    #[serde(default)]
    pub sign: SignConvention,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind) -> Self {
        FamilySpec {
            kind,
            sign: SignConvention::Minus,
        }
    }

    pub fn kloosterman(b: i64) -> Self {
        Self::new(FamilyKind::KloostermanShift { b })
    }

    pub fn kloosterman_dilate() -> Self {
        Self::new(FamilyKind::KloostermanDilate)
    }

    pub fn kloosterman_curve(m: i64) -> Self {
        Self::new(FamilyKind::KloostermanCurve { m })
    }

    pub fn birch() -> Self {
        Self::new(FamilyKind::BirchShift)
    }

    pub fn birch_dilate() -> Self {
        Self::new(FamilyKind::BirchDilate)
    }

    pub fn birch_curve(m: i64) -> Self {
        Self::new(FamilyKind::BirchCurve { m })
    }

    pub fn laurent(terms: Vec<LaurentTerm>) -> Self {
        Self::new(FamilyKind::Laurent { terms })
    }

    pub fn with_sign(mut self, sign: SignConvention) -> Self {
        self.sign = sign;
        self
    }

    /// True for the Kloosterman and Birch kinds: real complete sums
    /// obeying the Weil bound `|K| <= 2`.
    pub fn is_weil_family(&self) -> bool {
        !matches!(self.kind, FamilyKind::Laurent { .. })
    }

    pub fn has_pole(&self) -> bool {
        match &self.kind {
            FamilyKind::KloostermanShift { .. }
            | FamilyKind::KloostermanDilate
            | FamilyKind::KloostermanCurve { .. } => true,
            FamilyKind::Laurent { terms } => terms.iter().any(|t| t.exponent < 0),
            _ => false,
        }
    }

    /// Short identifier used on the command line and in file names.
    pub fn slug(&self) -> String {
        match &self.kind {
            FamilyKind::KloostermanShift { b } => format!("kloosterman-b{b}"),
            FamilyKind::KloostermanDilate => "kloosterman-dilate".into(),
            FamilyKind::KloostermanCurve { m } => format!("kloosterman-curve-m{m}"),
            FamilyKind::BirchShift => "birch".into(),
            FamilyKind::BirchDilate => "birch-dilate".into(),
            FamilyKind::BirchCurve { m } => format!("birch-curve-m{m}"),
            FamilyKind::Laurent { terms } => {
                let t: Vec<String> = terms
                    .iter()
                    .map(|t| format!("{}x{}", t.coefficient, t.exponent))
                    .collect();
                format!("laurent-{}", t.join("_"))
            }
        }
    }

    /// Check the family is well defined over `p`.
    pub fn validate(&self, p: OddPrime) -> Result<()> {
        match &self.kind {
            FamilyKind::KloostermanShift { b } if p.reduce(*b) == 0 => {
                Err(Error::domain(format!("b = {b} vanishes modulo {p}")))
            }
            FamilyKind::KloostermanCurve { m } | FamilyKind::BirchCurve { m }
                if p.reduce(*m) == 0 =>
            {
                Err(Error::domain(format!("m = {m} vanishes modulo {p}")))
            }
            FamilyKind::Laurent { terms } => {
                if terms.is_empty() || terms.iter().all(|t| t.exponent == 0) {
                    return Err(Error::domain(
                        "Laurent phase needs at least one nonzero exponent",
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Check that `a` is an admissible parameter: `1 <= a < p`, or
    /// `0 <= a < p` for Laurent families.
    pub fn validate_parameter(&self, a: u64, p: OddPrime) -> Result<()> {
        let lo = if matches!(self.kind, FamilyKind::Laurent { .. }) {
            0
        } else {
            1
        };
        if a < lo || a >= p.get() {
            return Err(Error::domain(format!(
                "parameter a = {a} outside [{lo}, {p})"
            )));
        }
        Ok(())
    }

    /// The map `tau_y` with `K_a(y) = G(tau_y . a)`, where `G` is the
    /// family's [`master_table`]. `None` when no such map exists (Birch
    /// dilation and curve families) or when it degenerates at this `y`.
    pub fn fourier_map(&self, y: i64, p: OddPrime) -> Option<MoebiusMap> {
        let r = |v: i64| p.reduce(v) as i64;
        match &self.kind {
            FamilyKind::KloostermanShift { b } => MoebiusMap::new(*b, r(*b) * r(y), 0, 1, p).ok(),
            FamilyKind::KloostermanDilate => MoebiusMap::dilation(y, p).ok(),
            FamilyKind::KloostermanCurve { m } => MoebiusMap::new(*m, r(*m) * r(y), 1, 0, p).ok(),
            FamilyKind::BirchShift | FamilyKind::Laurent { .. } => {
                Some(MoebiusMap::translation(y, p))
            }
            FamilyKind::BirchDilate | FamilyKind::BirchCurve { .. } => None,
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.slug())
    }
}

/// Exponent `f_a(x) mod p`, computed with plain modular arithmetic.
/// `None` where the phase has a pole.
fn phase_exponent_slow(kind: &FamilyKind, a: u64, x: u64, p: OddPrime) -> Option<u64> {
    let inv = |v: u64| mod_inverse(v, p).ok();
    let r = |v: i64| p.reduce(v);
    let e = match kind {
        FamilyKind::KloostermanShift { b } => p.add(p.mul(a, x), p.mul(r(*b), inv(x)?)),
        FamilyKind::KloostermanDilate => p.mul(a, inv(x)?),
        FamilyKind::KloostermanCurve { m } => {
            let ax = p.mul(a, x);
            p.add(ax, p.mul(r(*m), inv(ax)?))
        }
        FamilyKind::BirchShift => p.add(p.mul(a, x), p.pow(x, 3)),
        FamilyKind::BirchDilate => p.add(x, p.mul(a, p.pow(x, 3))),
        FamilyKind::BirchCurve { m } => {
            let ax = p.mul(a, x);
            p.add(ax, p.mul(r(*m), p.pow(ax, 3)))
        }
        FamilyKind::Laurent { terms } => {
            let mut acc = p.mul(a, x);
            for t in terms {
                let base = if t.exponent < 0 { inv(x)? } else { x };
                let pw = p.pow(base, t.exponent.unsigned_abs() as u64);
                acc = p.add(acc, p.mul(r(t.coefficient), pw));
            }
            acc
        }
    };
    Some(e)
}

/// `t_a(x) = e(f_a(x)/p)` for the family, or 0 at a pole.
pub fn phase_value(family: &FamilySpec, a: u64, x: u64, p: OddPrime) -> Complex64 {
    match phase_exponent_slow(&family.kind, a % p.get(), x % p.get(), p) {
        Some(e) => phase_to_complex(e, p.get()),
        None => Complex64::new(0.0, 0.0),
    }
}

/// Normalized complete sum `(1/sqrt p) sum_{x in F_p} t_a(x)`, complex.
pub fn complete_sum_complex(family: &FamilySpec, a: u64, p: OddPrime) -> Result<Complex64> {
    family.validate(p)?;
    family.validate_parameter(a, p)?;
    let mut acc = ComplexSum::default();
    for x in 0..p.get() {
        acc.add(phase_value(family, a, x, p));
    }
    Ok(acc.value() / p.sqrt())
}

/// Normalized complete sum of a family member, checked to be real.
///
/// For Kloosterman kinds this is `Kl(a, b; p)` (the `x = 0` term is absent);
/// for Birch kinds it is the sum over all of `F_p`, which is the quantity
/// the Weil bound `|.| <= 2` controls.
pub fn complete_sum(family: &FamilySpec, a: u64, p: OddPrime) -> Result<f64> {
    let z = complete_sum_complex(family, a, p)?;
    if z.im.abs() > WEIL_SLACK {
        return Err(Error::integrity(format!(
            "complete sum {z} of {family} at a = {a} is not real"
        )));
    }
    if family.is_weil_family() && z.re.abs() > 2.0 + WEIL_SLACK {
        return Err(Error::integrity(format!(
            "Weil bound violated: |{}| > 2 for {family}, a = {a}, p = {p}",
            z.re
        )));
    }
    Ok(z.re)
}

/// Precomputed tables for fast evaluation of `t_a(x)` over a whole prime.
pub struct FamilyEvaluator {
    family: FamilySpec,
    p: OddPrime,
    roots: Vec<Complex64>,
    inv: Vec<u32>,
    cubes: Vec<u32>,
    laurent: Vec<(u64, Vec<u32>)>,
}

impl FamilyEvaluator {
    pub fn new(family: &FamilySpec, p: OddPrime) -> Result<Self> {
        family.validate(p)?;
        let n = p.as_usize();
        let inv = if family.has_pole() || matches!(family.kind, FamilyKind::KloostermanShift { .. })
        {
            inverse_table(p)
        } else {
            Vec::new()
        };
        let cubes = match family.kind {
            FamilyKind::BirchShift | FamilyKind::BirchDilate | FamilyKind::BirchCurve { .. } => {
                (0..p.get()).map(|x| p.pow(x, 3) as u32).collect()
            }
            _ => Vec::new(),
        };
        let laurent = match &family.kind {
            FamilyKind::Laurent { terms } => terms
                .iter()
                .map(|t| {
                    let k = t.exponent.unsigned_abs() as u64;
                    let table = (0..p.get())
                        .map(|x| {
                            let base = if t.exponent < 0 {
                                inv[x as usize] as u64
                            } else {
                                x
                            };
                            p.pow(base, k) as u32
                        })
                        .collect();
                    (p.reduce(t.coefficient), table)
                })
                .collect(),
            _ => Vec::new(),
        };
        debug_assert!(cubes.is_empty() || cubes.len() == n);
        Ok(FamilyEvaluator {
            family: family.clone(),
            p,
            roots: roots_table(p),
            inv,
            cubes,
            laurent,
        })
    }

    pub fn family(&self) -> &FamilySpec {
        &self.family
    }

    pub fn prime(&self) -> OddPrime {
        self.p
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    #[inline]
    pub fn phase(&self, a: u64, x: u64) -> Option<u64> {
        let p = self.p;
        let e = match &self.family.kind {
            FamilyKind::KloostermanShift { b } => {
                if x == 0 {
                    return None;
                }
                p.add(
                    p.mul(a, x),
                    p.mul(p.reduce(*b), self.inv[x as usize] as u64),
                )
            }
            FamilyKind::KloostermanDilate => {
                if x == 0 {
                    return None;
                }
                p.mul(a, self.inv[x as usize] as u64)
            }
            FamilyKind::KloostermanCurve { m } => {
                let ax = p.mul(a, x);
                if ax == 0 {
                    return None;
                }
                p.add(ax, p.mul(p.reduce(*m), self.inv[ax as usize] as u64))
            }
            FamilyKind::BirchShift => p.add(p.mul(a, x), self.cubes[x as usize] as u64),
            FamilyKind::BirchDilate => p.add(x, p.mul(a, self.cubes[x as usize] as u64)),
            FamilyKind::BirchCurve { m } => {
                let ax = p.mul(a, x);
                p.add(ax, p.mul(p.reduce(*m), self.cubes[ax as usize] as u64))
            }
            FamilyKind::Laurent { terms } => {
                if x == 0 && terms.iter().any(|t| t.exponent < 0) {
                    return None;
                }
                let mut acc = p.mul(a, x);
                for (c, table) in &self.laurent {
                    acc = p.add(acc, p.mul(*c, table[x as usize] as u64));
                }
                acc
            }
        };
        Some(e)
    }

    #[inline]
    pub fn value(&self, a: u64, x: u64) -> Complex64 {
        self.phase(a, x)
            .map_or(Complex64::new(0.0, 0.0), |e| self.roots[e as usize])
    }

    /// `[t_a(0), ..., t_a(p-1)]`.
    pub fn samples(&self, a: u64) -> Vec<Complex64> {
        (0..self.p.get()).map(|x| self.value(a, x)).collect()
    }

    /// Samples of the master function whose transform is the master table:
    /// `e(x^{-1}/p)` for Kloosterman kinds, `e(x^3/p)` for Birch kinds and
    /// the bare Laurent phase otherwise.
    pub fn master_samples(&self) -> Vec<Complex64> {
        let p = self.p;
        (0..p.get())
            .map(|x| match &self.family.kind {
                FamilyKind::KloostermanShift { .. }
                | FamilyKind::KloostermanDilate
                | FamilyKind::KloostermanCurve { .. } => {
                    if x == 0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        self.roots[self.inv[x as usize] as usize]
                    }
                }
                FamilyKind::BirchShift
                | FamilyKind::BirchDilate
                | FamilyKind::BirchCurve { .. } => self.roots[self.cubes[x as usize] as usize],
                FamilyKind::Laurent { .. } => self.value(0, x),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformMethod {
    Direct,
    ChirpDft,
}

/// What a [`SumTable`] is the transform of.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum TableSource {
    /// `K_a(y)` for one member `t_a` of a family.
    Member { family: FamilySpec, parameter: u64 },
    /// The master table `G` with `K_a(y) = G(tau_y . a)`.
    Master { family: FamilySpec },
    /// An arbitrary user-supplied function.
    Custom { sign: SignConvention },
}

impl TableSource {
    pub fn family(&self) -> Option<&FamilySpec> {
        match self {
            TableSource::Member { family, .. } | TableSource::Master { family } => Some(family),
            TableSource::Custom { .. } => None,
        }
    }

    pub fn sign(&self) -> SignConvention {
        match self {
            TableSource::Member { family, .. } | TableSource::Master { family } => family.sign,
            TableSource::Custom { sign } => *sign,
        }
    }
}

/// All normalized complete sums `K(y)`, `y in F_p`, of one function.
#[derive(Debug, Clone)]
pub struct SumTable {
    pub p: OddPrime,
    pub source: TableSource,
    pub values: Vec<Complex64>,
    pub method: TransformMethod,
    pub max_abs_error_estimate: f64,
}

impl SumTable {
    /// Transform arbitrary samples `t(0..p)`.
    pub fn from_samples(
        samples: &[Complex64],
        p: OddPrime,
        sign: SignConvention,
        method: TransformMethod,
    ) -> Result<Self> {
        transform(samples, p, TableSource::Custom { sign }, method)
    }

    #[inline]
    pub fn get(&self, y: u64) -> Complex64 {
        self.values[(y % self.p.get()) as usize]
    }

    /// `K(n)` for a signed index, so `K(-n)` reads entry `p - n`.
    #[inline]
    pub fn signed(&self, n: i64) -> Complex64 {
        self.values[self.p.reduce(n) as usize]
    }

    /// Real part of the entry at a projective point; 0 at infinity.
    #[inline]
    pub fn real_at(&self, point: ProjPoint) -> f64 {
        point.finite().map_or(0.0, |y| self.values[y as usize].re)
    }

    /// `max_y |K(y)|`, including `y = 0`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn check_weil(&self) -> Result<()> {
        let Some(family) = self.source.family() else {
            return Ok(());
        };
        if !family.is_weil_family() {
            return Ok(());
        }
        for (y, z) in self.values.iter().enumerate() {
            if z.im.abs() > TABLE_IMAG_TOL {
                return Err(Error::integrity(format!(
                    "entry {y} of {family} table has imaginary part {}",
                    z.im
                )));
            }
            if z.norm() > 2.0 + TABLE_WEIL_SLACK {
                return Err(Error::integrity(format!(
                    "entry {y} of {family} table violates the Weil bound: {}",
                    z.norm()
                )));
            }
        }
        Ok(())
    }

    pub fn angles(&self) -> Result<AngleTable> {
        let angles = self
            .values
            .iter()
            .map(|z| angle_of(z.re))
            .collect::<Result<Vec<_>>>()?;
        Ok(AngleTable {
            p: self.p,
            source: self.source.clone(),
            angles,
        })
    }
}

fn transform(
    samples: &[Complex64],
    p: OddPrime,
    source: TableSource,
    method: TransformMethod,
) -> Result<SumTable> {
    let (mut values, err) = match method {
        TransformMethod::ChirpDft => chirp_dft(samples, p, Kernel::Positive)?,
        TransformMethod::Direct => (direct_dft(samples, p, Kernel::Positive), 0.0),
    };
    if err > MAX_TRANSFORM_ERROR {
        return Err(Error::integrity(format!(
            "chirp transform error estimate {err:e} exceeds {MAX_TRANSFORM_ERROR:e}"
        )));
    }
    let s = source.sign().factor();
    if s != 1.0 {
        values.iter_mut().for_each(|z| *z *= s);
    }
    let table = SumTable {
        p,
        source,
        values,
        method,
        max_abs_error_estimate: err,
    };
    table.check_weil()?;
    Ok(table)
}

/// The table `{K_a(y)}_{y mod p}` of one family member, computed as a
/// single chirp transform.
pub fn batch_complete_sums(family: &FamilySpec, a: u64, p: OddPrime) -> Result<SumTable> {
    member_table(family, a, p, TransformMethod::ChirpDft)
}

/// [`batch_complete_sums`] with an explicit transform method.
pub fn member_table(
    family: &FamilySpec,
    a: u64,
    p: OddPrime,
    method: TransformMethod,
) -> Result<SumTable> {
    family.validate_parameter(a, p)?;
    let ev = FamilyEvaluator::new(family, p)?;
    member_table_with(&ev, a, method)
}

pub fn member_table_with(
    ev: &FamilyEvaluator,
    a: u64,
    method: TransformMethod,
) -> Result<SumTable> {
    let source = TableSource::Member {
        family: ev.family().clone(),
        parameter: a,
    };
    transform(&ev.samples(a), ev.prime(), source, method)
}

/// The master table `G`: `Kl(m, 1; p)` for Kloosterman kinds, the full
/// Birch sum `Bi(m, 1; p)` for Birch kinds, times the family's sign.
pub fn master_table(family: &FamilySpec, p: OddPrime) -> Result<SumTable> {
    let ev = FamilyEvaluator::new(family, p)?;
    let source = TableSource::Master {
        family: family.clone(),
    };
    transform(&ev.master_samples(), p, source, TransformMethod::ChirpDft)
}

/// Table of `Kl(m, 1; p)` for all `m` with the `+` sign, the table sign
/// searches and equidistribution diagnostics read.
pub fn kloosterman_master(p: OddPrime) -> Result<SumTable> {
    master_table(
        &FamilySpec::kloosterman_dilate().with_sign(SignConvention::Plus),
        p,
    )
}

/// Angles `theta(a) in [0, pi]` with `K(a) = 2 cos theta(a)`.
#[derive(Debug, Clone)]
pub struct AngleTable {
    pub p: OddPrime,
    pub source: TableSource,
    pub angles: Vec<f64>,
}

/// `arccos(v/2)`, clamped for values within float slack of `+-2`.
pub fn angle_of(v: f64) -> Result<f64> {
    if !(v.abs() <= 2.0 + TABLE_WEIL_SLACK) {
        return Err(Error::domain(format!("{v} is outside [-2, 2]")));
    }
    Ok((v / 2.0).clamp(-1.0, 1.0).acos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn p(n: u64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    #[test]
    fn phase_value_examples() {
        let f = FamilySpec::kloosterman(1);
        // 2^{-1} = 3 mod 5, phase (2 + 3)/5
        let z = phase_value(&f, 1, 2, p(5));
        assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(phase_value(&f, 1, 0, p(5)), Complex64::new(0.0, 0.0));
        assert_eq!(
            phase_value(&FamilySpec::kloosterman_dilate(), 3, 0, p(7)),
            Complex64::new(0.0, 0.0)
        );
        assert_eq!(
            phase_value(&FamilySpec::birch(), 3, 0, p(7)),
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn evaluator_agrees_with_slow_path() {
        let q = p(101);
        let fams = [
            FamilySpec::kloosterman(1),
            FamilySpec::kloosterman(7),
            FamilySpec::kloosterman_dilate(),
            FamilySpec::kloosterman_curve(3),
            FamilySpec::birch(),
            FamilySpec::birch_dilate(),
            FamilySpec::birch_curve(5),
            FamilySpec::laurent(vec![
                LaurentTerm {
                    exponent: 2,
                    coefficient: 1,
                },
                LaurentTerm {
                    exponent: -3,
                    coefficient: 4,
                },
            ]),
        ];
        for f in &fams {
            let ev = FamilyEvaluator::new(f, q).unwrap();
            for a in [1u64, 2, 50, 100] {
                for x in 0..101 {
                    assert!(
                        (ev.value(a, x) - phase_value(f, a, x, q)).norm() < 1e-14,
                        "{f} a={a} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn kloosterman_1_1_5() {
        let v = complete_sum(&FamilySpec::kloosterman(1), 1, p(5)).unwrap();
        assert!((v - 0.170820).abs() < 1e-6);
    }

    #[test]
    fn birch_1_1_7_full_sum() {
        // full sum over F_7, hand-expanded: x^3 mod 7 = 0,1,1,6,1,6,6
        let q = p(7);
        let mut s = Complex64::new(0.0, 0.0);
        for (x, c) in [0u64, 1, 1, 6, 1, 6, 6].into_iter().enumerate() {
            s += crate::modular::root_of_unity((x as u64 + c) as i64, q);
        }
        let oracle = s.re / 7f64.sqrt();
        let v = complete_sum(&FamilySpec::birch(), 1, q).unwrap();
        assert!((v - oracle).abs() < 1e-12);
        assert!((v - (-0.639524)).abs() < 1e-6);
    }

    #[test]
    fn kloosterman_collapse_small() {
        let q = p(7);
        let lhs = complete_sum(&FamilySpec::kloosterman(3), 2, q).unwrap();
        let rhs = complete_sum(&FamilySpec::kloosterman(1), 6, q).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn parameter_validation() {
        let q = p(11);
        assert!(complete_sum(&FamilySpec::kloosterman(1), 0, q).is_err());
        assert!(complete_sum(&FamilySpec::kloosterman(11), 1, q).is_err());
        assert!(FamilySpec::kloosterman_curve(22).validate(q).is_err());
        assert!(FamilySpec::laurent(vec![LaurentTerm {
            exponent: 0,
            coefficient: 1
        }])
        .validate(q)
        .is_err());
        assert!(FamilySpec::laurent(vec![]).validate(q).is_err());
    }

    #[test]
    fn angle_examples() {
        assert_eq!(angle_of(2.0).unwrap(), 0.0);
        assert!((angle_of(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((angle_of(2f64.sqrt()).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert!((angle_of(-2.0000001).unwrap() - std::f64::consts::PI).abs() < 1e-15);
        assert!(angle_of(2.1).is_err());
        assert!(angle_of(f64::NAN).is_err());
    }

    #[test]
    fn member_table_matches_direct_and_complete_sums() {
        let q = p(101);
        for f in [
            FamilySpec::kloosterman(1),
            FamilySpec::birch_dilate(),
            FamilySpec::kloosterman_curve(2),
        ] {
            let fast = member_table(&f, 5, q, TransformMethod::ChirpDft).unwrap();
            let slow = member_table(&f, 5, q, TransformMethod::Direct).unwrap();
            for y in 0..101 {
                assert!((fast.get(y) - slow.get(y)).norm() < 1e-10);
            }
            // K_a(0) is -1 times the complete sum under the default sign
            let c = complete_sum(&f, 5, q).unwrap();
            assert!((fast.get(0).re + c).abs() < 1e-10);
        }
    }

    #[test]
    fn fourier_maps_realize_covariance() {
        let q = p(101);
        for f in [
            FamilySpec::kloosterman(1),
            FamilySpec::kloosterman(6),
            FamilySpec::kloosterman_dilate(),
            FamilySpec::kloosterman_curve(3),
            FamilySpec::birch(),
            FamilySpec::laurent(vec![
                LaurentTerm {
                    exponent: -1,
                    coefficient: 2,
                },
                LaurentTerm {
                    exponent: 2,
                    coefficient: 1,
                },
            ]),
        ] {
            let g = master_table(&f, q).unwrap();
            for a in [1u64, 2, 17, 100] {
                let k = batch_complete_sums(&f, a, q).unwrap();
                for y in 0..101i64 {
                    let Some(tau) = f.fourier_map(y, q) else {
                        continue;
                    };
                    let img = tau.apply(ProjPoint::Finite(a));
                    let expect = img.finite().map_or(Complex64::new(0.0, 0.0), |m| g.get(m));
                    assert!((k.signed(y) - expect).norm() < 1e-9, "{f} a={a} y={y}");
                }
            }
        }
        // translation maps for the b = 1 shift family
        assert_eq!(
            FamilySpec::kloosterman(1).fourier_map(5, q),
            Some(MoebiusMap::translation(5, q))
        );
        assert_eq!(
            FamilySpec::kloosterman_dilate().fourier_map(5, q),
            MoebiusMap::dilation(5, q).ok()
        );
        assert!(FamilySpec::birch_dilate().fourier_map(5, q).is_none());
    }

    #[test]
    fn zero_and_constant_tables() {
        let q = p(101);
        let zeros = vec![Complex64::new(0.0, 0.0); 101];
        let t = SumTable::from_samples(&zeros, q, SignConvention::Minus, TransformMethod::ChirpDft)
            .unwrap();
        assert_eq!(t.sup_norm(), 0.0);
        let ones = vec![Complex64::new(1.0, 0.0); 101];
        let t = SumTable::from_samples(&ones, q, SignConvention::Minus, TransformMethod::ChirpDft)
            .unwrap();
        assert!((t.get(0).norm() - q.sqrt()).abs() < 1e-10);
        assert!((1..101).all(|y| t.get(y).norm() < 1e-10));
    }

    #[test]
    fn angles_reproduce_values() {
        let t = kloosterman_master(p(1009)).unwrap();
        let a = t.angles().unwrap();
        for (v, th) in t.values.iter().zip(&a.angles) {
            assert!((2.0 * th.cos() - v.re).abs() < 1e-6);
            assert!((0.0..=std::f64::consts::PI).contains(th));
        }
    }
}
