use std::collections::{BTreeMap, HashSet};
use std::f64::consts::SQRT_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chebyshev::st_mass_above_trace;
use crate::error::{Error, Result};
use crate::families::{
    kloosterman_master, member_table_with, FamilyEvaluator, FamilySpec, SumTable, TransformMethod,
};
use crate::fejer::odd_harmonic_bound;
use crate::incomplete::profile_with;
use crate::modular::{MoebiusMap, OddPrime, ProjPoint};

/// Slack `10 (||K||_oo + 1)` allowed in the detector inequality.
pub const DETECTOR_SLACK: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `K >= +threshold`.
    AtLeast,
    /// `K <= -threshold`.
    AtMost,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignCondition {
    pub map: MoebiusMap,
    pub direction: Direction,
    /// Harmonic index `n` when the map is `a -> n a`.
    pub harmonic: Option<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignPattern {
    pub conditions: Vec<SignCondition>,
    pub threshold: f64,
}

impl SignPattern {
    pub fn new(conditions: Vec<SignCondition>, threshold: f64) -> Result<Self> {
        let mut seen = HashSet::new();
        for c in &conditions {
            if !seen.insert(c.map) {
                return Err(Error::domain("pattern maps must be pairwise distinct"));
            }
        }
        if !(threshold >= 0.0) {
            return Err(Error::domain("threshold must be nonnegative"));
        }
        Ok(SignPattern {
            conditions,
            threshold,
        })
    }

    pub fn empty() -> Self {
        SignPattern {
            conditions: Vec::new(),
            threshold: SQRT_2,
        }
    }

    /// `K(n a) >= sqrt 2` and `K(-n a) <= -sqrt 2` for odd `1 <= n <= z`.
    pub fn dilations(z: u64, p: OddPrime) -> Result<Self> {
        if z % 2 == 0 {
            return Err(Error::domain(format!("z = {z} must be odd")));
        }
        let mut conditions = Vec::new();
        for n in (1..=z as i64).step_by(2) {
            conditions.push(SignCondition {
                map: MoebiusMap::dilation(n, p)?,
                direction: Direction::AtLeast,
                harmonic: Some(n),
            });
            conditions.push(SignCondition {
                map: MoebiusMap::dilation(-n, p)?,
                direction: Direction::AtMost,
                harmonic: Some(-n),
            });
        }
        SignPattern::new(conditions, SQRT_2)
    }

    /// Largest `|n|` among the harmonic conditions.
    pub fn harmonic_span(&self) -> Option<u64> {
        self.conditions
            .iter()
            .filter_map(|c| c.harmonic)
            .map(i64::unsigned_abs)
            .max()
    }

    fn holds(&self, table: &SumTable, a: u64) -> bool {
        self.conditions
            .iter()
            .all(|c| match c.map.apply(ProjPoint::Finite(a)) {
                ProjPoint::Infinity => false,
                ProjPoint::Finite(y) => {
                    let v = table.values[y as usize].re;
                    match c.direction {
                        Direction::AtLeast => v >= self.threshold,
                        Direction::AtMost => v <= -self.threshold,
                    }
                }
            })
    }

    /// Independence heuristic: product of the Sato-Tate masses.
    pub fn predicted_density(&self) -> f64 {
        self.conditions
            .iter()
            .map(|_| st_mass_above_trace(self.threshold))
            .product()
    }
}

/// The `z` pattern over `Kl(a n, 1; p)`.
pub fn detector_pattern(z: u64, p: OddPrime) -> Result<SignPattern> {
    SignPattern::dilations(z, p)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignSearchReport {
    pub p: OddPrime,
    pub family: Option<String>,
    pub pattern: SignPattern,
    pub members: Vec<u64>,
    pub count: u64,
    pub density: f64,
    pub predicted_density: f64,
    /// `1 - ln z / ln ln p`, the exponent for which `z = (log p)^{1 - eps}`.
    pub epsilon: Option<f64>,
    /// `p^{1 - log 4 / (log p)^eps}` at that exponent.
    pub size_bound: Option<f64>,
    /// `M(t_a)` per member, when the table's family is known.
    pub member_max: Option<Vec<f64>>,
    /// Odd-harmonic lower bound per member, when the pattern is harmonic.
    pub member_harmonic_bound: Option<Vec<f64>>,
}

/// Exhaustive scan of `a in F_p^x` against every condition of `pattern`.
pub fn sign_pattern_search(table: &SumTable, pattern: &SignPattern) -> Result<SignSearchReport> {
    let p = table.p;
    if let Some(c) = pattern.conditions.iter().find(|c| c.map.prime() != p) {
        return Err(Error::domain(format!(
            "pattern map over {} used with a table over {p}",
            c.map.prime()
        )));
    }
    let members: Vec<u64> = (1..p.get())
        .into_par_iter()
        .filter(|&a| pattern.holds(table, a))
        .collect();
    // audit pass: every member re-verified entrywise
    if let Some(bad) = members.iter().find(|&&a| !pattern.holds(table, a)) {
        return Err(Error::integrity(format!(
            "member {bad} fails its own pattern"
        )));
    }

    let count = members.len() as u64;
    let pf = p.get() as f64;
    let (epsilon, size_bound) = match pattern.harmonic_span() {
        Some(z) if z >= 1 => {
            let eps = 1.0 - (z as f64).ln() / pf.ln().ln();
            (
                Some(eps),
                Some(pf.powf(1.0 - 4f64.ln() / pf.ln().powf(eps))),
            )
        }
        _ => (None, None),
    };

    let family = table.source.family().cloned();
    let member_max = match &family {
        Some(f) => {
            let ev = FamilyEvaluator::new(f, p)?;
            Some(
                members
                    .par_iter()
                    .map(|&a| profile_with(&ev, a, false).max)
                    .collect(),
            )
        }
        None => None,
    };
    let member_harmonic_bound = match pattern.harmonic_span() {
        Some(z) if z % 2 == 1 && covers_odd_harmonics(pattern, z) => Some(
            members
                .iter()
                .map(|&a| odd_harmonic_bound(&harmonic_values(table, a, z), z))
                .collect::<Result<Vec<_>>>()?,
        ),
        _ => None,
    };

    Ok(SignSearchReport {
        p,
        family: family.map(|f| f.slug()),
        pattern: pattern.clone(),
        count,
        density: count as f64 / (pf - 1.0),
        predicted_density: pattern.predicted_density(),
        members,
        epsilon,
        size_bound,
        member_max,
        member_harmonic_bound,
    })
}

fn covers_odd_harmonics(pattern: &SignPattern, z: u64) -> bool {
    let have: HashSet<i64> = pattern
        .conditions
        .iter()
        .filter_map(|c| c.harmonic)
        .collect();
    (1..=z as i64)
        .step_by(2)
        .all(|n| have.contains(&n) && have.contains(&-n))
}

/// `v_n = K(n a)` for odd `|n| <= z`.
fn harmonic_values(table: &SumTable, a: u64, z: u64) -> BTreeMap<i64, f64> {
    let p = table.p;
    (1..=z as i64)
        .step_by(2)
        .flat_map(|n| [n, -n])
        .map(|n| (n, table.values[p.mul(a, p.reduce(n)) as usize].re))
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectorRow {
    pub a: u64,
    pub max: f64,
    pub harmonic_bound: f64,
    pub sup_norm: f64,
    /// `M(t_a) >= harmonic_bound - 10 (||K||_oo + 1)`.
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectorReport {
    pub p: OddPrime,
    pub z: u64,
    pub floor: f64,
    pub rows: Vec<DetectorRow>,
}

/// For every `a` in the `z` pattern of `Kl(a n, 1; p)`, compares `M(t_a)`
/// for `t_a(x) = e(a xbar / p)` with the odd-harmonic bound.
pub fn detector_chain(p: OddPrime, z: u64) -> Result<DetectorReport> {
    let master = kloosterman_master(p)?;
    let pattern = detector_pattern(z, p)?;
    let report = sign_pattern_search(&master, &pattern)?;
    let family = FamilySpec::kloosterman_dilate();
    let ev = FamilyEvaluator::new(&family, p)?;
    let rows = report
        .members
        .par_iter()
        .map(|&a| {
            let max = profile_with(&ev, a, false).max;
            let sup_norm = member_table_with(&ev, a, TransformMethod::ChirpDft)?.sup_norm();
            let harmonic_bound = odd_harmonic_bound(&harmonic_values(&master, a, z), z)?;
            let holds = max >= harmonic_bound - DETECTOR_SLACK * (sup_norm + 1.0);
            Ok(DetectorRow {
                a,
                max,
                harmonic_bound,
                sup_norm,
                holds,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DetectorReport {
        p,
        z,
        floor: crate::fejer::odd_harmonic_floor(z),
        rows,
    })
}
