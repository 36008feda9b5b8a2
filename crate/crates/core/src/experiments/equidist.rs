use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chebyshev::cheb_u_unchecked;
use crate::error::{Error, Result};
use crate::families::{SumTable, TABLE_WEIL_SLACK};
use crate::modular::{MoebiusMap, OddPrime, ProjPoint};
use crate::summation::NeumaierSum;

pub const MAX_EQUIDIST_DEGREE: u32 = 16;

/// `(1/sqrt p) sum_a U_n(K(tau . a))` for one map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingleSum {
    pub map: usize,
    pub n: u32,
    pub value: f64,
}

/// `(1/sqrt p) sum_a U_m(K(tau_i . a)) U_n(K(tau_j . a))`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairSum {
    pub first: usize,
    pub second: usize,
    pub m: u32,
    pub n: u32,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquidistReport {
    pub p: OddPrime,
    pub maps: Vec<MoebiusMap>,
    pub d_max: u32,
    pub singles: Vec<SingleSum>,
    pub pairs: Vec<PairSum>,
}

/// Values within Weil slack of `+-2` are pulled back onto `[-2, 2]`; a
/// point sent to infinity reads `K = 0`.
fn trace_at(table: &SumTable, map: &MoebiusMap, a: u64) -> Result<f64> {
    let v = table.real_at(map.apply(ProjPoint::Finite(a)));
    if v.abs() > 2.0 + TABLE_WEIL_SLACK {
        return Err(Error::integrity(format!("table value {v} outside [-2, 2]")));
    }
    Ok(v.clamp(-2.0, 2.0))
}

/// Single-factor sums for `0 <= n <= d_max` and pair sums for
/// `1 <= m, n <= d_max` over every pair of distinct maps.
pub fn equidist_matrix(
    table: &SumTable,
    maps: &[MoebiusMap],
    d_max: u32,
) -> Result<EquidistReport> {
    if d_max > MAX_EQUIDIST_DEGREE {
        return Err(Error::domain(format!(
            "d_max = {d_max} above {MAX_EQUIDIST_DEGREE}"
        )));
    }
    for (i, m) in maps.iter().enumerate() {
        if maps[..i].contains(m) {
            return Err(Error::domain("maps must be pairwise distinct"));
        }
    }
    let p = table.p;
    let d = d_max as usize;
    // U_0..U_d at every a, for every map
    let rows: Vec<Vec<Vec<f64>>> = (1..p.get())
        .into_par_iter()
        .map(|a| {
            maps.iter()
                .map(|m| {
                    trace_at(table, m, a)
                        .map(|x| (0..=d).map(|n| cheb_u_unchecked(n as u64, x)).collect())
                })
                .collect::<Result<Vec<Vec<f64>>>>()
        })
        .collect::<Result<_>>()?;
    let norm = p.sqrt();

    let mut singles = Vec::new();
    for i in 0..maps.len() {
        for n in 0..=d {
            let value = rows
                .iter()
                .map(|r| r[i][n])
                .collect::<NeumaierSum>()
                .value()
                / norm;
            singles.push(SingleSum {
                map: i,
                n: n as u32,
                value,
            });
        }
    }
    let mut pairs = Vec::new();
    for i in 0..maps.len() {
        for j in i + 1..maps.len() {
            for m in 1..=d {
                for n in 1..=d {
                    let value = rows
                        .iter()
                        .map(|r| r[i][m] * r[j][n])
                        .collect::<NeumaierSum>()
                        .value()
                        / norm;
                    pairs.push(PairSum {
                        first: i,
                        second: j,
                        m: m as u32,
                        n: n as u32,
                        value,
                    });
                }
            }
        }
    }
    Ok(EquidistReport {
        p,
        maps: maps.to_vec(),
        d_max,
        singles,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::kloosterman_master;

    #[test]
    fn zeroth_sum_counts_parameters() {
        let p = OddPrime::new(101).unwrap();
        let t = kloosterman_master(p).unwrap();
        let maps = [MoebiusMap::identity(p), MoebiusMap::dilation(2, p).unwrap()];
        let r = equidist_matrix(&t, &maps, 3).unwrap();
        for s in r.singles.iter().filter(|s| s.n == 0) {
            assert_eq!(s.value, 100.0 / p.sqrt());
        }
        assert_eq!(r.pairs.len(), 9);
        assert!(equidist_matrix(&t, &[maps[0], maps[0]], 2).is_err());
        assert!(equidist_matrix(&t, &maps, 17).is_err());
    }
}
