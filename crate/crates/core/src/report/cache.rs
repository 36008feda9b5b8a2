//! Binary table cache.
//!
//! Layout (little-endian): 8-byte magic, `p: u64`, family id `u32`, three
//! `i64` family parameters, method `u8`, then `p` pairs of `f64` (re, im).
//! The family id packs the kind in bits 0-7, the minus sign in bit 8 and
//! the master-table flag in bit 9.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::families::{
    FamilyKind, SignConvention, SumTable, TableSource, TransformMethod, TABLE_IMAG_TOL,
    TABLE_WEIL_SLACK,
};
use crate::modular::OddPrime;

pub const MAGIC: &[u8; 8] = b"EXPSUM01";
/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "EXPSUM_CACHE_DIR";
const HEADER_LEN: usize = 8 + 8 + 4 + 3 * 8 + 1;
const SPOT_CHECKS: usize = 64;

/// Everything that identifies a cached table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableKey {
    pub p: OddPrime,
    pub source: TableSource,
    pub method: TransformMethod,
}

fn kind_code(kind: &FamilyKind) -> u32 {
    match kind {
        FamilyKind::KloostermanShift { .. } => 0,
        FamilyKind::KloostermanDilate => 1,
        FamilyKind::KloostermanCurve { .. } => 2,
        FamilyKind::BirchShift => 3,
        FamilyKind::BirchDilate => 4,
        FamilyKind::BirchCurve { .. } => 5,
        FamilyKind::Laurent { .. } => 6,
    }
}

const CUSTOM_KIND: u32 = 0xff;

/// FNV-1a over the Laurent terms, so distinct phases get distinct keys.
fn terms_hash(kind: &FamilyKind) -> i64 {
    let FamilyKind::Laurent { terms } = kind else {
        return 0;
    };
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for t in terms {
        for b in (t.exponent as i64)
            .to_le_bytes()
            .into_iter()
            .chain(t.coefficient.to_le_bytes())
        {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h as i64
}

impl TableKey {
    pub fn of(table: &SumTable) -> Self {
        TableKey {
            p: table.p,
            source: table.source.clone(),
            method: table.method,
        }
    }

    pub fn family_id(&self) -> u32 {
        let kind = self
            .source
            .family()
            .map_or(CUSTOM_KIND, |f| kind_code(&f.kind));
        let sign = u32::from(self.source.sign() == SignConvention::Minus) << 8;
        let master = u32::from(matches!(self.source, TableSource::Master { .. })) << 9;
        kind | sign | master
    }

    pub fn params(&self) -> [i64; 3] {
        let (kind, a) = match &self.source {
            TableSource::Member { family, parameter } => (Some(&family.kind), *parameter as i64),
            TableSource::Master { family } => (Some(&family.kind), 0),
            TableSource::Custom { .. } => (None, 0),
        };
        match kind {
            Some(FamilyKind::KloostermanShift { b }) => [*b, a, 0],
            Some(FamilyKind::KloostermanCurve { m }) | Some(FamilyKind::BirchCurve { m }) => {
                [*m, a, 0]
            }
            Some(k @ FamilyKind::Laurent { terms }) => [terms_hash(k), a, terms.len() as i64],
            _ => [0, a, 0],
        }
    }

    fn method_code(&self) -> u8 {
        match self.method {
            TransformMethod::Direct => 0,
            TransformMethod::ChirpDft => 1,
        }
    }

    pub fn file_name(&self) -> String {
        let [x, y, z] = self.params();
        format!(
            "p{}-f{:04x}-{x}_{y}_{z}-m{}.bin",
            self.p,
            self.family_id(),
            self.method_code()
        )
    }

    fn header(&self) -> Vec<u8> {
        let mut h = Vec::with_capacity(HEADER_LEN);
        h.extend_from_slice(MAGIC);
        h.extend_from_slice(&self.p.get().to_le_bytes());
        h.extend_from_slice(&self.family_id().to_le_bytes());
        for v in self.params() {
            h.extend_from_slice(&v.to_le_bytes());
        }
        h.push(self.method_code());
        h
    }
}

/// `$EXPSUM_CACHE_DIR`, or `./.expsum-cache`.
pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".expsum-cache"))
}

pub fn write_table(path: &Path, table: &SumTable) -> Result<()> {
    let key = TableKey::of(table);
    let mut buf = key.header();
    buf.reserve(16 * table.values.len());
    for z in &table.values {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    // write then rename so readers never see a half-written file
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, &buf)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads a table stored under `key`, verifying magic, header, length and
/// spot-checking the Weil bound.
pub fn read_table(path: &Path, key: &TableKey) -> Result<SumTable> {
    let buf = fs::read(path)?;
    if buf.len() < HEADER_LEN || &buf[..8] != MAGIC {
        return Err(Error::integrity(format!("{}: bad magic", path.display())));
    }
    if buf[..HEADER_LEN] != key.header()[..] {
        return Err(Error::integrity(format!(
            "{}: header does not match the requested table",
            path.display()
        )));
    }
    let n = key.p.as_usize();
    if buf.len() != HEADER_LEN + 16 * n {
        return Err(Error::integrity(format!(
            "{}: expected {} bytes, found {}",
            path.display(),
            HEADER_LEN + 16 * n,
            buf.len()
        )));
    }
    let f = |i: usize| f64::from_le_bytes(buf[i..i + 8].try_into().expect("8 bytes"));
    let values: Vec<Complex64> = (0..n)
        .map(|y| Complex64::new(f(HEADER_LEN + 16 * y), f(HEADER_LEN + 16 * y + 8)))
        .collect();

    let weil = key.source.family().is_some_and(|fam| fam.is_weil_family());
    let mut rng = ChaCha8Rng::seed_from_u64(key.p.get());
    for _ in 0..SPOT_CHECKS {
        let y = rng.gen_range(0..n);
        let z = values[y];
        let bad = !(z.re.is_finite() && z.im.is_finite())
            || (weil && (z.im.abs() > TABLE_IMAG_TOL || z.norm() > 2.0 + TABLE_WEIL_SLACK));
        if bad {
            return Err(Error::integrity(format!(
                "{}: entry {y} = {z} fails the Weil check",
                path.display()
            )));
        }
    }
    Ok(SumTable {
        p: key.p,
        source: key.source.clone(),
        values,
        method: key.method,
        max_abs_error_estimate: 0.0,
    })
}

/// Stores `table` in `dir` under its key-derived file name.
pub fn cache_table(dir: &Path, table: &SumTable) -> Result<PathBuf> {
    let path = dir.join(TableKey::of(table).file_name());
    write_table(&path, table)?;
    Ok(path)
}

/// Loads the table for `key` from `dir`; `Ok(None)` when absent.
pub fn load_table(dir: &Path, key: &TableKey) -> Result<Option<SumTable>> {
    let path = dir.join(key.file_name());
    if !path.exists() {
        return Ok(None);
    }
    read_table(&path, key).map(Some)
}
