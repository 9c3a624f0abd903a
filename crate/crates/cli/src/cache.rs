//! Per-field result cache.
//!
//! Keyed by toolkit version plus the coefficient list, so any change to
//! either invalidates the entry. The payload is everything the scan needs,
//! which keeps warm runs from redoing maximal-order work.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use traceform_core::intfactor::PrimeFactorization;
use traceform_core::matrix::IntMat;
use traceform_core::traceform::QuadLattice;

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CachedField {
    pub degree: usize,
    pub disc: String,
    pub disc_factors: Vec<(String, u32)>,
    pub disc_sign: i8,
    pub signature: (usize, usize),
    pub index: String,
    pub trace_gram: Vec<Vec<String>>,
    /// Empty for degree-1 fields.
    pub tz_gram: Vec<Vec<String>>,
    /// Some(true) = tame at every ramified prime; None = undetermined somewhere.
    pub all_tame: Option<bool>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
pub struct Cache {
    pub entries: BTreeMap<String, CachedField>,
}

pub fn cache_key(coeffs: &[BigInt]) -> String {
    let list = coeffs
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!("v{TOOLKIT_VERSION}:{list}")
}

impl Cache {
    pub fn load(path: &Path) -> Self {
        match std::fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text).unwrap_or_default(),
            Err(_) => Self::default(),
        }
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).expect("serializable");
        std::fs::write(path, text)
    }
}

pub fn gram_to_rows(g: &IntMat) -> Vec<Vec<String>> {
    (0..g.rows())
        .map(|i| g.row(i).iter().map(|x| x.to_string()).collect())
        .collect()
}

pub fn rows_to_lattice(rows: &[Vec<String>], label: &str) -> Option<QuadLattice> {
    let n = rows.len();
    let mut data = Vec::with_capacity(n * n);
    for r in rows {
        if r.len() != n {
            return None;
        }
        for s in r {
            data.push(s.parse::<BigInt>().ok()?);
        }
    }
    QuadLattice::external(IntMat::new(n, n, data), label).ok()
}

pub fn factors_from_cache(sign: i8, parts: &[(String, u32)]) -> Option<PrimeFactorization> {
    let mut factors = Vec::with_capacity(parts.len());
    for (p, e) in parts {
        factors.push((p.parse::<BigInt>().ok()?, *e));
    }
    Some(PrimeFactorization { sign, factors })
}
