//! Splitting-type spectra: the computable shadow of arithmetic equivalence.
//!
//! Two conjugate fields have identical splitting types at every prime; a
//! single disagreement is a certificate of non-conjugacy. Per-prime work is
//! independent, so spectra fan out over the worker pool; `_seq` variants
//! stay on one thread for benchmarking the two paths against each other.

use crate::error::{Error, Result};
use crate::intfactor::primes_up_to;
use crate::numfield::{NumberField, PrimeSplit};
use crate::par::{par_map, seq_map};

/// Splitting types at all primes up to the bound, with excluded primes
/// (those dividing the index) listed alongside their reason.
#[derive(Debug, Clone)]
pub struct SplitSpectrum {
    pub label: String,
    pub bound: u64,
    /// Sorted by prime.
    pub entries: Vec<PrimeSplit>,
    pub excluded: Vec<(u64, String)>,
}

impl SplitSpectrum {
    pub fn entry_at(&self, p: u64) -> Option<&PrimeSplit> {
        self.entries
            .iter()
            .find(|s| s.p == num_bigint::BigInt::from(p))
    }
}

fn split_one(field: &NumberField, p: u64) -> std::result::Result<PrimeSplit, (u64, String)> {
    match field.splitting_type(p) {
        Ok(s) => Ok(s),
        Err(Error::IndexObstruction(_)) => {
            Err((p, "divides the index; splitting data unavailable".into()))
        }
        Err(e) => Err((p, format!("error: {e}"))),
    }
}

fn assemble(
    field: &NumberField,
    bound: u64,
    results: Vec<std::result::Result<PrimeSplit, (u64, String)>>,
) -> SplitSpectrum {
    let mut entries = Vec::new();
    let mut excluded = Vec::new();
    for r in results {
        match r {
            Ok(s) => entries.push(s),
            Err(x) => excluded.push(x),
        }
    }
    entries.sort_by(|a, b| a.p.cmp(&b.p));
    excluded.sort_by_key(|&(p, _)| p);
    SplitSpectrum {
        label: field.min_poly().to_string(),
        bound,
        entries,
        excluded,
    }
}

/// Splitting spectrum computed over the worker pool.
pub fn splitting_spectrum(field: &NumberField, bound: u64) -> SplitSpectrum {
    let results = par_map(primes_up_to(bound), |p| split_one(field, p));
    assemble(field, bound, results)
}

/// Sequential twin of [`splitting_spectrum`], for the bench comparison and
/// for builds without the `parallel` feature.
pub fn splitting_spectrum_seq(field: &NumberField, bound: u64) -> SplitSpectrum {
    let results = seq_map(primes_up_to(bound), |p| split_one(field, p));
    assemble(field, bound, results)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpectrumComparison {
    Consistent,
    DistinguishedAt {
        p: u64,
        left: PrimeSplit,
        right: PrimeSplit,
    },
}

/// Compare splitting types at every prime up to the bound that is included
/// in both spectra; the smallest disagreement wins.
pub fn compare_spectra(
    f: &NumberField,
    l: &NumberField,
    bound: u64,
) -> Result<SpectrumComparison> {
    if f.degree() != l.degree() {
        return Err(Error::Precondition(
            "spectrum comparison needs equal degrees".into(),
        ));
    }
    let sf = splitting_spectrum(f, bound);
    let sl = splitting_spectrum(l, bound);
    Ok(compare_computed(&sf, &sl))
}

pub fn compare_computed(sf: &SplitSpectrum, sl: &SplitSpectrum) -> SpectrumComparison {
    let mut j = 0usize;
    for e in &sf.entries {
        while j < sl.entries.len() && sl.entries[j].p < e.p {
            j += 1;
        }
        if j == sl.entries.len() {
            break;
        }
        if sl.entries[j].p == e.p && sl.entries[j].pairs != e.pairs {
            let p = e.p.to_u64();
            return SpectrumComparison::DistinguishedAt {
                p: p.expect("bounded prime fits"),
                left: e.clone(),
                right: sl.entries[j].clone(),
            };
        }
    }
    SpectrumComparison::Consistent
}

/// Smallest prime below the bound whose splitting types differ, as a
/// non-conjugacy certificate; `None` when none is found.
pub fn non_conjugacy_certificate(
    f: &NumberField,
    l: &NumberField,
    bound: u64,
) -> Result<Option<(u64, PrimeSplit, PrimeSplit)>> {
    match compare_spectra(f, l, bound)? {
        SpectrumComparison::Consistent => Ok(None),
        SpectrumComparison::DistinguishedAt { p, left, right } => Ok(Some((p, left, right))),
    }
}

trait ToU64 {
    fn to_u64(&self) -> Option<u64>;
}

impl ToU64 for num_bigint::BigInt {
    fn to_u64(&self) -> Option<u64> {
        num_traits::ToPrimitive::to_u64(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::CoreConfig;
    use crate::numfield::field_from_i64;

    fn cfg() -> CoreConfig {
        CoreConfig::default()
    }

    #[test]
    fn gaussian_spectrum() {
        let k = field_from_i64(&[1, 0, 1], &cfg()).unwrap();
        let s = splitting_spectrum(&k, 10);
        assert_eq!(s.entry_at(2).unwrap().pairs, vec![(2, 1)]);
        assert_eq!(s.entry_at(3).unwrap().pairs, vec![(1, 2)]);
        assert_eq!(s.entry_at(5).unwrap().pairs, vec![(1, 1), (1, 1)]);
        assert_eq!(s.entry_at(7).unwrap().pairs, vec![(1, 2)]);
        assert!(s.excluded.is_empty());
        // Sum e*f = n everywhere.
        for e in &s.entries {
            let total: u32 = e.pairs.iter().map(|&(a, b)| a * b).sum();
            assert_eq!(total as usize, k.degree());
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let k = field_from_i64(&[11, 2, 0, 1], &cfg()).unwrap();
        let a = splitting_spectrum(&k, 500);
        let b = splitting_spectrum_seq(&k, 500);
        assert_eq!(a.entries, b.entries);
        assert_eq!(a.excluded, b.excluded);
    }

    #[test]
    fn degree_one_spectrum() {
        let k = field_from_i64(&[3, 1], &cfg()).unwrap();
        let s = splitting_spectrum(&k, 20);
        for e in &s.entries {
            assert_eq!(e.pairs, vec![(1, 1)]);
        }
    }

    #[test]
    fn cubic_certificate_smallest_prime() {
        let a = field_from_i64(&[-2, 0, 0, 1], &cfg()).unwrap();
        let b = field_from_i64(&[-3, 0, 0, 1], &cfg()).unwrap();
        // x^3-2 ramifies at 2 with (3,1); x^3-3 splits as (1,1)(1,2)
        // there, so the smallest distinguishing prime is 2.
        let cert = non_conjugacy_certificate(&a, &b, 10).unwrap();
        let (p, left, right) = cert.expect("certificate exists");
        assert_eq!(p, 2);
        assert_eq!(left.pairs, vec![(3, 1)]);
        assert_eq!(right.pairs, vec![(1, 1), (1, 2)]);
    }

    #[test]
    fn self_comparison_consistent() {
        let a = field_from_i64(&[-2, 0, 0, 1], &cfg()).unwrap();
        assert_eq!(
            compare_spectra(&a, &a, 100).unwrap(),
            SpectrumComparison::Consistent
        );
    }

    #[test]
    fn comparison_is_symmetric() {
        let a = field_from_i64(&[-2, 0, 0, 1], &cfg()).unwrap();
        let b = field_from_i64(&[-3, 0, 0, 1], &cfg()).unwrap();
        let ab = compare_spectra(&a, &b, 50).unwrap();
        let ba = compare_spectra(&b, &a, 50).unwrap();
        match (ab, ba) {
            (
                SpectrumComparison::DistinguishedAt { p: p1, .. },
                SpectrumComparison::DistinguishedAt { p: p2, .. },
            ) => assert_eq!(p1, p2),
            _ => panic!("both directions must distinguish"),
        }
    }
}
