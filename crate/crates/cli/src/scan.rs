//! Batch discriminant-multiplicity scan.
//!
//! Ingest a field table, compute per-field invariants (cached), group fields
//! by discriminant, and inside every multiplicity group decide each pair:
//! conjugate, distinct trace-zero forms, or the counterexample shape the
//! scan hunts for (equivalent forms on non-conjugate fields). Pair work runs
//! over the worker pool; the report is assembled in a deterministic order
//! and two runs over the same inputs are byte-identical.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Signed;

use traceform_core::config::CoreConfig;
use traceform_core::conjugacy::{are_conjugate_views, ConjugacyOutcome, FieldView};
use traceform_core::intfactor::PrimeFactorization;
use traceform_core::isometry::{is_isometric, IsometryOutcome};
use traceform_core::numfield::{
    field_from_poly, is_fundamental_disc, FundamentalConvention, NumberField, Tameness,
};
use traceform_core::par::par_map;
use traceform_core::poly::QPoly;
use traceform_core::traceform::{trace_gram, trace_zero_gram, QuadLattice};

use crate::cache::{self, Cache, CachedField};
use crate::table::{parse_table, FieldTableRecord};

/// Everything the pairwise stage needs from one field.
#[derive(Debug, Clone)]
pub struct FieldSummary {
    pub label: String,
    pub coeffs: Vec<BigInt>,
    pub degree: usize,
    pub disc: BigInt,
    pub disc_factors: PrimeFactorization,
    pub signature: (usize, usize),
    pub index: BigInt,
    pub trace_gram: QuadLattice,
    pub tz_gram: Option<QuadLattice>,
    pub all_tame: Option<bool>,
    pub flag: Option<String>,
}

impl FieldSummary {
    fn view(&self) -> FieldView {
        FieldView {
            min_poly: QPoly::from_int_coeffs(&monic_coeffs(&self.coeffs)),
            disc: self.disc.clone(),
            signature: self.signature,
            index: self.index.clone(),
        }
    }
}

/// Monic integral model coefficients of a record's polynomial.
fn monic_coeffs(coeffs: &[BigInt]) -> Vec<BigInt> {
    let f = QPoly::from_int_coeffs(coeffs);
    traceform_core::numfield::monic_integral_model(&f)
        .to_int_coeffs()
        .expect("monic integral model")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairOutcome {
    Conjugate,
    DistinctForms,
    EquivalentFormsNonConjugate,
    Undetermined,
}

impl std::fmt::Display for PairOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PairOutcome::Conjugate => "conjugate",
            PairOutcome::DistinctForms => "distinct-forms",
            PairOutcome::EquivalentFormsNonConjugate => "equivalent-forms-nonconjugate",
            PairOutcome::Undetermined => "undetermined",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone)]
pub struct PairRecord {
    pub disc: BigInt,
    pub a: String,
    pub b: String,
    pub outcome: PairOutcome,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub fundamental_only: bool,
    pub convention: FundamentalConvention,
    pub tame_only: bool,
    /// Per-degree defaults apply when None.
    pub max_disc: Option<BigInt>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            fundamental_only: true,
            convention: FundamentalConvention::QuadraticStyle,
            tame_only: false,
            max_disc: None,
        }
    }
}

/// Per-degree discriminant bounds used when no explicit bound is given;
/// degrees 1-3 are unbounded.
pub fn default_max_disc(degree: usize) -> Option<BigInt> {
    match degree {
        1..=3 => None,
        4..=6 => Some(BigInt::from(1_000_000_000u64)),
        7 => Some(BigInt::from(89_000_000_000u64)),
        8 => Some(BigInt::from(2_500_000_000u64)),
        9 => Some(BigInt::from(28_000_000_000u64)),
        10 => Some(BigInt::from(280_000_000_000u64)),
        _ => None,
    }
}

#[derive(Debug)]
pub struct ScanReport {
    pub version: String,
    pub config_echo: String,
    /// (line, reason) for records that were skipped or flagged.
    pub skipped: Vec<(String, String)>,
    pub groups: Vec<(BigInt, Vec<String>)>,
    pub pairs: Vec<PairRecord>,
    pub counter_fields: usize,
    pub counter_groups: usize,
    pub counter_pairs: usize,
    pub counter_conjugate: usize,
    pub counter_distinct: usize,
    pub counter_counterexample: usize,
    pub counter_undetermined: usize,
}

impl ScanReport {
    /// Deterministic line-oriented rendering: one structured record per
    /// line, then a human summary.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scan version={} {}", self.version, self.config_echo);
        for (line, reason) in &self.skipped {
            let _ = writeln!(out, "skipped record={line:?} reason={reason:?}");
        }
        for (disc, labels) in &self.groups {
            let _ = writeln!(out, "group disc={} labels={}", disc, labels.join(","));
        }
        for p in &self.pairs {
            let _ = writeln!(
                out,
                "pair disc={} a={} b={} outcome={} detail={:?}",
                p.disc, p.a, p.b, p.outcome, p.detail
            );
            if p.outcome == PairOutcome::EquivalentFormsNonConjugate {
                let _ = writeln!(
                    out,
                    "counterexample-candidate a={} b={} detail={:?}",
                    p.a, p.b, p.detail
                );
            }
        }
        let _ = writeln!(
            out,
            "summary fields={} groups={} pairs={} conjugate={} distinct-forms={} \
             equivalent-forms-nonconjugate={} undetermined={}",
            self.counter_fields,
            self.counter_groups,
            self.counter_pairs,
            self.counter_conjugate,
            self.counter_distinct,
            self.counter_counterexample,
            self.counter_undetermined
        );
        out
    }
}

/// Build a summary from scratch (slow path).
pub fn summarize_field(record: &FieldTableRecord, cfg: &CoreConfig) -> Result<FieldSummary, String> {
    let field: NumberField =
        field_from_poly(&record.coeffs, cfg).map_err(|e| format!("{e}"))?;
    Ok(summary_of_field(record, &field))
}

fn summary_of_field(record: &FieldTableRecord, field: &NumberField) -> FieldSummary {
    let tg = trace_gram(field);
    let tz = if field.degree() >= 2 {
        Some(trace_zero_gram(field).expect("degree >= 2"))
    } else {
        None
    };
    let mut all_tame = Some(true);
    for p in field.ramified_primes() {
        match field.tameness_at(&p) {
            Tameness::Tame | Tameness::Unramified => {}
            Tameness::Wild => {
                all_tame = Some(false);
                break;
            }
            Tameness::Undetermined => {
                all_tame = None;
                break;
            }
        }
    }
    let flag = record.expected_disc.as_ref().and_then(|expect| {
        (expect != field.disc()).then(|| {
            format!("expected_disc {} but computed {}", expect, field.disc())
        })
    });
    FieldSummary {
        label: record.label.clone(),
        coeffs: record.coeffs.clone(),
        degree: field.degree(),
        disc: field.disc().clone(),
        disc_factors: field.disc_factors().clone(),
        signature: field.signature(),
        index: field.index().clone(),
        trace_gram: tg,
        tz_gram: tz,
        all_tame,
        flag,
    }
}

fn summary_from_cache(record: &FieldTableRecord, cached: &CachedField) -> Option<FieldSummary> {
    let disc: BigInt = cached.disc.parse().ok()?;
    let disc_factors = cache::factors_from_cache(cached.disc_sign, &cached.disc_factors)?;
    let index: BigInt = cached.index.parse().ok()?;
    let tg = cache::rows_to_lattice(&cached.trace_gram, "cached-trace")?;
    let tz = if cached.tz_gram.is_empty() {
        None
    } else {
        Some(cache::rows_to_lattice(&cached.tz_gram, "cached-trace-zero")?)
    };
    let flag = record.expected_disc.as_ref().and_then(|expect| {
        (expect != &disc).then(|| format!("expected_disc {} but computed {}", expect, disc))
    });
    Some(FieldSummary {
        label: record.label.clone(),
        coeffs: record.coeffs.clone(),
        degree: cached.degree,
        disc,
        disc_factors,
        signature: cached.signature,
        index,
        trace_gram: tg,
        tz_gram: tz,
        all_tame: cached.all_tame,
        flag,
    })
}

fn cache_entry(s: &FieldSummary) -> CachedField {
    CachedField {
        degree: s.degree,
        disc: s.disc.to_string(),
        disc_factors: s
            .disc_factors
            .factors
            .iter()
            .map(|(p, e)| (p.to_string(), *e))
            .collect(),
        disc_sign: s.disc_factors.sign,
        signature: s.signature,
        index: s.index.to_string(),
        trace_gram: cache::gram_to_rows(s.trace_gram.gram()),
        tz_gram: s
            .tz_gram
            .as_ref()
            .map(|l| cache::gram_to_rows(l.gram()))
            .unwrap_or_default(),
        all_tame: s.all_tame,
    }
}

/// Decide one pair inside a discriminant group.
pub fn decide_pair(a: &FieldSummary, b: &FieldSummary, cfg: &CoreConfig) -> (PairOutcome, String) {
    let conj = are_conjugate_views(&a.view(), &b.view(), cfg);
    if let ConjugacyOutcome::Conjugate { .. } = conj {
        return (PairOutcome::Conjugate, "embedding witness verified".into());
    }
    let (Some(tza), Some(tzb)) = (&a.tz_gram, &b.tz_gram) else {
        return (
            PairOutcome::Undetermined,
            "degree-1 fields have no trace-zero form".into(),
        );
    };
    let iso = match is_isometric(tza, tzb, cfg) {
        Ok(o) => o,
        Err(e) => {
            return (
                PairOutcome::Undetermined,
                format!("trace-zero isometry unavailable: {e}; conjugacy: {}", conj.short()),
            )
        }
    };
    match (iso, conj) {
        (IsometryOutcome::NotIsometric { separator }, c) => (
            PairOutcome::DistinctForms,
            format!("separated by {separator}; conjugacy: {}", c.short()),
        ),
        (IsometryOutcome::Isometric { .. }, ConjugacyOutcome::NotConjugate { certificate }) => (
            PairOutcome::EquivalentFormsNonConjugate,
            format!(
                "trace-zero forms isometric (witness verified) yet fields differ: {certificate}"
            ),
        ),
        (IsometryOutcome::Isometric { .. }, ConjugacyOutcome::Undetermined { reason }) => (
            PairOutcome::Undetermined,
            format!("isometric trace-zero forms but conjugacy undetermined: {reason}"),
        ),
        (IsometryOutcome::Isometric { .. }, ConjugacyOutcome::Conjugate { .. }) => {
            unreachable!("handled above")
        }
    }
}

/// Run the scan over a table file.
pub fn run_scan(
    table_text: &str,
    opts: &ScanOptions,
    cfg: &CoreConfig,
    cache_path: Option<&Path>,
) -> ScanReport {
    let ingest = parse_table(table_text);
    let mut skipped: Vec<(String, String)> = ingest
        .malformed
        .iter()
        .map(|(no, line, why)| (format!("line {no}: {line}"), why.clone()))
        .collect();

    let mut cache = cache_path.map(|p| Cache::load(p)).unwrap_or_default();

    // Summaries, cached or computed, in parallel for the misses.
    let mut summaries: Vec<Option<FieldSummary>> = vec![None; ingest.records.len()];
    let mut misses: Vec<usize> = Vec::new();
    for (i, rec) in ingest.records.iter().enumerate() {
        let key = cache::cache_key(&rec.coeffs);
        match cache.entries.get(&key).and_then(|c| summary_from_cache(rec, c)) {
            Some(s) => summaries[i] = Some(s),
            None => misses.push(i),
        }
    }
    let computed: Vec<(usize, Result<FieldSummary, String>)> = par_map(misses, |i| {
        (i, summarize_field(&ingest.records[i], cfg))
    });
    for (i, res) in computed {
        match res {
            Ok(s) => {
                cache
                    .entries
                    .insert(cache::cache_key(&s.coeffs), cache_entry(&s));
                summaries[i] = Some(s);
            }
            Err(why) => skipped.push((
                format!("record {}", ingest.records[i].label),
                format!("construction failed: {why}"),
            )),
        }
    }
    if let Some(p) = cache_path {
        let _ = cache.save(p);
    }

    // Filters.
    let mut fields: Vec<FieldSummary> = Vec::new();
    for s in summaries.into_iter().flatten() {
        if let Some(flag) = &s.flag {
            skipped.push((format!("record {}", s.label), format!("flagged: {flag}")));
        }
        let bound = opts
            .max_disc
            .clone()
            .or_else(|| default_max_disc(s.degree));
        if let Some(b) = bound {
            if s.disc.abs() > b {
                skipped.push((
                    format!("record {}", s.label),
                    format!("|disc| {} exceeds bound {}", s.disc.abs(), b),
                ));
                continue;
            }
        }
        if opts.fundamental_only {
            match is_fundamental_disc(&s.disc, opts.convention, cfg) {
                Ok(true) => {}
                Ok(false) => {
                    skipped.push((
                        format!("record {}", s.label),
                        format!("discriminant {} not fundamental", s.disc),
                    ));
                    continue;
                }
                Err(e) => {
                    skipped.push((
                        format!("record {}", s.label),
                        format!("fundamental test failed: {e}"),
                    ));
                    continue;
                }
            }
        }
        if opts.tame_only {
            match s.all_tame {
                Some(true) => {}
                Some(false) => {
                    skipped.push((
                        format!("record {}", s.label),
                        "wild ramification".to_string(),
                    ));
                    continue;
                }
                None => {
                    skipped.push((
                        format!("record {}", s.label),
                        "tameness undetermined".to_string(),
                    ));
                    continue;
                }
            }
        }
        fields.push(s);
    }

    // Group by exact discriminant.
    let mut by_disc: BTreeMap<BigInt, Vec<usize>> = BTreeMap::new();
    for (i, s) in fields.iter().enumerate() {
        by_disc.entry(s.disc.clone()).or_default().push(i);
    }
    let mut groups: Vec<(BigInt, Vec<String>)> = Vec::new();
    let mut pair_jobs: Vec<(usize, usize)> = Vec::new();
    for (disc, members) in &by_disc {
        if members.len() < 2 {
            continue;
        }
        let mut labels: Vec<String> = members.iter().map(|&i| fields[i].label.clone()).collect();
        labels.sort();
        groups.push((disc.clone(), labels));
        let mut sorted = members.clone();
        sorted.sort_by(|&x, &y| fields[x].label.cmp(&fields[y].label));
        for i in 0..sorted.len() {
            for j in i + 1..sorted.len() {
                pair_jobs.push((sorted[i], sorted[j]));
            }
        }
    }

    let results: Vec<PairRecord> = par_map(pair_jobs, |(i, j)| {
        let (outcome, detail) = decide_pair(&fields[i], &fields[j], cfg);
        PairRecord {
            disc: fields[i].disc.clone(),
            a: fields[i].label.clone(),
            b: fields[j].label.clone(),
            outcome,
            detail,
        }
    });
    let mut pairs = results;
    pairs.sort_by(|p, q| (&p.disc, &p.a, &p.b).cmp(&(&q.disc, &q.a, &q.b)));
    skipped.sort();

    let counter_conjugate = pairs.iter().filter(|p| p.outcome == PairOutcome::Conjugate).count();
    let counter_distinct = pairs
        .iter()
        .filter(|p| p.outcome == PairOutcome::DistinctForms)
        .count();
    let counter_counterexample = pairs
        .iter()
        .filter(|p| p.outcome == PairOutcome::EquivalentFormsNonConjugate)
        .count();
    let counter_undetermined = pairs
        .iter()
        .filter(|p| p.outcome == PairOutcome::Undetermined)
        .count();

    ScanReport {
        version: cache::TOOLKIT_VERSION.to_string(),
        config_echo: format!(
            "seed={} fundamental_only={} convention={:?} tame_only={} max_disc={}",
            cfg.seed,
            opts.fundamental_only,
            opts.convention,
            opts.tame_only,
            opts.max_disc
                .as_ref()
                .map(|b| b.to_string())
                .unwrap_or_else(|| "per-degree-default".into())
        ),
        skipped,
        counter_fields: fields.len(),
        counter_groups: groups.len(),
        counter_pairs: pairs.len(),
        groups,
        pairs,
        counter_conjugate,
        counter_distinct,
        counter_counterexample,
        counter_undetermined,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> CoreConfig {
        CoreConfig::default()
    }

    #[test]
    fn duplicate_field_reports_conjugate() {
        let table = "\
a | -5,0,1
b | -5,0,1
";
        let report = run_scan(table, &ScanOptions::default(), &cfg(), None);
        assert_eq!(report.counter_pairs, 1);
        assert_eq!(report.pairs[0].outcome, PairOutcome::Conjugate);
    }

    #[test]
    fn same_field_two_models_reports_conjugate() {
        // x^2-5 and y^2-y-1 define the same field.
        let table = "\
a | -5,0,1
b | -1,-1,1
";
        let report = run_scan(table, &ScanOptions::default(), &cfg(), None);
        assert_eq!(report.counter_pairs, 1);
        assert_eq!(report.pairs[0].outcome, PairOutcome::Conjugate);
    }

    #[test]
    fn distinct_quadratics_never_group() {
        let table = "\
a | -5,0,1
b | -13,0,1
";
        let report = run_scan(table, &ScanOptions::default(), &cfg(), None);
        assert_eq!(report.counter_groups, 0);
        assert_eq!(report.counter_pairs, 0);
    }

    #[test]
    fn empty_table_is_empty_report() {
        let report = run_scan("# nothing\n", &ScanOptions::default(), &cfg(), None);
        assert_eq!(report.counter_fields, 0);
        assert_eq!(report.counter_pairs, 0);
    }

    #[test]
    fn malformed_and_mismatched_records_listed() {
        let table = "\
broken line
a | -5,0,1 | 999
b | 1,2,1
";
        let report = run_scan(table, &ScanOptions::default(), &cfg(), None);
        // one malformed, one disc flag, one reducible
        assert!(report.skipped.len() >= 3, "{:?}", report.skipped);
    }

    #[test]
    fn report_is_deterministic() {
        let table = "\
b | -5,0,1
a | -1,-1,1
c | -13,0,1
";
        let r1 = run_scan(table, &ScanOptions::default(), &cfg(), None).render();
        let r2 = run_scan(table, &ScanOptions::default(), &cfg(), None).render();
        assert_eq!(r1, r2);
    }

    #[test]
    fn warm_cache_equals_cold() {
        let dir = std::env::temp_dir().join(format!("tf-cache-test-{}", std::process::id()));
        let _ = std::fs::create_dir_all(&dir);
        let path = dir.join("cache.json");
        let _ = std::fs::remove_file(&path);
        let table = "\
a | -5,0,1
b | -1,-1,1
";
        let cold = run_scan(table, &ScanOptions::default(), &cfg(), Some(&path)).render();
        let warm = run_scan(table, &ScanOptions::default(), &cfg(), Some(&path)).render();
        assert_eq!(cold, warm);
        let _ = std::fs::remove_file(&path);
    }
}
