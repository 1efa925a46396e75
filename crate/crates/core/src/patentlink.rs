//! Links Sleeping Beauties to citing patent families and summarizes the
//! resulting SB-SNPRs (science-non-patent references).

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, FieldFilter};
use crate::error::{Error, Result};
use crate::sbdetect::{self, SbRecord};
use crate::series::{self, Bucketing, YearSeries};

/// An SB cited by at least one patent family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnprRecord {
    pub pub_id: String,
    pub pub_year: i32,
    /// Citing family ids, sorted.
    pub citing_family_ids: Vec<String>,
    pub n_families: usize,
    /// Earliest application year among citing families.
    pub first_citation_year: i32,
    /// Lag in years from publication to first patent citation.
    pub pcy: i32,
}

/// Matches SBs against patent NPL citations.
///
/// Families are counted once however many member patents they have. A
/// family filed before the publication year cannot have cited it and is
/// ignored (`validate` reports such records).
pub fn link_snprs(corpus: &Corpus, sbs: &[SbRecord]) -> Vec<SnprRecord> {
    let mut out: Vec<SnprRecord> = sbs
        .iter()
        .filter_map(|sb| {
            let idx = corpus.idx(&sb.pub_id)?;
            let year = corpus.publication(idx).year;
            let families: Vec<_> = corpus
                .citing_families(idx)
                .iter()
                .map(|&f| corpus.patent(f))
                .filter(|p| p.application_year >= year)
                .collect();
            let first = families.iter().map(|p| p.application_year).min()?;
            let mut ids: Vec<String> = families.iter().map(|p| p.family_id.clone()).collect();
            ids.sort();
            Some(SnprRecord {
                pub_id: sb.pub_id.clone(),
                pub_year: year,
                n_families: ids.len(),
                citing_family_ids: ids,
                first_citation_year: first,
                pcy: first - year,
            })
        })
        .collect();
    out.sort_by(|a, b| a.pub_id.cmp(&b.pub_id));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortRow {
    pub period: String,
    pub n: usize,
    pub mean_pcy: Option<f64>,
    pub sd_pcy: Option<f64>,
    /// First-citation year of the longest-lag record; ties go to the latest year.
    pub most_extreme_year: Option<i32>,
}

/// pcy statistics per publication-year bucket. Empty buckets are kept with
/// `n = 0`; records outside the range are ignored.
pub fn cohort_lag_stats(snprs: &[SnprRecord], buckets: &Bucketing) -> Vec<CohortRow> {
    (0..buckets.len())
        .map(|b| {
            let members: Vec<&SnprRecord> = snprs
                .iter()
                .filter(|s| buckets.index_of(s.pub_year) == Some(b))
                .collect();
            let lags: Vec<f64> = members.iter().map(|s| s.pcy as f64).collect();
            let extreme = members
                .iter()
                .max_by_key(|s| (s.pcy, s.first_citation_year))
                .map(|s| s.first_citation_year);
            CohortRow {
                period: buckets.label(b),
                n: members.len(),
                mean_pcy: series::mean(&lags),
                sd_pcy: series::sample_sd(&lags),
                most_extreme_year: extreme,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepresentationKey {
    #[default]
    Field,
    Country,
}

impl std::str::FromStr for RepresentationKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "field" => Ok(RepresentationKey::Field),
            "country" => Ok(RepresentationKey::Country),
            other => Err(Error::InvalidParams(format!(
                "representation key must be `field` or `country`, got `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RepresentationOptions {
    pub key: RepresentationKey,
    /// Restricts the publication denominator (and, for fields, the rows).
    pub scope: FieldFilter,
    /// Publication years for the all-publications denominator; defaults to
    /// the span of the SB records.
    pub pub_years: Option<RangeInclusive<i32>>,
}

/// Shares are percentages of unique publications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationRow {
    pub key: String,
    pub n_snpr: usize,
    pub share_snpr: f64,
    pub share_sb: f64,
    pub share_pubs: f64,
    pub ratio_snpr_vs_pubs: Option<f64>,
    pub ratio_sb_vs_pubs: Option<f64>,
}

fn keys_of(corpus: &Corpus, id: &str, key: RepresentationKey, scope: Option<&BTreeSet<u32>>) -> Vec<String> {
    let Some(p) = corpus.get(id) else {
        return Vec::new();
    };
    let keys: BTreeSet<String> = match key {
        RepresentationKey::Field => p
            .field_codes
            .iter()
            .filter(|c| scope.is_none_or(|s| s.contains(c)))
            .map(|&c| corpus.fields().name(c).into_owned())
            .collect(),
        RepresentationKey::Country => p.country_codes.iter().cloned().collect(),
    };
    keys.into_iter().collect()
}

/// Field or country distribution of SB-SNPRs compared with all SBs and all
/// publications. A publication with k keys contributes to k rows, so shares
/// may sum past 100. Rows cover keys present among the SBs, sorted by
/// `share_snpr` descending then key.
pub fn representation(
    corpus: &Corpus,
    sbs: &[SbRecord],
    snprs: &[SnprRecord],
    options: &RepresentationOptions,
) -> Result<Vec<RepresentationRow>> {
    let scope = corpus.fields().codes_for(&options.scope)?;
    let in_scope = |codes: &[u32]| match &scope {
        None => true,
        Some(s) => codes.iter().any(|c| s.contains(c)),
    };
    let years = match &options.pub_years {
        Some(r) => r.clone(),
        None => {
            let lo = sbs.iter().map(|s| s.pub_year).min();
            let hi = sbs.iter().map(|s| s.pub_year).max();
            match (lo, hi) {
                (Some(lo), Some(hi)) => lo..=hi,
                _ => return Ok(Vec::new()),
            }
        }
    };
    if years.is_empty() {
        return Err(Error::EmptyYearRange(*years.start(), *years.end()));
    }

    #[derive(Default)]
    struct Tally {
        snpr: usize,
        sb: usize,
        pubs: usize,
    }
    let mut tally: BTreeMap<String, Tally> = BTreeMap::new();
    let sb_ids: BTreeSet<&str> = sbs.iter().map(|s| s.pub_id.as_str()).collect();
    let snpr_ids: BTreeSet<&str> = snprs.iter().map(|s| s.pub_id.as_str()).collect();
    for id in &sb_ids {
        for k in keys_of(corpus, id, options.key, scope.as_ref()) {
            tally.entry(k).or_default().sb += 1;
        }
    }
    for id in &snpr_ids {
        for k in keys_of(corpus, id, options.key, scope.as_ref()) {
            tally.entry(k).or_default().snpr += 1;
        }
    }
    let mut n_pubs = 0usize;
    for &i in corpus.publications_in(years) {
        let p = corpus.publication(i);
        if !in_scope(&p.field_codes) {
            continue;
        }
        n_pubs += 1;
        for k in keys_of(corpus, &p.id, options.key, scope.as_ref()) {
            if let Some(t) = tally.get_mut(&k) {
                t.pubs += 1;
            }
        }
    }

    let pct = |x: usize, n: usize| if n == 0 { 0.0 } else { 100.0 * x as f64 / n as f64 };
    let ratio = |a: f64, b: f64| (b > 0.0).then(|| a / b);
    let mut rows: Vec<RepresentationRow> = tally
        .into_iter()
        .map(|(key, t)| {
            let share_snpr = pct(t.snpr, snpr_ids.len());
            let share_sb = pct(t.sb, sb_ids.len());
            let share_pubs = pct(t.pubs, n_pubs);
            RepresentationRow {
                key,
                n_snpr: t.snpr,
                share_snpr,
                share_sb,
                share_pubs,
                ratio_snpr_vs_pubs: ratio(share_snpr, share_pubs),
                ratio_sb_vs_pubs: ratio(share_sb, share_pubs),
            }
        })
        .collect();
    rows.sort_by(|a, b| b.share_snpr.total_cmp(&a.share_snpr).then_with(|| a.key.cmp(&b.key)));
    Ok(rows)
}

/// Reference value for normalized count series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizeBase {
    /// Count of the bucket with this index.
    Bucket(usize),
    /// An externally supplied count, e.g. another series' first bucket.
    External(u64),
}

/// Per-bucket record counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountSeries {
    pub labels: Vec<String>,
    pub counts: Vec<u64>,
    /// `100 × count / base` when normalization was requested.
    pub normalized: Option<Vec<f64>>,
}

impl CountSeries {
    /// Counts keyed by each bucket's first year.
    pub fn as_year_series(&self, buckets: &Bucketing) -> YearSeries {
        let mut s = YearSeries::zeros(buckets.bounds(0).0..=buckets.bounds(buckets.len() - 1).0);
        for (b, &c) in self.counts.iter().enumerate() {
            s.set(buckets.bounds(b).0, c);
        }
        s
    }
}

/// Counts publication years per bucket, optionally indexed to a base of 100.
pub fn count_series(
    years: impl IntoIterator<Item = i32>,
    buckets: &Bucketing,
    base: Option<NormalizeBase>,
) -> Result<CountSeries> {
    let mut counts = vec![0u64; buckets.len()];
    for y in years {
        if let Some(b) = buckets.index_of(y) {
            counts[b] += 1;
        }
    }
    let normalized = match base {
        None => None,
        Some(base) => {
            let denom = match base {
                NormalizeBase::Bucket(b) => *counts.get(b).ok_or_else(|| {
                    Error::InvalidParams(format!("base bucket {b} is out of range"))
                })?,
                NormalizeBase::External(v) => v,
            };
            if denom == 0 {
                return Err(Error::ZeroBase);
            }
            Some(counts.iter().map(|&c| 100.0 * c as f64 / denom as f64).collect())
        }
    };
    Ok(CountSeries {
        labels: buckets.labels(),
        counts,
        normalized,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagPoint {
    pub pub_id: String,
    pub pcy: i32,
    /// Citations received in the awake window.
    pub ca_total: u64,
}

/// Pairs each SNPR's lag with its awake-window citation total and reports
/// the Pearson correlation.
pub fn lag_vs_awake_scatter(snprs: &[SnprRecord], sbs: &[SbRecord]) -> Result<(Vec<LagPoint>, f64)> {
    let by_id: BTreeMap<&str, &SbRecord> = sbs.iter().map(|s| (s.pub_id.as_str(), s)).collect();
    let points = snprs
        .iter()
        .map(|s| {
            let sb = by_id.get(s.pub_id.as_str()).ok_or_else(|| {
                Error::InvalidParams(format!("SNPR `{}` has no matching SB record", s.pub_id))
            })?;
            Ok(LagPoint {
                pub_id: s.pub_id.clone(),
                pcy: s.pcy,
                ca_total: sb.awake_total,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "correlation needs at least 3 pairs, got {}",
            points.len()
        )));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.pcy as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.ca_total as f64).collect();
    let r = sbdetect::pearson_correlation(&xs, &ys)?;
    Ok((points, r))
}

/// Splits SB records into (non-SNPR, SNPR) publication years.
pub fn split_years(sbs: &[SbRecord], snprs: &[SnprRecord]) -> (Vec<i32>, Vec<i32>) {
    let ids: HashSet<&str> = snprs.iter().map(|s| s.pub_id.as_str()).collect();
    let (snpr, non): (Vec<&SbRecord>, Vec<&SbRecord>) =
        sbs.iter().partition(|s| ids.contains(s.pub_id.as_str()));
    (
        non.iter().map(|s| s.pub_year).collect(),
        snpr.iter().map(|s| s.pub_year).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Patent, Publication};
    use crate::sbdetect::DepthLabel;

    fn sb(id: &str, year: i32, awake_total: u64) -> SbRecord {
        SbRecord {
            pub_id: id.into(),
            pub_year: year,
            sleep_window: (year, year + 9),
            awake_window: (year + 10, year + 19),
            sleep_total: 0,
            awake_total,
            cs: 0.0,
            ca: awake_total as f64 / 10.0,
            depth: DepthLabel::Coma,
            awakening_year: None,
        }
    }

    fn family(id: &str, patents: &[&str], year: i32, cites: &[&str]) -> Patent {
        Patent {
            family_id: id.into(),
            patent_ids: patents.iter().map(|s| s.to_string()).collect(),
            title: String::new(),
            inventors: vec![],
            ipc_codes: vec![],
            application_year: year,
            npl_cited_ids: cites.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn snpr(id: &str, year: i32, pcy: i32) -> SnprRecord {
        SnprRecord {
            pub_id: id.into(),
            pub_year: year,
            citing_family_ids: vec!["F".into()],
            n_families: 1,
            first_citation_year: year + pcy,
            pcy,
        }
    }

    #[test]
    fn family_counted_once_with_earliest_year() {
        // Two member patents of one family; the family carries the earlier
        // application year.
        let c = Corpus::from_records(
            vec![Publication::new("A", 1990), Publication::new("B", 1990)],
            &[],
            vec![family("F1", &["US1", "EP1"], 2000, &["A"]), family("F2", &["US2"], 2003, &["A"])],
        )
        .unwrap();
        let out = link_snprs(&c, &[sb("A", 1990, 60), sb("B", 1990, 60)]);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].n_families, 2);
        assert_eq!(out[0].first_citation_year, 2000);
        assert_eq!(out[0].pcy, 10);
    }

    #[test]
    fn predating_family_ignored() {
        let c = Corpus::from_records(
            vec![Publication::new("A", 1990)],
            &[],
            vec![family("F", &["US1"], 1985, &["A"])],
        )
        .unwrap();
        assert!(link_snprs(&c, &[sb("A", 1990, 60)]).is_empty());
    }

    #[test]
    fn cohort_stats_and_extreme_year() {
        let b = Bucketing::new(1992..=1997, 3).unwrap();
        let rows = cohort_lag_stats(&[snpr("a", 1992, 10), snpr("b", 1994, 14)], &b);
        assert_eq!(rows[0].n, 2);
        assert_eq!(rows[0].mean_pcy, Some(12.0));
        assert!((rows[0].sd_pcy.unwrap() - 8f64.sqrt()).abs() < 1e-12);
        assert_eq!(rows[0].most_extreme_year, Some(2008));
        assert_eq!(rows[1].n, 0);
        assert_eq!(rows[1].most_extreme_year, None);
        // Equal lags: the later first-citation year wins.
        let tie = cohort_lag_stats(&[snpr("a", 1992, 10), snpr("b", 1993, 10)], &b);
        assert_eq!(tie[0].most_extreme_year, Some(2003));
    }

    #[test]
    fn count_series_normalization() {
        let b = Bucketing::new(1980..=1988, 3).unwrap();
        let years: Vec<i32> = std::iter::repeat_n(1980, 10)
            .chain(std::iter::repeat_n(1984, 12))
            .chain(std::iter::repeat_n(1988, 15))
            .collect();
        let s = count_series(years.clone(), &b, Some(NormalizeBase::Bucket(0))).unwrap();
        assert_eq!(s.counts, vec![10, 12, 15]);
        assert_eq!(s.normalized.unwrap(), vec![100.0, 120.0, 150.0]);
        assert!(matches!(
            count_series(vec![1984], &b, Some(NormalizeBase::Bucket(0))),
            Err(Error::ZeroBase)
        ));
        let ext = count_series(years, &b, Some(NormalizeBase::External(20))).unwrap();
        assert_eq!(ext.normalized.unwrap()[0], 50.0);
    }

    #[test]
    fn representation_counts_unique_publications() {
        // Four SNPRs, one carrying two fields: 5 incidences over 4 publications.
        let pubs = vec![
            Publication::new("A", 1993).with_fields([142]),
            Publication::new("B", 1993).with_fields([142, 186]),
            Publication::new("C", 1993).with_fields([186]),
            Publication::new("D", 1993).with_fields([142]),
            Publication::new("E", 1993).with_fields([203]),
        ];
        let c = Corpus::from_records(pubs, &[], vec![]).unwrap();
        let sbs: Vec<SbRecord> = ["A", "B", "C", "D", "E"].iter().map(|id| sb(id, 1993, 60)).collect();
        let snprs: Vec<SnprRecord> = ["A", "B", "C", "D"].iter().map(|id| snpr(id, 1993, 5)).collect();
        let rows = representation(&c, &sbs, &snprs, &RepresentationOptions::default()).unwrap();
        let total: f64 = rows.iter().map(|r| r.share_snpr).sum();
        assert!((total - 125.0).abs() < 1e-9);
        assert_eq!(rows[0].n_snpr, 3);
        assert!((rows[0].share_snpr - 75.0).abs() < 1e-12);
        assert!((rows[0].share_sb - 60.0).abs() < 1e-12);
        assert!((rows[0].share_pubs - 60.0).abs() < 1e-12);
        assert_eq!(rows.last().unwrap().n_snpr, 0);
    }

    #[test]
    fn scatter_requires_variance_and_pairs() {
        let sbs = vec![sb("a", 1990, 50), sb("b", 1990, 70), sb("c", 1990, 90)];
        let s = vec![snpr("a", 1990, 5), snpr("b", 1990, 10), snpr("c", 1990, 15)];
        let (pts, r) = lag_vs_awake_scatter(&s, &sbs).unwrap();
        assert_eq!(pts.iter().map(|p| (p.pcy, p.ca_total)).collect::<Vec<_>>(), vec![(5, 50), (10, 70), (15, 90)]);
        assert!((r - 1.0).abs() < 1e-12);
        let flat = vec![sb("a", 1990, 50), sb("b", 1990, 50), sb("c", 1990, 50)];
        assert!(matches!(lag_vs_awake_scatter(&s, &flat), Err(Error::Degenerate(_))));
        assert!(matches!(
            lag_vs_awake_scatter(&s[..2], &sbs),
            Err(Error::InsufficientData(_))
        ));
    }
}
