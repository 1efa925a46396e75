//! Sleeping Beauty detection with the four tunable search variables:
//! sleep length, sleep depth, awake window and awake intensity.
//!
//! Windows are inclusive and start at the publication year: a 1994 paper
//! with `s = 10` sleeps over 1994–2003 and, with `a = 10`, is awake over
//! 2004–2013.

use std::collections::HashSet;
use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, FieldFilter, PubIdx};
use crate::error::{Error, Result};
use crate::patentlink::SnprRecord;
use crate::series::{self, Bucketing, YearSeries};

/// The four search variables `[s, cs_max, a, ca_min]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SbParams {
    /// Sleep length in years, counted from the publication year.
    pub sleep: u32,
    /// Maximum mean citations per year while asleep.
    pub cs_max: f64,
    pub awake_min: u32,
    pub awake_max: u32,
    /// Minimum mean citations per year while awake.
    pub ca_min: f64,
}

impl Default for SbParams {
    fn default() -> Self {
        SbParams::CANONICAL
    }
}

impl SbParams {
    /// `[10, 1.0, 10, 5.0]`: ten years of deep sleep, ten awake years at five
    /// citations a year.
    pub const CANONICAL: SbParams = SbParams {
        sleep: 10,
        cs_max: 1.0,
        awake_min: 10,
        awake_max: 10,
        ca_min: 5.0,
    };

    /// Checks the parameter invariants. Returns warnings for suspicious but
    /// legal combinations.
    pub fn validate(&self) -> Result<Vec<String>> {
        if self.sleep < 1 {
            return Err(Error::InvalidParams("sleep length must be at least 1 year".into()));
        }
        if self.awake_min < 1 || self.awake_min > self.awake_max {
            return Err(Error::InvalidParams(format!(
                "awake window bounds must satisfy 1 <= awake_min <= awake_max (got {}..{})",
                self.awake_min, self.awake_max
            )));
        }
        if !(self.cs_max >= 0.0) || !(self.ca_min >= 0.0) {
            return Err(Error::InvalidParams("citation rates must be non-negative".into()));
        }
        let mut warnings = Vec::new();
        if self.ca_min <= self.cs_max {
            warnings.push(format!(
                "ca_min ({}) does not exceed cs_max ({}); non-sleeping papers will qualify",
                self.ca_min, self.cs_max
            ));
        }
        Ok(warnings)
    }
}

impl fmt::Display for SbParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let awake = if self.awake_min == self.awake_max {
            self.awake_max.to_string()
        } else {
            format!("{}-{}", self.awake_min, self.awake_max)
        };
        write!(
            f,
            "[{}, {:.1}, {}, {:.1}]",
            self.sleep, self.cs_max, awake, self.ca_min
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DepthLabel {
    Coma,
    VeryDeep,
    Deep,
    Light,
}

impl DepthLabel {
    pub fn from_cs(cs: f64) -> Self {
        if cs == 0.0 {
            DepthLabel::Coma
        } else if cs <= 0.5 {
            DepthLabel::VeryDeep
        } else if cs <= 1.0 {
            DepthLabel::Deep
        } else {
            DepthLabel::Light
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DepthLabel::Coma => "coma",
            DepthLabel::VeryDeep => "very_deep",
            DepthLabel::Deep => "deep",
            DepthLabel::Light => "light",
        }
    }
}

impl fmt::Display for DepthLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbRecord {
    pub pub_id: String,
    pub pub_year: i32,
    pub sleep_window: (i32, i32),
    pub awake_window: (i32, i32),
    /// Citations received during the sleep window.
    pub sleep_total: u64,
    /// Citations received during the awake window (`Ca`).
    pub awake_total: u64,
    pub cs: f64,
    pub ca: f64,
    pub depth: DepthLabel,
    pub awakening_year: Option<i32>,
}

impl SbRecord {
    pub fn awake_len(&self) -> u32 {
        (self.awake_window.1 - self.awake_window.0 + 1) as u32
    }
}

/// Threshold-plus-persistence rule for the awakening year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AwakeningRule {
    /// Citations per year that count as awake; `None` uses `ca_min`.
    pub threshold: Option<f64>,
    /// Number of years, starting at the candidate year, whose mean must
    /// reach the threshold.
    pub persistence: u32,
}

impl Default for AwakeningRule {
    fn default() -> Self {
        AwakeningRule {
            threshold: None,
            persistence: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectOptions {
    /// Publication years to search; defaults to the corpus span.
    pub pub_years: Option<RangeInclusive<i32>>,
    pub field: FieldFilter,
    pub include_self_citations: bool,
    /// Last year with citation data; defaults to the latest publication year.
    pub horizon: Option<i32>,
    /// Evaluate recent papers on a shorter awake window (down to `awake_min`)
    /// instead of skipping them.
    pub clip_awake: bool,
    pub awakening: AwakeningRule,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            pub_years: None,
            field: FieldFilter::All,
            include_self_citations: false,
            horizon: None,
            clip_awake: false,
            awakening: AwakeningRule::default(),
        }
    }
}

/// First year after publication where the annual count reaches `threshold`
/// and the mean over `persistence` years starting there does too.
///
/// The series must start at the publication year. A persistence window that
/// would run past the end of the series does not qualify.
pub fn awakening_year(series: &YearSeries, threshold: f64, persistence: u32) -> Option<i32> {
    let w = persistence.max(1) as usize;
    let counts = series.counts();
    (1..counts.len()).find_map(|i| {
        if (counts[i] as f64) < threshold || i + w > counts.len() {
            return None;
        }
        let sum: u64 = counts[i..i + w].iter().sum();
        (sum as f64 / w as f64 >= threshold).then(|| series.first_year() + i as i32)
    })
}

fn resolve_scope(
    corpus: &Corpus,
    params: &SbParams,
    options: &DetectOptions,
) -> Result<(RangeInclusive<i32>, Option<HashSet<u32>>, i32)> {
    params.validate()?;
    let codes = corpus
        .fields()
        .codes_for(&options.field)?
        .map(|s| s.into_iter().collect::<HashSet<_>>());
    let span = corpus.span();
    let years = match &options.pub_years {
        Some(r) => r.clone(),
        None => match span {
            Some((lo, hi)) => lo..=hi,
            None => return Ok((1..=0, codes, 0)),
        },
    };
    if years.is_empty() {
        return Err(Error::EmptyYearRange(*years.start(), *years.end()));
    }
    let horizon = options.horizon.or(span.map(|s| s.1)).unwrap_or(*years.end());
    Ok((years, codes, horizon))
}

/// Evaluates one publication; `None` when it does not qualify.
fn evaluate(
    corpus: &Corpus,
    idx: PubIdx,
    params: &SbParams,
    options: &DetectOptions,
    horizon: i32,
) -> Option<SbRecord> {
    let p = corpus.publication(idx);
    let y = p.year;
    let s = params.sleep as i32;
    let awake_start = y + s;
    let available = horizon - awake_start + 1;
    let a = if options.clip_awake {
        (params.awake_max as i32).min(available)
    } else {
        params.awake_max as i32
    };
    if a < params.awake_min as i32 || a > available {
        return None;
    }
    if (corpus.in_degree(idx) as f64) < params.ca_min * a as f64 {
        return None;
    }
    let series = corpus.series(idx, !options.include_self_citations, y..=horizon);
    let sleep_total = series.window_sum(y, awake_start - 1);
    let awake_total = series.window_sum(awake_start, awake_start + a - 1);
    let cs = sleep_total as f64 / s as f64;
    let ca = awake_total as f64 / a as f64;
    if cs > params.cs_max || ca < params.ca_min {
        return None;
    }
    let threshold = options.awakening.threshold.unwrap_or(params.ca_min);
    Some(SbRecord {
        pub_id: p.id.clone(),
        pub_year: y,
        sleep_window: (y, awake_start - 1),
        awake_window: (awake_start, awake_start + a - 1),
        sleep_total,
        awake_total,
        cs,
        ca,
        depth: DepthLabel::from_cs(cs),
        awakening_year: awakening_year(&series, threshold, options.awakening.persistence),
    })
}

/// Finds every publication satisfying `params`, ordered by publication id.
///
/// cs and ca are computed on self-citation-excluded series unless
/// `include_self_citations` is set. Publications too recent for a full
/// awake window are skipped unless `clip_awake` is set.
pub fn detect_sbs(corpus: &Corpus, params: &SbParams, options: &DetectOptions) -> Result<Vec<SbRecord>> {
    let (years, codes, horizon) = resolve_scope(corpus, params, options)?;
    if years.is_empty() {
        return Ok(Vec::new());
    }
    let candidates = corpus.publications_in(years);
    let mut found: Vec<(PubIdx, SbRecord)> = candidates
        .par_iter()
        .filter(|&&i| match &codes {
            None => true,
            Some(codes) => corpus.publication(i).field_codes.iter().any(|c| codes.contains(c)),
        })
        .filter_map(|&i| evaluate(corpus, i, params, options, horizon).map(|r| (i, r)))
        .collect();
    found.sort_unstable_by_key(|(i, _)| *i);
    Ok(found.into_iter().map(|(_, r)| r).collect())
}

/// Count, mean and sample standard deviation of one quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub n: usize,
    pub mean: Option<f64>,
    pub sd: Option<f64>,
}

impl StatsRow {
    pub fn of(values: &[f64]) -> Self {
        StatsRow {
            n: values.len(),
            mean: series::mean(values),
            sd: series::sample_sd(values),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnprClass {
    NonSnpr,
    Snpr,
}

impl SnprClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SnprClass::NonSnpr => "SB-nonSNPR",
            SnprClass::Snpr => "SB-SNPR",
        }
    }
}

/// One cohort line: cs and ca statistics for a publication-year bucket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsCaRow {
    pub period: String,
    pub class: Option<SnprClass>,
    pub cs: StatsRow,
    pub ca: StatsRow,
}

/// Buckets SB records by publication year and summarizes cs and ca.
///
/// With `split` set, rows are emitted for non-SNPR records (all buckets)
/// followed by SNPR records; otherwise one row per bucket. Records outside
/// the bucketing range are ignored.
pub fn cohort_cs_ca_stats(
    records: &[SbRecord],
    buckets: &Bucketing,
    split: Option<&[SnprRecord]>,
) -> Vec<CsCaRow> {
    let classes: Vec<Option<SnprClass>> = match split {
        None => vec![None],
        Some(_) => vec![Some(SnprClass::NonSnpr), Some(SnprClass::Snpr)],
    };
    let snpr_ids: HashSet<&str> = split
        .unwrap_or_default()
        .iter()
        .map(|s| s.pub_id.as_str())
        .collect();
    let mut rows = Vec::new();
    for class in classes {
        for b in 0..buckets.len() {
            let members: Vec<&SbRecord> = records
                .iter()
                .filter(|r| buckets.index_of(r.pub_year) == Some(b))
                .filter(|r| match class {
                    None => true,
                    Some(SnprClass::Snpr) => snpr_ids.contains(r.pub_id.as_str()),
                    Some(SnprClass::NonSnpr) => !snpr_ids.contains(r.pub_id.as_str()),
                })
                .collect();
            let cs: Vec<f64> = members.iter().map(|r| r.cs).collect();
            let ca: Vec<f64> = members.iter().map(|r| r.ca).collect();
            rows.push(CsCaRow {
                period: buckets.label(b),
                class,
                cs: StatsRow::of(&cs),
                ca: StatsRow::of(&ca),
            });
        }
    }
    rows
}

/// Pearson correlation; zero variance is an error, never a silent 0.
pub fn pearson_correlation(xs: &[f64], ys: &[f64]) -> Result<f64> {
    series::pearson(xs, ys)
}

/// Correlation between sleep depth (cs) and awake intensity (ca).
pub fn cs_ca_correlation(records: &[SbRecord]) -> Result<f64> {
    let cs: Vec<f64> = records.iter().map(|r| r.cs).collect();
    let ca: Vec<f64> = records.iter().map(|r| r.ca).collect();
    pearson_correlation(&cs, &ca)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Publication;

    #[test]
    fn depth_labels() {
        assert_eq!(DepthLabel::from_cs(0.0), DepthLabel::Coma);
        assert_eq!(DepthLabel::from_cs(0.5), DepthLabel::VeryDeep);
        assert_eq!(DepthLabel::from_cs(0.9), DepthLabel::Deep);
        assert_eq!(DepthLabel::from_cs(1.0), DepthLabel::Deep);
        assert_eq!(DepthLabel::from_cs(1.1), DepthLabel::Light);
    }

    #[test]
    fn params_validation() {
        assert!(SbParams::CANONICAL.validate().unwrap().is_empty());
        assert_eq!(SbParams::CANONICAL.to_string(), "[10, 1.0, 10, 5.0]");
        let mut p = SbParams::CANONICAL;
        p.ca_min = 1.0;
        assert_eq!(p.validate().unwrap().len(), 1);
        p.sleep = 0;
        assert!(p.validate().is_err());
        let mut q = SbParams::CANONICAL;
        q.awake_min = 11;
        assert!(q.validate().is_err());
    }

    #[test]
    fn awakening_rule() {
        // 1995 publication: spike of 7 in 1999, quiet, sustained from 2004.
        let counts = vec![0, 0, 1, 0, 7, 0, 0, 1, 2, 5, 6, 8, 9];
        let s = YearSeries::from_counts(1995, counts);
        assert_eq!(awakening_year(&s, 5.0, 2), Some(2004));
        assert_eq!(awakening_year(&s, 5.0, 1), Some(1999));
        let quiet = YearSeries::from_counts(1995, vec![0, 1, 2, 1]);
        assert_eq!(awakening_year(&quiet, 5.0, 2), None);
        // Publication-year citations never count as an awakening.
        let early = YearSeries::from_counts(2000, vec![9, 0, 0]);
        assert_eq!(awakening_year(&early, 5.0, 1), None);
    }

    #[test]
    fn cohort_sd_and_single_member() {
        let rec = |id: &str, y: i32, cs: f64| SbRecord {
            pub_id: id.into(),
            pub_year: y,
            sleep_window: (y, y + 9),
            awake_window: (y + 10, y + 19),
            sleep_total: (cs * 10.0) as u64,
            awake_total: 60,
            cs,
            ca: 6.0,
            depth: DepthLabel::from_cs(cs),
            awakening_year: None,
        };
        let recs = [rec("a", 1992, 0.6), rec("b", 1993, 0.8), rec("c", 1995, 0.3)];
        let b = Bucketing::new(1992..=1997, 3).unwrap();
        let rows = cohort_cs_ca_stats(&recs, &b, None);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].cs.n, 2);
        assert!((rows[0].cs.mean.unwrap() - 0.7).abs() < 1e-12);
        assert!((rows[0].cs.sd.unwrap() - 0.141_421_356_237_309_5).abs() < 1e-12);
        assert_eq!(rows[1].cs.sd, None);
        let split = cohort_cs_ca_stats(&recs, &b, Some(&[]));
        assert_eq!(split.len(), 4);
        assert_eq!(split[3].cs.n, 0);
        assert_eq!(split[3].cs.mean, None);
    }

    #[test]
    fn scope_errors() {
        let c = Corpus::from_records(vec![Publication::new("A", 1990)], &[], vec![]).unwrap();
        let opts = DetectOptions {
            pub_years: Some(1995..=1990),
            ..Default::default()
        };
        assert!(matches!(
            detect_sbs(&c, &SbParams::CANONICAL, &opts),
            Err(Error::EmptyYearRange(..))
        ));
        let opts = DetectOptions {
            field: FieldFilter::Main("astrology".into()),
            ..Default::default()
        };
        assert!(matches!(
            detect_sbs(&c, &SbParams::CANONICAL, &opts),
            Err(Error::UnknownField(_))
        ));
    }
}
