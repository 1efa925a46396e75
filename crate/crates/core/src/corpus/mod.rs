//! Corpus data model: publications, citation edges and patent families,
//! plus the adjacency indexes every analysis reads from.
//!
//! Publications are stored sorted by id and addressed internally by a dense
//! [`PubIdx`]; ingestion order therefore never leaks into results.

mod fields;
mod load;
mod validate;

use std::collections::HashMap;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::namematch::NameKey;
use crate::series::YearSeries;

pub use fields::{FieldEntry, FieldFilter, FieldTable};
pub use load::{
    load_corpus, read_citations, read_patents, read_publications, CorpusBuilder, CorpusPaths,
    LoadOptions, LoadReport, RawCorpus,
};
pub use validate::{validate_raw, ValidationReport, Violation};

pub const DEFAULT_YEAR_RANGE: RangeInclusive<i32> = 1980..=2030;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Publication {
    pub id: String,
    pub year: i32,
    #[serde(default)]
    pub title: String,
    #[serde(rename = "abstract", default, skip_serializing_if = "Option::is_none")]
    pub abstract_text: Option<String>,
    #[serde(default)]
    pub authors: Vec<String>,
    #[serde(default)]
    pub field_codes: Vec<u32>,
    #[serde(default)]
    pub country_codes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub journal: Option<String>,
    /// Document type (`article`, `proceedings`, `book`, ...); only consulted
    /// by the optional citer-type ingestion filter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doc_type: Option<String>,
}

impl Publication {
    pub fn new(id: impl Into<String>, year: i32) -> Self {
        Publication {
            id: id.into(),
            year,
            title: String::new(),
            abstract_text: None,
            authors: Vec::new(),
            field_codes: Vec::new(),
            country_codes: Vec::new(),
            journal: None,
            doc_type: None,
        }
    }

    pub fn with_title(mut self, title: impl Into<String>) -> Self {
        self.title = title.into();
        self
    }

    pub fn with_authors<S: Into<String>>(mut self, authors: impl IntoIterator<Item = S>) -> Self {
        self.authors = authors.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_fields(mut self, codes: impl IntoIterator<Item = u32>) -> Self {
        self.field_codes = codes.into_iter().collect();
        self
    }

    pub fn with_countries<S: Into<String>>(mut self, c: impl IntoIterator<Item = S>) -> Self {
        self.country_codes = c.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_abstract(mut self, text: impl Into<String>) -> Self {
        self.abstract_text = Some(text.into());
        self
    }

    /// Title and abstract joined for text matching.
    pub fn text(&self) -> String {
        match &self.abstract_text {
            Some(a) if !a.is_empty() => format!("{} {}", self.title, a),
            _ => self.title.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CitationRecord {
    pub citing_id: String,
    pub cited_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Patent {
    pub family_id: String,
    pub patent_ids: Vec<String>,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub inventors: Vec<String>,
    #[serde(default)]
    pub ipc_codes: Vec<String>,
    pub application_year: i32,
    #[serde(default)]
    pub npl_cited_ids: Vec<String>,
}

/// Dense index of a publication inside a [`Corpus`] (position in id order).
pub type PubIdx = u32;

/// Compressed sparse rows: row `i` is `targets[offsets[i]..offsets[i + 1]]`.
#[derive(Debug, Clone, Default)]
pub(crate) struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    /// Builds rows from `(row, target)` pairs; each row ends up sorted and deduplicated.
    pub(crate) fn from_pairs(rows: usize, pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut pairs: Vec<(u32, u32)> = pairs.into_iter().collect();
        pairs.sort_unstable();
        pairs.dedup();
        Csr::from_sorted(rows, &pairs)
    }

    pub(crate) fn from_sorted(rows: usize, pairs: &[(u32, u32)]) -> Self {
        let mut offsets = vec![0usize; rows + 1];
        for &(r, _) in pairs {
            offsets[r as usize + 1] += 1;
        }
        for i in 0..rows {
            offsets[i + 1] += offsets[i];
        }
        let targets = pairs.iter().map(|&(_, t)| t).collect();
        Csr { offsets, targets }
    }

    /// Transposes `(source, target)` pairs already sorted by source, so that
    /// each transposed row lists sources in ascending order.
    pub(crate) fn transpose_sorted(rows: usize, pairs: &[(u32, u32)]) -> Self {
        let mut offsets = vec![0usize; rows + 1];
        for &(_, t) in pairs {
            offsets[t as usize + 1] += 1;
        }
        for i in 0..rows {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0u32; pairs.len()];
        for &(s, t) in pairs {
            let slot = &mut cursor[t as usize];
            targets[*slot] = s;
            *slot += 1;
        }
        Csr { offsets, targets }
    }

    pub(crate) fn row(&self, i: usize) -> &[u32] {
        if i + 1 >= self.offsets.len() {
            return &[];
        }
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    pub(crate) fn len(&self) -> usize {
        self.targets.len()
    }
}

/// Interned normalized person names shared by authors and inventors.
#[derive(Debug, Clone, Default)]
pub(crate) struct NameInterner {
    keys: Vec<NameKey>,
    lookup: HashMap<NameKey, u32>,
}

impl NameInterner {
    pub(crate) fn intern(&mut self, key: NameKey) -> u32 {
        if let Some(&id) = self.lookup.get(&key) {
            return id;
        }
        let id = self.keys.len() as u32;
        self.keys.push(key.clone());
        self.lookup.insert(key, id);
        id
    }
}

/// A validated, immutable citation corpus.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub(crate) publications: Vec<Publication>,
    pub(crate) index: HashMap<String, PubIdx>,
    /// `(citing, cited)` pairs sorted ascending, no duplicates or self-loops.
    pub(crate) edges: Vec<(PubIdx, PubIdx)>,
    pub(crate) references: Csr,
    pub(crate) cited_by: Csr,
    /// Publication indices sorted by `(year, idx)`.
    pub(crate) by_year: Vec<PubIdx>,
    pub(crate) patents: Vec<Patent>,
    pub(crate) family_index: HashMap<String, u32>,
    /// Resolved NPL citations per family, sorted.
    pub(crate) family_npl: Csr,
    pub(crate) citing_families: Csr,
    pub(crate) names: NameInterner,
    pub(crate) author_keys: Csr,
    pub(crate) inventor_keys: Csr,
    pub(crate) fields: FieldTable,
    pub(crate) year_range: RangeInclusive<i32>,
}

impl Corpus {
    pub fn publications(&self) -> &[Publication] {
        &self.publications
    }

    pub fn publication(&self, idx: PubIdx) -> &Publication {
        &self.publications[idx as usize]
    }

    pub fn idx(&self, id: &str) -> Option<PubIdx> {
        self.index.get(id).copied()
    }

    pub(crate) fn require(&self, id: &str) -> Result<PubIdx> {
        self.idx(id).ok_or_else(|| Error::UnknownPublication(id.to_string()))
    }

    pub fn get(&self, id: &str) -> Option<&Publication> {
        self.idx(id).map(|i| self.publication(i))
    }

    pub fn len(&self) -> usize {
        self.publications.len()
    }

    pub fn is_empty(&self) -> bool {
        self.publications.is_empty()
    }

    pub fn citation_count(&self) -> usize {
        self.edges.len()
    }

    /// Citation edges as `(citing, cited)` index pairs in ascending order.
    pub fn edges(&self) -> &[(PubIdx, PubIdx)] {
        &self.edges
    }

    pub fn patents(&self) -> &[Patent] {
        &self.patents
    }

    pub fn patent(&self, family: u32) -> &Patent {
        &self.patents[family as usize]
    }

    pub fn family_idx(&self, family_id: &str) -> Option<u32> {
        self.family_index.get(family_id).copied()
    }

    pub fn fields(&self) -> &FieldTable {
        &self.fields
    }

    /// Configured admissible publication years.
    pub fn year_range(&self) -> RangeInclusive<i32> {
        self.year_range.clone()
    }

    /// Earliest and latest publication year present, if any.
    pub fn span(&self) -> Option<(i32, i32)> {
        let first = self.by_year.first()?;
        let last = self.by_year.last()?;
        Some((self.publication(*first).year, self.publication(*last).year))
    }

    /// Publications cited by `idx`, ascending by index.
    pub fn references(&self, idx: PubIdx) -> &[PubIdx] {
        self.references.row(idx as usize)
    }

    /// Publications citing `idx`, ascending by index.
    pub fn citers(&self, idx: PubIdx) -> &[PubIdx] {
        self.cited_by.row(idx as usize)
    }

    pub fn in_degree(&self, idx: PubIdx) -> usize {
        self.citers(idx).len()
    }

    /// Publications in `years`, ordered by `(year, id)`.
    pub fn publications_in(&self, years: RangeInclusive<i32>) -> &[PubIdx] {
        let lo = self
            .by_year
            .partition_point(|&i| self.publication(i).year < *years.start());
        let hi = self
            .by_year
            .partition_point(|&i| self.publication(i).year <= *years.end());
        &self.by_year[lo..hi.max(lo)]
    }

    /// Patent families citing `idx`, ascending by family index.
    pub fn citing_families(&self, idx: PubIdx) -> &[u32] {
        self.citing_families.row(idx as usize)
    }

    /// Publications cited by a family, ascending by index.
    pub fn family_citations(&self, family: u32) -> &[PubIdx] {
        self.family_npl.row(family as usize)
    }

    /// Interned name keys of a publication's authors, sorted, deduplicated.
    pub fn author_keys(&self, idx: PubIdx) -> &[u32] {
        self.author_keys.row(idx as usize)
    }

    pub fn inventor_keys(&self, family: u32) -> &[u32] {
        self.inventor_keys.row(family as usize)
    }

    pub fn name_key(&self, key: u32) -> &NameKey {
        &self.names.keys[key as usize]
    }

    pub fn name_key_id(&self, key: &NameKey) -> Option<u32> {
        self.names.lookup.get(key).copied()
    }

    /// Whether two publications share at least one normalized author name.
    pub fn shares_author(&self, a: PubIdx, b: PubIdx) -> bool {
        sorted_intersects(self.author_keys(a), self.author_keys(b))
    }

    /// Annual citation counts for `idx` over `years`, keyed by the citing
    /// publication's year.
    pub fn series(&self, idx: PubIdx, exclude_self: bool, years: RangeInclusive<i32>) -> YearSeries {
        let mut series = YearSeries::zeros(years);
        for &citer in self.citers(idx) {
            if exclude_self && self.shares_author(idx, citer) {
                continue;
            }
            series.increment(self.publication(citer).year);
        }
        series
    }

    /// Short display label: first author's surname and the year.
    pub fn label(&self, idx: PubIdx) -> String {
        let p = self.publication(idx);
        let surname = p.authors.first().map(|a| match a.split_once(',') {
            Some((last, _)) => last.trim(),
            None => a.split_whitespace().last().unwrap_or(""),
        });
        match surname {
            Some(s) if !s.is_empty() => format!("{s} {}", p.year),
            _ => format!("{} {}", p.id, p.year),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate_corpus(self)
    }
}

pub(crate) fn sorted_intersects(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

pub(crate) fn sorted_intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Per-year count of citing publications of `pub_id`.
///
/// With `exclude_self_citations`, citers sharing a normalized author name
/// with the cited publication are skipped.
pub fn citation_series(
    corpus: &Corpus,
    pub_id: &str,
    exclude_self_citations: bool,
    years: RangeInclusive<i32>,
) -> Result<YearSeries> {
    let idx = corpus.require(pub_id)?;
    Ok(corpus.series(idx, exclude_self_citations, years))
}
