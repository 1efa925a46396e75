use std::borrow::Cow;
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;

use super::{
    CitationRecord, Corpus, Csr, FieldTable, NameInterner, Patent, PubIdx, Publication,
    DEFAULT_YEAR_RANGE,
};
use crate::error::{Error, Result};
use crate::namematch::normalize_name;

const MAX_WARNINGS: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusPaths {
    pub publications: PathBuf,
    pub citations: PathBuf,
    pub patents: Option<PathBuf>,
}

impl CorpusPaths {
    /// The three conventional file names inside `dir`.
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        let patents = dir.join("patents.jsonl");
        CorpusPaths {
            publications: dir.join("publications.jsonl"),
            citations: dir.join("citations.jsonl"),
            patents: Some(patents),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    /// Dangling references and year outliers become errors instead of warnings.
    pub strict: bool,
    pub year_range: RangeInclusive<i32>,
    /// When set, only citations made by publications of these document types
    /// are kept. Publications without a type count as `article`.
    pub citer_doc_types: Option<Vec<String>>,
    pub field_table: FieldTable,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            strict: false,
            year_range: DEFAULT_YEAR_RANGE,
            citer_doc_types: None,
            field_table: FieldTable::default(),
        }
    }
}

impl LoadOptions {
    pub fn strict() -> Self {
        LoadOptions {
            strict: true,
            ..Default::default()
        }
    }
}

/// What ingestion dropped or tolerated. Only the first few warnings are kept
/// verbatim; the counters are exact.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub warnings: Vec<String>,
    pub dangling_citations: usize,
    pub self_loops: usize,
    pub duplicate_citations: usize,
    pub filtered_citations: usize,
    pub dangling_npl: usize,
    pub year_outliers: usize,
    pub dropped_names: usize,
}

impl LoadReport {
    fn warn(&mut self, message: impl FnOnce() -> String) {
        if self.warnings.len() < MAX_WARNINGS {
            let m = message();
            log::warn!("{m}");
            self.warnings.push(m);
        }
    }

    pub fn is_clean(&self) -> bool {
        *self == LoadReport::default()
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(|f| BufReader::with_capacity(1 << 20, f))
        .map_err(|e| Error::io(path, e))
}

/// Calls `f` on every non-blank line with its 1-based number.
fn for_each_line(path: &Path, mut f: impl FnMut(usize, &str) -> Result<()>) -> Result<()> {
    let mut reader = open(path)?;
    let mut buf = String::new();
    let mut lineno = 0;
    loop {
        buf.clear();
        let n = reader.read_line(&mut buf).map_err(|e| Error::io(path, e))?;
        if n == 0 {
            return Ok(());
        }
        lineno += 1;
        let line = buf.trim();
        if !line.is_empty() {
            f(lineno, line)?;
        }
    }
}

fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for_each_line(path, |line, text| {
        let rec = serde_json::from_str(text).map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            line,
            message: e.to_string(),
        })?;
        out.push(rec);
        Ok(())
    })?;
    Ok(out)
}

pub fn read_publications(path: &Path) -> Result<Vec<Publication>> {
    read_jsonl(path)
}

pub fn read_patents(path: &Path) -> Result<Vec<Patent>> {
    let patents: Vec<Patent> = read_jsonl(path)?;
    Ok(patents)
}

#[derive(Deserialize)]
struct CitationLine<'a> {
    #[serde(borrow)]
    citing_id: Cow<'a, str>,
    #[serde(borrow)]
    cited_id: Cow<'a, str>,
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

/// Streams `(citing, cited)` id pairs from a JSONL or `citing_id,cited_id` CSV file.
fn for_each_citation(path: &Path, mut f: impl FnMut(&str, &str) -> Result<()>) -> Result<()> {
    if is_csv(path) {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(open(path)?);
        let headers = reader.headers().map_err(|e| csv_error(path, 1, e))?.clone();
        if headers.len() < 2 || &headers[0] != "citing_id" || &headers[1] != "cited_id" {
            return Err(Error::Malformed {
                path: path.to_path_buf(),
                line: 1,
                message: "expected header `citing_id,cited_id`".into(),
            });
        }
        let mut record = csv::StringRecord::new();
        let mut line = 1;
        loop {
            line += 1;
            match reader.read_record(&mut record) {
                Ok(false) => return Ok(()),
                Ok(true) => {}
                Err(e) => return Err(csv_error(path, line, e)),
            }
            if record.len() < 2 {
                return Err(Error::Malformed {
                    path: path.to_path_buf(),
                    line,
                    message: "expected two columns".into(),
                });
            }
            f(&record[0], &record[1])?;
        }
    } else {
        for_each_line(path, |line, text| {
            let rec: CitationLine = serde_json::from_str(text).map_err(|e| Error::Malformed {
                path: path.to_path_buf(),
                line,
                message: e.to_string(),
            })?;
            f(&rec.citing_id, &rec.cited_id)
        })
    }
}

fn csv_error(path: &Path, line: usize, e: csv::Error) -> Error {
    Error::Malformed {
        path: path.to_path_buf(),
        line,
        message: e.to_string(),
    }
}

pub fn read_citations(path: &Path) -> Result<Vec<CitationRecord>> {
    let mut out = Vec::new();
    for_each_citation(path, |citing, cited| {
        out.push(CitationRecord {
            citing_id: citing.to_string(),
            cited_id: cited.to_string(),
        });
        Ok(())
    })?;
    Ok(out)
}

/// Unvalidated file contents, as read.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawCorpus {
    pub publications: Vec<Publication>,
    pub citations: Vec<CitationRecord>,
    pub patents: Vec<Patent>,
}

impl RawCorpus {
    pub fn read(paths: &CorpusPaths) -> Result<Self> {
        Ok(RawCorpus {
            publications: read_publications(&paths.publications)?,
            citations: read_citations(&paths.citations)?,
            patents: match &paths.patents {
                Some(p) if p.exists() => read_patents(p)?,
                _ => Vec::new(),
            },
        })
    }

    pub fn into_corpus(self, options: LoadOptions) -> Result<(Corpus, LoadReport)> {
        let mut b = CorpusBuilder::new(options);
        for p in self.publications {
            b.add_publication(p);
        }
        for c in &self.citations {
            b.add_citation(&c.citing_id, &c.cited_id)?;
        }
        for p in self.patents {
            b.add_patent(p)?;
        }
        b.build()
    }
}

/// Reads the three line-delimited files and builds a validated corpus.
///
/// Citations are streamed straight into index form, so the citation file is
/// never held in memory as strings.
pub fn load_corpus(paths: &CorpusPaths, options: LoadOptions) -> Result<(Corpus, LoadReport)> {
    let mut b = CorpusBuilder::new(options);
    for_each_line(&paths.publications, |line, text| {
        let p: Publication = serde_json::from_str(text).map_err(|e| Error::Malformed {
            path: paths.publications.clone(),
            line,
            message: e.to_string(),
        })?;
        b.add_publication(p);
        Ok(())
    })?;
    b.seal()?;
    for_each_citation(&paths.citations, |citing, cited| b.add_citation(citing, cited))?;
    if let Some(path) = paths.patents.as_deref().filter(|p| p.exists()) {
        for_each_line(path, |line, text| {
            let p: Patent = serde_json::from_str(text).map_err(|e| Error::Malformed {
                path: path.to_path_buf(),
                line,
                message: e.to_string(),
            })?;
            b.add_patent(p)
        })?;
    }
    b.build()
}

/// Incremental corpus construction: publications first, then citations and
/// patents in any order.
pub struct CorpusBuilder {
    options: LoadOptions,
    report: LoadReport,
    publications: Vec<Publication>,
    index: Option<HashMap<String, PubIdx>>,
    edges: Vec<(PubIdx, PubIdx)>,
    allowed_citers: Option<Vec<bool>>,
    patents: Vec<Patent>,
}

impl CorpusBuilder {
    pub fn new(options: LoadOptions) -> Self {
        CorpusBuilder {
            options,
            report: LoadReport::default(),
            publications: Vec::new(),
            index: None,
            edges: Vec::new(),
            allowed_citers: None,
            patents: Vec::new(),
        }
    }

    /// # Panics
    /// If called after the first citation or patent was added.
    pub fn add_publication(&mut self, mut p: Publication) {
        assert!(self.index.is_none(), "publications must precede citations and patents");
        let before = p.authors.len();
        p.authors.retain(|a| !a.trim().is_empty());
        if p.authors.len() != before {
            self.report.dropped_names += before - p.authors.len();
            let id = p.id.clone();
            self.report
                .warn(|| format!("publication `{id}`: dropped empty author name"));
        }
        self.publications.push(p);
    }

    /// Freezes the publication set: sorts by id and builds the id index.
    pub fn seal(&mut self) -> Result<()> {
        if self.index.is_some() {
            return Ok(());
        }
        self.publications.sort_unstable_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = self.publications.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::DuplicateId {
                kind: "publication",
                id: w[0].id.clone(),
            });
        }
        for p in &self.publications {
            if !self.options.year_range.contains(&p.year) {
                if self.options.strict {
                    return Err(Error::YearOutOfRange(p.id.clone(), p.year));
                }
                self.report.year_outliers += 1;
                self.report
                    .warn(|| format!("publication `{}` has out-of-range year {}", p.id, p.year));
            }
        }
        let mut index = HashMap::with_capacity(self.publications.len());
        for (i, p) in self.publications.iter().enumerate() {
            index.insert(p.id.clone(), i as PubIdx);
        }
        if let Some(types) = &self.options.citer_doc_types {
            self.allowed_citers = Some(
                self.publications
                    .iter()
                    .map(|p| {
                        let t = p.doc_type.as_deref().unwrap_or("article");
                        types.iter().any(|a| a.eq_ignore_ascii_case(t))
                    })
                    .collect(),
            );
        }
        self.index = Some(index);
        Ok(())
    }

    fn resolve(&mut self, id: &str, context: impl FnOnce() -> String) -> Result<Option<PubIdx>> {
        self.seal()?;
        match self.index.as_ref().unwrap().get(id) {
            Some(&i) => Ok(Some(i)),
            None if self.options.strict => Err(Error::DanglingReference {
                context: context(),
                id: id.to_string(),
            }),
            None => Ok(None),
        }
    }

    pub fn add_citation(&mut self, citing: &str, cited: &str) -> Result<()> {
        let ctx = || format!("citation {citing} -> {cited}");
        let a = self.resolve(citing, ctx)?;
        let b = self.resolve(cited, ctx)?;
        let (Some(a), Some(b)) = (a, b) else {
            self.report.dangling_citations += 1;
            self.report
                .warn(|| format!("dropped dangling citation {citing} -> {cited}"));
            return Ok(());
        };
        if a == b {
            self.report.self_loops += 1;
            self.report.warn(|| format!("dropped self-loop on `{citing}`"));
            return Ok(());
        }
        if let Some(allowed) = &self.allowed_citers {
            if !allowed[a as usize] {
                self.report.filtered_citations += 1;
                return Ok(());
            }
        }
        self.edges.push((a, b));
        Ok(())
    }

    pub fn add_patent(&mut self, p: Patent) -> Result<()> {
        self.seal()?;
        if p.patent_ids.is_empty() {
            return Err(Error::InvalidRecord(format!(
                "patent family `{}` has no member patents",
                p.family_id
            )));
        }
        self.patents.push(p);
        Ok(())
    }

    pub fn build(mut self) -> Result<(Corpus, LoadReport)> {
        self.seal()?;
        let n = self.publications.len();
        let mut report = self.report;

        let mut edges = self.edges;
        edges.sort_unstable();
        let before = edges.len();
        edges.dedup();
        if edges.len() != before {
            report.duplicate_citations += before - edges.len();
            let dups = before - edges.len();
            report.warn(|| format!("dropped {dups} duplicate citation edge(s)"));
        }
        let references = Csr::from_sorted(n, &edges);
        let cited_by = Csr::transpose_sorted(n, &edges);

        let mut by_year: Vec<PubIdx> = (0..n as PubIdx).collect();
        let pubs = &self.publications;
        by_year.sort_by_key(|&i| (pubs[i as usize].year, i));

        let mut names = NameInterner::default();
        let mut cache: HashMap<String, Option<u32>> = HashMap::new();
        let mut intern = |raw: &str, names: &mut NameInterner, report: &mut LoadReport| {
            if let Some(&hit) = cache.get(raw) {
                return hit;
            }
            let key = match normalize_name(raw) {
                Ok(k) => Some(names.intern(k)),
                Err(_) => {
                    report.dropped_names += 1;
                    report.warn(|| format!("ignored unparseable name `{raw}`"));
                    None
                }
            };
            cache.insert(raw.to_string(), key);
            key
        };
        let mut author_pairs = Vec::new();
        for (i, p) in pubs.iter().enumerate() {
            for a in &p.authors {
                if let Some(k) = intern(a, &mut names, &mut report) {
                    author_pairs.push((i as u32, k));
                }
            }
        }
        let author_keys = Csr::from_pairs(n, author_pairs);

        let mut patents = self.patents;
        patents.sort_by(|a, b| a.family_id.cmp(&b.family_id));
        if let Some(w) = patents.windows(2).find(|w| w[0].family_id == w[1].family_id) {
            return Err(Error::DuplicateId {
                kind: "patent family",
                id: w[0].family_id.clone(),
            });
        }
        let mut owner: HashMap<&str, &str> = HashMap::new();
        for p in &patents {
            let mut own: Vec<&str> = p.patent_ids.iter().map(String::as_str).collect();
            own.sort_unstable();
            own.dedup();
            for id in own {
                if owner.insert(id, &p.family_id).is_some() {
                    return Err(Error::DuplicateId {
                        kind: "patent",
                        id: id.to_string(),
                    });
                }
            }
        }
        drop(owner);

        let index = self.index.take().unwrap();
        let mut family_index = HashMap::with_capacity(patents.len());
        let mut npl_pairs = Vec::new();
        let mut inventor_pairs = Vec::new();
        for (f, p) in patents.iter().enumerate() {
            family_index.insert(p.family_id.clone(), f as u32);
            for id in &p.npl_cited_ids {
                match index.get(id.as_str()) {
                    Some(&i) => npl_pairs.push((f as u32, i)),
                    None if self.options.strict => {
                        return Err(Error::DanglingReference {
                            context: format!("patent family {}", p.family_id),
                            id: id.clone(),
                        })
                    }
                    None => {
                        report.dangling_npl += 1;
                        report.warn(|| {
                            format!("family `{}`: dropped dangling NPL citation `{id}`", p.family_id)
                        });
                    }
                }
            }
            for inv in &p.inventors {
                if let Some(k) = intern(inv, &mut names, &mut report) {
                    inventor_pairs.push((f as u32, k));
                }
            }
        }
        npl_pairs.sort_unstable();
        npl_pairs.dedup();
        let family_npl = Csr::from_sorted(patents.len(), &npl_pairs);
        let citing_families = Csr::transpose_sorted(n, &npl_pairs);
        let inventor_keys = Csr::from_pairs(patents.len(), inventor_pairs);

        let corpus = Corpus {
            publications: self.publications,
            index,
            edges,
            references,
            cited_by,
            by_year,
            patents,
            family_index,
            family_npl,
            citing_families,
            names,
            author_keys,
            inventor_keys,
            fields: self.options.field_table,
            year_range: self.options.year_range,
        };
        Ok((corpus, report))
    }
}

impl Corpus {
    /// Builds a corpus from in-memory records in strict mode.
    pub fn from_records(
        publications: Vec<Publication>,
        citations: &[(&str, &str)],
        patents: Vec<Patent>,
    ) -> Result<Corpus> {
        let raw = RawCorpus {
            publications,
            citations: citations
                .iter()
                .map(|(a, b)| CitationRecord {
                    citing_id: a.to_string(),
                    cited_id: b.to_string(),
                })
                .collect(),
            patents,
        };
        raw.into_corpus(LoadOptions::strict()).map(|(c, _)| c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::File::create(&p)
            .unwrap()
            .write_all(body.as_bytes())
            .unwrap();
        p
    }

    fn fixture(dir: &Path, citations: &str) -> CorpusPaths {
        CorpusPaths {
            publications: write(
                dir,
                "publications.jsonl",
                concat!(
                    r#"{"id":"W2","year":1995,"title":"Later","authors":["Doe, J."],"field_codes":[86],"country_codes":["US"]}"#,
                    "\n",
                    r#"{"id":"W1","year":1992,"title":"Queueing","authors":["Roe, R."],"field_codes":[86],"country_codes":["US"]}"#,
                    "\n"
                ),
            ),
            citations: write(dir, "citations.jsonl", citations),
            patents: Some(write(
                dir,
                "patents.jsonl",
                r#"{"family_id":"F1","patent_ids":["US1"],"title":"Router","inventors":["Roe, Richard"],"ipc_codes":["H04L"],"application_year":2000,"npl_cited_ids":["W1"]}"#,
            )),
        }
    }

    #[test]
    fn loads_three_files() {
        let dir = tempfile::tempdir().unwrap();
        let paths = fixture(dir.path(), "{\"citing_id\":\"W2\",\"cited_id\":\"W1\"}\n");
        let (c, report) = load_corpus(&paths, LoadOptions::strict()).unwrap();
        assert_eq!((c.len(), c.citation_count(), c.patents().len()), (2, 1, 1));
        assert!(report.is_clean());
        let w1 = c.idx("W1").unwrap();
        assert_eq!(c.citers(w1), &[c.idx("W2").unwrap()]);
        assert_eq!(c.citing_families(w1), &[0]);
        assert!(c.validate().is_empty());
    }

    #[test]
    fn strict_mode_names_dangling_id() {
        let dir = tempfile::tempdir().unwrap();
        let paths = fixture(dir.path(), "{\"citing_id\":\"W2\",\"cited_id\":\"W9\"}\n");
        let err = load_corpus(&paths, LoadOptions::strict()).unwrap_err();
        assert!(err.to_string().contains("W9"), "{err}");
        let (c, report) = load_corpus(&paths, LoadOptions::default()).unwrap();
        assert_eq!(c.citation_count(), 0);
        assert_eq!(report.dangling_citations, 1);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let paths = fixture(
            dir.path(),
            "{\"citing_id\":\"W2\",\"cited_id\":\"W1\"}\n{\"citing_id\":\n",
        );
        match load_corpus(&paths, LoadOptions::default()) {
            Err(Error::Malformed { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn csv_citations_are_accepted() {
        let dir = tempfile::tempdir().unwrap();
        let mut paths = fixture(dir.path(), "");
        paths.citations = write(dir.path(), "citations.csv", "citing_id,cited_id\nW2,W1\nW2,W1\n");
        let (c, report) = load_corpus(&paths, LoadOptions::default()).unwrap();
        assert_eq!(c.citation_count(), 1);
        assert_eq!(report.duplicate_citations, 1);
    }

    #[test]
    fn duplicate_publication_is_fatal() {
        let raw = RawCorpus {
            publications: vec![Publication::new("A", 1990), Publication::new("A", 1991)],
            ..Default::default()
        };
        assert!(matches!(
            raw.into_corpus(LoadOptions::default()),
            Err(Error::DuplicateId { kind: "publication", .. })
        ));
    }

    #[test]
    fn citer_type_filter_drops_proceedings() {
        let mut proc = Publication::new("C", 1999);
        proc.doc_type = Some("proceedings".into());
        let raw = RawCorpus {
            publications: vec![Publication::new("A", 1990), Publication::new("B", 1995), proc],
            citations: vec![
                CitationRecord { citing_id: "B".into(), cited_id: "A".into() },
                CitationRecord { citing_id: "C".into(), cited_id: "A".into() },
            ],
            patents: vec![],
        };
        let opts = LoadOptions {
            citer_doc_types: Some(vec!["article".into()]),
            ..Default::default()
        };
        let (c, report) = raw.clone().into_corpus(opts).unwrap();
        assert_eq!((c.citation_count(), report.filtered_citations), (1, 1));
        let (c, _) = raw.into_corpus(LoadOptions::default()).unwrap();
        assert_eq!(c.citation_count(), 2);
    }
}
