use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::RangeInclusive;

use super::{Corpus, RawCorpus};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    DuplicatePublication(String),
    YearOutOfRange { id: String, year: i32 },
    EmptyAuthorName(String),
    DanglingCitation { citing: String, cited: String },
    SelfCitationLoop(String),
    DuplicateCitation { citing: String, cited: String },
    DuplicateFamily(String),
    SharedPatentId { patent_id: String, families: (String, String) },
    EmptyFamily(String),
    DanglingNpl { family: String, pub_id: String },
    PatentPredatesPublication { family: String, pub_id: String },
    IndexInconsistent(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicatePublication(id) => write!(f, "duplicate publication id `{id}`"),
            Violation::YearOutOfRange { id, year } => {
                write!(f, "publication `{id}` has out-of-range year {year}")
            }
            Violation::EmptyAuthorName(id) => write!(f, "publication `{id}` has an empty author name"),
            Violation::DanglingCitation { citing, cited } => {
                write!(f, "citation {citing} -> {cited} has an unknown endpoint")
            }
            Violation::SelfCitationLoop(id) => write!(f, "publication `{id}` cites itself"),
            Violation::DuplicateCitation { citing, cited } => {
                write!(f, "citation {citing} -> {cited} occurs more than once")
            }
            Violation::DuplicateFamily(id) => write!(f, "duplicate patent family id `{id}`"),
            Violation::SharedPatentId { patent_id, families } => write!(
                f,
                "patent `{patent_id}` belongs to families `{}` and `{}`",
                families.0, families.1
            ),
            Violation::EmptyFamily(id) => write!(f, "patent family `{id}` has no member patents"),
            Violation::DanglingNpl { family, pub_id } => {
                write!(f, "patent family `{family}` cites unknown publication `{pub_id}`")
            }
            Violation::PatentPredatesPublication { family, pub_id } => write!(
                f,
                "patent family `{family}` was filed before its cited publication `{pub_id}`"
            ),
            Violation::IndexInconsistent(what) => write!(f, "index inconsistency: {what}"),
        }
    }
}

/// Invariant violations found in a corpus; empty iff well-formed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    fn finish(mut self) -> Self {
        self.violations.sort();
        self
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks raw file contents against the corpus invariants without building
/// indexes, so every violation is reported rather than the first fatal one.
pub fn validate_raw(raw: &RawCorpus, year_range: RangeInclusive<i32>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut years: HashMap<&str, i32> = HashMap::with_capacity(raw.publications.len());
    let mut seen_dup: HashSet<&str> = HashSet::new();
    for p in &raw.publications {
        if years.insert(&p.id, p.year).is_some() && seen_dup.insert(&p.id) {
            report.violations.push(Violation::DuplicatePublication(p.id.clone()));
        }
        if !year_range.contains(&p.year) {
            report.violations.push(Violation::YearOutOfRange {
                id: p.id.clone(),
                year: p.year,
            });
        }
        if p.authors.iter().any(|a| a.trim().is_empty()) {
            report.violations.push(Violation::EmptyAuthorName(p.id.clone()));
        }
    }

    let mut seen_edges: HashSet<(&str, &str)> = HashSet::with_capacity(raw.citations.len());
    let mut reported: HashSet<(&str, &str)> = HashSet::new();
    for c in &raw.citations {
        let (a, b) = (c.citing_id.as_str(), c.cited_id.as_str());
        if !years.contains_key(a) || !years.contains_key(b) {
            report.violations.push(Violation::DanglingCitation {
                citing: a.into(),
                cited: b.into(),
            });
        } else if a == b {
            report.violations.push(Violation::SelfCitationLoop(a.into()));
        }
        if !seen_edges.insert((a, b)) && reported.insert((a, b)) {
            report.violations.push(Violation::DuplicateCitation {
                citing: a.into(),
                cited: b.into(),
            });
        }
    }

    let mut families: HashSet<&str> = HashSet::new();
    let mut owners: HashMap<&str, &str> = HashMap::new();
    for p in &raw.patents {
        if !families.insert(&p.family_id) {
            report.violations.push(Violation::DuplicateFamily(p.family_id.clone()));
        }
        if p.patent_ids.is_empty() {
            report.violations.push(Violation::EmptyFamily(p.family_id.clone()));
        }
        let own: HashSet<&str> = p.patent_ids.iter().map(String::as_str).collect();
        for id in own {
            if let Some(prev) = owners.insert(id, &p.family_id) {
                if prev != p.family_id {
                    report.violations.push(Violation::SharedPatentId {
                        patent_id: id.into(),
                        families: (prev.into(), p.family_id.clone()),
                    });
                }
            }
        }
        for id in &p.npl_cited_ids {
            match years.get(id.as_str()) {
                None => report.violations.push(Violation::DanglingNpl {
                    family: p.family_id.clone(),
                    pub_id: id.clone(),
                }),
                Some(&y) if p.application_year < y => {
                    report.violations.push(Violation::PatentPredatesPublication {
                        family: p.family_id.clone(),
                        pub_id: id.clone(),
                    })
                }
                Some(_) => {}
            }
        }
    }
    report.finish()
}

pub(super) fn validate_corpus(c: &Corpus) -> ValidationReport {
    let mut report = ValidationReport::default();
    let v = &mut report.violations;
    for w in c.publications.windows(2) {
        if w[0].id >= w[1].id {
            v.push(Violation::DuplicatePublication(w[1].id.clone()));
        }
    }
    for p in &c.publications {
        if !c.year_range.contains(&p.year) {
            v.push(Violation::YearOutOfRange {
                id: p.id.clone(),
                year: p.year,
            });
        }
        if p.authors.iter().any(|a| a.trim().is_empty()) {
            v.push(Violation::EmptyAuthorName(p.id.clone()));
        }
    }
    let n = c.publications.len() as u32;
    for w in c.edges.windows(2) {
        if w[0] >= w[1] {
            v.push(Violation::DuplicateCitation {
                citing: c.publication(w[1].0).id.clone(),
                cited: c.publication(w[1].1).id.clone(),
            });
        }
    }
    for &(a, b) in &c.edges {
        if a >= n || b >= n {
            v.push(Violation::IndexInconsistent(format!("edge ({a}, {b}) out of bounds")));
        } else if a == b {
            v.push(Violation::SelfCitationLoop(c.publication(a).id.clone()));
        }
    }
    if c.references.len() != c.edges.len() || c.cited_by.len() != c.edges.len() {
        v.push(Violation::IndexInconsistent(
            "adjacency sizes differ from the edge list".into(),
        ));
    }
    if c.index.len() != c.publications.len() {
        v.push(Violation::IndexInconsistent("id index size mismatch".into()));
    }
    for w in c.patents.windows(2) {
        if w[0].family_id >= w[1].family_id {
            v.push(Violation::DuplicateFamily(w[1].family_id.clone()));
        }
    }
    for (f, p) in c.patents.iter().enumerate() {
        if p.patent_ids.is_empty() {
            v.push(Violation::EmptyFamily(p.family_id.clone()));
        }
        for id in &p.npl_cited_ids {
            match c.idx(id) {
                None => v.push(Violation::DanglingNpl {
                    family: p.family_id.clone(),
                    pub_id: id.clone(),
                }),
                Some(i) => {
                    if p.application_year < c.publication(i).year {
                        v.push(Violation::PatentPredatesPublication {
                            family: p.family_id.clone(),
                            pub_id: id.clone(),
                        });
                    }
                    if !c.citing_families(i).contains(&(f as u32)) {
                        v.push(Violation::IndexInconsistent(format!(
                            "family `{}` missing from citing index of `{id}`",
                            p.family_id
                        )));
                    }
                }
            }
        }
    }
    report.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{CitationRecord, Patent, Publication};

    fn well_formed() -> RawCorpus {
        RawCorpus {
            publications: vec![
                Publication::new("A", 1990).with_authors(["Doe, J."]),
                Publication::new("B", 1995),
            ],
            citations: vec![CitationRecord {
                citing_id: "B".into(),
                cited_id: "A".into(),
            }],
            patents: vec![Patent {
                family_id: "F".into(),
                patent_ids: vec!["US1".into()],
                title: String::new(),
                inventors: vec![],
                ipc_codes: vec![],
                application_year: 2000,
                npl_cited_ids: vec!["A".into()],
            }],
        }
    }

    #[test]
    fn well_formed_fixture_is_clean() {
        assert!(validate_raw(&well_formed(), 1980..=2030).is_empty());
    }

    #[test]
    fn duplicate_id_reported_once() {
        let mut raw = well_formed();
        raw.publications.push(Publication::new("A", 1991));
        let r = validate_raw(&raw, 1980..=2030);
        assert_eq!(r.violations, vec![Violation::DuplicatePublication("A".into())]);
    }

    #[test]
    fn dangling_npl_reported() {
        let mut raw = well_formed();
        raw.patents[0].npl_cited_ids.push("Z".into());
        let r = validate_raw(&raw, 1980..=2030);
        assert_eq!(
            r.violations,
            vec![Violation::DanglingNpl {
                family: "F".into(),
                pub_id: "Z".into()
            }]
        );
    }

    #[test]
    fn outliers_loops_and_duplicates() {
        let mut raw = well_formed();
        raw.publications.push(Publication::new("C", 1975));
        raw.citations.push(raw.citations[0].clone());
        raw.citations.push(CitationRecord {
            citing_id: "B".into(),
            cited_id: "B".into(),
        });
        let r = validate_raw(&raw, 1980..=2030);
        assert_eq!(r.len(), 3, "{r}");
    }
}
