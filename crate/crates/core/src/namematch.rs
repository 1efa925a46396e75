//! Person-name normalization and inventor-author linkage.
//!
//! A [`NameKey`] is a surname plus the ordered initials of the given names.
//! Two raw names match iff their keys are equal; there is no fuzzy matching.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, PubIdx};
use crate::error::{Error, Result};
use crate::patentlink::SnprRecord;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NameKey {
    /// Lowercased surname with separators and punctuation removed.
    pub last: String,
    /// First letters of the given names, in order.
    pub initials: String,
}

impl NameKey {
    /// `last, i. n.` form; normalizing the rendered string yields the same key.
    pub fn render(&self) -> String {
        if self.initials.is_empty() {
            return self.last.clone();
        }
        let initials: Vec<String> = self.initials.chars().map(|c| format!("{c}.")).collect();
        format!("{}, {}", self.last, initials.join(" "))
    }
}

impl fmt::Display for NameKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

const PARTICLES: &[&str] = &[
    "van", "von", "der", "den", "de", "del", "della", "di", "da", "du", "dos", "le", "la", "ten",
    "ter", "zu",
];

fn collapse_surname(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

/// A given-name token written as packed capitals (`TA`, `YH`) stands for
/// one initial per letter.
fn is_packed_initials(token: &str) -> bool {
    let letters: Vec<char> = token.chars().filter(|c| c.is_alphabetic()).collect();
    !letters.is_empty()
        && letters.len() <= 3
        && letters.iter().all(|c| c.is_uppercase())
        && token.chars().all(|c| c.is_alphabetic() || c == '.')
}

fn initials_of(given: &str) -> String {
    let mut out = String::new();
    for token in given.split(|c: char| c.is_whitespace() || c == '-') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        if is_packed_initials(token) && !token.contains('.') {
            out.extend(token.chars().flat_map(char::to_lowercase));
            continue;
        }
        for piece in token.split('.') {
            if let Some(c) = piece.chars().find(|c| c.is_alphabetic()) {
                out.extend(c.to_lowercase());
            }
        }
    }
    out
}

/// Normalizes a raw person name.
///
/// Handles `Last, First M.`, `F. M. Last` and bibliographic `Last FM`
/// orders; diacritics are folded and punctuation stripped.
pub fn normalize_name(raw: &str) -> Result<NameKey> {
    let folded = deunicode::deunicode(raw);
    let folded = folded.trim();
    if !folded.chars().any(|c| c.is_alphabetic()) {
        return Err(Error::UnparseableName(raw.to_string()));
    }

    let (surname, given) = if let Some((last, first)) = folded.split_once(',') {
        (last.to_string(), first.to_string())
    } else {
        let tokens: Vec<&str> = folded.split_whitespace().collect();
        let (last_tok, rest) = tokens.split_last().expect("non-empty after alphabetic check");
        let rest_has_lower = rest.iter().any(|t| t.chars().any(char::is_lowercase));
        if !rest.is_empty() && rest_has_lower && is_packed_initials(last_tok) {
            // `Birks TA`
            (rest.join(" "), last_tok.to_string())
        } else {
            let mut split = rest.len();
            while split > 0 && PARTICLES.contains(&rest[split - 1]) {
                split -= 1;
            }
            let mut surname: Vec<&str> = rest[split..].to_vec();
            surname.push(last_tok);
            (surname.join(" "), rest[..split].join(" "))
        }
    };

    let last = collapse_surname(&surname);
    if last.is_empty() {
        return Err(Error::UnparseableName(raw.to_string()));
    }
    Ok(NameKey {
        last,
        initials: initials_of(&given),
    })
}

/// Whether two raw names denote the same key. Unparseable names match only
/// themselves.
pub fn names_match(a: &str, b: &str) -> bool {
    match (normalize_name(a), normalize_name(b)) {
        (Ok(x), Ok(y)) => x == y,
        (Err(_), Err(_)) => a == b,
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LinkType {
    /// An author of the publication is an inventor of a family citing it.
    SelfCitation = 1,
    /// An author of the publication is an inventor of a family not citing it.
    OtherPatent = 2,
}

impl LinkType {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MatchRecord {
    pub pub_id: String,
    pub link_type: LinkType,
    pub name_key: NameKey,
    pub family_ids: Vec<String>,
}

/// Compares the authors of every SB-SNPR against patent inventors.
///
/// Inventors of families citing the publication yield type-1 records,
/// inventors of any other family type-2 records. One record per
/// (publication, link type, name key), families sorted; output ordered by
/// publication id, link type, then name.
pub fn match_inventor_authors(corpus: &Corpus, snprs: &[SnprRecord]) -> Vec<MatchRecord> {
    let mut families_by_key: HashMap<u32, Vec<u32>> = HashMap::new();
    for f in 0..corpus.patents().len() as u32 {
        for &k in corpus.inventor_keys(f) {
            families_by_key.entry(k).or_default().push(f);
        }
    }
    let mut out = Vec::new();
    for s in snprs {
        let Some(idx) = corpus.idx(&s.pub_id) else {
            continue;
        };
        let citing: BTreeSet<&str> = s.citing_family_ids.iter().map(String::as_str).collect();
        let mut grouped: BTreeMap<(LinkType, &crate::namematch::NameKey), BTreeSet<&str>> =
            BTreeMap::new();
        for &key in corpus.author_keys(idx) {
            let Some(fams) = families_by_key.get(&key) else {
                continue;
            };
            for &f in fams {
                let fid = corpus.patent(f).family_id.as_str();
                let kind = if citing.contains(fid) {
                    LinkType::SelfCitation
                } else {
                    LinkType::OtherPatent
                };
                grouped
                    .entry((kind, corpus.name_key(key)))
                    .or_default()
                    .insert(fid);
            }
        }
        for ((link_type, key), fams) in grouped {
            out.push(MatchRecord {
                pub_id: s.pub_id.clone(),
                link_type,
                name_key: key.clone(),
                family_ids: fams.into_iter().map(String::from).collect(),
            });
        }
    }
    out.sort();
    out
}

/// Publications whose author keys intersect the inventor keys of `family_ids`,
/// sorted by id.
pub fn find_inventor_papers(corpus: &Corpus, family_ids: &[&str]) -> Result<Vec<String>> {
    let mut keys = BTreeSet::new();
    for id in family_ids {
        let f = corpus
            .family_idx(id)
            .ok_or_else(|| Error::UnknownFamily(id.to_string()))?;
        keys.extend(corpus.inventor_keys(f).iter().copied());
    }
    if keys.is_empty() {
        return Ok(Vec::new());
    }
    let hits: Vec<PubIdx> = (0..corpus.len() as PubIdx)
        .filter(|&i| corpus.author_keys(i).iter().any(|k| keys.contains(k)))
        .collect();
    Ok(hits
        .into_iter()
        .map(|i| corpus.publication(i).id.clone())
        .collect())
}
