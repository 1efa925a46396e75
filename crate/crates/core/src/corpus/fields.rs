use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::error::{Error, Result};

const BUNDLED: &str = include_str!("main_fields.tsv");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldEntry {
    pub name: String,
    pub main_fields: Vec<String>,
}

/// Journal-category code → subfield name → main field(s).
///
/// A code may belong to more than one main field (nuclear science sits in
/// both physics and engineering).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTable {
    entries: BTreeMap<u32, FieldEntry>,
}

/// Restricts an analysis to publications of one main field.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum FieldFilter {
    #[default]
    All,
    Main(String),
}

impl FieldFilter {
    pub fn parse(s: &str) -> Self {
        if s.eq_ignore_ascii_case("all") || s.is_empty() {
            FieldFilter::All
        } else {
            FieldFilter::Main(s.to_string())
        }
    }
}

fn fold(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

impl Default for FieldTable {
    fn default() -> Self {
        FieldTable::parse_tsv(BUNDLED).expect("bundled field table is well-formed")
    }
}

impl FieldTable {
    /// Parses `code<TAB>main field<TAB>name` lines. Blank lines and lines
    /// starting with `#` are skipped; repeated codes add main fields.
    pub fn parse_tsv(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<u32, FieldEntry> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let malformed = |message: &str| Error::Malformed {
                path: "<field table>".into(),
                line: i + 1,
                message: message.into(),
            };
            let mut cols = line.split('\t');
            let code: u32 = cols
                .next()
                .and_then(|c| c.trim().parse().ok())
                .ok_or_else(|| malformed("expected numeric code"))?;
            let main = cols.next().map(str::trim).filter(|s| !s.is_empty());
            let name = cols.next().map(str::trim).filter(|s| !s.is_empty());
            let (Some(main), Some(name)) = (main, name) else {
                return Err(malformed("expected code, main field and name"));
            };
            let entry = entries.entry(code).or_insert_with(|| FieldEntry {
                name: name.to_string(),
                main_fields: Vec::new(),
            });
            if !entry.main_fields.iter().any(|m| m == main) {
                entry.main_fields.push(main.to_string());
            }
        }
        Ok(FieldTable { entries })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        FieldTable::parse_tsv(&text)
    }

    pub fn entry(&self, code: u32) -> Option<&FieldEntry> {
        self.entries.get(&code)
    }

    /// Subfield name, or `FIELD <code>` for codes outside the table.
    pub fn name(&self, code: u32) -> Cow<'_, str> {
        match self.entries.get(&code) {
            Some(e) => Cow::Borrowed(&e.name),
            None => Cow::Owned(format!("FIELD {code}")),
        }
    }

    /// All subfield codes in ascending order.
    pub fn codes(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.keys().copied()
    }

    /// Distinct main field names, sorted.
    pub fn main_fields(&self) -> Vec<&str> {
        let seen: BTreeSet<&str> = self
            .entries
            .values()
            .flat_map(|e| e.main_fields.iter().map(String::as_str))
            .collect();
        seen.into_iter().collect()
    }

    /// Resolves a user-supplied main field name. Matching ignores case and
    /// punctuation, and accepts an unambiguous prefix (`eng`).
    pub fn resolve_main(&self, query: &str) -> Result<String> {
        let q = fold(query);
        if q.is_empty() {
            return Err(Error::UnknownField(query.to_string()));
        }
        let mains = self.main_fields();
        if let Some(m) = mains.iter().find(|m| fold(m) == q) {
            return Ok(m.to_string());
        }
        let hits: Vec<_> = mains.iter().filter(|m| fold(m).starts_with(&q)).collect();
        match hits.as_slice() {
            [one] => Ok(one.to_string()),
            _ => Err(Error::UnknownField(query.to_string())),
        }
    }

    /// Codes belonging to the filtered main field, `None` for [`FieldFilter::All`].
    pub fn codes_for(&self, filter: &FieldFilter) -> Result<Option<BTreeSet<u32>>> {
        match filter {
            FieldFilter::All => Ok(None),
            FieldFilter::Main(name) => {
                let main = self.resolve_main(name)?;
                Ok(Some(
                    self.entries
                        .iter()
                        .filter(|(_, e)| e.main_fields.contains(&main))
                        .map(|(&c, _)| c)
                        .collect(),
                ))
            }
        }
    }
}
