//! Run configuration shared by all subcommands, read from a TOML file.
//!
//! ```toml
//! bucket_years = 3
//!
//! [corpus]
//! dir = "data"
//! strict = false
//!
//! [sb]
//! sleep = 10
//! cs_max = 1.0
//! awake_min = 10
//! awake_max = 10
//! ca_min = 5.0
//!
//! [thresholds]
//! cocite = 3
//! prince_c_min = 100
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::{CorpusPaths, FieldTable, LoadOptions, DEFAULT_YEAR_RANGE};
use crate::error::{Error, Result};
use crate::sbdetect::SbParams;
use crate::synth::SynthConfig;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "SBCITE_CONFIG";

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusConfig {
    /// Directory holding `publications.jsonl`, `citations.jsonl` (or `.csv`)
    /// and `patents.jsonl`.
    pub dir: Option<PathBuf>,
    pub publications: Option<PathBuf>,
    pub citations: Option<PathBuf>,
    pub patents: Option<PathBuf>,
    pub strict: bool,
    /// Accepted publication years; defaults to 1980..=2030.
    pub year_min: Option<i32>,
    pub year_max: Option<i32>,
    /// When set, only citing publications of these document types count.
    pub citer_doc_types: Option<Vec<String>>,
    /// Tab-separated `code, main field, name` table replacing the bundled one.
    pub field_table: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectConfig {
    pub include_self_citations: bool,
    pub clip_awake: bool,
    pub horizon: Option<i32>,
    pub awakening_threshold: Option<f64>,
    pub awakening_persistence: u32,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            include_self_citations: false,
            clip_awake: false,
            horizon: None,
            awakening_threshold: None,
            awakening_persistence: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    pub cocite: u32,
    pub coupling: u32,
    pub prince_c_min: u64,
    pub prince_k: usize,
    pub concept_min_occurrences: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            cocite: 1,
            coupling: 1,
            prince_c_min: 100,
            prince_k: 25,
            concept_min_occurrences: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: CorpusConfig,
    pub sb: SbParams,
    pub detect: DetectConfig,
    pub bucket_years: u32,
    pub thresholds: Thresholds,
    pub output_dir: Option<PathBuf>,
    pub seed: u64,
    pub synth: SynthConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: CorpusConfig::default(),
            sb: SbParams::CANONICAL,
            detect: DetectConfig::default(),
            bucket_years: 3,
            thresholds: Thresholds::default(),
            output_dir: None,
            seed: 42,
            synth: SynthConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Checks cross-field invariants; call after flag overrides are applied.
    pub fn validate(&self) -> Result<Vec<String>> {
        if self.bucket_years == 0 {
            return Err(Error::Config("bucket_years must be at least 1".into()));
        }
        if let (Some(lo), Some(hi)) = (self.corpus.year_min, self.corpus.year_max) {
            if lo > hi {
                return Err(Error::EmptyYearRange(lo, hi));
            }
        }
        self.sb.validate()
    }

    pub fn corpus_paths(&self) -> Result<CorpusPaths> {
        let c = &self.corpus;
        let mut paths = match &c.dir {
            Some(d) => CorpusPaths::in_dir(d),
            None => {
                let (Some(p), Some(ci)) = (&c.publications, &c.citations) else {
                    return Err(Error::Config(
                        "no corpus given: set corpus.dir or both corpus.publications and corpus.citations".into(),
                    ));
                };
                CorpusPaths {
                    publications: p.clone(),
                    citations: ci.clone(),
                    patents: None,
                }
            }
        };
        if let Some(p) = &c.publications {
            paths.publications = p.clone();
        }
        if let Some(p) = &c.citations {
            paths.citations = p.clone();
        }
        if c.patents.is_some() {
            paths.patents = c.patents.clone();
        }
        Ok(paths)
    }

    pub fn load_options(&self) -> Result<LoadOptions> {
        let c = &self.corpus;
        let field_table = match &c.field_table {
            Some(p) => FieldTable::from_file(p)?,
            None => FieldTable::default(),
        };
        Ok(LoadOptions {
            strict: c.strict,
            year_range: c.year_min.unwrap_or(*DEFAULT_YEAR_RANGE.start())
                ..=c.year_max.unwrap_or(*DEFAULT_YEAR_RANGE.end()),
            citer_doc_types: c.citer_doc_types.clone(),
            field_table,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let c = RunConfig::parse("bucket_years = 5\n[sb]\nsleep = 8\n").unwrap();
        assert_eq!(c.bucket_years, 5);
        assert_eq!(c.sb.sleep, 8);
        assert_eq!(c.sb.ca_min, 5.0);
        assert_eq!(c.thresholds.prince_c_min, 100);
        assert!(c.validate().unwrap().is_empty());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(RunConfig::parse("buckets = 3"), Err(Error::Config(_))));
        assert!(matches!(RunConfig::parse("[sb]\nslep = 3"), Err(Error::Config(_))));
    }

    #[test]
    fn corpus_paths_resolution() {
        let c = RunConfig::parse("[corpus]\ndir = \"d\"\ncitations = \"x.csv\"\n").unwrap();
        let p = c.corpus_paths().unwrap();
        assert_eq!(p.publications, Path::new("d/publications.jsonl"));
        assert_eq!(p.citations, Path::new("x.csv"));
        assert!(RunConfig::default().corpus_paths().is_err());
    }
}
