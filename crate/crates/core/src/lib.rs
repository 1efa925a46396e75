//! Detection and analysis of Sleeping Beauties in science: delayed-recognition
//! publications, their citation by patents, and the citation and text
//! environment around their awakening.
//!
//! The pipeline starts from a [`corpus::Corpus`] loaded from JSONL files:
//!
//! ```no_run
//! use sbcite::corpus::{load_corpus, CorpusPaths, LoadOptions};
//! use sbcite::sbdetect::{detect_sbs, DetectOptions, SbParams};
//!
//! let (corpus, _report) = load_corpus(&CorpusPaths::in_dir("data"), LoadOptions::default())?;
//! let sbs = detect_sbs(&corpus, &SbParams::CANONICAL, &DetectOptions::default())?;
//! let snprs = sbcite::patentlink::link_snprs(&corpus, &sbs);
//! println!("{} SBs, {} cited in patents", sbs.len(), snprs.len());
//! # Ok::<(), sbcite::Error>(())
//! ```

pub mod cli;
pub mod config;
pub mod corpus;
mod error;
pub mod namematch;
pub mod netgraph;
pub mod patentlink;
pub mod sbdetect;
pub mod series;
pub mod synth;
pub mod textmine;

pub use error::{Error, Result};
