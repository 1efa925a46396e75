//! Writes a synthetic corpus and its ground-truth manifest, then loads it
//! back the way the command line does.
//!
//!     cargo run --example synthetic_corpus -- /tmp/corpus

use std::path::PathBuf;

use sbcite::corpus::{load_corpus, CorpusPaths, LoadOptions};
use sbcite::synth::{generate, SynthConfig};

fn main() -> sbcite::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "synth-corpus".into()));
    let config = SynthConfig {
        n_publications: 10_000,
        n_background_patents: 100,
        seed: 7,
        ..Default::default()
    };
    let synth = generate(&config)?;
    synth.write(&dir)?;
    let t = &synth.truth;
    println!(
        "wrote {} publications, {} citations, {} patent families to {}",
        t.n_publications,
        t.n_citations,
        t.n_patents,
        dir.display()
    );
    println!(
        "planted: {} SBs, {} SNPRs, {} inventor-author pairs",
        t.sbs.len(),
        t.snprs.len(),
        t.inventor_authors.len()
    );

    let (corpus, report) = load_corpus(&CorpusPaths::in_dir(&dir), LoadOptions::default())?;
    println!(
        "reloaded {} publications spanning {:?}; clean ingest: {}",
        corpus.len(),
        corpus.span(),
        report.is_clean()
    );
    println!("validation violations: {}", corpus.validate().len());
    Ok(())
}
