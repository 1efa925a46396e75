//! Finds authors of patent-cited SBs who also appear as inventors.
//!
//!     cargo run --example inventor_authors

use sbcite::namematch::{match_inventor_authors, names_match, normalize_name};
use sbcite::patentlink::link_snprs;
use sbcite::sbdetect::{detect_sbs, DetectOptions, SbParams};
use sbcite::synth::scenarios;

fn main() -> sbcite::Result<()> {
    for raw in ["Moreira, Alberto", "A. Moreira", "Moreira A", "Müller-Lüdenscheidt, Hans P."] {
        println!("{raw:<32} -> {}", normalize_name(raw)?.render());
    }
    println!("same person: {}", names_match("Moreira, A.", "Moreira, Alberto"));

    for (name, corpus) in [("Moreira-style", scenarios::moreira()), ("BLSC-style", scenarios::blsc())] {
        let sbs = detect_sbs(&corpus, &SbParams::CANONICAL, &DetectOptions::default())?;
        let snprs = link_snprs(&corpus, &sbs);
        let matches = match_inventor_authors(&corpus, &snprs);
        println!("\n{name}: {} SNPR(s), {} inventor-author match(es)", snprs.len(), matches.len());
        for m in &matches {
            println!(
                "  type {} {} on {} via {:?}",
                m.link_type.code(),
                m.name_key.render(),
                m.pub_id,
                m.family_ids
            );
        }
    }
    Ok(())
}
