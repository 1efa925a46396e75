//! Plants Sleeping Beauties in a synthetic corpus, finds them again and
//! summarizes sleep depth and awake intensity per 3-year cohort.
//!
//!     cargo run --example detect_sleeping_beauties

use sbcite::sbdetect::{cohort_cs_ca_stats, detect_sbs, DetectOptions, SbParams};
use sbcite::series::Bucketing;
use sbcite::synth::{generate, SynthConfig};

fn main() -> sbcite::Result<()> {
    let synth = generate(&SynthConfig {
        n_publications: 20_000,
        n_planted_sbs: 40,
        planted_cs: 0.8,
        ..Default::default()
    })?;
    let corpus = synth.to_corpus()?;

    let params = SbParams::CANONICAL;
    let sbs = detect_sbs(&corpus, &params, &DetectOptions::default())?;
    println!("{} publications, {} citations", corpus.len(), corpus.citation_count());
    println!("{} SBs at {params} ({} planted)", sbs.len(), synth.truth.sbs.len());
    for r in sbs.iter().take(5) {
        println!(
            "  {} ({}) sleep {}-{} cs={:.1} [{}], awake {}-{} ca={:.1}, awakening {:?}",
            r.pub_id,
            r.pub_year,
            r.sleep_window.0,
            r.sleep_window.1,
            r.cs,
            r.depth,
            r.awake_window.0,
            r.awake_window.1,
            r.ca,
            r.awakening_year
        );
    }

    let buckets = Bucketing::new(1980..=1996, 3)?;
    println!("\nperiod      n   cs mean  ca mean");
    for row in cohort_cs_ca_stats(&sbs, &buckets, None) {
        if let (Some(cs), Some(ca)) = (row.cs.mean, row.ca.mean) {
            println!("{:<10} {:>2}   {cs:>7.2}  {ca:>7.2}", row.period, row.cs.n);
        }
    }
    Ok(())
}
