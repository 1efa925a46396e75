//! Links SBs to the patent families citing them, then reports citation
//! lags per cohort and field representation.
//!
//!     cargo run --example patent_linkage

use sbcite::patentlink::{
    cohort_lag_stats, count_series, link_snprs, representation, split_years, NormalizeBase, RepresentationOptions,
};
use sbcite::sbdetect::{detect_sbs, DetectOptions, SbParams};
use sbcite::series::Bucketing;
use sbcite::synth::{generate, SynthConfig};

fn main() -> sbcite::Result<()> {
    let synth = generate(&SynthConfig {
        n_publications: 30_000,
        n_planted_sbs: 200,
        snpr_fraction: 0.25,
        ..Default::default()
    })?;
    let corpus = synth.to_corpus()?;
    let sbs = detect_sbs(&corpus, &SbParams::CANONICAL, &DetectOptions::default())?;
    let snprs = link_snprs(&corpus, &sbs);
    println!(
        "{} SBs, {} cited by patents ({:.1}%)",
        sbs.len(),
        snprs.len(),
        100.0 * snprs.len() as f64 / sbs.len() as f64
    );

    let buckets = Bucketing::new(1980..=1996, 3)?;
    println!("\nperiod      n  mean pcy  sd    Y");
    for row in cohort_lag_stats(&snprs, &buckets) {
        let fmt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.1}"));
        println!(
            "{:<10} {:>2}  {:>8}  {:>4}  {}",
            row.period,
            row.n,
            fmt(row.mean_pcy),
            fmt(row.sd_pcy),
            row.most_extreme_year.map_or("-".into(), |y| y.to_string())
        );
    }

    // Growth of both groups, indexed to the first cohort.
    let (non, with) = split_years(&sbs, &snprs);
    let a = count_series(non, &buckets, Some(NormalizeBase::Bucket(0)))?;
    let b = count_series(with, &buckets, None)?;
    println!("\nSB-nonSNPR index: {:?}", a.normalized.unwrap_or_default());
    println!("SB-SNPR counts:   {:?}", b.counts);

    println!("\ntop fields among SB-SNPRs:");
    for row in representation(&corpus, &sbs, &snprs, &RepresentationOptions::default())?
        .iter()
        .take(5)
    {
        println!(
            "  {:<40} {:>5.1}% of SNPRs, {:>5.1}% of SBs, {:>5.1}% of all",
            row.key, row.share_snpr, row.share_sb, row.share_pubs
        );
    }
    Ok(())
}
