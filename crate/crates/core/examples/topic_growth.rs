//! Counts publications matching a boolean topic query per year and fits
//! exponential growth to the timeline.
//!
//!     cargo run --example topic_growth -- 'queu* AND (multihop* OR "multi hop") AND network*'

use sbcite::synth::{generate, SynthConfig};
use sbcite::textmine::{fit_exponential, topic_timeline, Query};

fn main() -> sbcite::Result<()> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "[queu* AND (multihop* OR multi hop OR multi-hop*) AND network*]".into());
    let query = Query::parse(&text)?;
    println!("query: {}", query.ast());

    let corpus = generate(&SynthConfig {
        n_publications: 40_000,
        growth_rate: 0.08,
        n_planted_sbs: 0,
        abstracts: true,
        ..Default::default()
    })?
    .to_corpus()?;
    let timeline = topic_timeline(&corpus, &query, 1980..=2015)?;
    print!("{}", timeline.to_csv());

    let fit = fit_exponential(&timeline)?;
    println!(
        "growth rate {:.4}/year (r^2 {:.3}), doubling every {:.1} years",
        fit.exponent,
        fit.r_squared,
        fit.doubling_time().unwrap_or(f64::INFINITY)
    );
    Ok(())
}
