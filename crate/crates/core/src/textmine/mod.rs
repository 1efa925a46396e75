//! Topic queries, topic timelines, concept maps and growth fits over
//! publication titles and abstracts.

mod concepts;
mod fit;
mod query;
mod stopwords;

use std::ops::RangeInclusive;

use rayon::prelude::*;

pub use concepts::{concept_graph, ConceptMap, ConceptOptions, EdgeNormalization, TermStats};
pub use fit::{fit_exponential, fit_exponential_values, FitResult};
pub use query::{parse_query, Query, QueryError, QueryNode};
pub use stopwords::{is_stopword, STOPWORDS};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::series::YearSeries;

/// Lowercases and splits on whitespace, `-` and `/`, then drops
/// non-alphanumeric characters inside each token.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| c.is_whitespace() || c == '-' || c == '/')
        .map(|t| {
            t.chars()
                .filter(|c| c.is_alphanumeric())
                .flat_map(char::to_lowercase)
                .collect::<String>()
        })
        .filter(|t| !t.is_empty())
        .collect()
}

/// Annual number of publications matching `query` in title or abstract.
pub fn topic_timeline(corpus: &Corpus, query: &Query, years: RangeInclusive<i32>) -> Result<YearSeries> {
    if years.is_empty() {
        return Err(Error::EmptyYearRange(*years.start(), *years.end()));
    }
    let hits: Vec<i32> = corpus
        .publications_in(years.clone())
        .par_iter()
        .filter_map(|&i| {
            let p = corpus.publication(i);
            query.matches_text(&p.text()).then_some(p.year)
        })
        .collect();
    let mut series = YearSeries::zeros(years);
    for y in hits {
        series.increment(y);
    }
    Ok(series)
}

/// Ids of publications in `years` matching `query`, in id order.
pub fn matching_publications(corpus: &Corpus, query: &Query, years: RangeInclusive<i32>) -> Vec<String> {
    let mut idx: Vec<u32> = corpus
        .publications_in(years)
        .par_iter()
        .copied()
        .filter(|&i| query.matches_text(&corpus.publication(i).text()))
        .collect();
    idx.sort_unstable();
    idx.into_iter().map(|i| corpus.publication(i).id.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Publication;

    #[test]
    fn tokenizer_splits_hyphens_and_slashes() {
        assert_eq!(
            tokenize("Multi-hop, TCP/IP networks (2003)."),
            vec!["multi", "hop", "tcp", "ip", "networks", "2003"]
        );
        assert!(tokenize(" -- ").is_empty());
    }

    #[test]
    fn timeline_counts_matches_per_year() {
        let pubs = vec![
            Publication::new("a", 2001).with_title("Queueing in multi-hop wireless networks"),
            Publication::new("b", 2001).with_title("Multihop queue networks"),
            Publication::new("c", 2002)
                .with_title("Scheduling")
                .with_abstract("queue length in multi hop network"),
            Publication::new("d", 2002).with_title("Optical fibers"),
            Publication::new("e", 2003).with_title("Queueing theory"),
        ];
        let c = Corpus::from_records(pubs, &[], vec![]).unwrap();
        let q = Query::parse("[queu* AND (multihop* OR multi hop OR multi-hop*) AND network*]").unwrap();
        let s = topic_timeline(&c, &q, 2000..=2003).unwrap();
        assert_eq!(s.counts(), &[0, 2, 1, 0]);
        assert_eq!(matching_publications(&c, &q, 2000..=2003), vec!["a", "b", "c"]);
        assert!(topic_timeline(&c, &q, 2003..=2000).is_err());
    }
}
