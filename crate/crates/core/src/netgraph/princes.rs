use serde::{Deserialize, Serialize};

use crate::corpus::{sorted_intersection_len, Corpus};
use crate::error::{Error, Result};
use crate::sbdetect::awakening_year;

use super::early_citers;

/// Prince ranking knobs. The score is
/// `w_cocite * cocite + w_coupling * coupling + w_closeness * closeness`,
/// where co-citation and coupling are normalized by their maximum over the
/// candidates and closeness is `1 / (1 + |year - awakening|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PrinceConfig {
    /// Minimum citations received by a candidate.
    pub c_min: u64,
    /// How many of the earliest citers to consider.
    pub k: usize,
    pub w_cocite: f64,
    pub w_coupling: f64,
    pub w_closeness: f64,
    /// Score multiplier for candidates published before the awakening.
    pub early_penalty: f64,
    pub exclude_self_citing: bool,
    /// Awakening year to use instead of detecting one.
    pub awakening_year: Option<i32>,
    /// Citations per year marking the awakening when it is detected.
    pub awakening_threshold: f64,
    pub awakening_persistence: u32,
}

impl Default for PrinceConfig {
    fn default() -> Self {
        PrinceConfig {
            c_min: 100,
            k: 25,
            w_cocite: 0.5,
            w_coupling: 0.3,
            w_closeness: 0.2,
            early_penalty: 0.5,
            exclude_self_citing: false,
            awakening_year: None,
            awakening_threshold: 5.0,
            awakening_persistence: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrinceCandidate {
    pub pub_id: String,
    pub year: i32,
    pub own_citations: u64,
    /// `year - awakening_year`.
    pub earliness: i32,
    /// Papers citing both the SB and the candidate.
    pub cocite_weight: u64,
    /// References shared with the SB.
    pub coupling: u64,
    pub score: f64,
    /// Highly cited, but published before the awakening.
    pub early_passing_prince: bool,
    /// Shares an author with the SB.
    pub self_citing: bool,
}

/// Ranks highly cited early citers of an SB as candidates for having
/// triggered its awakening. Output is ordered by score descending, then id.
pub fn rank_princes(corpus: &Corpus, sb_id: &str, config: &PrinceConfig) -> Result<Vec<PrinceCandidate>> {
    let sb = corpus.require(sb_id)?;
    let sb_year = corpus.publication(sb).year;
    let awakening = match config.awakening_year {
        Some(y) => y,
        None => {
            let horizon = corpus.span().map_or(sb_year, |s| s.1).max(sb_year);
            let series = corpus.series(sb, true, sb_year..=horizon);
            awakening_year(&series, config.awakening_threshold, config.awakening_persistence)
                .ok_or_else(|| Error::NoAwakening(sb_id.to_string()))?
        }
    };

    let mut raw: Vec<PrinceCandidate> = early_citers(corpus, sb, config.k)
        .into_iter()
        .filter(|&c| corpus.in_degree(c) as u64 >= config.c_min)
        .map(|c| (c, corpus.shares_author(sb, c)))
        .filter(|&(_, own)| !(config.exclude_self_citing && own))
        .map(|(c, self_citing)| {
            let year = corpus.publication(c).year;
            PrinceCandidate {
                pub_id: corpus.publication(c).id.clone(),
                year,
                own_citations: corpus.in_degree(c) as u64,
                earliness: year - awakening,
                cocite_weight: sorted_intersection_len(corpus.citers(sb), corpus.citers(c)) as u64,
                coupling: sorted_intersection_len(corpus.references(sb), corpus.references(c)) as u64,
                score: 0.0,
                early_passing_prince: year < awakening,
                self_citing,
            }
        })
        .collect();

    let max_cocite = raw.iter().map(|c| c.cocite_weight).max().unwrap_or(0);
    let max_coupling = raw.iter().map(|c| c.coupling).max().unwrap_or(0);
    let norm = |x: u64, max: u64| if max == 0 { 0.0 } else { x as f64 / max as f64 };
    for c in &mut raw {
        let closeness = 1.0 / (1.0 + c.earliness.unsigned_abs() as f64);
        let mut score = config.w_cocite * norm(c.cocite_weight, max_cocite)
            + config.w_coupling * norm(c.coupling, max_coupling)
            + config.w_closeness * closeness;
        if c.early_passing_prince {
            score *= config.early_penalty;
        }
        c.score = score;
    }
    raw.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.pub_id.cmp(&b.pub_id)));
    Ok(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Publication;

    /// SB `S` (1990) awakened in 2003; `early` (1999) and `neely` (2003) are
    /// highly cited citers, `neely` being the one co-cited with S.
    fn fixture() -> Corpus {
        let mut pubs = vec![
            Publication::new("S", 1990).with_authors(["Tassiulas, L."]),
            Publication::new("early", 1999).with_authors(["McKeown, N."]),
            Publication::new("neely", 2003).with_authors(["Neely, M."]),
            Publication::new("minor", 2003).with_authors(["Other, A."]),
        ];
        let mut edges: Vec<(String, String)> = vec![
            ("early".into(), "S".into()),
            ("neely".into(), "S".into()),
            ("minor".into(), "S".into()),
        ];
        for i in 0..120 {
            let id = format!("c{i:03}");
            let year = 2003 + (i % 8);
            pubs.push(Publication::new(&id, year));
            edges.push((id.clone(), "S".into()));
            edges.push((id.clone(), "neely".into()));
            if i < 100 {
                edges.push((id.clone(), "early".into()));
            }
            if i % 3 == 0 {
                edges.push((id, "minor".into()));
            }
        }
        let refs: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        Corpus::from_records(pubs, &refs, vec![]).unwrap()
    }

    #[test]
    fn at_awakening_citer_ranks_first() {
        let c = fixture();
        let ranked = rank_princes(&c, "S", &PrinceConfig::default()).unwrap();
        let ids: Vec<&str> = ranked.iter().map(|p| p.pub_id.as_str()).collect();
        assert_eq!(ids, vec!["neely", "early"]);
        assert!(ranked[1].early_passing_prince);
        assert_eq!(ranked[1].earliness, -4);
        assert!(!ranked[0].early_passing_prince);
        assert_eq!(ranked[0].cocite_weight, 120);
    }

    #[test]
    fn high_threshold_gives_empty_list() {
        let c = fixture();
        let cfg = PrinceConfig {
            c_min: 10_000,
            ..Default::default()
        };
        assert!(rank_princes(&c, "S", &cfg).unwrap().is_empty());
    }

    #[test]
    fn no_awakening_is_an_error() {
        let c = Corpus::from_records(vec![Publication::new("S", 1990)], &[], vec![]).unwrap();
        assert!(matches!(
            rank_princes(&c, "S", &PrinceConfig::default()),
            Err(Error::NoAwakening(_))
        ));
    }
}
