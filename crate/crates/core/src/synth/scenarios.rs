//! Small hand-built corpora modelled on well-documented cases: a queueing
//! SB with an early highly cited citer and a later prince, and two patent
//! linkage cases with and without an inventor who is also an author.

use crate::corpus::{Corpus, Patent, Publication};

/// Ids used by [`te_like`].
pub mod te {
    pub const SB: &str = "TE1992";
    /// Highly cited citer published before the awakening.
    pub const EARLY_PRINCE: &str = "MCKEOWN1999";
    /// Highly cited citer at the awakening, strongly co-cited with the SB.
    pub const PRINCE: &str = "NEELY2003";
    /// Second at-awakening candidate, less co-cited.
    pub const RUNNER_UP: &str = "ANDREWS2003";
    pub const AWAKENING: i32 = 2003;
}

struct Builder {
    pubs: Vec<Publication>,
    edges: Vec<(String, String)>,
}

impl Builder {
    fn paper(&mut self, id: &str, year: i32, authors: &[&str], title: &str) {
        self.pubs.push(
            Publication::new(id, year)
                .with_authors(authors.iter().copied())
                .with_title(title),
        );
    }

    fn cite(&mut self, citing: &str, cited: &str) {
        self.edges.push((citing.to_string(), cited.to_string()));
    }

    fn build(self, patents: Vec<Patent>) -> Corpus {
        let edges: Vec<(&str, &str)> = self
            .edges
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        Corpus::from_records(self.pubs, &edges, patents).expect("scenario corpus is well-formed")
    }
}

/// A 1992 queueing SB with a deep sleep (11 sleep-window citers, two of them
/// self-citations; five by one first author) awakened in 2003.
///
/// The 1999 citer and two 2003 citers each collect over 100 citations; the
/// 2003 one in [`te::PRINCE`] is co-cited with the SB far more often and
/// shares its references.
pub fn te_like() -> Corpus {
    let mut b = Builder {
        pubs: Vec::new(),
        edges: Vec::new(),
    };
    let te_authors = ["Tassiulas, L.", "Ephremides, A."];
    for (i, y) in [1985, 1987, 1988, 1990].into_iter().enumerate() {
        b.paper(&format!("REF{i}"), y, &["Walrand, J."], "Queueing networks stability");
    }
    b.paper(
        te::SB,
        1992,
        &te_authors,
        "Stability properties of constrained queueing systems and scheduling policies for maximum throughput in multihop radio networks",
    );
    for r in ["REF0", "REF1", "REF2", "REF3"] {
        b.cite(te::SB, r);
    }

    // Sleep window 1992-2001: 11 citers.
    b.paper("TASSIULAS1995", 1995, &["Tassiulas, L."], "Adaptive back-pressure congestion control");
    b.paper("TASSIULAS1997", 1997, &["Tassiulas, L."], "Scheduling and performance limits of networks");
    for (i, y) in [1996, 1997, 1998, 1999, 2000].into_iter().enumerate() {
        b.paper(&format!("KAM{y}{i}"), y, &["Kam, S. C."], "Bandwidth guarantee in network access");
    }
    for (id, y) in [("ROUTE1994", 1994), ("PACKET1998", 1998), ("SWITCH2001", 2001)] {
        b.paper(id, y, &["Other, Q."], "Packet switching architectures");
    }
    b.paper(
        te::EARLY_PRINCE,
        1999,
        &["McKeown, N.", "Mekkittikul, A."],
        "Achieving 100 percent throughput in an input queued switch",
    );
    b.paper("SARKAR2002", 2002, &["Sarkar, S.", "Tassiulas, L."], "Fair allocation of utilities in multirate multicast networks");
    let sleepers: Vec<String> = b
        .pubs
        .iter()
        .filter(|p| (1993..=2002).contains(&p.year))
        .map(|p| p.id.clone())
        .collect();
    for id in &sleepers {
        b.cite(id, te::SB);
    }

    // Awakening.
    b.paper(
        te::PRINCE,
        2003,
        &["Neely, M. J.", "Modiano, E.", "Rohrs, C. E."],
        "Dynamic power allocation and routing for time varying wireless networks",
    );
    b.cite(te::PRINCE, "REF1");
    b.cite(te::PRINCE, "REF2");
    b.paper(
        te::RUNNER_UP,
        2003,
        &["Andrews, M.", "Vojnovic, M."],
        "Scheduling reserved traffic in input queued switches",
    );
    b.cite(te::PRINCE, te::SB);
    b.cite(te::RUNNER_UP, te::SB);
    b.cite(te::RUNNER_UP, te::EARLY_PRINCE);
    for i in 0..4 {
        let id = format!("WAKE2003{i}");
        b.paper(&id, 2003, &["Follower, A."], "Throughput optimal scheduling in multihop wireless networks");
        b.cite(&id, te::SB);
    }

    // Later literature, 2004-2015.
    for i in 0..240 {
        let year = 2004 + (i % 12);
        let id = format!("LATE{year}{i:03}");
        b.paper(&id, year, &["Later, Z."], "Queue length based scheduling in wireless networks");
        if i < 150 {
            b.cite(&id, te::SB);
            b.cite(&id, te::PRINCE);
        } else if i < 180 {
            b.cite(&id, te::PRINCE);
        }
        if (60..180).contains(&i) {
            b.cite(&id, te::RUNNER_UP);
        }
        if i < 40 || i >= 130 {
            b.cite(&id, te::EARLY_PRINCE);
        }
    }
    b.build(Vec::new())
}

fn patent(family: &str, patents: &[&str], title: &str, inventors: &[&str], ipc: &[&str], year: i32, cites: &str) -> Patent {
    Patent {
        family_id: family.into(),
        patent_ids: patents.iter().map(|s| s.to_string()).collect(),
        title: title.into(),
        inventors: inventors.iter().map(|s| s.to_string()).collect(),
        ipc_codes: ipc.iter().map(|s| s.to_string()).collect(),
        application_year: year,
        npl_cited_ids: vec![cites.into()],
    }
}

/// Adds citers giving `id` one citation in each of three sleep years and six
/// in every awake year (canonical parameters).
fn sleeping_profile(b: &mut Builder, id: &str, year: i32) {
    for (k, dy) in [2, 5, 8].into_iter().enumerate() {
        let c = format!("{id}-S{k}");
        b.paper(&c, year + dy, &["Early, C."], "Related early work");
        b.cite(&c, id);
    }
    for dy in 10..20 {
        for k in 0..6 {
            let c = format!("{id}-A{dy}{k}");
            b.paper(&c, year + dy, &["Later, C."], "Follow-up work");
            b.cite(&c, id);
        }
    }
}

/// SB-SNPR cited by two families, one of which lists the first author as
/// inventor.
pub const MOREIRA_SB: &str = "A1994PF41500008";

pub fn moreira() -> Corpus {
    let mut b = Builder {
        pubs: Vec::new(),
        edges: Vec::new(),
    };
    b.paper(
        MOREIRA_SB,
        1994,
        &["Moreira, A.", "Huang, Y.H."],
        "Airborne SAR processing of highly squinted data using a chirp scaling approach with integrated motion compensation",
    );
    sleeping_profile(&mut b, MOREIRA_SB, 1994);
    let families = vec![
        patent(
            "4169219",
            &["WO2002CA00886", "US20030730189"],
            "Imaging system utilizing spatial image oscillation",
            &["Zador, Andrew"],
            &["G06T1/00", "H04N5/217"],
            2003,
            MOREIRA_SB,
        ),
        patent(
            "7788072",
            &["US19970816044"],
            "Method for azimuth scaling of SAR data",
            &["Mittermayer, Josef", "Moreira, Alberto"],
            &["G01S13/90"],
            1997,
            MOREIRA_SB,
        ),
    ];
    b.build(families)
}

/// SB-SNPR cited by two families whose inventors are all distinct from the
/// four authors.
pub const BLSC_SB: &str = "A1993LM31100009";

pub fn blsc() -> Corpus {
    let mut b = Builder {
        pubs: Vec::new(),
        edges: Vec::new(),
    };
    b.paper(
        BLSC_SB,
        1993,
        &["Bonsignore, L.", "Loy, G.", "Secci, D.", "Calignano, A."],
        "Synthesis and pharmacological activity of 2-oxo-(2H) 1-benzopyran-3-carboxamide derivatives",
    );
    sleeping_profile(&mut b, BLSC_SB, 1993);
    let families = vec![
        patent(
            "9507531",
            &["FR19970006814", "WO1998FR01087", "US20000445177"],
            "Coumarin derivatives, methods of preparation and application as medicines",
            &[
                "Delarge, Jacques",
                "Doucet, Caroline",
                "Boggetto, Nicole",
                "Pirotte, Bernard",
                "Pochet, Lionel",
                "Reboud Ravaux, Michele",
            ],
            &["A61K31/37", "C07D311/14"],
            2000,
            BLSC_SB,
        ),
        patent(
            "32400079",
            &["EP20030776786", "US20050537711", "EP20100190730"],
            "Novel 2H-chromen-2-one-3-carboxamides for medical uses",
            &[
                "Chen, Xiaoguang",
                "Cheng, Guifang",
                "Li, Hongyan",
                "Li, Lanmin",
                "Li, Yan",
                "Xie, Longfei",
                "Xu, Shiping",
                "Xu, Song",
            ],
            &["A61P3/10", "C07D311/16"],
            2003,
            BLSC_SB,
        ),
    ];
    b.build(families)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sbdetect::{detect_sbs, DetectOptions, SbParams};

    #[test]
    fn te_sleep_counts_with_and_without_self_citations() {
        let c = te_like();
        let sb = c.idx(te::SB).unwrap();
        let with = c.series(sb, false, 1992..=2001).total();
        let without = c.series(sb, true, 1992..=2001).total();
        assert_eq!((with, without), (11, 9));
    }

    #[test]
    fn linkage_fixtures_are_sbs() {
        for (c, id) in [(moreira(), MOREIRA_SB), (blsc(), BLSC_SB)] {
            let sbs = detect_sbs(&c, &SbParams::CANONICAL, &DetectOptions::default()).unwrap();
            assert_eq!(sbs.len(), 1);
            assert_eq!(sbs[0].pub_id, id);
        }
        let te = te_like();
        let sbs = detect_sbs(&te, &SbParams::CANONICAL, &DetectOptions::default()).unwrap();
        let rec = sbs.iter().find(|r| r.pub_id == te::SB).unwrap();
        assert!((rec.cs - 0.9).abs() < 1e-12);
        assert_eq!(rec.awakening_year, Some(te::AWAKENING));
    }
}
