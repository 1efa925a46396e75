//! End-to-end properties of generated corpora: file round trips, planted
//! truth recovery and linkage statistics.

use std::collections::HashSet;

use sbcite::corpus::{load_corpus, validate_raw, Corpus, CorpusPaths, LoadOptions, Patent, Publication, RawCorpus};
use sbcite::namematch::{match_inventor_authors, LinkType};
use sbcite::patentlink::{link_snprs, representation, RepresentationOptions};
use sbcite::sbdetect::{detect_sbs, DetectOptions, SbParams};
use sbcite::series::{mean, sample_sd};
use sbcite::synth::{generate, GroundTruth, SynthConfig};

fn cfg(n: usize, sbs: usize, seed: u64) -> SynthConfig {
    SynthConfig {
        n_publications: n,
        n_planted_sbs: sbs,
        seed,
        ..Default::default()
    }
}

#[test]
fn written_corpus_loads_and_validates_clean() {
    let dir = tempfile::tempdir().unwrap();
    let synth = generate(&SynthConfig {
        n_background_patents: 30,
        abstracts: true,
        ..cfg(3000, 20, 3)
    })
    .unwrap();
    synth.write(dir.path()).unwrap();
    let paths = CorpusPaths::in_dir(dir.path());
    let raw = RawCorpus::read(&paths).unwrap();
    assert!(validate_raw(&raw, LoadOptions::default().year_range).is_empty());
    let (corpus, report) = load_corpus(&paths, LoadOptions::strict()).unwrap();
    assert!(report.is_clean(), "{report:?}");
    assert!(corpus.validate().is_empty());
    assert_eq!(corpus.len(), 3000);
    assert_eq!(corpus.citation_count(), synth.edges.len());
    let truth = GroundTruth::read_manifest(&dir.path().join("manifest.jsonl")).unwrap();
    assert_eq!(truth, synth.truth);
}

#[test]
fn same_seed_gives_byte_identical_files() {
    let c = cfg(2000, 10, 9);
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    generate(&c).unwrap().write(a.path()).unwrap();
    generate(&c).unwrap().write(b.path()).unwrap();
    for f in ["publications.jsonl", "citations.jsonl", "patents.jsonl", "manifest.jsonl"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert!(x == y, "{f} differs");
    }
}

#[test]
fn snpr_fraction_and_lag_distribution() {
    let c = SynthConfig {
        n_publications: 60_000,
        n_planted_sbs: 1000,
        snpr_fraction: 0.2,
        ..Default::default()
    };
    let synth = generate(&c).unwrap();
    let corpus = synth.to_corpus().unwrap();
    let sbs = detect_sbs(&corpus, &SbParams::CANONICAL, &DetectOptions::default()).unwrap();
    assert!(sbs.len() >= 1000);
    let snprs = link_snprs(&corpus, &sbs);
    let frac = snprs.len() as f64 / sbs.len() as f64;
    assert!((frac - 0.2).abs() <= 0.02, "SNPR fraction {frac}");

    let lags: Vec<f64> = snprs.iter().map(|s| s.pcy as f64).collect();
    assert!(lags.len() >= 200);
    let sem = c.pcy_sd / (lags.len() as f64).sqrt();
    let m = mean(&lags).unwrap();
    let sd = sample_sd(&lags).unwrap();
    assert!((m - c.pcy_mean).abs() <= sem, "mean pcy {m}");
    assert!((sd - c.pcy_sd).abs() <= sem, "sd pcy {sd}");
}

#[test]
fn planted_inventor_authors_recovered_and_type1_families_cite() {
    let synth = generate(&SynthConfig {
        snpr_fraction: 1.0,
        inventor_author_plant_rate: 0.3,
        homonym_rate: 0.02,
        n_background_patents: 200,
        ..cfg(5000, 50, 21)
    })
    .unwrap();
    let corpus = synth.to_corpus().unwrap();
    let sbs = detect_sbs(&corpus, &SbParams::CANONICAL, &DetectOptions::default()).unwrap();
    let snprs = link_snprs(&corpus, &sbs);
    let matches = match_inventor_authors(&corpus, &snprs);
    for m in matches.iter().filter(|m| m.link_type == LinkType::SelfCitation) {
        let s = snprs.iter().find(|s| s.pub_id == m.pub_id).unwrap();
        for f in &m.family_ids {
            assert!(s.citing_family_ids.contains(f), "{} lists non-citing family {f}", m.pub_id);
        }
    }
    let planted: HashSet<(&str, &str)> = synth
        .truth
        .inventor_authors
        .iter()
        .map(|p| (p.pub_id.as_str(), p.family_id.as_str()))
        .collect();
    assert!(!planted.is_empty());
    for (pub_id, fam) in &planted {
        assert!(matches
            .iter()
            .any(|m| m.link_type == LinkType::SelfCitation && m.pub_id == *pub_id && m.family_ids.iter().any(|f| f == fam)));
    }
}

fn two_field_fixture(multi: bool) -> Corpus {
    // Two SBs with patents, one plain SB, and background papers. Codes 1
    // and 2 are distinct subject categories in the bundled table.
    let mut pubs = Vec::new();
    let mut edges = Vec::new();
    let fields: [&[u32]; 3] = [if multi { &[1, 2] } else { &[1] }, &[2], &[1]];
    for (k, f) in fields.iter().enumerate() {
        let id = format!("SB{k}");
        pubs.push(Publication::new(&id, 1990).with_fields(f.iter().copied()));
        for y in 2000..2010 {
            for j in 0..6 {
                let c = format!("C{k}-{y}-{j}");
                pubs.push(Publication::new(&c, y).with_fields([1]));
                edges.push((c, id.clone()));
            }
        }
    }
    let patents = (0..2)
        .map(|k| Patent {
            family_id: format!("F{k}"),
            patent_ids: vec![format!("US{k}")],
            title: String::new(),
            inventors: vec![],
            ipc_codes: vec![],
            application_year: 2005,
            npl_cited_ids: vec![format!("SB{k}")],
        })
        .collect();
    let er: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    Corpus::from_records(pubs, &er, patents).unwrap()
}

#[test]
fn representation_shares_sum_to_100_without_multi_field_papers() {
    for multi in [false, true] {
        let corpus = two_field_fixture(multi);
        let sbs = detect_sbs(&corpus, &SbParams::CANONICAL, &DetectOptions::default()).unwrap();
        assert_eq!(sbs.len(), 3);
        let snprs = link_snprs(&corpus, &sbs);
        let rows = representation(&corpus, &sbs, &snprs, &RepresentationOptions::default()).unwrap();
        let total: f64 = rows.iter().map(|r| r.share_snpr).sum();
        if multi {
            assert!(total > 100.0, "{total}");
        } else {
            assert!((total - 100.0).abs() < 1e-9, "{total}");
        }
    }
}
