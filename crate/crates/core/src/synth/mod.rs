//! Synthetic corpora with planted Sleeping Beauties, SNPR links and
//! inventor-author pairs.
//!
//! Background papers cite earlier papers through a mix of preferential
//! attachment and uniform choice with Poisson-distributed reference counts.
//! Planted SBs are never chosen as background targets; their citation series
//! is written year by year so that detection is exact rather than
//! statistical.

pub mod scenarios;

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, CorpusBuilder, LoadOptions, Patent, Publication};
use crate::error::{Error, Result};
use crate::sbdetect::SbParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub n_publications: usize,
    pub first_year: i32,
    pub last_year: i32,
    /// Yearly growth rate of publication output.
    pub growth_rate: f64,
    /// Mean number of references per background paper.
    pub mean_references: f64,
    /// Probability that a reference is drawn proportional to in-degree
    /// rather than uniformly.
    pub preferential_attachment: f64,
    pub n_planted_sbs: usize,
    /// Parameters the planted SBs must satisfy.
    pub params: SbParams,
    /// Intended mean citations per sleep year.
    pub planted_cs: f64,
    /// Intended mean citations per awake year.
    pub planted_ca: f64,
    /// Share of planted SBs that receive a citing patent family.
    pub snpr_fraction: f64,
    pub pcy_mean: f64,
    pub pcy_sd: f64,
    /// Share of planted SNPR families that list an SB author as inventor.
    pub inventor_author_plant_rate: f64,
    /// Probability that a generated person reuses an existing name.
    pub homonym_rate: f64,
    /// Background patent families citing random background papers.
    pub n_background_patents: usize,
    pub abstracts: bool,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_publications: 5_000,
            first_year: 1980,
            last_year: 2015,
            growth_rate: 0.05,
            mean_references: 10.0,
            preferential_attachment: 0.6,
            n_planted_sbs: 50,
            params: SbParams::CANONICAL,
            planted_cs: 0.5,
            planted_ca: 6.0,
            snpr_fraction: 0.2,
            pcy_mean: 11.9,
            pcy_sd: 3.9,
            inventor_author_plant_rate: 0.05,
            homonym_rate: 0.001,
            n_background_patents: 0,
            abstracts: false,
            seed: 42,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        for (name, v) in [
            ("preferential_attachment", self.preferential_attachment),
            ("snpr_fraction", self.snpr_fraction),
            ("inventor_author_plant_rate", self.inventor_author_plant_rate),
            ("homonym_rate", self.homonym_rate),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} must lie in [0, 1], got {v}"));
            }
        }
        if self.last_year < self.first_year {
            return Err(Error::EmptyYearRange(self.first_year, self.last_year));
        }
        if !(self.mean_references >= 0.0) || !(self.pcy_sd >= 0.0) || !self.growth_rate.is_finite() {
            return bad("mean_references and pcy_sd must be non-negative".into());
        }
        self.params.validate()?;
        if self.planted_cs > self.params.cs_max {
            return bad(format!(
                "planted_cs {} exceeds cs_max {}",
                self.planted_cs, self.params.cs_max
            ));
        }
        if self.planted_ca < self.params.ca_min {
            return bad(format!(
                "planted_ca {} is below ca_min {}",
                self.planted_ca, self.params.ca_min
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedSb {
    pub pub_id: String,
    pub year: i32,
    pub cs: f64,
    pub ca: f64,
    pub awakening_year: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedSnpr {
    pub pub_id: String,
    pub family_id: String,
    pub pcy: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedInventorAuthor {
    pub pub_id: String,
    pub family_id: String,
    pub name: String,
}

/// What the generator planted, for comparison against analysis output.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GroundTruth {
    pub sbs: Vec<PlantedSb>,
    pub snprs: Vec<PlantedSnpr>,
    pub inventor_authors: Vec<PlantedInventorAuthor>,
    pub n_publications: usize,
    pub n_citations: usize,
    pub n_patents: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ManifestLine {
    Counts {
        publications: usize,
        citations: usize,
        patents: usize,
    },
    PlantedSb(PlantedSb),
    PlantedSnpr(PlantedSnpr),
    InventorAuthor(PlantedInventorAuthor),
}

impl GroundTruth {
    pub fn write_manifest(&self, path: &Path) -> Result<()> {
        let mut lines = vec![ManifestLine::Counts {
            publications: self.n_publications,
            citations: self.n_citations,
            patents: self.n_patents,
        }];
        lines.extend(self.sbs.iter().cloned().map(ManifestLine::PlantedSb));
        lines.extend(self.snprs.iter().cloned().map(ManifestLine::PlantedSnpr));
        lines.extend(self.inventor_authors.iter().cloned().map(ManifestLine::InventorAuthor));
        let mut w = BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?);
        for l in &lines {
            serde_json::to_writer(&mut w, l).expect("manifest lines serialize");
            w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn read_manifest(path: &Path) -> Result<Self> {
        let f = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut truth = GroundTruth::default();
        for (i, line) in BufReader::new(f).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed: ManifestLine = serde_json::from_str(&line).map_err(|e| Error::Malformed {
                path: path.into(),
                line: i + 1,
                message: e.to_string(),
            })?;
            match parsed {
                ManifestLine::Counts {
                    publications,
                    citations,
                    patents,
                } => {
                    truth.n_publications = publications;
                    truth.n_citations = citations;
                    truth.n_patents = patents;
                }
                ManifestLine::PlantedSb(s) => truth.sbs.push(s),
                ManifestLine::PlantedSnpr(s) => truth.snprs.push(s),
                ManifestLine::InventorAuthor(s) => truth.inventor_authors.push(s),
            }
        }
        Ok(truth)
    }
}

/// A generated corpus. Edges are `(citing, cited)` positions into
/// `publications`, sorted and unique.
#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub publications: Vec<Publication>,
    pub edges: Vec<(u32, u32)>,
    pub patents: Vec<Patent>,
    pub truth: GroundTruth,
}

impl SynthCorpus {
    /// Writes `publications.jsonl`, `citations.jsonl`, `patents.jsonl` and
    /// `manifest.jsonl` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let pubs = dir.join("publications.jsonl");
        write_jsonl(&pubs, self.publications.iter())?;
        let cites = dir.join("citations.jsonl");
        let mut w = BufWriter::with_capacity(1 << 20, File::create(&cites).map_err(|e| Error::io(&cites, e))?);
        for &(a, b) in &self.edges {
            writeln!(
                w,
                "{{\"citing_id\":\"{}\",\"cited_id\":\"{}\"}}",
                self.publications[a as usize].id, self.publications[b as usize].id
            )
            .map_err(|e| Error::io(&cites, e))?;
        }
        w.flush().map_err(|e| Error::io(&cites, e))?;
        write_jsonl(&dir.join("patents.jsonl"), self.patents.iter())?;
        self.truth.write_manifest(&dir.join("manifest.jsonl"))
    }

    /// Builds the in-memory corpus directly, without touching disk.
    pub fn to_corpus(&self) -> Result<Corpus> {
        let mut b = CorpusBuilder::new(LoadOptions::strict());
        for p in &self.publications {
            b.add_publication(p.clone());
        }
        b.seal()?;
        for &(x, y) in &self.edges {
            b.add_citation(&self.publications[x as usize].id, &self.publications[y as usize].id)?;
        }
        for p in &self.patents {
            b.add_patent(p.clone())?;
        }
        Ok(b.build()?.0)
    }
}

fn write_jsonl<'a, T: Serialize + 'a>(path: &Path, items: impl Iterator<Item = &'a T>) -> Result<()> {
    let mut w = BufWriter::with_capacity(1 << 20, File::create(path).map_err(|e| Error::io(path, e))?);
    for item in items {
        serde_json::to_writer(&mut w, item).expect("records serialize");
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

const SYLLABLES: [&str; 16] = [
    "ka", "lo", "mi", "ne", "ru", "sa", "te", "vo", "ba", "di", "fe", "go", "hu", "ja", "pe", "zo",
];

const TOPICS: [&[&str]; 8] = [
    &["queue", "scheduling", "multihop", "wireless", "network", "throughput", "delay"],
    &["fiber", "taper", "optical", "coupler", "waveguide", "laser", "mode"],
    &["benzopyran", "carboxamide", "synthesis", "derivative", "coumarin", "activity", "ligand"],
    &["radar", "aperture", "squint", "chirp", "scaling", "imaging", "motion"],
    &["inverter", "parallel", "control", "converter", "power", "voltage", "grid"],
    &["particle", "dispersion", "turbulent", "flow", "deposition", "source", "plume"],
    &["protein", "enzyme", "binding", "kinetics", "membrane", "folding", "assay"],
    &["alloy", "creep", "deformation", "temperature", "grain", "stress", "fatigue"],
];

const GENERIC: [&str; 10] = [
    "analysis", "model", "design", "measurement", "theory", "simulation", "systems", "properties",
    "performance", "evaluation",
];

const COUNTRIES: [(&str, u32); 8] = [
    ("US", 34),
    ("JP", 10),
    ("DE", 8),
    ("GB", 7),
    ("FR", 6),
    ("CN", 5),
    ("IT", 4),
    ("NL", 2),
];

const IPC: [&str; 6] = ["G01S13/90", "H04L12/56", "A61K31/37", "G02B6/255", "H02M7/48", "G06T1/00"];

struct Names {
    people: Vec<String>,
}

impl Names {
    fn new(n: usize, homonym_rate: f64, rng: &mut ChaCha8Rng) -> Self {
        let mut people: Vec<String> = Vec::with_capacity(n);
        for i in 0..n {
            if i > 0 && rng.random_bool(homonym_rate) {
                let j = rng.random_range(0..i);
                let copy = people[j].clone();
                people.push(copy);
                continue;
            }
            let mut surname = String::new();
            let mut k = i;
            for _ in 0..4 {
                surname.push_str(SYLLABLES[k % 16]);
                k /= 16;
            }
            while k > 0 {
                surname.push_str(SYLLABLES[k % 16]);
                k /= 16;
            }
            let mut chars = surname.chars();
            let first = chars.next().unwrap().to_ascii_uppercase();
            let n_initials = rng.random_range(1..=2);
            let initials: Vec<String> = (0..n_initials)
                .map(|_| format!("{}.", (b'A' + rng.random_range(0..26u8)) as char))
                .collect();
            people.push(format!("{first}{}, {}", chars.as_str(), initials.join(" ")));
        }
        Names { people }
    }

    fn pick(&self, rng: &mut ChaCha8Rng, k: usize) -> Vec<String> {
        let mut out: Vec<String> = Vec::with_capacity(k);
        while out.len() < k.min(self.people.len()) {
            let p = &self.people[rng.random_range(0..self.people.len())];
            if !out.contains(p) {
                out.push(p.clone());
            }
        }
        out
    }
}

fn year_counts(cfg: &SynthConfig) -> Vec<usize> {
    let years = (cfg.last_year - cfg.first_year + 1) as usize;
    let weights: Vec<f64> = (0..years).map(|t| (cfg.growth_rate * t as f64).exp()).collect();
    let total: f64 = weights.iter().sum();
    let exact: Vec<f64> = weights.iter().map(|w| w / total * cfg.n_publications as f64).collect();
    let mut counts: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
    let mut rest: Vec<usize> = (0..years).collect();
    rest.sort_by(|&a, &b| {
        let fa = exact[a] - exact[a].floor();
        let fb = exact[b] - exact[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    let missing = cfg.n_publications - counts.iter().sum::<usize>();
    for &y in rest.iter().take(missing) {
        counts[y] += 1;
    }
    counts
}

fn title(rng: &mut ChaCha8Rng, topic: usize) -> String {
    let words = TOPICS[topic];
    let n = rng.random_range(3..=5);
    let mut picked: Vec<&str> = words.choose_multiple(rng, n).copied().collect();
    picked.push(GENERIC.choose(rng).unwrap());
    picked.shuffle(rng);
    let mut t = picked.join(" ");
    t[..1].make_ascii_uppercase();
    t
}

fn country(rng: &mut ChaCha8Rng) -> String {
    let total: u32 = COUNTRIES.iter().map(|c| c.1).sum();
    let mut x = rng.random_range(0..total);
    for (c, w) in COUNTRIES {
        if x < w {
            return c.to_string();
        }
        x -= w;
    }
    unreachable!()
}

/// Spreads `total` over `len` slots as evenly as possible, extra units in
/// randomly chosen slots.
fn spread(total: usize, len: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut out = vec![total / len; len];
    let mut slots: Vec<usize> = (0..len).collect();
    slots.shuffle(rng);
    for &s in slots.iter().take(total % len) {
        out[s] += 1;
    }
    out
}

/// Generates a corpus from `config`. Identical configs give identical output.
pub fn generate(config: &SynthConfig) -> Result<SynthCorpus> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.n_publications;
    let params = config.params;

    // Publications, in year order so that positions follow ids.
    let counts = year_counts(config);
    let width = n.to_string().len().max(7);
    let names = Names::new(n / 2 + 16, config.homonym_rate, &mut rng);
    let field_codes: Vec<u32> = crate::corpus::FieldTable::default().codes().collect();
    let mut publications = Vec::with_capacity(n);
    let mut year_start = Vec::with_capacity(counts.len() + 1);
    for (t, &c) in counts.iter().enumerate() {
        year_start.push(publications.len());
        let year = config.first_year + t as i32;
        for _ in 0..c {
            let i = publications.len();
            let topic = rng.random_range(0..TOPICS.len());
            let n_authors = rng.random_range(1..=3);
            let n_fields = if rng.random_bool(0.15) { 2 } else { 1 };
            let mut p = Publication::new(format!("P{i:0width$}"), year)
                .with_title(title(&mut rng, topic))
                .with_authors(names.pick(&mut rng, n_authors))
                .with_fields(field_codes.choose_multiple(&mut rng, n_fields).copied())
                .with_countries([country(&mut rng)]);
            if config.abstracts {
                p = p.with_abstract(format!("{} {}", title(&mut rng, topic), title(&mut rng, topic)));
            }
            publications.push(p);
        }
    }
    year_start.push(publications.len());
    let year_range = |y: i32| {
        let t = (y - config.first_year) as usize;
        year_start[t]..year_start[t + 1]
    };

    // Planted SBs, chosen among papers old enough for a full awake window.
    let s = params.sleep as i32;
    let a = params.awake_max as i32;
    let latest = config.last_year - s - a + 1;
    let mut planted: Vec<usize> = Vec::new();
    if config.n_planted_sbs > 0 {
        if latest < config.first_year {
            return Err(Error::Infeasible(format!(
                "year span {}..={} is shorter than sleep + awake ({} years)",
                config.first_year,
                config.last_year,
                s + a
            )));
        }
        let eligible = year_start[(latest - config.first_year) as usize + 1];
        if eligible < config.n_planted_sbs {
            return Err(Error::Infeasible(format!(
                "{} SBs requested but only {eligible} publications are old enough",
                config.n_planted_sbs
            )));
        }
        planted = rand::seq::index::sample(&mut rng, eligible, config.n_planted_sbs).into_vec();
        planted.sort_unstable();
    }
    let mut is_planted = vec![false; n];
    for &p in &planted {
        is_planted[p] = true;
    }

    // Background citations.
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity((n as f64 * config.mean_references * 1.05) as usize);
    let mut urn: Vec<u32> = Vec::with_capacity(edges.capacity());
    let poisson = (config.mean_references > 0.0).then(|| Poisson::new(config.mean_references).unwrap());
    let mut refs: Vec<u32> = Vec::new();
    let mut targets_before = 0usize;
    for i in 0..n {
        let k = poisson.as_ref().map_or(0, |d| d.sample(&mut rng) as usize);
        let k = k.min(targets_before);
        refs.clear();
        let mut attempts = 0;
        while refs.len() < k && attempts < 20 * k + 20 {
            attempts += 1;
            let t = if !urn.is_empty() && rng.random_bool(config.preferential_attachment) {
                urn[rng.random_range(0..urn.len())]
            } else {
                rng.random_range(0..i as u32)
            };
            if !is_planted[t as usize] && !refs.contains(&t) {
                refs.push(t);
            }
        }
        refs.sort_unstable();
        for &t in &refs {
            edges.push((i as u32, t));
            urn.push(t);
        }
        if !is_planted[i] {
            targets_before += 1;
        }
    }
    drop(urn);

    // Planted citation series.
    let threshold = params.ca_min.ceil() as usize;
    let sleep_total = (config.planted_cs * s as f64).round() as usize;
    let awake_total = (config.planted_ca * a as f64).round() as usize;
    if sleep_total.div_ceil(s as usize) >= threshold.max(1) {
        return Err(Error::Infeasible("sleep citations would reach the awakening threshold".into()));
    }
    if awake_total / (a as usize) < threshold {
        return Err(Error::Infeasible(format!(
            "planted_ca {} cannot keep every awake year at {threshold} citations",
            config.planted_ca
        )));
    }
    let mut truth = GroundTruth::default();
    let mut extra: Vec<(u32, u32)> = Vec::new();
    for &sb in &planted {
        let y = publications[sb].year;
        let authors: HashSet<&str> = publications[sb].authors.iter().map(String::as_str).collect();
        let profile: Vec<usize> = spread(sleep_total, s as usize, &mut rng)
            .into_iter()
            .chain(spread(awake_total, a as usize, &mut rng))
            .collect();
        for (offset, &count) in profile.iter().enumerate() {
            let year = y + offset as i32;
            let pool: Vec<usize> = year_range(year)
                .filter(|&c| c != sb && !publications[c].authors.iter().any(|n| authors.contains(n.as_str())))
                .collect();
            if pool.len() < count {
                return Err(Error::Infeasible(format!(
                    "{year} has {} eligible citers, {count} needed for planted SB {}",
                    pool.len(),
                    publications[sb].id
                )));
            }
            for &c in pool.choose_multiple(&mut rng, count) {
                extra.push((c as u32, sb as u32));
            }
        }
        truth.sbs.push(PlantedSb {
            pub_id: publications[sb].id.clone(),
            year: y,
            cs: sleep_total as f64 / s as f64,
            ca: awake_total as f64 / a as f64,
            awakening_year: y + s,
        });
    }
    edges.extend(extra);
    edges.sort_unstable();
    edges.dedup();

    // Patent families.
    let mut patents: Vec<Patent> = Vec::new();
    let n_snpr = (config.snpr_fraction * planted.len() as f64).round() as usize;
    let mut snpr_sbs: Vec<usize> = planted.choose_multiple(&mut rng, n_snpr).copied().collect();
    snpr_sbs.sort_unstable();
    let lag = Normal::new(config.pcy_mean, config.pcy_sd).map_err(|e| Error::InvalidParams(e.to_string()))?;
    let mut family_no = 0usize;
    let mut new_family = |rng: &mut ChaCha8Rng, year: i32, cites: Vec<String>, inventors: Vec<String>| {
        family_no += 1;
        let members = rng.random_range(1..=3);
        let topic = rng.random_range(0..TOPICS.len());
        Patent {
            family_id: format!("F{family_no:07}"),
            patent_ids: (0..members)
                .map(|m| format!("{}{year}{family_no:07}{m}", ["US", "EP", "WO"][m]))
                .collect(),
            title: title(rng, topic),
            inventors,
            ipc_codes: vec![IPC.choose(rng).unwrap().to_string()],
            application_year: year,
            npl_cited_ids: cites,
        }
    };
    for &sb in &snpr_sbs {
        let p = &publications[sb];
        let max_lag = config.last_year - p.year;
        let pcy = (lag.sample(&mut rng).round() as i32).clamp(0, max_lag);
        let n_inventors = rng.random_range(1..=3);
        let mut inventors = names.pick(&mut rng, n_inventors);
        let plant = !p.authors.is_empty() && rng.random_bool(config.inventor_author_plant_rate);
        let family = if plant {
            let name = p.authors.choose(&mut rng).unwrap().clone();
            inventors.retain(|n| *n != name);
            inventors.push(name.clone());
            let f = new_family(&mut rng, p.year + pcy, vec![p.id.clone()], inventors);
            truth.inventor_authors.push(PlantedInventorAuthor {
                pub_id: p.id.clone(),
                family_id: f.family_id.clone(),
                name,
            });
            f
        } else {
            new_family(&mut rng, p.year + pcy, vec![p.id.clone()], inventors)
        };
        truth.snprs.push(PlantedSnpr {
            pub_id: p.id.clone(),
            family_id: family.family_id.clone(),
            pcy,
        });
        patents.push(family);
    }
    for _ in 0..config.n_background_patents {
        if n == planted.len() {
            break;
        }
        let cited = loop {
            let c = rng.random_range(0..n);
            if !is_planted[c] {
                break c;
            }
        };
        let year = rng.random_range(publications[cited].year..=config.last_year);
        let n_inventors = rng.random_range(1..=3);
        let inventors = names.pick(&mut rng, n_inventors);
        patents.push(new_family(&mut rng, year, vec![publications[cited].id.clone()], inventors));
    }

    truth.n_publications = publications.len();
    truth.n_citations = edges.len();
    truth.n_patents = patents.len();
    Ok(SynthCorpus {
        publications,
        edges,
        patents,
        truth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sbdetect::{detect_sbs, DetectOptions};

    fn small() -> SynthConfig {
        SynthConfig {
            n_publications: 3_000,
            n_planted_sbs: 20,
            snpr_fraction: 0.5,
            inventor_author_plant_rate: 0.5,
            ..Default::default()
        }
    }

    #[test]
    fn empty_config_gives_empty_corpus() {
        let out = generate(&SynthConfig {
            n_publications: 0,
            n_planted_sbs: 0,
            ..Default::default()
        })
        .unwrap();
        assert!(out.publications.is_empty() && out.edges.is_empty() && out.truth.sbs.is_empty());
    }

    #[test]
    fn same_seed_same_corpus() {
        let a = generate(&small()).unwrap();
        let b = generate(&small()).unwrap();
        assert_eq!(a.publications, b.publications);
        assert_eq!(a.edges, b.edges);
        assert_eq!(a.truth, b.truth);
        let c = generate(&SynthConfig { seed: 7, ..small() }).unwrap();
        assert_ne!(a.edges, c.edges);
    }

    #[test]
    fn planted_sbs_are_detected() {
        let out = generate(&small()).unwrap();
        let corpus = out.to_corpus().unwrap();
        assert!(corpus.validate().is_empty());
        let found = detect_sbs(&corpus, &SbParams::CANONICAL, &DetectOptions::default()).unwrap();
        let ids: HashSet<&str> = found.iter().map(|r| r.pub_id.as_str()).collect();
        for sb in &out.truth.sbs {
            assert!(ids.contains(sb.pub_id.as_str()), "{} missed", sb.pub_id);
            let rec = found.iter().find(|r| r.pub_id == sb.pub_id).unwrap();
            assert_eq!(rec.awakening_year, Some(sb.awakening_year));
            assert!((rec.cs - sb.cs).abs() < 1e-12 && (rec.ca - sb.ca).abs() < 1e-12);
        }
        assert_eq!(out.truth.snprs.len(), 10);
    }

    #[test]
    fn infeasible_configs_rejected() {
        let short = SynthConfig {
            first_year: 2000,
            last_year: 2010,
            ..small()
        };
        assert!(matches!(generate(&short), Err(Error::Infeasible(_))));
        let tiny = SynthConfig {
            n_publications: 200,
            ..small()
        };
        assert!(matches!(generate(&tiny), Err(Error::Infeasible(_))));
        let weak = SynthConfig {
            planted_ca: 4.0,
            ..small()
        };
        assert!(matches!(generate(&weak), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn manifest_round_trip() {
        let out = generate(&small()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        out.write(dir.path()).unwrap();
        let back = GroundTruth::read_manifest(&dir.path().join("manifest.jsonl")).unwrap();
        assert_eq!(back, out.truth);
    }
}
