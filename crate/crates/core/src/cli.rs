//! The `sbcite` command line: one subcommand per analysis, a shared TOML
//! config (flags win over the file) and CSV or graph-file outputs.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{RunConfig, CONFIG_ENV};
use crate::corpus::{load_corpus, validate_raw, Corpus, FieldFilter, RawCorpus};
use crate::error::{Error, Result};
use crate::namematch::{match_inventor_authors, LinkType};
use crate::netgraph::{
    bibcoupling_graph, cocitation_graph, early_citer_subnet, early_citers, export_graph, parse_edgelist,
    rank_princes, render_graph, CocitationOptions, CouplingWeight, GraphFormat, PrinceConfig, WeightedGraph,
};
use crate::patentlink::{
    cohort_lag_stats, lag_vs_awake_scatter, link_snprs, representation, RepresentationKey, RepresentationOptions,
    SnprRecord,
};
use crate::sbdetect::{
    awakening_year, cohort_cs_ca_stats, cs_ca_correlation, detect_sbs, AwakeningRule, DetectOptions, SbRecord,
};
use crate::series::{Bucketing, YearSeries};
use crate::synth::generate;
use crate::textmine::{
    concept_graph, fit_exponential, matching_publications, topic_timeline, ConceptOptions, EdgeNormalization, Query,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sbcite", version, about = "Sleeping Beauty detection and patent citation analysis")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML run configuration
    #[arg(long, global = true, env = CONFIG_ENV, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Corpus directory with publications.jsonl, citations.jsonl and patents.jsonl
    #[arg(long, global = true, value_name = "DIR")]
    pub data: Option<PathBuf>,
    /// Treat dangling references and out-of-range years as errors
    #[arg(long, global = true)]
    pub strict: bool,
    /// Output file (directory for `synth`); defaults to stdout or the configured output_dir
    #[arg(short, long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Log warnings and progress to stderr
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a corpus and print record counts and ingestion warnings
    Ingest,
    /// Check corpus files against the data invariants (exit 2 on violations)
    Validate,
    /// Detect Sleeping Beauties; one CSV row per SB
    DetectSb(SbArgs),
    /// Detect SBs and list those cited by patent families (SB-SNPRs)
    LinkPatents(SbArgs),
    /// Mean, sample SD and most extreme year of the patent citation lag per cohort
    LagStats {
        #[command(flatten)]
        sb: SbArgs,
        #[command(flatten)]
        bucket: BucketArgs,
    },
    /// Field or country shares of SB-SNPRs, SBs and all publications
    Representation {
        #[command(flatten)]
        sb: SbArgs,
        /// `field` or `country`
        #[arg(long, default_value = "field")]
        key: RepresentationKey,
        /// Main field restricting the publication denominator, or `all`
        #[arg(long, default_value = "all")]
        scope: String,
    },
    /// cs and ca statistics per cohort
    CohortStats {
        #[command(flatten)]
        sb: SbArgs,
        #[command(flatten)]
        bucket: BucketArgs,
        /// Separate rows for SB-SNPRs and other SBs
        #[arg(long)]
        split_snpr: bool,
    },
    /// Pearson correlation of cs with ca, or of pcy with awake citations
    Correlate {
        #[command(flatten)]
        sb: SbArgs,
        /// `cs-ca` or `pcy-ca`
        #[arg(long, default_value = "cs-ca")]
        pair: String,
    },
    /// Authors of SB-SNPRs who are also patent inventors
    InventorAuthor {
        #[command(flatten)]
        sb: SbArgs,
        /// Keep only link type 1 (citing family) or 2 (other family)
        #[arg(long, value_name = "1|2")]
        link_type: Option<u8>,
    },
    /// Awakening year of given publications, or of every detected SB
    Awakening {
        #[command(flatten)]
        sb: SbArgs,
        /// Publication id (repeatable)
        #[arg(long)]
        id: Vec<String>,
        /// Citations per year marking the awakening (default: ca_min)
        #[arg(long)]
        threshold: Option<f64>,
        /// Years whose mean must reach the threshold (default 2)
        #[arg(long)]
        persistence: Option<u32>,
    },
    /// Co-citation network over a set of publications
    Cocite {
        #[command(flatten)]
        nodes: NodeSetArgs,
        /// Minimum co-citation count for an edge (default 1)
        #[arg(long)]
        min_weight: Option<u32>,
        /// Keep nodes without edges
        #[arg(long)]
        keep_isolates: bool,
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Bibliographic coupling network over a set of publications
    Bibcouple {
        #[command(flatten)]
        nodes: NodeSetArgs,
        /// Minimum number of shared references for an edge (default 1)
        #[arg(long)]
        min_shared: Option<u32>,
        /// Weight edges by cosine similarity of reference lists
        #[arg(long)]
        cosine: bool,
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Citation subnetwork of an SB and its earliest citers
    EarlyCiters {
        /// SB publication id
        #[arg(long)]
        id: String,
        /// Number of earliest citers (default 25)
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Rank highly cited early citers as candidate princes
    Princes {
        #[command(flatten)]
        sb: SbArgs,
        /// SB id (repeatable); defaults to every detected SB
        #[arg(long)]
        id: Vec<String>,
        /// Minimum citations of a candidate (default 100)
        #[arg(long)]
        c_min: Option<u64>,
        /// Number of earliest citers considered (default 25)
        #[arg(long)]
        k: Option<usize>,
        /// Use this awakening year instead of detecting one
        #[arg(long)]
        awakening_year: Option<i32>,
        /// Drop candidates sharing an author with the SB
        #[arg(long)]
        exclude_self_citing: bool,
    },
    /// Yearly count of publications matching a boolean topic query
    TopicTimeline {
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Concept co-occurrence map with clusters over titles and abstracts
    Concepts {
        #[command(flatten)]
        query: OptQueryArgs,
        /// Minimum document frequency of a term (default 10)
        #[arg(long)]
        min_occurrences: Option<usize>,
        /// Longest n-gram (default 3)
        #[arg(long, default_value_t = 3)]
        max_gram: usize,
        /// Association-strength edge weights instead of raw counts
        #[arg(long)]
        association: bool,
        /// Seed for cluster detection (default: config seed, 42)
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the concept graph here
        #[arg(long, value_name = "FILE")]
        graph_out: Option<PathBuf>,
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Exponential growth fit of a yearly series
    FitGrowth {
        /// `year,count` CSV to fit; otherwise a topic query is counted
        #[arg(long, value_name = "FILE", conflicts_with = "query")]
        series: Option<PathBuf>,
        #[command(flatten)]
        query: OptQueryArgs,
    },
    /// Generate a synthetic corpus with planted SBs and its ground-truth manifest
    Synth {
        /// Random seed (default: `[synth] seed`, 42)
        #[arg(long)]
        seed: Option<u64>,
        /// Number of publications (default 5000)
        #[arg(long)]
        n_publications: Option<usize>,
        /// Number of planted SBs (default 50)
        #[arg(long)]
        planted_sbs: Option<usize>,
    },
    /// Convert an edge-list graph file to another format
    ExportGraph {
        /// Edge-list file written by a graph subcommand
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[command(flatten)]
        graph: GraphArgs,
    },
}

#[derive(Debug, Args, Clone, Default)]
pub struct SbArgs {
    /// Sleep length in years (default 10)
    #[arg(long)]
    pub sleep: Option<u32>,
    /// Maximum mean citations per sleep year (default 1.0)
    #[arg(long)]
    pub cs_max: Option<f64>,
    /// Shortest awake window accepted with --clip-awake (default 10)
    #[arg(long)]
    pub awake_min: Option<u32>,
    /// Awake window length in years (default 10)
    #[arg(long)]
    pub awake_max: Option<u32>,
    /// Minimum mean citations per awake year (default 5.0)
    #[arg(long)]
    pub ca_min: Option<f64>,
    /// First publication year searched (default: corpus start)
    #[arg(long)]
    pub from: Option<i32>,
    /// Last publication year searched (default: corpus end)
    #[arg(long)]
    pub to: Option<i32>,
    /// Main field to search, or `all` (default all)
    #[arg(long)]
    pub field: Option<String>,
    /// Count citations from papers sharing an author
    #[arg(long)]
    pub include_self_citations: bool,
    /// Evaluate recent papers on a shortened awake window
    #[arg(long)]
    pub clip_awake: bool,
    /// Last year with citation data (default: latest publication year)
    #[arg(long)]
    pub horizon: Option<i32>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct BucketArgs {
    /// Cohort width in publication years (default 3)
    #[arg(long)]
    pub bucket: Option<u32>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct NodeSetArgs {
    /// Publication ids, comma separated
    #[arg(long, value_delimiter = ',')]
    pub ids: Vec<String>,
    /// File with one publication id per line
    #[arg(long, value_name = "FILE")]
    pub ids_file: Option<PathBuf>,
    /// Use this SB and its earliest citers as the node set
    #[arg(long, value_name = "ID")]
    pub early_citers_of: Option<String>,
    /// Number of earliest citers with --early-citers-of (default 25)
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args, Clone)]
pub struct GraphArgs {
    /// graphml, dot or edgelist
    #[arg(long, default_value = "edgelist")]
    pub format: GraphFormat,
}

#[derive(Debug, Args, Clone)]
pub struct QueryArgs {
    /// Boolean query, e.g. `queu* AND (multihop* OR "multi hop") AND network*`
    #[arg(long)]
    pub query: String,
    #[arg(long)]
    pub from: Option<i32>,
    #[arg(long)]
    pub to: Option<i32>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct OptQueryArgs {
    /// Boolean query selecting documents (default: all)
    #[arg(long)]
    pub query: Option<String>,
    /// First year (default: corpus start)
    #[arg(long)]
    pub from: Option<i32>,
    /// Last year (default: corpus end)
    #[arg(long)]
    pub to: Option<i32>,
}

/// Parses `args` (including the program name) and runs the subcommand,
/// printing diagnostics to stderr. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let level = if cli.global.verbose { "info" } else { "error" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("sbcite: {e}");
            if e.is_usage() {
                EXIT_USAGE
            } else {
                EXIT_DATA
            }
        }
    }
}

struct Ctx<'a> {
    cfg: RunConfig,
    global: &'a GlobalArgs,
}

impl Ctx<'_> {
    fn load(&self) -> Result<Corpus> {
        let paths = self.cfg.corpus_paths()?;
        let (corpus, report) = load_corpus(&paths, self.cfg.load_options()?)?;
        for w in &report.warnings {
            log::warn!("{w}");
        }
        Ok(corpus)
    }

    /// Output target: `--out`, else `output_dir/<name>`, else stdout.
    fn sink(&self, name: &str) -> Result<Box<dyn Write>> {
        let path = match (&self.global.out, &self.cfg.output_dir) {
            (Some(p), _) => Some(p.clone()),
            (None, Some(d)) => {
                std::fs::create_dir_all(d).map_err(|e| Error::io(d, e))?;
                Some(d.join(name))
            }
            (None, None) => None,
        };
        Ok(match path {
            Some(p) => {
                let f = File::create(&p).map_err(|e| Error::io(&p, e))?;
                Box::new(BufWriter::new(f))
            }
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn write_csv<R: Serialize>(&self, name: &str, rows: impl IntoIterator<Item = R>) -> Result<()> {
        self.write_csv_with_header(name, None, rows)
    }

    /// Like `write_csv`, but emits `header` even when there are no rows.
    fn write_csv_with_header<R: Serialize>(
        &self,
        name: &str,
        header: Option<&[&str]>,
        rows: impl IntoIterator<Item = R>,
    ) -> Result<()> {
        let sink = self.sink(name)?;
        let mut w = csv::WriterBuilder::new().has_headers(header.is_none()).from_writer(sink);
        if let Some(h) = header {
            w.write_record(h).map_err(csv_err)?;
        }
        for r in rows {
            w.serialize(r).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::io(name, e))
    }

    fn write_graph(&self, name: &str, graph: &WeightedGraph, format: GraphFormat) -> Result<()> {
        let mut sink = self.sink(&format!("{name}.{}", extension(format)))?;
        sink.write_all(render_graph(graph, format).as_bytes())
            .and_then(|_| sink.flush())
            .map_err(|e| Error::io(name, e))
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::io("<output>", e),
        other => Error::InvalidRecord(format!("{other:?}")),
    }
}

fn extension(format: GraphFormat) -> &'static str {
    match format {
        GraphFormat::GraphMl => "graphml",
        GraphFormat::Dot => "dot",
        GraphFormat::EdgeList => "tsv",
    }
}

fn build_config(global: &GlobalArgs) -> Result<RunConfig> {
    let mut cfg = match &global.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(d) = &global.data {
        cfg.corpus.dir = Some(d.clone());
        cfg.corpus.publications = None;
        cfg.corpus.citations = None;
        cfg.corpus.patents = None;
    }
    if global.strict {
        cfg.corpus.strict = true;
    }
    Ok(cfg)
}

impl SbArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        let sb = &mut cfg.sb;
        if let Some(v) = self.sleep {
            sb.sleep = v;
        }
        if let Some(v) = self.cs_max {
            sb.cs_max = v;
        }
        if let Some(v) = self.awake_max {
            sb.awake_max = v;
            if self.awake_min.is_none() && sb.awake_min > v {
                sb.awake_min = v;
            }
        }
        if let Some(v) = self.awake_min {
            sb.awake_min = v;
        }
        if let Some(v) = self.ca_min {
            sb.ca_min = v;
        }
        let d = &mut cfg.detect;
        d.include_self_citations |= self.include_self_citations;
        d.clip_awake |= self.clip_awake;
        if self.horizon.is_some() {
            d.horizon = self.horizon;
        }
    }

    fn options(&self, cfg: &RunConfig, corpus: &Corpus) -> Result<DetectOptions> {
        let pub_years = match (self.from, self.to) {
            (None, None) => None,
            (from, to) => {
                let (lo, hi) = corpus.span().unwrap_or((0, -1));
                Some(from.unwrap_or(lo)..=to.unwrap_or(hi))
            }
        };
        Ok(DetectOptions {
            pub_years,
            field: FieldFilter::parse(self.field.as_deref().unwrap_or("all")),
            include_self_citations: cfg.detect.include_self_citations,
            horizon: cfg.detect.horizon,
            clip_awake: cfg.detect.clip_awake,
            awakening: AwakeningRule {
                threshold: cfg.detect.awakening_threshold,
                persistence: cfg.detect.awakening_persistence,
            },
        })
    }
}

/// Loads the corpus and runs detection with file + flag parameters.
fn detect(ctx: &mut Ctx, sb: &SbArgs) -> Result<(Corpus, Vec<SbRecord>, DetectOptions)> {
    sb.apply(&mut ctx.cfg);
    for w in ctx.cfg.validate()? {
        eprintln!("sbcite: warning: {w}");
    }
    let corpus = ctx.load()?;
    let opts = sb.options(&ctx.cfg, &corpus)?;
    let sbs = detect_sbs(&corpus, &ctx.cfg.sb, &opts)?;
    log::info!("{} SBs detected", sbs.len());
    Ok((corpus, sbs, opts))
}

fn bucketing(ctx: &Ctx, bucket: &BucketArgs, opts: &DetectOptions, corpus: &Corpus) -> Result<Bucketing> {
    let width = bucket.bucket.unwrap_or(ctx.cfg.bucket_years);
    let years = match &opts.pub_years {
        Some(r) => r.clone(),
        None => {
            let (lo, hi) = corpus
                .span()
                .ok_or_else(|| Error::InsufficientData("corpus has no publications".into()))?;
            lo..=hi
        }
    };
    Bucketing::new(years, width)
}

fn year_range(corpus: &Corpus, from: Option<i32>, to: Option<i32>) -> Result<RangeInclusive<i32>> {
    let span = corpus.span();
    let lo = from.or(span.map(|s| s.0));
    let hi = to.or(span.map(|s| s.1));
    match (lo, hi) {
        (Some(lo), Some(hi)) if lo <= hi => Ok(lo..=hi),
        (Some(lo), Some(hi)) => Err(Error::EmptyYearRange(lo, hi)),
        _ => Err(Error::InsufficientData("corpus has no publications".into())),
    }
}

#[derive(Serialize)]
struct SbRow<'a> {
    pub_id: &'a str,
    pub_year: i32,
    sleep_start: i32,
    sleep_end: i32,
    awake_start: i32,
    awake_end: i32,
    sleep_total: u64,
    awake_total: u64,
    cs: f64,
    ca: f64,
    depth: &'static str,
    awakening_year: Option<i32>,
}

impl<'a> From<&'a SbRecord> for SbRow<'a> {
    fn from(r: &'a SbRecord) -> Self {
        SbRow {
            pub_id: &r.pub_id,
            pub_year: r.pub_year,
            sleep_start: r.sleep_window.0,
            sleep_end: r.sleep_window.1,
            awake_start: r.awake_window.0,
            awake_end: r.awake_window.1,
            sleep_total: r.sleep_total,
            awake_total: r.awake_total,
            cs: r.cs,
            ca: r.ca,
            depth: r.depth.as_str(),
            awakening_year: r.awakening_year,
        }
    }
}

const SB_HEADER: &[&str] = &[
    "pub_id",
    "pub_year",
    "sleep_start",
    "sleep_end",
    "awake_start",
    "awake_end",
    "sleep_total",
    "awake_total",
    "cs",
    "ca",
    "depth",
    "awakening_year",
];

#[derive(Serialize)]
struct SnprRow<'a> {
    pub_id: &'a str,
    pub_year: i32,
    n_families: usize,
    first_citation_year: i32,
    pcy: i32,
    citing_family_ids: String,
}

const SNPR_HEADER: &[&str] = &["pub_id", "pub_year", "n_families", "first_citation_year", "pcy", "citing_family_ids"];

impl<'a> From<&'a SnprRecord> for SnprRow<'a> {
    fn from(r: &'a SnprRecord) -> Self {
        SnprRow {
            pub_id: &r.pub_id,
            pub_year: r.pub_year,
            n_families: r.n_families,
            first_citation_year: r.first_citation_year,
            pcy: r.pcy,
            citing_family_ids: r.citing_family_ids.join(";"),
        }
    }
}

#[derive(Serialize)]
struct CsCaCsvRow {
    period: String,
    class: &'static str,
    n: usize,
    cs_mean: Option<f64>,
    cs_sd: Option<f64>,
    ca_mean: Option<f64>,
    ca_sd: Option<f64>,
}

#[derive(Serialize)]
struct CorrelationRow<'a> {
    pair: &'a str,
    n: usize,
    r: f64,
}

#[derive(Serialize)]
struct MatchRow {
    pub_id: String,
    link_type: u8,
    name: String,
    family_ids: String,
}

#[derive(Serialize)]
struct AwakeningRow<'a> {
    pub_id: &'a str,
    pub_year: i32,
    awakening_year: Option<i32>,
}

#[derive(Serialize)]
struct PrinceRow<'a> {
    sb_id: &'a str,
    rank: usize,
    pub_id: String,
    year: i32,
    own_citations: u64,
    earliness: i32,
    cocite_weight: u64,
    coupling: u64,
    score: f64,
    early_passing_prince: bool,
    self_citing: bool,
}

#[derive(Serialize)]
struct YearCountRow {
    year: i32,
    count: u64,
}

#[derive(Serialize)]
struct FitRow {
    exponent: f64,
    amplitude: f64,
    r_squared: f64,
    origin: i32,
    n_years: usize,
    doubling_time: Option<f64>,
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    key: &'a str,
    value: usize,
}

fn node_set(corpus: &Corpus, args: &NodeSetArgs, default_k: usize) -> Result<Vec<String>> {
    let mut ids = args.ids.clone();
    if let Some(p) = &args.ids_file {
        let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
        ids.extend(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from));
    }
    if let Some(sb) = &args.early_citers_of {
        let idx = corpus.idx(sb).ok_or_else(|| Error::UnknownPublication(sb.clone()))?;
        ids.push(sb.clone());
        ids.extend(
            early_citers(corpus, idx, args.k.unwrap_or(default_k))
                .into_iter()
                .map(|i| corpus.publication(i).id.clone()),
        );
    }
    if ids.is_empty() {
        return Err(Error::InvalidParams(
            "no node set given: use --ids, --ids-file or --early-citers-of".into(),
        ));
    }
    ids.sort();
    ids.dedup();
    Ok(ids)
}

fn documents(corpus: &Corpus, q: &OptQueryArgs) -> Result<Vec<String>> {
    let years = year_range(corpus, q.from, q.to)?;
    Ok(match &q.query {
        Some(text) => {
            let query = Query::parse(text)?;
            matching_publications(corpus, &query, years)
                .iter()
                .map(|id| corpus.get(id).expect("matched id exists").text())
                .collect()
        }
        None => corpus
            .publications_in(years)
            .iter()
            .map(|&i| corpus.publication(i).text())
            .collect(),
    })
}

fn execute(cli: &Cli) -> Result<i32> {
    let cfg = build_config(&cli.global)?;
    let mut ctx = Ctx { cfg, global: &cli.global };
    match &cli.command {
        Command::Ingest => {
            let paths = ctx.cfg.corpus_paths()?;
            let (corpus, report) = load_corpus(&paths, ctx.cfg.load_options()?)?;
            for w in &report.warnings {
                eprintln!("sbcite: warning: {w}");
            }
            let (lo, hi) = corpus.span().unwrap_or((0, 0));
            let rows = [
                ("publications", corpus.len()),
                ("citations", corpus.citation_count()),
                ("patent_families", corpus.patents().len()),
                ("first_year", lo as usize),
                ("last_year", hi as usize),
                ("dangling_citations", report.dangling_citations),
                ("self_loops", report.self_loops),
                ("duplicate_citations", report.duplicate_citations),
                ("filtered_citations", report.filtered_citations),
                ("dangling_npl", report.dangling_npl),
                ("year_outliers", report.year_outliers),
                ("dropped_names", report.dropped_names),
            ];
            ctx.write_csv(
                "ingest.csv",
                rows.iter().map(|&(key, value)| SummaryRow { key, value }),
            )?;
        }
        Command::Validate => {
            let paths = ctx.cfg.corpus_paths()?;
            let raw = RawCorpus::read(&paths)?;
            let opts = ctx.cfg.load_options()?;
            let report = validate_raw(&raw, opts.year_range);
            let mut sink = ctx.sink("validate.txt")?;
            for v in &report.violations {
                writeln!(sink, "{v}").map_err(|e| Error::io("<output>", e))?;
            }
            sink.flush().map_err(|e| Error::io("<output>", e))?;
            if !report.is_empty() {
                eprintln!("sbcite: {} invariant violations", report.len());
                return Ok(EXIT_DATA);
            }
        }
        Command::DetectSb(sb) => {
            let (_, sbs, _) = detect(&mut ctx, sb)?;
            ctx.write_csv_with_header("sbs.csv", Some(SB_HEADER), sbs.iter().map(SbRow::from))?;
        }
        Command::LinkPatents(sb) => {
            let (corpus, sbs, _) = detect(&mut ctx, sb)?;
            let snprs = link_snprs(&corpus, &sbs);
            ctx.write_csv_with_header("snprs.csv", Some(SNPR_HEADER), snprs.iter().map(SnprRow::from))?;
        }
        Command::LagStats { sb, bucket } => {
            let (corpus, sbs, opts) = detect(&mut ctx, sb)?;
            let buckets = bucketing(&ctx, bucket, &opts, &corpus)?;
            let snprs = link_snprs(&corpus, &sbs);
            ctx.write_csv("lag_stats.csv", cohort_lag_stats(&snprs, &buckets))?;
        }
        Command::Representation { sb, key, scope } => {
            let (corpus, sbs, opts) = detect(&mut ctx, sb)?;
            let snprs = link_snprs(&corpus, &sbs);
            let rows = representation(
                &corpus,
                &sbs,
                &snprs,
                &RepresentationOptions {
                    key: *key,
                    scope: FieldFilter::parse(scope),
                    pub_years: opts.pub_years.clone(),
                },
            )?;
            ctx.write_csv_with_header(
                "representation.csv",
                Some(&[
                    "key",
                    "n_snpr",
                    "share_snpr",
                    "share_sb",
                    "share_pubs",
                    "ratio_snpr_vs_pubs",
                    "ratio_sb_vs_pubs",
                ]),
                rows,
            )?;
        }
        Command::CohortStats { sb, bucket, split_snpr } => {
            let (corpus, sbs, opts) = detect(&mut ctx, sb)?;
            let buckets = bucketing(&ctx, bucket, &opts, &corpus)?;
            let snprs = split_snpr.then(|| link_snprs(&corpus, &sbs));
            let rows = cohort_cs_ca_stats(&sbs, &buckets, snprs.as_deref());
            ctx.write_csv(
                "cohort_stats.csv",
                rows.into_iter().map(|r| CsCaCsvRow {
                    period: r.period,
                    class: r.class.map_or("SB", |c| c.as_str()),
                    n: r.cs.n,
                    cs_mean: r.cs.mean,
                    cs_sd: r.cs.sd,
                    ca_mean: r.ca.mean,
                    ca_sd: r.ca.sd,
                }),
            )?;
        }
        Command::Correlate { sb, pair } => {
            let (corpus, sbs, _) = detect(&mut ctx, sb)?;
            let (n, r) = match pair.as_str() {
                "cs-ca" => {
                    if sbs.len() < 3 {
                        return Err(Error::InsufficientData(format!(
                            "correlation needs at least 3 SBs, got {}",
                            sbs.len()
                        )));
                    }
                    (sbs.len(), cs_ca_correlation(&sbs)?)
                }
                "pcy-ca" => {
                    let snprs = link_snprs(&corpus, &sbs);
                    let (points, r) = lag_vs_awake_scatter(&snprs, &sbs)?;
                    (points.len(), r)
                }
                other => {
                    return Err(Error::InvalidParams(format!(
                        "--pair must be `cs-ca` or `pcy-ca`, got `{other}`"
                    )))
                }
            };
            ctx.write_csv("correlation.csv", [CorrelationRow { pair, n, r }])?;
        }
        Command::InventorAuthor { sb, link_type } => {
            let want = match link_type {
                None => None,
                Some(1) => Some(LinkType::SelfCitation),
                Some(2) => Some(LinkType::OtherPatent),
                Some(other) => {
                    return Err(Error::InvalidParams(format!("--link-type must be 1 or 2, got {other}")))
                }
            };
            let (corpus, sbs, _) = detect(&mut ctx, sb)?;
            let snprs = link_snprs(&corpus, &sbs);
            let rows = match_inventor_authors(&corpus, &snprs)
                .into_iter()
                .filter(|m| want.is_none_or(|t| m.link_type == t))
                .map(|m| MatchRow {
                    pub_id: m.pub_id,
                    link_type: m.link_type.code(),
                    name: m.name_key.render(),
                    family_ids: m.family_ids.join(";"),
                });
            ctx.write_csv_with_header(
                "inventor_authors.csv",
                Some(&["pub_id", "link_type", "name", "family_ids"]),
                rows,
            )?;
        }
        Command::Awakening {
            sb,
            id,
            threshold,
            persistence,
        } => {
            let (corpus, sbs, opts) = if id.is_empty() {
                detect(&mut ctx, sb)?
            } else {
                sb.apply(&mut ctx.cfg);
                let corpus = ctx.load()?;
                let opts = sb.options(&ctx.cfg, &corpus)?;
                (corpus, Vec::new(), opts)
            };
            let threshold = threshold
                .or(ctx.cfg.detect.awakening_threshold)
                .unwrap_or(ctx.cfg.sb.ca_min);
            let persistence = persistence.unwrap_or(ctx.cfg.detect.awakening_persistence);
            let horizon = opts
                .horizon
                .or(corpus.span().map(|s| s.1))
                .unwrap_or(i32::MIN);
            let ids: Vec<String> = if id.is_empty() {
                sbs.iter().map(|r| r.pub_id.clone()).collect()
            } else {
                id.clone()
            };
            let mut rows = Vec::new();
            for pid in &ids {
                let idx = corpus.idx(pid).ok_or_else(|| Error::UnknownPublication(pid.clone()))?;
                let year = corpus.publication(idx).year;
                let series: YearSeries = corpus.series(idx, !opts.include_self_citations, year..=horizon.max(year));
                rows.push(AwakeningRow {
                    pub_id: pid,
                    pub_year: year,
                    awakening_year: awakening_year(&series, threshold, persistence),
                });
            }
            ctx.write_csv_with_header("awakening.csv", Some(&["pub_id", "pub_year", "awakening_year"]), rows)?;
        }
        Command::Cocite {
            nodes,
            min_weight,
            keep_isolates,
            graph,
        } => {
            let corpus = ctx.load()?;
            let ids = node_set(&corpus, nodes, ctx.cfg.thresholds.prince_k)?;
            let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
            let g = cocitation_graph(
                &corpus,
                &refs,
                &CocitationOptions {
                    min_edge_weight: min_weight.unwrap_or(ctx.cfg.thresholds.cocite),
                    keep_isolates: *keep_isolates,
                },
            )?;
            ctx.write_graph("cocitation", &g, graph.format)?;
        }
        Command::Bibcouple {
            nodes,
            min_shared,
            cosine,
            graph,
        } => {
            let corpus = ctx.load()?;
            let ids = node_set(&corpus, nodes, ctx.cfg.thresholds.prince_k)?;
            let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
            let weight = if *cosine {
                CouplingWeight::Cosine
            } else {
                CouplingWeight::Count
            };
            let g = bibcoupling_graph(
                &corpus,
                &refs,
                min_shared.unwrap_or(ctx.cfg.thresholds.coupling),
                weight,
            )?;
            ctx.write_graph("coupling", &g, graph.format)?;
        }
        Command::EarlyCiters { id, k, graph } => {
            let corpus = ctx.load()?;
            let g = early_citer_subnet(&corpus, id, k.unwrap_or(ctx.cfg.thresholds.prince_k))?;
            ctx.write_graph("early_citers", &g, graph.format)?;
        }
        Command::Princes {
            sb,
            id,
            c_min,
            k,
            awakening_year,
            exclude_self_citing,
        } => {
            let (corpus, sbs) = if id.is_empty() {
                let (c, s, _) = detect(&mut ctx, sb)?;
                (c, s.into_iter().map(|r| r.pub_id).collect())
            } else {
                sb.apply(&mut ctx.cfg);
                (ctx.load()?, id.clone())
            };
            let cfg = PrinceConfig {
                c_min: c_min.unwrap_or(ctx.cfg.thresholds.prince_c_min),
                k: k.unwrap_or(ctx.cfg.thresholds.prince_k),
                exclude_self_citing: *exclude_self_citing,
                awakening_year: *awakening_year,
                awakening_threshold: ctx.cfg.detect.awakening_threshold.unwrap_or(ctx.cfg.sb.ca_min),
                awakening_persistence: ctx.cfg.detect.awakening_persistence,
                ..PrinceConfig::default()
            };
            let mut rows = Vec::new();
            for sb_id in &sbs {
                let ranked = match rank_princes(&corpus, sb_id, &cfg) {
                    Ok(r) => r,
                    // Detected SBs without an awakening simply have no princes.
                    Err(Error::NoAwakening(_)) if id.is_empty() => continue,
                    Err(e) => return Err(e),
                };
                for (rank, c) in ranked.into_iter().enumerate() {
                    rows.push(PrinceRow {
                        sb_id,
                        rank: rank + 1,
                        pub_id: c.pub_id,
                        year: c.year,
                        own_citations: c.own_citations,
                        earliness: c.earliness,
                        cocite_weight: c.cocite_weight,
                        coupling: c.coupling,
                        score: c.score,
                        early_passing_prince: c.early_passing_prince,
                        self_citing: c.self_citing,
                    });
                }
            }
            ctx.write_csv_with_header(
                "princes.csv",
                Some(&[
                    "sb_id",
                    "rank",
                    "pub_id",
                    "year",
                    "own_citations",
                    "earliness",
                    "cocite_weight",
                    "coupling",
                    "score",
                    "early_passing_prince",
                    "self_citing",
                ]),
                rows,
            )?;
        }
        Command::TopicTimeline { query } => {
            let q = Query::parse(&query.query)?;
            let corpus = ctx.load()?;
            let years = year_range(&corpus, query.from, query.to)?;
            let s = topic_timeline(&corpus, &q, years)?;
            ctx.write_csv("timeline.csv", s.iter().map(|(year, count)| YearCountRow { year, count }))?;
        }
        Command::Concepts {
            query,
            min_occurrences,
            max_gram,
            association,
            seed,
            graph_out,
            graph,
        } => {
            if *max_gram == 0 {
                return Err(Error::InvalidParams("--max-gram must be at least 1".into()));
            }
            let corpus = ctx.load()?;
            let docs = documents(&corpus, query)?;
            let opts = ConceptOptions {
                min_occurrences: min_occurrences.unwrap_or(ctx.cfg.thresholds.concept_min_occurrences),
                max_gram: *max_gram,
                normalize: if *association {
                    EdgeNormalization::Association
                } else {
                    EdgeNormalization::Raw
                },
                seed: seed.unwrap_or(ctx.cfg.seed),
                extra_stopwords: Vec::new(),
            };
            let map = concept_graph(&docs, &opts);
            if let Some(p) = graph_out {
                export_graph(&map.graph, graph.format, p)?;
            }
            ctx.write_csv_with_header("concepts.csv", Some(&["term", "df", "cluster"]), &map.terms)?;
        }
        Command::FitGrowth { series, query } => {
            let s = match series {
                Some(p) => {
                    let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                    YearSeries::from_csv(&text)?
                }
                None => {
                    let Some(text) = &query.query else {
                        return Err(Error::InvalidParams("give --series or --query".into()));
                    };
                    let q = Query::parse(text)?;
                    let corpus = ctx.load()?;
                    let years = year_range(&corpus, query.from, query.to)?;
                    topic_timeline(&corpus, &q, years)?
                }
            };
            let f = fit_exponential(&s)?;
            ctx.write_csv(
                "fit.csv",
                [FitRow {
                    exponent: f.exponent,
                    amplitude: f.amplitude,
                    r_squared: f.r_squared,
                    origin: f.origin,
                    n_years: f.years_used.len(),
                    doubling_time: f.doubling_time(),
                }],
            )?;
        }
        Command::Synth {
            seed,
            n_publications,
            planted_sbs,
        } => {
            let mut sc = ctx.cfg.synth.clone();
            if let Some(s) = seed {
                sc.seed = *s;
            }
            if let Some(n) = n_publications {
                sc.n_publications = *n;
            }
            if let Some(n) = planted_sbs {
                sc.n_planted_sbs = *n;
            }
            let dir: &Path = match (&ctx.global.out, &ctx.cfg.output_dir) {
                (Some(p), _) | (None, Some(p)) => p,
                (None, None) => return Err(Error::InvalidParams("synth needs --out <DIR>".into())),
            };
            let corpus = generate(&sc)?;
            corpus.write(dir)?;
            eprintln!(
                "sbcite: wrote {} publications, {} citations, {} patent families to {}",
                corpus.truth.n_publications,
                corpus.truth.n_citations,
                corpus.truth.n_patents,
                dir.display()
            );
        }
        Command::ExportGraph { input, graph } => {
            let text = std::fs::read_to_string(input).map_err(|e| Error::io(input, e))?;
            let g = parse_edgelist(&text)?;
            ctx.write_graph("graph", &g, graph.format)?;
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["sbcite", "detect-sb", "--no-such-flag"]), EXIT_USAGE);
        assert_eq!(run(["sbcite"]), EXIT_USAGE);
        assert_eq!(run(["sbcite", "--help"]), EXIT_OK);
    }

    #[test]
    fn help_lists_canonical_defaults() {
        let help = Cli::command()
            .find_subcommand_mut("detect-sb")
            .unwrap()
            .render_long_help()
            .to_string();
        for d in ["default 10", "default 1.0", "default 5.0"] {
            assert!(help.contains(d), "{d} missing from help");
        }
    }
}
