//! File-based stage runner.
//!
//! Each stage reads earlier stage files from the output directory and writes
//! its own; nothing is rewritten by a later stage. Parallel work is split per
//! message chunk or per week and always collected back in key order, so the
//! files do not depend on the thread count.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use rayon::prelude::*;

use crate::affect_graph::{read_edge_list, AffectiveGraph};
use crate::corpus::{self, day_start, CorpusConfig, CorpusStats, IngestOptions, Message, WeekInfo, WEEK_SECONDS};
use crate::disaster::{self, DisasterLexicon, ReportOptions};
use crate::error::{Error, Result};
use crate::polarization::{self, PolarizationRecord, SeriesSummary};
use crate::sentiment::{aspect_scores, AspectScore, ValenceLexicon, DEFAULT_HALF_WIDTH};
use crate::stance::{self, SeedConfig, StanceLabel};

pub const CORPUS_FILE: &str = "corpus.jsonl";
pub const STATS_FILE: &str = "corpus_stats.txt";
pub const WEEKS_FILE: &str = "weeks.csv";
pub const STANCE_FILE: &str = "stances.csv";
pub const SCORES_FILE: &str = "aspect_scores.csv";
pub const EDGES_FILE: &str = "edges.csv";
pub const SERIES_FILE: &str = "polarization.csv";
pub const SUMMARY_FILE: &str = "polarization_summary.csv";
pub const REPORT_FILE: &str = "disaster_report.csv";

/// Every file written by [`Settings::run_all`], in stage order.
pub const OUTPUT_FILES: &[&str] = &[
    CORPUS_FILE,
    STATS_FILE,
    WEEKS_FILE,
    STANCE_FILE,
    SCORES_FILE,
    EDGES_FILE,
    SERIES_FILE,
    SUMMARY_FILE,
    REPORT_FILE,
];

const CHUNK: usize = 4096;

#[derive(Debug, Clone)]
pub struct Settings {
    pub out_dir: PathBuf,
    /// Raw corpus; only the ingest stage reads it.
    pub corpus: Option<PathBuf>,
    pub collection: Option<PathBuf>,
    /// Overrides the week anchor (midnight UTC of this day).
    pub weeks_anchor: Option<NaiveDate>,
    pub lexicon: Option<PathBuf>,
    pub disaster_lexicon: Option<PathBuf>,
    pub seeds: Option<PathBuf>,
    pub half_width: usize,
    pub include_retweet_mentions: bool,
    pub parallelism: usize,
    pub pooled_hashtags: bool,
}

impl Settings {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        Self {
            out_dir: out_dir.into(),
            corpus: None,
            collection: None,
            weeks_anchor: None,
            lexicon: None,
            disaster_lexicon: None,
            seeds: None,
            half_width: DEFAULT_HALF_WIDTH,
            include_retweet_mentions: true,
            parallelism: 1,
            pooled_hashtags: false,
        }
    }

    pub fn path(&self, file: &str) -> PathBuf {
        self.out_dir.join(file)
    }

    fn input(&self, file: &str) -> Result<PathBuf> {
        let p = self.path(file);
        if p.is_file() {
            Ok(p)
        } else {
            Err(Error::MissingInput(p))
        }
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.parallelism.max(1))
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))
    }

    fn create(&self, file: &str) -> Result<BufWriter<File>> {
        fs::create_dir_all(&self.out_dir)?;
        Ok(BufWriter::new(File::create(self.path(file))?))
    }

    pub fn lexicon(&self) -> Result<ValenceLexicon> {
        match &self.lexicon {
            Some(p) => ValenceLexicon::load(p),
            None => Ok(ValenceLexicon::english_default()),
        }
    }

    pub fn seed_config(&self) -> Result<SeedConfig> {
        match &self.seeds {
            Some(p) => SeedConfig::load(p),
            None => Ok(SeedConfig::default()),
        }
    }

    pub fn disaster_lexicon(&self) -> Result<DisasterLexicon> {
        match &self.disaster_lexicon {
            Some(p) => DisasterLexicon::load(p),
            None => Ok(DisasterLexicon::bundled()),
        }
    }

    /// Normalizes the raw corpus and cuts it into weeks.
    pub fn ingest(&self) -> Result<CorpusStats> {
        let source = self.corpus.as_ref().ok_or_else(|| Error::Config("no corpus given".into()))?;
        if !source.is_file() {
            return Err(Error::MissingInput(source.clone()));
        }
        let config = self.collection.as_deref().map(CorpusConfig::load).transpose()?;
        let (options, gaps) = match &config {
            Some(c) => (c.ingest_options(), c.gap_ranges()),
            None => (IngestOptions::default(), Vec::new()),
        };
        let (messages, mut stats) = corpus::ingest(BufReader::new(File::open(source)?), &options)?;
        let anchor = match (self.weeks_anchor, &config) {
            (Some(day), _) => day_start(day),
            (None, Some(c)) => c.anchor(),
            (None, None) => messages.first().map_or(0, |m| corpus::floor_to_day(m.timestamp)),
        };
        if self.weeks_anchor.is_some() {
            stats.week_count = messages
                .iter()
                .map(|m| (m.timestamp - anchor).div_euclid(WEEK_SECONDS))
                .collect::<BTreeSet<_>>()
                .len() as u64;
        }

        let mut out = self.create(CORPUS_FILE)?;
        corpus::write_jsonl(&mut out, &messages)?;
        out.flush()?;

        let windows = corpus::window(messages, anchor, &gaps)?;
        let table = corpus::week_table(&windows, &gaps);
        let mut w = csv::Writer::from_writer(self.create(WEEKS_FILE)?);
        for row in &table {
            w.serialize(row)?;
        }
        w.flush()?;

        let mut out = self.create(STATS_FILE)?;
        stats.write_kv(&mut out)?;
        out.flush()?;
        log::info!(
            "ingested {} messages from {} users in {} weeks",
            stats.message_count,
            stats.user_count,
            table.len()
        );
        Ok(stats)
    }

    /// Reads the normalized corpus written by the ingest stage.
    pub fn read_corpus(&self) -> Result<Vec<Message>> {
        let path = self.input(CORPUS_FILE)?;
        let text = fs::read_to_string(&path)?;
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|e| Error::parse(CORPUS_FILE, i + 1, format!("{e}; rerun ingest")))
            })
            .collect()
    }

    pub fn read_weeks(&self) -> Result<Vec<WeekInfo>> {
        let path = self.input(WEEKS_FILE)?;
        csv::Reader::from_path(path)?
            .deserialize()
            .map(|r| r.map_err(Error::from))
            .collect()
    }

    pub fn read_stances(&self) -> Result<BTreeMap<String, StanceLabel>> {
        let path = self.input(STANCE_FILE)?;
        Ok(stance::label_map(&stance::read_assignments(File::open(path)?)?))
    }

    /// Labels users and writes `stances.csv`.
    pub fn stance(&self) -> Result<Vec<stance::StanceAssignment>> {
        let config = self.seed_config()?;
        let messages = self.read_corpus()?;
        let assignments = stance::cotrain(&messages, &config)?;
        let mut out = self.create(STANCE_FILE)?;
        stance::write_assignments(&mut out, &assignments)?;
        out.flush()?;
        Ok(assignments)
    }

    /// Scores every message toward its targets and writes `aspect_scores.csv`.
    pub fn sentiment(&self) -> Result<usize> {
        let lexicon = self.lexicon()?;
        let weeks = self.read_weeks()?;
        let messages = self.read_corpus()?;
        let scores = self.pool()?.install(|| {
            score_messages(&messages, &weeks, &lexicon, self.half_width, self.include_retweet_mentions)
        })?;
        let mut w = csv::Writer::from_writer(self.create(SCORES_FILE)?);
        for s in &scores {
            w.serialize(s)?;
        }
        w.flush()?;
        Ok(scores.len())
    }

    /// Builds one affective graph per usable week and writes `edges.csv`.
    pub fn graph(&self) -> Result<BTreeMap<u32, AffectiveGraph>> {
        let weeks = self.read_weeks()?;
        let path = self.input(SCORES_FILE)?;
        let scores: Vec<AspectScore> = csv::Reader::from_path(path)?
            .deserialize()
            .collect::<std::result::Result<_, _>>()?;
        let graphs = self.pool()?.install(|| build_graphs(&scores, &weeks))?;
        let mut w = csv::Writer::from_writer(self.create(EDGES_FILE)?);
        for g in graphs.values() {
            g.write_edge_list(&mut w)?;
        }
        w.flush()?;
        Ok(graphs)
    }

    /// Computes the weekly series and per-group summaries.
    pub fn polarize(&self) -> Result<(Vec<PolarizationRecord>, BTreeMap<StanceLabel, SeriesSummary>)> {
        let edges = self.input(EDGES_FILE)?;
        let graphs = read_edge_list(File::open(edges)?)?;
        let weeks = self.read_weeks()?;
        let stances = self.read_stances()?;
        let records = self.pool()?.install(|| series(&graphs, &weeks, &stances))?;
        let summaries = summaries(&records);

        let mut out = self.create(SERIES_FILE)?;
        polarization::write_series(&mut out, &records, &summaries)?;
        out.flush()?;
        let mut out = self.create(SUMMARY_FILE)?;
        polarization::write_summaries(&mut out, &summaries)?;
        out.flush()?;
        Ok((records, summaries))
    }

    /// Disaster-vocabulary prevalence in hostile versus ordinary weeks.
    pub fn report(&self) -> Result<Vec<disaster::PrevalenceCell>> {
        let lexicon = self.disaster_lexicon()?;
        let series_path = self.input(SERIES_FILE)?;
        let records: Vec<PolarizationRecord> = polarization::read_series(File::open(series_path)?)?
            .iter()
            .map(|r| r.record())
            .collect();
        let summaries = summaries(&records);
        let stances = self.read_stances()?;
        let weeks = self.read_weeks()?;
        let messages = self.read_corpus()?;

        let mut by_week: BTreeMap<u32, Vec<Message>> = BTreeMap::new();
        if let Some(anchor) = anchor_of(&weeks) {
            for m in messages {
                if let Some(w) = corpus::week_of(m.timestamp, anchor) {
                    by_week.entry(w).or_default().push(m);
                }
            }
        }
        let mut defined: BTreeMap<StanceLabel, BTreeSet<u32>> = BTreeMap::new();
        for r in records.iter().filter(|r| r.l.is_some()) {
            defined.entry(r.group).or_default().insert(r.week);
        }
        let options = ReportOptions {
            pooled_hashtags: self.pooled_hashtags,
        };
        let cells = disaster::report(&by_week, &stances, &summaries, &defined, &lexicon, options);
        let mut out = self.create(REPORT_FILE)?;
        disaster::write_report(&mut out, &cells)?;
        out.flush()?;
        Ok(cells)
    }

    /// Runs every stage in order.
    pub fn run_all(&self) -> Result<()> {
        self.ingest()?;
        self.stance()?;
        self.sentiment()?;
        self.graph()?;
        self.polarize()?;
        self.report()?;
        Ok(())
    }
}

/// Week anchor recovered from the week table.
pub fn anchor_of(weeks: &[WeekInfo]) -> Option<i64> {
    weeks.first().map(|w| w.start - i64::from(w.week) * WEEK_SECONDS)
}

/// Aspect scores for all messages in included weeks, in corpus order.
///
/// Retweets are scored only when `include_retweets` is set; their targets
/// come from record metadata rather than the retweeter's own words.
pub fn score_messages(
    messages: &[Message],
    weeks: &[WeekInfo],
    lexicon: &ValenceLexicon,
    half_width: usize,
    include_retweets: bool,
) -> Result<Vec<AspectScore>> {
    let Some(anchor) = anchor_of(weeks) else {
        return Ok(Vec::new());
    };
    let usable: BTreeSet<u32> = weeks.iter().filter(|w| !w.excluded).map(|w| w.week).collect();
    let chunks: Vec<Vec<AspectScore>> = messages
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut out = Vec::new();
            for m in chunk {
                if m.is_retweet() && !include_retweets {
                    continue;
                }
                let Some(week) = corpus::week_of(m.timestamp, anchor) else { continue };
                if usable.contains(&week) {
                    out.extend(aspect_scores(m, week, lexicon, half_width));
                }
            }
            out
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// One graph per included week; weeks without scores get an empty graph.
pub fn build_graphs(scores: &[AspectScore], weeks: &[WeekInfo]) -> Result<BTreeMap<u32, AffectiveGraph>> {
    let mut by_week: BTreeMap<u32, Vec<AspectScore>> =
        weeks.iter().filter(|w| !w.excluded).map(|w| (w.week, Vec::new())).collect();
    for s in scores {
        match by_week.get_mut(&s.week) {
            Some(v) => v.push(s.clone()),
            None => log::warn!("score for excluded or unknown week {} ignored", s.week),
        }
    }
    let built: Vec<(u32, AffectiveGraph)> = by_week
        .into_par_iter()
        .map(|(week, s)| AffectiveGraph::build(week, &s).map(|g| (week, g)))
        .collect::<Result<_>>()?;
    Ok(built.into_iter().collect())
}

/// Weekly records for both groups over the included weeks.
pub fn series(
    graphs: &BTreeMap<u32, AffectiveGraph>,
    weeks: &[WeekInfo],
    stances: &BTreeMap<String, StanceLabel>,
) -> Result<Vec<PolarizationRecord>> {
    let included: Vec<u32> = weeks.iter().filter(|w| !w.excluded).map(|w| w.week).collect();
    let per_week: Vec<Vec<PolarizationRecord>> = included
        .par_iter()
        .map(|&week| {
            let empty;
            let graph = match graphs.get(&week) {
                Some(g) => g,
                None => {
                    empty = AffectiveGraph::empty(week);
                    &empty
                }
            };
            StanceLabel::GROUPS
                .iter()
                .map(|&g| polarization::metric(graph, stances, g))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(per_week.into_iter().flatten().collect())
}

/// Summaries per group; a group with fewer than two defined weeks is left
/// out with a warning.
pub fn summaries(records: &[PolarizationRecord]) -> BTreeMap<StanceLabel, SeriesSummary> {
    let mut out = BTreeMap::new();
    for group in StanceLabel::GROUPS {
        let own: Vec<PolarizationRecord> = records.iter().filter(|r| r.group == group).cloned().collect();
        match polarization::summarize(&own) {
            Ok(s) => {
                out.insert(group, s);
            }
            Err(e) => log::warn!("{group}: no summary ({e})"),
        }
    }
    out
}

/// True when every stage output exists in `dir`.
pub fn outputs_complete(dir: &Path) -> bool {
    OUTPUT_FILES.iter().all(|f| dir.join(f).is_file())
}
