//! `affectgauge`: stage-by-stage command-line runner.
//!
//! Every subcommand reads what earlier stages left in `--out` and writes its
//! own files there. Exit status is 0 on success, 2 for usage problems
//! (bad flags, missing inputs, invalid configuration) and 1 for failures
//! while processing data.

use std::path::PathBuf;
use std::process::ExitCode;

use affectgauge::pipeline::Settings;
use affectgauge::synth::{self, SynthSpec};
use affectgauge::{Error, Result, StanceLabel};
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "affectgauge", version, about = "Affective polarization between two stance groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normalize the raw corpus and cut it into weeks.
    Ingest(Common),
    /// Label users Believer / Disbeliever.
    Stance(Common),
    /// Score messages toward the users they mention.
    Sentiment(Common),
    /// Build the weekly affective networks.
    Graph(Common),
    /// Compute the weekly polarization series and hostile weeks.
    Polarize(Common),
    /// Disaster-vocabulary prevalence in hostile versus other weeks.
    Report(Common),
    /// Run every stage in order.
    All(Common),
    /// Write a synthetic corpus with planted ground truth.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Output directory for every stage file.
    #[arg(long, env = "AFFECTGAUGE_OUT")]
    out: PathBuf,
    /// Raw line-delimited corpus (read by ingest).
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// TOML file with collection_start, collection_end and gaps.
    #[arg(long)]
    collection_config: Option<PathBuf>,
    /// First day of week 0 (YYYY-MM-DD); overrides the collection start.
    #[arg(long)]
    weeks_anchor: Option<NaiveDate>,
    /// Word valence lexicon, `word<TAB>valence` per line.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Disaster term list, one term per line.
    #[arg(long)]
    disaster_lexicon: Option<PathBuf>,
    /// TOML seed hashtags and co-training thresholds.
    #[arg(long)]
    seeds: Option<PathBuf>,
    /// Tokens on each side of a mention that count toward its score.
    #[arg(long, default_value_t = 3)]
    window_halfwidth: usize,
    /// Worker threads; outputs do not depend on this.
    #[arg(long, default_value_t = default_parallelism(), value_parser = clap::value_parser!(u16).range(1..))]
    parallelism: u16,
    /// Score retweets toward the users they mention.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    include_retweet_mentions: bool,
    /// Rank hashtags over all weeks of a condition instead of per week.
    #[arg(long)]
    pooled_hashtags: bool,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Directory for the corpus, collection config and truth files.
    #[arg(long, env = "AFFECTGAUGE_OUT")]
    out: PathBuf,
    /// Generation parameters as TOML; defaults apply when absent.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Random seed; overrides the one in `--spec`.
    #[arg(long)]
    seed: Option<u64>,
    /// Plant no asymmetry between in-group and out-group sentiment.
    #[arg(long, conflicts_with = "spec")]
    symmetric: bool,
}

fn default_parallelism() -> u16 {
    std::thread::available_parallelism().map_or(1, |n| n.get().min(u16::MAX as usize) as u16)
}

fn require(path: &Option<PathBuf>) -> Result<()> {
    match path {
        Some(p) if !p.exists() => Err(Error::MissingInput(p.clone())),
        _ => Ok(()),
    }
}

impl Common {
    fn settings(&self) -> Result<Settings> {
        for p in [&self.corpus, &self.collection_config, &self.lexicon, &self.disaster_lexicon, &self.seeds] {
            require(p)?;
        }
        let mut s = Settings::new(&self.out);
        s.corpus = self.corpus.clone();
        s.collection = self.collection_config.clone();
        s.weeks_anchor = self.weeks_anchor;
        s.lexicon = self.lexicon.clone();
        s.disaster_lexicon = self.disaster_lexicon.clone();
        s.seeds = self.seeds.clone();
        s.half_width = self.window_halfwidth;
        s.parallelism = usize::from(self.parallelism);
        s.include_retweet_mentions = self.include_retweet_mentions;
        s.pooled_hashtags = self.pooled_hashtags;
        Ok(s)
    }
}

fn ingest(s: &Settings) -> Result<()> {
    let stats = s.ingest()?;
    println!(
        "ingest: {} messages from {} users ({} malformed, {} duplicates, {} in gaps, {} out of range)",
        stats.message_count,
        stats.user_count,
        stats.malformed_lines,
        stats.dropped_duplicates,
        stats.dropped_in_gaps,
        stats.dropped_out_of_range
    );
    Ok(())
}

fn stance(s: &Settings) -> Result<()> {
    let assignments = s.stance()?;
    let count = |l: StanceLabel| assignments.iter().filter(|a| a.label == l).count();
    println!(
        "stance: {} believers, {} disbelievers, {} unlabeled",
        count(StanceLabel::Believer),
        count(StanceLabel::Disbeliever),
        count(StanceLabel::Unlabeled)
    );
    Ok(())
}

fn sentiment(s: &Settings) -> Result<()> {
    println!("sentiment: {} aspect scores", s.sentiment()?);
    Ok(())
}

fn graph(s: &Settings) -> Result<()> {
    let graphs = s.graph()?;
    let edges: usize = graphs.values().map(|g| g.edge_count()).sum();
    println!("graph: {} weeks, {} edges", graphs.len(), edges);
    Ok(())
}

fn polarize(s: &Settings) -> Result<()> {
    let (records, summaries) = s.polarize()?;
    let defined = records.iter().filter(|r| r.l.is_some()).count();
    println!("polarize: {defined} of {} group-weeks defined", records.len());
    for (group, summary) in &summaries {
        println!(
            "  {group}: mean l {:.4}, sd {:.4}, {} hostile weeks",
            summary.mean_l,
            summary.sd_l,
            summary.hostile_weeks.len()
        );
    }
    Ok(())
}

fn report(s: &Settings) -> Result<()> {
    let cells = s.report()?;
    println!("report: {} cells", cells.len());
    Ok(())
}

fn synth_cmd(args: &SynthArgs) -> Result<()> {
    require(&args.spec)?;
    let mut spec = match (&args.spec, args.symmetric) {
        (Some(p), _) => SynthSpec::load(p)?,
        (None, true) => SynthSpec::symmetric(0),
        (None, false) => SynthSpec::default(),
    };
    if let Some(seed) = args.seed {
        spec.rng_seed = seed;
    }
    let corpus = synth::generate(&spec)?;
    corpus.write_to(&args.out)?;
    let show = |f: &str| args.out.join(f).display().to_string();
    println!("synth: {} messages", corpus.messages.len());
    println!("  corpus:     {}", show(synth::CORPUS_FILE));
    println!("  collection: {}", show(synth::CONFIG_FILE));
    println!("  truth:      {}, {}", show(synth::USER_TRUTH_FILE), show(synth::WEEK_TRUTH_FILE));
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let stage = |c: &Common, f: fn(&Settings) -> Result<()>| f(&c.settings()?);
    match &cli.command {
        Command::Ingest(c) => stage(c, ingest),
        Command::Stance(c) => stage(c, stance),
        Command::Sentiment(c) => stage(c, sentiment),
        Command::Graph(c) => stage(c, graph),
        Command::Polarize(c) => stage(c, polarize),
        Command::Report(c) => stage(c, report),
        Command::All(c) => {
            let s = c.settings()?;
            for f in [ingest, stance, sentiment, graph, polarize, report] {
                f(&s)?;
            }
            println!("outputs in {}", s.out_dir.display());
            Ok(())
        }
        Command::Synth(args) => synth_cmd(args),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            log::debug!("{e:?}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
