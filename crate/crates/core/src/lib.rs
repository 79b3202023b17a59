//! Affective polarization between two opposed stance groups.
//!
//! The pipeline runs in stages, each consuming the previous stage's output:
//!
//! 1. [`corpus`] ingests line-delimited interaction records, removes
//!    duplicates and records inside collection gaps, and cuts the corpus
//!    into seven-day windows.
//! 2. [`stance`] labels users Believer / Disbeliever from terminal seed
//!    hashtags, then grows the labeled set by co-training a text classifier
//!    with label propagation.
//! 3. [`sentiment`] scores every message toward each user it mentions or
//!    replies to with a sliding-window lexicon heuristic.
//! 4. [`affect_graph`] aggregates the scores of one week into positive,
//!    negative and net directed interaction networks.
//! 5. [`polarization`] computes E/I indices on the valenced networks, the
//!    polarization valence, and the signed earth mover's distance between
//!    out-group and in-group edge weights.
//! 6. [`disaster`] contrasts disaster-vocabulary prevalence between hostile
//!    and ordinary weeks.
//!
//! [`synth`] generates corpora with planted ground truth and [`pipeline`]
//! wires the stages to files on disk.

pub mod affect_graph;
pub mod corpus;
pub mod disaster;
mod error;
pub mod pipeline;
pub mod polarization;
pub mod sentiment;
pub mod stance;
pub mod synth;

pub use affect_graph::{AffectiveGraph, EdgeWeight, GroupedWeights, View};
pub use corpus::{CorpusConfig, CorpusStats, Message, TimeRange, WeekWindow};
pub use error::{Error, Result};
pub use polarization::{PolarizationRecord, SeriesSummary};
pub use sentiment::{AspectScore, ValenceLexicon};
pub use stance::{SeedConfig, StanceAssignment, StanceLabel};
