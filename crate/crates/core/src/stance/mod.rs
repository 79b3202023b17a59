//! User stance labeling: terminal seed hashtags, then co-training.
//!
//! Users whose messages end in a seed hashtag of exactly one stance become
//! seeds. Each round trains a text classifier on the labeled users, runs
//! label propagation from them, and adopts users on which both methods
//! agree with enough confidence.

pub mod classifier;
pub mod propagation;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{normalize_hashtag, Message};
use crate::error::{Error, Result};
use crate::sentiment::tokenize;

pub use propagation::{propagate, PropagationGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StanceLabel {
    Believer,
    Disbeliever,
    Unlabeled,
}

impl StanceLabel {
    /// The two stance groups polarization is measured between.
    pub const GROUPS: [StanceLabel; 2] = [StanceLabel::Believer, StanceLabel::Disbeliever];

    pub fn as_str(&self) -> &'static str {
        match self {
            StanceLabel::Believer => "believer",
            StanceLabel::Disbeliever => "disbeliever",
            StanceLabel::Unlabeled => "unlabeled",
        }
    }

    pub fn opposite(&self) -> Option<StanceLabel> {
        match self {
            StanceLabel::Believer => Some(StanceLabel::Disbeliever),
            StanceLabel::Disbeliever => Some(StanceLabel::Believer),
            StanceLabel::Unlabeled => None,
        }
    }

    /// +1 for Believer, -1 for Disbeliever, 0 otherwise.
    pub fn sign(&self) -> f64 {
        match self {
            StanceLabel::Believer => 1.0,
            StanceLabel::Disbeliever => -1.0,
            StanceLabel::Unlabeled => 0.0,
        }
    }

    pub fn is_labeled(&self) -> bool {
        *self != StanceLabel::Unlabeled
    }
}

impl fmt::Display for StanceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StanceLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "believer" => Ok(StanceLabel::Believer),
            "disbeliever" => Ok(StanceLabel::Disbeliever),
            "unlabeled" => Ok(StanceLabel::Unlabeled),
            other => Err(Error::Config(format!("unknown stance {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Seed,
    #[serde(rename = "cotrained")]
    CoTrained,
    /// Left unlabeled.
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StanceAssignment {
    pub user_id: String,
    pub label: StanceLabel,
    pub confidence: f64,
    pub origin: Origin,
}

impl StanceAssignment {
    fn unlabeled(user_id: String) -> Self {
        Self {
            user_id,
            label: StanceLabel::Unlabeled,
            confidence: 0.0,
            origin: Origin::None,
        }
    }
}

/// Co-training knobs.
///
/// * `k`: most users adopted per stance per round.
/// * `p`: most rounds.
/// * `theta_t`: minimum classifier confidence, `max(p, 1 - p)`.
/// * `theta_i`: minimum propagation score magnitude.
/// * `theta_u`: propagation magnitude must also strictly exceed this floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoTrainParams {
    pub k: usize,
    pub p: usize,
    pub theta_i: f64,
    pub theta_u: f64,
    pub theta_t: f64,
}

impl Default for CoTrainParams {
    fn default() -> Self {
        Self {
            k: 5000,
            p: 5000,
            theta_i: 0.1,
            theta_u: 0.0,
            theta_t: 0.7,
        }
    }
}

/// Seed hashtags and co-training parameters.
///
/// ```toml
/// believer_hashtags = ["climatechangeisreal", "savetheearth"]
/// disbeliever_hashtags = ["climatehoax", "qanon"]
///
/// [params]
/// k = 5000
/// p = 5000
/// theta_i = 0.1
/// theta_u = 0.0
/// theta_t = 0.7
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedConfig {
    pub believer_hashtags: BTreeSet<String>,
    pub disbeliever_hashtags: BTreeSet<String>,
    #[serde(default)]
    pub params: CoTrainParams,
}

impl Default for SeedConfig {
    fn default() -> Self {
        let set = |tags: &[&str]| tags.iter().map(|s| s.to_string()).collect();
        Self {
            believer_hashtags: set(&["climatechangeisreal", "savetheearth"]),
            disbeliever_hashtags: set(&["climatehoax", "qanon"]),
            params: CoTrainParams::default(),
        }
    }
}

impl SeedConfig {
    pub fn new(believer: &[&str], disbeliever: &[&str], params: CoTrainParams) -> Result<Self> {
        let mut cfg = Self {
            believer_hashtags: believer.iter().map(|s| s.to_string()).collect(),
            disbeliever_hashtags: disbeliever.iter().map(|s| s.to_string()).collect(),
            params,
        };
        cfg.normalize_and_validate()?;
        Ok(cfg)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let mut cfg: Self = toml::from_str(text).map_err(|e| Error::Config(format!("seed config: {e}")))?;
        cfg.normalize_and_validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingInput(path.to_path_buf()));
        }
        Self::from_toml_str(&fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("seed config serializes")
    }

    fn normalize_and_validate(&mut self) -> Result<()> {
        let norm = |set: &BTreeSet<String>| -> Result<BTreeSet<String>> {
            set.iter()
                .map(|t| normalize_hashtag(t).ok_or_else(|| Error::Config(format!("invalid seed hashtag {t:?}"))))
                .collect()
        };
        self.believer_hashtags = norm(&self.believer_hashtags)?;
        self.disbeliever_hashtags = norm(&self.disbeliever_hashtags)?;
        if self.believer_hashtags.is_empty() || self.disbeliever_hashtags.is_empty() {
            return Err(Error::Config("both seed hashtag sets must be non-empty".into()));
        }
        if let Some(t) = self.believer_hashtags.intersection(&self.disbeliever_hashtags).next() {
            return Err(Error::Config(format!("seed hashtag {t:?} appears in both sets")));
        }
        let p = &self.params;
        for (name, v) in [("theta_i", p.theta_i), ("theta_u", p.theta_u), ("theta_t", p.theta_t)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name} = {v} is outside [0, 1]")));
            }
        }
        if p.k == 0 || p.p == 0 {
            return Err(Error::Config("k and p must be positive".into()));
        }
        Ok(())
    }

    fn seed_label(&self, tag: &str) -> Option<StanceLabel> {
        if self.believer_hashtags.contains(tag) {
            Some(StanceLabel::Believer)
        } else if self.disbeliever_hashtags.contains(tag) {
            Some(StanceLabel::Disbeliever)
        } else {
            None
        }
    }
}

/// The hashtag closing a message, if its last token (URLs aside) is one.
pub fn terminal_hashtag(text: &str) -> Option<String> {
    let last = tokenize(text).pop()?;
    last.starts_with('#').then(|| normalize_hashtag(&last)).flatten()
}

/// Every user id that occurs as author, mention, reply or retweet target,
/// sorted.
pub fn user_universe(messages: &[Message]) -> Vec<String> {
    let mut users: BTreeSet<&str> = BTreeSet::new();
    for m in messages {
        users.insert(&m.author_id);
        users.extend(m.mentioned_users.iter().map(String::as_str));
        users.extend(m.reply_to_user.as_deref());
        users.extend(m.retweet_of_user.as_deref());
    }
    users.into_iter().map(str::to_owned).collect()
}

/// Seed labels, one assignment per user in [`user_universe`] order.
///
/// A user becomes a seed when at least one of their messages ends in a
/// seed hashtag of one stance and none ends in a seed hashtag of the other.
pub fn seed_users(messages: &[Message], config: &SeedConfig) -> Vec<StanceAssignment> {
    let mut votes: BTreeMap<&str, (u32, u32)> = BTreeMap::new();
    for m in messages {
        if let Some(label) = terminal_hashtag(&m.text).and_then(|t| config.seed_label(&t)) {
            let v = votes.entry(m.author_id.as_str()).or_default();
            match label {
                StanceLabel::Believer => v.0 += 1,
                _ => v.1 += 1,
            }
        }
    }
    user_universe(messages)
        .into_iter()
        .map(|user| {
            let label = match votes.get(user.as_str()) {
                Some(&(b, 0)) if b > 0 => StanceLabel::Believer,
                Some(&(0, d)) if d > 0 => StanceLabel::Disbeliever,
                _ => StanceLabel::Unlabeled,
            };
            if label.is_labeled() {
                StanceAssignment {
                    user_id: user,
                    label,
                    confidence: 1.0,
                    origin: Origin::Seed,
                }
            } else {
                StanceAssignment::unlabeled(user)
            }
        })
        .collect()
}

/// Seeds plus co-trained labels for every user in [`user_universe`] order.
///
/// A round adopts an unlabeled user when the classifier's confidence is at
/// least `theta_t`, the propagation score's magnitude is at least `theta_i`
/// (and above `theta_u`), and both point to the same stance. At most `k`
/// users per stance are adopted per round, strongest first; the loop ends
/// after `p` rounds or a round that adopts nobody. An adopted user's
/// confidence is the smaller of the two signals.
pub fn cotrain(messages: &[Message], config: &SeedConfig) -> Result<Vec<StanceAssignment>> {
    let mut assignments = seed_users(messages, config);
    let users: Vec<String> = assignments.iter().map(|a| a.user_id.clone()).collect();
    let n_b = assignments.iter().filter(|a| a.label == StanceLabel::Believer).count();
    let n_d = assignments.iter().filter(|a| a.label == StanceLabel::Disbeliever).count();
    if n_b == 0 || n_d == 0 {
        return Err(Error::Config(format!(
            "co-training needs seed users of both stances (found {n_b} believer, {n_d} disbeliever)"
        )));
    }

    let graph = PropagationGraph::build_for_users(messages, users.clone());
    let (vocab, features) = classifier::user_features(messages, &users);
    let params = config.params;

    for round in 0..params.p {
        let labeled: Vec<usize> = (0..users.len()).filter(|&u| assignments[u].label.is_labeled()).collect();
        if labeled.len() == users.len() {
            break;
        }
        let rows: Vec<&classifier::SparseVec> = labeled.iter().map(|&u| &features[u]).collect();
        let targets: Vec<bool> = labeled
            .iter()
            .map(|&u| assignments[u].label == StanceLabel::Believer)
            .collect();
        let model = classifier::LogisticModel::train(&rows, &targets, vocab.len())?;

        let clamp: Vec<Option<f64>> = assignments
            .iter()
            .map(|a| a.label.is_labeled().then(|| a.label.sign()))
            .collect();
        let scores = propagation::propagate_indexed(&graph, &clamp);

        let mut candidates: BTreeMap<StanceLabel, Vec<(f64, usize)>> = BTreeMap::new();
        for u in 0..users.len() {
            if assignments[u].label.is_labeled() {
                continue;
            }
            let prob = model.probability(&features[u]);
            let (class, conf) = if prob > 0.5 {
                (StanceLabel::Believer, prob)
            } else if prob < 0.5 {
                (StanceLabel::Disbeliever, 1.0 - prob)
            } else {
                continue;
            };
            let s = scores[u];
            let magnitude = s.abs();
            if s.signum() != class.sign() || s == 0.0 {
                continue;
            }
            if conf >= params.theta_t && magnitude >= params.theta_i && magnitude > params.theta_u {
                candidates.entry(class).or_default().push((conf.min(magnitude), u));
            }
        }

        let mut adopted = 0usize;
        for (label, mut list) in candidates {
            list.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            for (confidence, u) in list.into_iter().take(params.k) {
                assignments[u].label = label;
                assignments[u].confidence = confidence;
                assignments[u].origin = Origin::CoTrained;
                adopted += 1;
            }
        }
        log::debug!("co-training round {}: adopted {adopted}", round + 1);
        if adopted == 0 {
            break;
        }
    }
    Ok(assignments)
}

/// Writes `user_id,label,confidence,origin` rows with a header.
pub fn write_assignments<W: Write>(out: W, assignments: &[StanceAssignment]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for a in assignments {
        w.serialize(a)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_assignments<R: std::io::Read>(input: R) -> Result<Vec<StanceAssignment>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// Label lookup keyed by user id.
pub fn label_map(assignments: &[StanceAssignment]) -> BTreeMap<String, StanceLabel> {
    assignments.iter().map(|a| (a.user_id.clone(), a.label)).collect()
}
