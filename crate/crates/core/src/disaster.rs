//! Natural-disaster vocabulary in hostile versus ordinary weeks.
//!
//! Two prevalence measures per group-week:
//!
//! * hashtags: share of the week's 100 most frequent hashtags that contain
//!   a disaster term as a substring (`#hurricaneseason` matches
//!   `hurricane`);
//! * messages: share of messages with at least one token equal to a
//!   disaster term (`flooding` does not match `flood`).
//!
//! Weekly values are averaged within the hostile and the ordinary weeks of
//! each group, with standard errors across weeks.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Message;
use crate::error::{Error, Result};
use crate::polarization::SeriesSummary;
use crate::sentiment::tokenize;
use crate::stance::StanceLabel;

pub const TOP_HASHTAGS: usize = 100;

const BUNDLED_TERMS: &str = include_str!("../data/disaster_terms.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisasterLexicon {
    terms: BTreeSet<String>,
}

impl DisasterLexicon {
    pub fn new<I, S>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = BTreeSet::new();
        for t in terms {
            let t = t.as_ref().trim();
            if t.is_empty() {
                continue;
            }
            if t.chars().any(char::is_whitespace) || t.to_lowercase() != t {
                return Err(Error::Config(format!(
                    "disaster term {t:?} must be lowercase without whitespace"
                )));
            }
            set.insert(t.to_owned());
        }
        if set.is_empty() {
            return Err(Error::Config("disaster lexicon is empty".into()));
        }
        Ok(Self { terms: set })
    }

    /// The bundled natural-disaster word list.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_TERMS).expect("bundled disaster terms are valid")
    }

    /// One term per line.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(text.lines())
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingInput(path.to_path_buf()));
        }
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.terms.contains(token)
    }

    pub fn matches_substring(&self, text: &str) -> bool {
        self.terms.iter().any(|t| text.contains(t.as_str()))
    }
}

/// The `limit` most frequent hashtags, ties broken alphabetically.
pub fn top_hashtags<'a, I>(messages: I, limit: usize) -> Vec<String>
where
    I: IntoIterator<Item = &'a Message>,
{
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for m in messages {
        for t in &m.hashtags {
            *counts.entry(t.as_str()).or_default() += 1;
        }
    }
    let mut ranked: Vec<(&str, u64)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    ranked.into_iter().take(limit).map(|(t, _)| t.to_owned()).collect()
}

/// Percentage of the top-100 hashtags containing a disaster term; `None`
/// when the messages carry no hashtags.
pub fn hashtag_prevalence<'a, I>(messages: I, lexicon: &DisasterLexicon) -> Option<f64>
where
    I: IntoIterator<Item = &'a Message>,
{
    let top = top_hashtags(messages, TOP_HASHTAGS);
    if top.is_empty() {
        return None;
    }
    let hits = top.iter().filter(|t| lexicon.matches_substring(t)).count();
    Some(100.0 * hits as f64 / top.len() as f64)
}

pub fn message_mentions_disaster(message: &Message, lexicon: &DisasterLexicon) -> bool {
    tokenize(&message.text)
        .iter()
        .any(|tok| lexicon.contains(tok.strip_prefix('#').unwrap_or(tok)))
}

/// Percentage of messages with a token equal to a disaster term; `None`
/// for an empty set.
pub fn tweet_prevalence<'a, I>(messages: I, lexicon: &DisasterLexicon) -> Option<f64>
where
    I: IntoIterator<Item = &'a Message>,
{
    let (mut hits, mut total) = (0u64, 0u64);
    for m in messages {
        total += 1;
        if message_mentions_disaster(m, lexicon) {
            hits += 1;
        }
    }
    (total > 0).then(|| 100.0 * hits as f64 / total as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    Hostile,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Hashtag,
    Tweet,
}

/// Mean prevalence (percent) across the weeks of one group and condition.
/// `None` marks a metric with no usable week.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrevalenceCell {
    pub group: StanceLabel,
    pub condition: Condition,
    pub n_weeks: usize,
    pub hashtag_pct: Option<f64>,
    pub se_hashtag: Option<f64>,
    pub n_hashtag_weeks: usize,
    pub tweet_pct: Option<f64>,
    pub se_tweet: Option<f64>,
    pub n_tweet_weeks: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReportOptions {
    /// Rank hashtags over all weeks of a condition at once instead of per
    /// week. The pooled value has no across-week spread, so its SE is 0.
    pub pooled_hashtags: bool,
}

/// Mean and standard error (sample SD / √n; 0 for a single week).
fn mean_se(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (Some(mean), Some(0.0));
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (Some(mean), Some((var / n).sqrt()))
}

/// Prevalence cells for each group × {hostile, other}.
///
/// `weeks` maps week index to that week's messages; only weeks with a
/// defined polarization value (listed in `defined_weeks` per group) are
/// used, split by the group's hostile set. A condition without weeks is
/// omitted.
pub fn report(
    weeks: &BTreeMap<u32, Vec<Message>>,
    stances: &BTreeMap<String, StanceLabel>,
    summaries: &BTreeMap<StanceLabel, SeriesSummary>,
    defined_weeks: &BTreeMap<StanceLabel, BTreeSet<u32>>,
    lexicon: &DisasterLexicon,
    options: ReportOptions,
) -> Vec<PrevalenceCell> {
    let mut cells = Vec::new();
    for group in StanceLabel::GROUPS {
        let Some(summary) = summaries.get(&group) else {
            log::warn!("no polarization summary for {group}; skipping its report");
            continue;
        };
        let Some(defined) = defined_weeks.get(&group) else { continue };
        for condition in [Condition::Hostile, Condition::Other] {
            let chosen: Vec<u32> = defined
                .iter()
                .copied()
                .filter(|w| summary.is_hostile(*w) == (condition == Condition::Hostile))
                .collect();
            if chosen.is_empty() {
                log::warn!("{group}: no {condition:?} weeks, cell omitted");
                continue;
            }
            let group_msgs = |w: &u32| -> Vec<&Message> {
                weeks
                    .get(w)
                    .map(|msgs| {
                        msgs.iter()
                            .filter(|m| stances.get(&m.author_id) == Some(&group))
                            .collect()
                    })
                    .unwrap_or_default()
            };
            let per_week: Vec<Vec<&Message>> = chosen.iter().map(group_msgs).collect();
            let tweet: Vec<f64> = per_week
                .iter()
                .filter_map(|msgs| tweet_prevalence(msgs.iter().copied(), lexicon))
                .collect();
            let (hashtag_pct, se_hashtag, n_hashtag_weeks) = if options.pooled_hashtags {
                let pooled = hashtag_prevalence(per_week.iter().flatten().copied(), lexicon);
                let usable = per_week.iter().filter(|m| m.iter().any(|x| !x.hashtags.is_empty())).count();
                (pooled, pooled.map(|_| 0.0), usable)
            } else {
                let tags: Vec<f64> = per_week
                    .iter()
                    .filter_map(|msgs| hashtag_prevalence(msgs.iter().copied(), lexicon))
                    .collect();
                let (m, se) = mean_se(&tags);
                (m, se, tags.len())
            };
            let (tweet_pct, se_tweet) = mean_se(&tweet);
            if hashtag_pct.is_none() && tweet_pct.is_none() {
                log::warn!("{group}: no usable {condition:?} weeks, cell omitted");
                continue;
            }
            cells.push(PrevalenceCell {
                group,
                condition,
                n_weeks: chosen.len(),
                hashtag_pct,
                se_hashtag,
                n_hashtag_weeks,
                tweet_pct,
                se_tweet,
                n_tweet_weeks: tweet.len(),
            });
        }
    }
    cells
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ReportRow {
    pub group: StanceLabel,
    pub condition: Condition,
    pub metric: Metric,
    pub value: Option<f64>,
    pub se: Option<f64>,
    pub n_weeks: usize,
}

/// Writes `group,condition,metric,value,se,n_weeks`, two rows per cell.
/// `n_weeks` counts the weeks that contributed to that metric.
pub fn write_report<W: Write>(out: W, cells: &[PrevalenceCell]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for c in cells {
        w.serialize(ReportRow {
            group: c.group,
            condition: c.condition,
            metric: Metric::Hashtag,
            value: c.hashtag_pct,
            se: c.se_hashtag,
            n_weeks: c.n_hashtag_weeks,
        })?;
        w.serialize(ReportRow {
            group: c.group,
            condition: c.condition,
            metric: Metric::Tweet,
            value: c.tweet_pct,
            se: c.se_tweet,
            n_weeks: c.n_tweet_weeks,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_report<R: std::io::Read>(input: R) -> Result<Vec<ReportRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}
