//! Corpus ingestion and weekly windowing.
//!
//! Input is one JSON object per line:
//!
//! ```text
//! {"id":"1","user":"alice","ts":1504137600,"text":"...","mentions":["bob"],"reply_to":null,"retweet_of":null,"hashtags":["ClimateHoax"]}
//! ```
//!
//! Ingestion keeps one record per `id`, drops records outside the collection
//! interval or inside an excluded gap, and normalizes hashtags (leading `#`
//! stripped, Unicode NFC, lowercase). Lines that fail to parse are counted
//! and skipped; a corpus where more than half the lines are malformed is
//! rejected outright.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Deserializer, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

pub const DAY_SECONDS: i64 = 86_400;
pub const WEEK_SECONDS: i64 = 7 * DAY_SECONDS;

/// Half-open interval `[start, end)` of UTC epoch seconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TimeRange {
    pub start: i64,
    pub end: i64,
}

impl TimeRange {
    pub fn new(start: i64, end: i64) -> Self {
        Self { start, end }
    }

    /// Whole days `first..=last`, from 00:00 UTC of `first` to 00:00 UTC of
    /// the day after `last`.
    pub fn from_days(first: NaiveDate, last: NaiveDate) -> Self {
        Self {
            start: day_start(first),
            end: day_start(last) + DAY_SECONDS,
        }
    }

    pub fn contains(&self, ts: i64) -> bool {
        self.start <= ts && ts < self.end
    }

    pub fn overlaps(&self, other: &TimeRange) -> bool {
        self.start < other.end && other.start < self.end
    }
}

pub fn day_start(date: NaiveDate) -> i64 {
    date.and_hms_opt(0, 0, 0)
        .expect("midnight is a valid time")
        .and_utc()
        .timestamp()
}

/// Collection interval and pauses, both given as inclusive calendar days.
///
/// ```toml
/// collection_start = "2017-08-26"
/// collection_end = "2019-09-14"
/// gaps = [["2018-04-07", "2018-05-21"], ["2019-05-12", "2019-05-16"]]
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusConfig {
    #[serde(deserialize_with = "de_date")]
    pub collection_start: NaiveDate,
    #[serde(deserialize_with = "de_date")]
    pub collection_end: NaiveDate,
    #[serde(default, deserialize_with = "de_date_pairs")]
    pub gaps: Vec<[NaiveDate; 2]>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DateRepr {
    Text(String),
    Toml(toml::value::Datetime),
}

impl DateRepr {
    fn into_date<E: serde::de::Error>(self) -> std::result::Result<NaiveDate, E> {
        let text = match self {
            DateRepr::Text(s) => s,
            DateRepr::Toml(d) => d.to_string(),
        };
        NaiveDate::parse_from_str(text.trim(), "%Y-%m-%d")
            .map_err(|e| E::custom(format!("invalid date {text:?}: {e}")))
    }
}

fn de_date<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<NaiveDate, D::Error> {
    DateRepr::deserialize(d)?.into_date()
}

fn de_date_pairs<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<Vec<[NaiveDate; 2]>, D::Error> {
    let raw: Vec<[DateRepr; 2]> = Vec::deserialize(d)?;
    raw.into_iter()
        .map(|[a, b]| Ok([a.into_date()?, b.into_date()?]))
        .collect()
}

impl CorpusConfig {
    /// The collection window of the original climate-discourse study.
    pub fn climate_study() -> Self {
        let d = |y, m, day| NaiveDate::from_ymd_opt(y, m, day).expect("valid date");
        Self {
            collection_start: d(2017, 8, 26),
            collection_end: d(2019, 9, 14),
            gaps: vec![[d(2018, 4, 7), d(2018, 5, 21)], [d(2019, 5, 12), d(2019, 5, 16)]],
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: Self =
            toml::from_str(text).map_err(|e| Error::Config(format!("corpus config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingInput(path.to_path_buf()));
        }
        Self::from_toml_str(&fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        let fmt = |d: &NaiveDate| d.format("%Y-%m-%d").to_string();
        let gaps: Vec<String> = self
            .gaps
            .iter()
            .map(|[a, b]| format!("[\"{}\", \"{}\"]", fmt(a), fmt(b)))
            .collect();
        format!(
            "collection_start = \"{}\"\ncollection_end = \"{}\"\ngaps = [{}]\n",
            fmt(&self.collection_start),
            fmt(&self.collection_end),
            gaps.join(", ")
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.collection_end < self.collection_start {
            return Err(Error::Config("collection_end precedes collection_start".into()));
        }
        for [a, b] in &self.gaps {
            if b < a {
                return Err(Error::Config(format!("gap {a}..{b} is reversed")));
            }
        }
        Ok(())
    }

    pub fn interval(&self) -> TimeRange {
        TimeRange::from_days(self.collection_start, self.collection_end)
    }

    pub fn gap_ranges(&self) -> Vec<TimeRange> {
        self.gaps.iter().map(|[a, b]| TimeRange::from_days(*a, *b)).collect()
    }

    /// Week 0 starts at midnight UTC of the first collection day.
    pub fn anchor(&self) -> i64 {
        day_start(self.collection_start)
    }

    pub fn ingest_options(&self) -> IngestOptions {
        IngestOptions {
            interval: Some(self.interval()),
            gaps: self.gap_ranges(),
        }
    }
}

/// Filters applied during ingestion. `interval: None` accepts any timestamp.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestOptions {
    pub interval: Option<TimeRange>,
    pub gaps: Vec<TimeRange>,
}

impl IngestOptions {
    pub fn in_gap(&self, ts: i64) -> bool {
        self.gaps.iter().any(|g| g.contains(ts))
    }
}

/// One interaction record after normalization.
///
/// `mentioned_users` always contains the reply target when there is one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Message {
    #[serde(rename = "id")]
    pub message_id: String,
    #[serde(rename = "user")]
    pub author_id: String,
    #[serde(rename = "ts")]
    pub timestamp: i64,
    pub text: String,
    #[serde(rename = "mentions")]
    pub mentioned_users: Vec<String>,
    #[serde(rename = "reply_to")]
    pub reply_to_user: Option<String>,
    #[serde(rename = "retweet_of")]
    pub retweet_of_user: Option<String>,
    pub hashtags: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    id: String,
    user: String,
    ts: i64,
    text: String,
    mentions: Vec<String>,
    reply_to: Option<String>,
    retweet_of: Option<String>,
    hashtags: Vec<String>,
}

pub fn normalize_hashtag(tag: &str) -> Option<String> {
    let stripped = tag.trim_start_matches('#');
    let norm = if stripped.is_ascii() {
        stripped.to_ascii_lowercase()
    } else {
        stripped.nfc().collect::<String>().to_lowercase()
    };
    if norm.is_empty() || norm.contains('#') || norm.chars().any(char::is_whitespace) {
        None
    } else {
        Some(norm)
    }
}

impl Message {
    /// Parses and normalizes one input line.
    pub fn parse_line(line: &str) -> std::result::Result<Message, String> {
        let raw: RawRecord = serde_json::from_str(line).map_err(|e| e.to_string())?;
        if raw.id.is_empty() {
            return Err("empty id".into());
        }
        if raw.user.is_empty() {
            return Err("empty user".into());
        }
        let hashtags = raw
            .hashtags
            .iter()
            .map(|t| normalize_hashtag(t).ok_or_else(|| format!("invalid hashtag {t:?}")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let mut mentions = raw.mentions;
        if mentions.iter().any(String::is_empty) {
            return Err("empty mention".into());
        }
        let reply_to = raw.reply_to.filter(|r| !r.is_empty());
        if let Some(r) = &reply_to {
            if !mentions.contains(r) {
                mentions.push(r.clone());
            }
        }
        Ok(Message {
            message_id: raw.id,
            author_id: raw.user,
            timestamp: raw.ts,
            text: raw.text,
            mentioned_users: mentions,
            reply_to_user: reply_to,
            retweet_of_user: raw.retweet_of.filter(|r| !r.is_empty()),
            hashtags,
        })
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("message serializes")
    }

    pub fn is_retweet(&self) -> bool {
        self.retweet_of_user.is_some()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub raw_lines: u64,
    pub malformed_lines: u64,
    pub message_count: u64,
    pub user_count: u64,
    pub week_count: u64,
    pub dropped_duplicates: u64,
    pub dropped_in_gaps: u64,
    pub dropped_out_of_range: u64,
}

impl CorpusStats {
    pub fn write_kv<W: Write>(&self, mut out: W) -> Result<()> {
        let rows = [
            ("raw_lines", self.raw_lines),
            ("malformed_lines", self.malformed_lines),
            ("message_count", self.message_count),
            ("user_count", self.user_count),
            ("week_count", self.week_count),
            ("dropped_duplicates", self.dropped_duplicates),
            ("dropped_in_gaps", self.dropped_in_gaps),
            ("dropped_out_of_range", self.dropped_out_of_range),
        ];
        for (key, value) in rows {
            writeln!(out, "{key}={value}")?;
        }
        Ok(())
    }

    pub fn read_kv(text: &str) -> Result<Self> {
        let mut stats = CorpusStats::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse("corpus stats", i + 1, "expected key=value"))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|e| Error::parse("corpus stats", i + 1, format!("{e}")))?;
            let slot = match key.trim() {
                "raw_lines" => &mut stats.raw_lines,
                "malformed_lines" => &mut stats.malformed_lines,
                "message_count" => &mut stats.message_count,
                "user_count" => &mut stats.user_count,
                "week_count" => &mut stats.week_count,
                "dropped_duplicates" => &mut stats.dropped_duplicates,
                "dropped_in_gaps" => &mut stats.dropped_in_gaps,
                "dropped_out_of_range" => &mut stats.dropped_out_of_range,
                other => {
                    return Err(Error::parse("corpus stats", i + 1, format!("unknown key {other}")))
                }
            };
            *slot = value;
        }
        Ok(stats)
    }
}

/// Reads line-delimited records, keeping one message per id.
///
/// When the same id appears more than once the smallest record (by the
/// derived ordering) wins, so the result does not depend on line order.
/// The output is sorted by `(timestamp, message_id)`.
pub fn ingest<R: BufRead>(reader: R, options: &IngestOptions) -> Result<(Vec<Message>, CorpusStats)> {
    let mut stats = CorpusStats::default();
    let mut kept: Vec<Message> = Vec::new();
    let mut by_id: HashMap<String, usize> = HashMap::new();

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        stats.raw_lines += 1;
        match Message::parse_line(&line) {
            Ok(msg) => match by_id.entry(msg.message_id.clone()) {
                Entry::Vacant(slot) => {
                    slot.insert(kept.len());
                    kept.push(msg);
                }
                Entry::Occupied(slot) => {
                    stats.dropped_duplicates += 1;
                    let current = &mut kept[*slot.get()];
                    if msg < *current {
                        *current = msg;
                    }
                }
            },
            Err(reason) => {
                stats.malformed_lines += 1;
                log::debug!("skipping malformed line {}: {reason}", lineno + 1);
            }
        }
    }

    if stats.malformed_lines * 2 > stats.raw_lines {
        return Err(Error::CorruptCorpus {
            malformed: stats.malformed_lines,
            total: stats.raw_lines,
        });
    }
    if stats.malformed_lines > 0 {
        log::warn!("skipped {} malformed lines", stats.malformed_lines);
    }

    let mut messages = Vec::with_capacity(kept.len());
    for msg in kept {
        if options.interval.is_some_and(|iv| !iv.contains(msg.timestamp)) {
            stats.dropped_out_of_range += 1;
        } else if options.in_gap(msg.timestamp) {
            stats.dropped_in_gaps += 1;
        } else {
            messages.push(msg);
        }
    }
    messages.sort_by(|a, b| (a.timestamp, &a.message_id).cmp(&(b.timestamp, &b.message_id)));

    stats.message_count = messages.len() as u64;
    stats.user_count = messages
        .iter()
        .map(|m| m.author_id.as_str())
        .collect::<BTreeSet<_>>()
        .len() as u64;
    let anchor = options
        .interval
        .map(|iv| iv.start)
        .or_else(|| messages.first().map(|m| floor_to_day(m.timestamp)));
    if let Some(anchor) = anchor {
        stats.week_count = messages
            .iter()
            .map(|m| (m.timestamp - anchor).div_euclid(WEEK_SECONDS))
            .collect::<BTreeSet<_>>()
            .len() as u64;
    }
    Ok((messages, stats))
}

pub fn floor_to_day(ts: i64) -> i64 {
    ts.div_euclid(DAY_SECONDS) * DAY_SECONDS
}

pub fn write_jsonl<W: Write>(mut out: W, messages: &[Message]) -> Result<()> {
    for msg in messages {
        serde_json::to_writer(&mut out, msg)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// A seven-day window `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WeekWindow {
    pub index: u32,
    pub start: i64,
    pub end: i64,
}

impl WeekWindow {
    pub fn at(anchor: i64, index: u32) -> Self {
        let start = anchor + i64::from(index) * WEEK_SECONDS;
        Self {
            index,
            start,
            end: start + WEEK_SECONDS,
        }
    }

    pub fn range(&self) -> TimeRange {
        TimeRange::new(self.start, self.end)
    }

    pub fn overlaps_any(&self, gaps: &[TimeRange]) -> bool {
        gaps.iter().any(|g| g.overlaps(&self.range()))
    }
}

/// Assigns each message to window `floor((ts - anchor) / 604800)`.
///
/// Every window between 0 and the last occupied one is present, except
/// empty windows that overlap a gap.
pub fn window(
    messages: Vec<Message>,
    anchor: i64,
    gaps: &[TimeRange],
) -> Result<BTreeMap<WeekWindow, Vec<Message>>> {
    let mut buckets: BTreeMap<u32, Vec<Message>> = BTreeMap::new();
    for msg in messages {
        if msg.timestamp < anchor {
            return Err(Error::Ordering {
                id: msg.message_id,
                ts: msg.timestamp,
                anchor,
            });
        }
        let index = u32::try_from((msg.timestamp - anchor) / WEEK_SECONDS)
            .map_err(|_| Error::Config(format!("timestamp {} too far from anchor", msg.timestamp)))?;
        buckets.entry(index).or_default().push(msg);
    }
    let Some(&last) = buckets.keys().next_back() else {
        return Ok(BTreeMap::new());
    };
    let mut out = BTreeMap::new();
    for index in 0..=last {
        let win = WeekWindow::at(anchor, index);
        match buckets.remove(&index) {
            Some(mut msgs) => {
                msgs.sort_by(|a, b| (a.timestamp, &a.message_id).cmp(&(b.timestamp, &b.message_id)));
                out.insert(win, msgs);
            }
            None if win.overlaps_any(gaps) => {}
            None => {
                out.insert(win, Vec::new());
            }
        }
    }
    Ok(out)
}

/// One row of the week table handed from ingestion to later stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeekInfo {
    pub week: u32,
    pub start: i64,
    pub end: i64,
    pub messages: u64,
    /// Windows touching a collection gap are left out of every metric.
    pub excluded: bool,
}

impl WeekInfo {
    pub fn window(&self) -> WeekWindow {
        WeekWindow {
            index: self.week,
            start: self.start,
            end: self.end,
        }
    }
}

pub fn week_table(windows: &BTreeMap<WeekWindow, Vec<Message>>, gaps: &[TimeRange]) -> Vec<WeekInfo> {
    windows
        .iter()
        .map(|(w, msgs)| WeekInfo {
            week: w.index,
            start: w.start,
            end: w.end,
            messages: msgs.len() as u64,
            excluded: w.overlaps_any(gaps),
        })
        .collect()
}

/// Index of the window containing `ts`, if it is not before the anchor.
pub fn week_of(ts: i64, anchor: i64) -> Option<u32> {
    if ts < anchor {
        None
    } else {
        u32::try_from((ts - anchor) / WEEK_SECONDS).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(id: &str, user: &str, ts: i64) -> String {
        format!(
            r#"{{"id":"{id}","user":"{user}","ts":{ts},"text":"hi","mentions":[],"reply_to":null,"retweet_of":null,"hashtags":[]}}"#
        )
    }

    fn open() -> IngestOptions {
        IngestOptions::default()
    }

    #[test]
    fn duplicate_ids_collapse() {
        let input = format!("{}\n{}\n", line("1", "a", 10), line("1", "a", 10));
        let (msgs, stats) = ingest(input.as_bytes(), &open()).unwrap();
        assert_eq!(msgs.len(), 1);
        assert_eq!(stats.dropped_duplicates, 1);
    }

    #[test]
    fn records_in_the_spring_2018_pause_are_dropped() {
        let cfg = CorpusConfig::climate_study();
        let inside = day_start(NaiveDate::from_ymd_opt(2018, 4, 20).unwrap());
        let outside = day_start(NaiveDate::from_ymd_opt(2018, 6, 1).unwrap());
        let input = format!("{}\n{}\n", line("1", "a", inside), line("2", "a", outside));
        let (msgs, stats) = ingest(input.as_bytes(), &cfg.ingest_options()).unwrap();
        assert_eq!(stats.dropped_in_gaps, 1);
        assert_eq!(msgs.len(), 1);
        assert_eq!(msgs[0].message_id, "2");
    }

    #[test]
    fn gap_days_are_inclusive() {
        let cfg = CorpusConfig::climate_study();
        let opts = cfg.ingest_options();
        let first = day_start(NaiveDate::from_ymd_opt(2018, 4, 7).unwrap());
        let last = day_start(NaiveDate::from_ymd_opt(2018, 5, 21).unwrap()) + DAY_SECONDS - 1;
        assert!(opts.in_gap(first));
        assert!(opts.in_gap(last));
        assert!(!opts.in_gap(first - 1));
        assert!(!opts.in_gap(last + 1));
    }

    #[test]
    fn empty_source() {
        let (msgs, stats) = ingest("".as_bytes(), &open()).unwrap();
        assert!(msgs.is_empty());
        assert_eq!(stats, CorpusStats::default());
    }

    #[test]
    fn malformed_lines_are_skipped_until_majority() {
        let input = format!("{}\nnot json\n", line("1", "a", 10));
        let (msgs, stats) = ingest(input.as_bytes(), &open()).unwrap();
        assert_eq!(msgs.len(), 1);
        assert_eq!(stats.malformed_lines, 1);

        let input = format!("{}\nnot json\n{{}}\n", line("1", "a", 10));
        assert!(matches!(
            ingest(input.as_bytes(), &open()),
            Err(Error::CorruptCorpus { malformed: 2, total: 3 })
        ));
    }

    #[test]
    fn unknown_fields_are_malformed() {
        let good = line("1", "a", 10);
        let bad = good.replace("\"hashtags\":[]", "\"hashtags\":[],\"lang\":\"en\"");
        let input = format!("{good}\n{bad}\n");
        let (_, stats) = ingest(input.as_bytes(), &open()).unwrap();
        assert_eq!(stats.malformed_lines, 1);
    }

    #[test]
    fn hashtags_and_reply_targets_are_normalized() {
        let l = r##"{"id":"9","user":"u","ts":5,"text":"x","mentions":["b"],"reply_to":"c","retweet_of":null,"hashtags":["#ClimateHoax","SaveTheEarth"]}"##;
        let m = Message::parse_line(l).unwrap();
        assert_eq!(m.hashtags, vec!["climatehoax", "savetheearth"]);
        assert_eq!(m.mentioned_users, vec!["b", "c"]);
        assert!(Message::parse_line(&l.replace("SaveTheEarth", "save earth")).is_err());
    }

    #[test]
    fn hashtags_are_nfc_normalized() {
        // "e" + combining acute accent composes to U+00E9.
        assert_eq!(normalize_hashtag("#Cafe\u{301}").unwrap(), "caf\u{e9}");
    }

    #[test]
    fn out_of_interval_records_are_dropped() {
        let cfg = CorpusConfig::climate_study();
        let input = format!("{}\n", line("1", "a", 0));
        let (msgs, stats) = ingest(input.as_bytes(), &cfg.ingest_options()).unwrap();
        assert!(msgs.is_empty());
        assert_eq!(stats.dropped_out_of_range, 1);
    }

    fn msg(id: &str, ts: i64) -> Message {
        Message::parse_line(&line(id, "a", ts)).unwrap()
    }

    #[test]
    fn window_boundaries() {
        let anchor = 1_000;
        let w = window(vec![msg("a", anchor + 604_799), msg("b", anchor + 604_800)], anchor, &[]).unwrap();
        let got: Vec<(u32, Vec<&str>)> = w
            .iter()
            .map(|(k, v)| (k.index, v.iter().map(|m| m.message_id.as_str()).collect()))
            .collect();
        assert_eq!(got, vec![(0, vec!["a"]), (1, vec!["b"])]);
        for k in w.keys() {
            assert_eq!(k.end - k.start, WEEK_SECONDS);
        }
    }

    #[test]
    fn three_weeks_of_ten() {
        let anchor = 0;
        let msgs: Vec<Message> = (0..30)
            .map(|i| msg(&format!("m{i}"), (i / 10) * WEEK_SECONDS + (i % 10) * 3_600))
            .collect();
        let w = window(msgs, anchor, &[]).unwrap();
        assert_eq!(w.len(), 3);
        assert!(w.values().all(|v| v.len() == 10));
    }

    #[test]
    fn message_before_anchor_is_fatal() {
        assert!(matches!(window(vec![msg("a", 5)], 10, &[]), Err(Error::Ordering { .. })));
    }

    #[test]
    fn empty_gap_windows_are_omitted() {
        let gap = TimeRange::new(WEEK_SECONDS, 2 * WEEK_SECONDS);
        let w = window(vec![msg("a", 0), msg("b", 3 * WEEK_SECONDS)], 0, &[gap]).unwrap();
        let idx: Vec<u32> = w.keys().map(|k| k.index).collect();
        assert_eq!(idx, vec![0, 2, 3]);
        let table = week_table(&w, &[gap]);
        assert!(table.iter().all(|t| !t.excluded));

        // A partially observed week stays in the map but is flagged.
        let gap = TimeRange::new(WEEK_SECONDS + 10, 2 * WEEK_SECONDS + 10);
        let w = window(vec![msg("a", WEEK_SECONDS + 1)], 0, &[gap]).unwrap();
        let table = week_table(&w, &[gap]);
        assert_eq!(table.iter().map(|t| (t.week, t.excluded)).collect::<Vec<_>>(), vec![(0, false), (1, true)]);
    }

    #[test]
    fn config_accepts_quoted_and_bare_dates() {
        let quoted = CorpusConfig::from_toml_str(
            "collection_start = \"2017-08-26\"\ncollection_end = \"2019-09-14\"\ngaps = [[\"2018-04-07\", \"2018-05-21\"], [\"2019-05-12\", \"2019-05-16\"]]\n",
        )
        .unwrap();
        let bare = CorpusConfig::from_toml_str(
            "collection_start = 2017-08-26\ncollection_end = 2019-09-14\ngaps = [[2018-04-07, 2018-05-21], [2019-05-12, 2019-05-16]]\n",
        )
        .unwrap();
        assert_eq!(quoted, CorpusConfig::climate_study());
        assert_eq!(bare, quoted);
        assert_eq!(CorpusConfig::from_toml_str(&quoted.to_toml_string()).unwrap(), quoted);
        assert!(CorpusConfig::from_toml_str("collection_start = \"2019-01-02\"\ncollection_end = \"2019-01-01\"\n").is_err());
    }

    #[test]
    fn stats_kv_round_trip() {
        let stats = CorpusStats {
            raw_lines: 9,
            malformed_lines: 1,
            message_count: 5,
            user_count: 3,
            week_count: 2,
            dropped_duplicates: 1,
            dropped_in_gaps: 1,
            dropped_out_of_range: 1,
        };
        let mut buf = Vec::new();
        stats.write_kv(&mut buf).unwrap();
        assert_eq!(CorpusStats::read_kv(std::str::from_utf8(&buf).unwrap()).unwrap(), stats);
    }
}
