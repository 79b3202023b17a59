//! Synthetic two-community corpora with planted ground truth.
//!
//! Every generated message goes through the same text path as real data:
//! sentiment is planted by placing one lexicon word next to the `@target`
//! handle, stance is carried by group-specific vocabulary, hashtags and
//! retweets, and a small share of users close messages with a seed hashtag.
//! Hostile weeks shift a group's out-group sentiment and change its rate
//! of disaster vocabulary.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use chrono::{Days, NaiveDate};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;
use serde::{Deserialize, Serialize};

use crate::corpus::{day_start, CorpusConfig, Message, WEEK_SECONDS};
use crate::error::{Error, Result};
use crate::sentiment::ValenceLexicon;
use crate::stance::{SeedConfig, StanceLabel};

/// Per-group generation plan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupPlan {
    /// Mean sentiment toward members of the same group.
    pub in_group_mean: f64,
    /// Mean sentiment toward the other group in ordinary weeks.
    pub out_group_mean: f64,
    /// Mean sentiment toward the other group in hostile weeks.
    pub hostile_out_group_mean: f64,
    /// Number of planted hostile weeks.
    pub hostile_weeks: usize,
    /// Per-message probability of disaster vocabulary in hostile weeks.
    pub disaster_rate_hostile: f64,
    /// Per-message probability of disaster vocabulary otherwise.
    pub disaster_rate_other: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    pub n_users_per_group: usize,
    pub n_weeks: u32,
    pub msgs_per_user_week: usize,
    /// Probability that a mention targets the other group.
    pub p_intergroup_interaction: f64,
    pub sentiment_sd: f64,
    /// Share of users who close messages with a seed hashtag.
    pub seed_hashtag_rate: f64,
    /// Share of messages that are retweets.
    pub retweet_rate: f64,
    /// Probability that a retweet targets the author's own group.
    pub retweet_homophily: f64,
    /// Probability that a message carries the author's shared hashtag.
    pub shared_tag_rate: f64,
    /// Probability that a message with disaster vocabulary also carries a
    /// disaster hashtag.
    pub disaster_tag_share: f64,
    /// Probability that a topic word comes from the author's own group.
    pub topic_purity: f64,
    pub start_date: NaiveDate,
    pub rng_seed: u64,
    pub believer: GroupPlan,
    pub disbeliever: GroupPlan,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            n_users_per_group: 1000,
            n_weeks: 20,
            msgs_per_user_week: 3,
            p_intergroup_interaction: 0.3,
            sentiment_sd: 0.2,
            seed_hashtag_rate: 0.05,
            retweet_rate: 0.2,
            retweet_homophily: 0.97,
            shared_tag_rate: 0.1,
            disaster_tag_share: 0.5,
            topic_purity: 0.85,
            start_date: NaiveDate::from_ymd_opt(2017, 8, 26).expect("valid date"),
            rng_seed: 0,
            believer: GroupPlan {
                in_group_mean: 0.4,
                out_group_mean: 0.1,
                hostile_out_group_mean: -0.5,
                hostile_weeks: 3,
                disaster_rate_hostile: 0.05,
                disaster_rate_other: 0.15,
            },
            disbeliever: GroupPlan {
                in_group_mean: 0.4,
                out_group_mean: -0.1,
                hostile_out_group_mean: -0.7,
                hostile_weeks: 3,
                disaster_rate_hostile: 0.35,
                disaster_rate_other: 0.10,
            },
        }
    }
}

impl SynthSpec {
    pub fn with_seed(rng_seed: u64) -> Self {
        Self {
            rng_seed,
            ..Self::default()
        }
    }

    /// No planted asymmetry: every sentiment mean and disaster rate is the
    /// same for both groups, in- and out-group, in every week.
    pub fn symmetric(rng_seed: u64) -> Self {
        let plan = GroupPlan {
            in_group_mean: 0.2,
            out_group_mean: 0.2,
            hostile_out_group_mean: 0.2,
            hostile_weeks: 0,
            disaster_rate_hostile: 0.1,
            disaster_rate_other: 0.1,
        };
        Self {
            rng_seed,
            believer: plan,
            disbeliever: plan,
            ..Self::default()
        }
    }

    pub fn plan(&self, group: StanceLabel) -> &GroupPlan {
        match group {
            StanceLabel::Disbeliever => &self.disbeliever,
            _ => &self.believer,
        }
    }

    /// Expected sign of the polarization metric: +1 when the group is
    /// planted to be more negative toward the out-group than the in-group,
    /// -1 when less, 0 when even.
    pub fn planted_direction(&self, group: StanceLabel, hostile: bool) -> f64 {
        let p = self.plan(group);
        let out = if hostile { p.hostile_out_group_mean } else { p.out_group_mean };
        let diff = p.in_group_mean - out;
        if diff > 0.0 {
            1.0
        } else if diff < 0.0 {
            -1.0
        } else {
            0.0
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text).map_err(|e| Error::Config(format!("synth spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingInput(path.to_path_buf()));
        }
        Self::from_toml_str(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::Config(format!("infeasible synth spec: {what}")));
        if self.n_users_per_group < 2 {
            return bad("need at least 2 users per group".into());
        }
        if self.n_weeks == 0 || self.msgs_per_user_week == 0 {
            return bad("need at least one week and one message per user-week".into());
        }
        if !(self.sentiment_sd > 0.0 && self.sentiment_sd.is_finite()) {
            return bad("sentiment_sd must be positive".into());
        }
        let probs = [
            ("p_intergroup_interaction", self.p_intergroup_interaction),
            ("seed_hashtag_rate", self.seed_hashtag_rate),
            ("retweet_rate", self.retweet_rate),
            ("retweet_homophily", self.retweet_homophily),
            ("shared_tag_rate", self.shared_tag_rate),
            ("disaster_tag_share", self.disaster_tag_share),
            ("topic_purity", self.topic_purity),
        ];
        for (name, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} = {p} is not a probability"));
            }
        }
        for (name, plan) in [("believer", &self.believer), ("disbeliever", &self.disbeliever)] {
            for (field, m) in [
                ("in_group_mean", plan.in_group_mean),
                ("out_group_mean", plan.out_group_mean),
                ("hostile_out_group_mean", plan.hostile_out_group_mean),
            ] {
                if !(-1.0..=1.0).contains(&m) {
                    return bad(format!("{name}.{field} = {m} is outside [-1, 1]"));
                }
            }
            for (field, p) in [
                ("disaster_rate_hostile", plan.disaster_rate_hostile),
                ("disaster_rate_other", plan.disaster_rate_other),
            ] {
                if !(0.0..=1.0).contains(&p) {
                    return bad(format!("{name}.{field} = {p} is not a probability"));
                }
            }
            if plan.hostile_weeks > self.n_weeks as usize {
                return bad(format!("{name}.hostile_weeks exceeds n_weeks"));
            }
        }
        Ok(())
    }

    /// Collection interval covering exactly the generated weeks.
    pub fn corpus_config(&self) -> CorpusConfig {
        let days = u64::from(self.n_weeks) * 7 - 1;
        CorpusConfig {
            collection_start: self.start_date,
            collection_end: self.start_date + Days::new(days),
            gaps: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub stance: BTreeMap<String, StanceLabel>,
    pub planted_hostile_weeks: BTreeMap<StanceLabel, BTreeSet<u32>>,
}

impl GroundTruth {
    pub fn is_hostile(&self, group: StanceLabel, week: u32) -> bool {
        self.planted_hostile_weeks.get(&group).is_some_and(|w| w.contains(&week))
    }
}

#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub spec: SynthSpec,
    pub messages: Vec<Message>,
    pub truth: GroundTruth,
}

const FILLERS: &[&str] = &[
    "the", "and", "this", "about", "just", "really", "people", "today", "what", "now", "here", "then",
    "still", "again", "with", "from", "that", "they", "our", "your",
];

const BELIEVER_WORDS: &[&str] = &[
    "renewables", "emissions", "solar", "turbines", "carbon", "scientists", "warming", "planet",
    "sustainable", "electric", "decarbonize", "biodiversity", "coral", "glaciers", "methane",
    "greenhouse", "consensus", "ipcc", "activists", "youth", "strike", "recycling", "footprint",
    "conservation", "ecosystems", "oceans", "arctic", "adaptation", "mitigation", "transition",
];

const DISBELIEVER_WORDS: &[&str] = &[
    "taxes", "globalists", "scam", "agenda", "freedom", "elites", "socialism", "grift", "alarmists",
    "propaganda", "tyranny", "bureaucrats", "hysteria", "fraudsters", "jobs", "coal", "pipeline",
    "patriots", "sovereignty", "mainstream", "media", "narrative", "funding", "gravy", "cult",
    "regulations", "overreach", "deep", "fakers", "freeloaders",
];

const SHARED_WORDS: &[&str] = &[
    "climate", "change", "energy", "policy", "government", "world", "year", "news", "debate",
    "summer", "winter", "weather", "temperature", "data", "report", "vote", "election", "money",
    "economy", "country", "city", "week", "article", "video", "study", "question", "future",
    "children", "plan", "cost",
];

const BELIEVER_TAG_STEMS: &[&str] = &[
    "climateaction", "greenfuture", "cleanenergy", "solarpower", "renewable", "sustainability",
    "netzero", "climatejustice", "fridaysforfuture", "parisagreement",
];

const DISBELIEVER_TAG_STEMS: &[&str] = &[
    "climatescam", "globalwarmingscam", "carbontax", "maga", "draintheswamp", "fakescience",
    "energyindependence", "climatecult", "nogreennewdeal", "trump2020",
];

const TAG_SUFFIXES: &[&str] = &[
    "", "now", "2019", "today", "matters", "movement", "forall", "team", "news", "usa", "uk", "daily",
];

const SHARED_TAGS: &[&str] = &[
    "climatechange", "climate", "globalwarming", "environment", "weather", "science", "energy", "politics",
];

const DISASTER_TAG_STEMS: &[&str] = &[
    "hurricane", "flood", "wildfire", "drought", "heatwave", "tornado", "storm", "earthquake",
    "blizzard", "cyclone",
];

const DISASTER_TAG_SUFFIXES: &[&str] = &["", "watch", "season", "2019", "relief", "alert", "news", "victims"];

const DISASTER_WORDS: &[&str] = &[
    "hurricane", "flood", "drought", "heatwave", "tornado", "storm", "forestfire", "fire", "earthquake",
    "blizzard", "cyclone", "disaster", "tsunami", "hail", "lightning",
];

fn tag_pool(stems: &[&str], suffixes: &[&str]) -> Vec<String> {
    let mut pool = Vec::with_capacity(stems.len() * suffixes.len());
    for suffix in suffixes {
        for stem in stems {
            pool.push(format!("{stem}{suffix}"));
        }
    }
    pool
}

/// Weights `1 / (rank + 1)` over a pool.
fn zipf(n: usize) -> WeightedIndex<f64> {
    WeightedIndex::new((0..n).map(|r| 1.0 / (r as f64 + 1.0))).expect("non-empty pool")
}

/// Lexicon words grouped by valence rounded to tenths.
struct ValenceTiers(BTreeMap<i32, Vec<String>>);

impl ValenceTiers {
    fn new(lexicon: &ValenceLexicon) -> Self {
        let mut tiers: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for (word, v) in lexicon.iter() {
            let tier = (v * 10.0).round() as i32;
            if tier != 0 && (f64::from(tier) / 10.0 - v).abs() < 1e-9 {
                tiers.entry(tier).or_default().push(word.to_owned());
            }
        }
        for words in tiers.values_mut() {
            words.sort();
        }
        Self(tiers)
    }

    /// A word whose valence is the tier nearest to `x`; `None` near zero.
    fn pick<R: Rng>(&self, x: f64, rng: &mut R) -> Option<&str> {
        let tier = (x * 10.0).round() as i32;
        if tier == 0 {
            return None;
        }
        let (_, words) = self
            .0
            .iter()
            .min_by_key(|(t, _)| (**t - tier).abs())
            .expect("lexicon has valenced words");
        words.choose(rng).map(String::as_str)
    }
}

struct User {
    id: String,
    group: StanceLabel,
    seeder: bool,
    tags: Vec<usize>,
    shared_tag: usize,
}

/// Generates a corpus. The same spec always yields the same messages.
pub fn generate(spec: &SynthSpec) -> Result<SynthCorpus> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let tiers = ValenceTiers::new(&ValenceLexicon::english_default());
    let seeds = SeedConfig::default();
    let seed_tags = |g: StanceLabel| -> Vec<&str> {
        let set = match g {
            StanceLabel::Believer => &seeds.believer_hashtags,
            _ => &seeds.disbeliever_hashtags,
        };
        set.iter().map(String::as_str).collect()
    };

    let n = spec.n_users_per_group;
    let mut groups: Vec<StanceLabel> = std::iter::repeat_n(StanceLabel::Believer, n)
        .chain(std::iter::repeat_n(StanceLabel::Disbeliever, n))
        .collect();
    groups.shuffle(&mut rng);

    let group_tags = |g: StanceLabel| match g {
        StanceLabel::Believer => tag_pool(BELIEVER_TAG_STEMS, TAG_SUFFIXES),
        _ => tag_pool(DISBELIEVER_TAG_STEMS, TAG_SUFFIXES),
    };
    let tag_pools: BTreeMap<StanceLabel, Vec<String>> =
        StanceLabel::GROUPS.iter().map(|&g| (g, group_tags(g))).collect();
    let tag_zipf = zipf(tag_pools[&StanceLabel::Believer].len());
    let shared_zipf = zipf(SHARED_TAGS.len());

    let mut users: Vec<User> = groups
        .iter()
        .enumerate()
        .map(|(i, &group)| {
            let mut tags: Vec<usize> = Vec::new();
            while tags.len() < 4 {
                let t = tag_zipf.sample(&mut rng);
                if !tags.contains(&t) {
                    tags.push(t);
                }
            }
            User {
                id: format!("u{i:05}"),
                group,
                seeder: rng.random_bool(spec.seed_hashtag_rate),
                tags,
                shared_tag: shared_zipf.sample(&mut rng),
            }
        })
        .collect();
    for g in StanceLabel::GROUPS {
        if !users.iter().any(|u| u.group == g && u.seeder) {
            let first = users.iter_mut().find(|u| u.group == g).expect("group is non-empty");
            first.seeder = true;
        }
    }

    let members: BTreeMap<StanceLabel, Vec<usize>> = StanceLabel::GROUPS
        .iter()
        .map(|&g| (g, (0..users.len()).filter(|&i| users[i].group == g).collect()))
        .collect();

    let mut hostile: BTreeMap<StanceLabel, BTreeSet<u32>> = BTreeMap::new();
    for g in StanceLabel::GROUPS {
        let k = spec.plan(g).hostile_weeks;
        let weeks = rand::seq::index::sample(&mut rng, spec.n_weeks as usize, k);
        hostile.insert(g, weeks.into_iter().map(|w| w as u32).collect());
    }

    let disaster_tags = tag_pool(DISASTER_TAG_STEMS, DISASTER_TAG_SUFFIXES);
    let disaster_zipf = zipf(disaster_tags.len());
    let words_of = |g: StanceLabel| match g {
        StanceLabel::Believer => BELIEVER_WORDS,
        _ => DISBELIEVER_WORDS,
    };

    let anchor = day_start(spec.start_date);
    let mut messages = Vec::with_capacity(users.len() * spec.n_weeks as usize * spec.msgs_per_user_week);
    let mut next_id = 0u64;
    let mut seeded_once = vec![false; users.len()];

    for week in 0..spec.n_weeks {
        let week_start = anchor + i64::from(week) * WEEK_SECONDS;
        for u in 0..users.len() {
            let user = &users[u];
            let group = user.group;
            let other = group.opposite().expect("labeled group");
            let plan = spec.plan(group);
            let is_hostile = hostile[&group].contains(&week);
            let disaster_rate = if is_hostile { plan.disaster_rate_hostile } else { plan.disaster_rate_other };

            for _ in 0..spec.msgs_per_user_week {
                let ts = week_start + rng.random_range(0..WEEK_SECONDS);
                let mut text: Vec<String> = Vec::new();
                let mut mentions = Vec::new();
                let mut reply_to = None;
                let mut retweet_of = None;

                if rng.random_bool(spec.retweet_rate) {
                    let pool = if rng.random_bool(spec.retweet_homophily) { &members[&group] } else { &members[&other] };
                    let v = *pool.choose(&mut rng).expect("non-empty group");
                    if v != u {
                        retweet_of = Some(users[v].id.clone());
                    }
                    text.push("rt".into());
                } else {
                    let out = rng.random_bool(spec.p_intergroup_interaction);
                    let pool = if out { &members[&other] } else { &members[&group] };
                    let v = loop {
                        let v = *pool.choose(&mut rng).expect("non-empty group");
                        if v != u {
                            break v;
                        }
                    };
                    let mean = match (out, is_hostile) {
                        (false, _) => plan.in_group_mean,
                        (true, false) => plan.out_group_mean,
                        (true, true) => plan.hostile_out_group_mean,
                    };
                    let x: f64 = rng
                        .sample(Normal::new(mean, spec.sentiment_sd).expect("valid normal"))
                        .clamp(-1.0, 1.0);
                    let handle = format!("@{}", users[v].id);
                    let word = tiers.pick(x, &mut rng).map(str::to_owned);
                    match word {
                        Some(w) if rng.random_bool(0.5) => {
                            text.push(w);
                            text.push(handle);
                        }
                        Some(w) => {
                            text.push(handle);
                            text.push(w);
                        }
                        None => text.push(handle),
                    }
                    for _ in 0..3 {
                        text.push((*FILLERS.choose(&mut rng).expect("fillers")).to_owned());
                    }
                    mentions.push(users[v].id.clone());
                    if rng.random_bool(0.3) {
                        reply_to = Some(users[v].id.clone());
                    }
                }

                for _ in 0..4 {
                    let pool = if rng.random_bool(spec.topic_purity) { words_of(group) } else { SHARED_WORDS };
                    text.push((*pool.choose(&mut rng).expect("topic words")).to_owned());
                }
                let disaster = rng.random_bool(disaster_rate);
                if disaster {
                    text.push((*DISASTER_WORDS.choose(&mut rng).expect("disaster words")).to_owned());
                }

                let mut hashtags: Vec<String> = Vec::new();
                hashtags.push(tag_pools[&group][*user.tags.choose(&mut rng).expect("user tags")].clone());
                if rng.random_bool(spec.shared_tag_rate) {
                    hashtags.push(SHARED_TAGS[user.shared_tag].to_owned());
                }
                if disaster && rng.random_bool(spec.disaster_tag_share) {
                    hashtags.push(disaster_tags[disaster_zipf.sample(&mut rng)].clone());
                }
                if user.seeder && (!seeded_once[u] || rng.random_bool(0.5)) {
                    let tags = seed_tags(group);
                    hashtags.push((*tags.choose(&mut rng).expect("seed tags")).to_owned());
                    seeded_once[u] = true;
                }
                hashtags.dedup();
                for t in &hashtags {
                    text.push(format!("#{t}"));
                }

                next_id += 1;
                messages.push(Message {
                    message_id: format!("m{next_id:08}"),
                    author_id: user.id.clone(),
                    timestamp: ts,
                    text: text.join(" "),
                    mentioned_users: mentions,
                    reply_to_user: reply_to,
                    retweet_of_user: retweet_of,
                    hashtags,
                });
            }
        }
    }
    messages.sort_by(|a, b| (a.timestamp, &a.message_id).cmp(&(b.timestamp, &b.message_id)));

    let stance = users.iter().map(|u| (u.id.clone(), u.group)).collect();
    Ok(SynthCorpus {
        spec: spec.clone(),
        messages,
        truth: GroundTruth {
            stance,
            planted_hostile_weeks: hostile,
        },
    })
}

pub const CORPUS_FILE: &str = "synth_corpus.jsonl";
pub const CONFIG_FILE: &str = "synth_collection.toml";
pub const USER_TRUTH_FILE: &str = "truth_users.csv";
pub const WEEK_TRUTH_FILE: &str = "truth_weeks.csv";

impl SynthCorpus {
    /// Writes the corpus, its collection config and both ground-truth files
    /// into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut corpus = std::io::BufWriter::new(fs::File::create(dir.join(CORPUS_FILE))?);
        crate::corpus::write_jsonl(&mut corpus, &self.messages)?;
        corpus.flush()?;
        fs::write(dir.join(CONFIG_FILE), self.spec.corpus_config().to_toml_string())?;

        let mut users = csv::Writer::from_path(dir.join(USER_TRUTH_FILE))?;
        users.write_record(["user_id", "label"])?;
        for (u, l) in &self.truth.stance {
            users.write_record([u.as_str(), l.as_str()])?;
        }
        users.flush()?;

        let mut weeks = csv::Writer::from_path(dir.join(WEEK_TRUTH_FILE))?;
        weeks.write_record(["group", "week", "hostile_planted"])?;
        for g in StanceLabel::GROUPS {
            for w in 0..self.spec.n_weeks {
                let flag = if self.truth.is_hostile(g, w) { "1" } else { "0" };
                weeks.write_record([g.as_str(), &w.to_string(), flag])?;
            }
        }
        weeks.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disaster::DisasterLexicon;
    use crate::sentiment::tokenize;

    fn small(seed: u64) -> SynthSpec {
        SynthSpec {
            n_users_per_group: 40,
            n_weeks: 4,
            msgs_per_user_week: 2,
            rng_seed: seed,
            ..SynthSpec::default()
        }
    }

    #[test]
    fn vocabularies_do_not_collide() {
        let lex = ValenceLexicon::english_default();
        let disaster = DisasterLexicon::bundled();
        let plain: Vec<&str> = FILLERS
            .iter()
            .chain(BELIEVER_WORDS)
            .chain(DISBELIEVER_WORDS)
            .chain(SHARED_WORDS)
            .copied()
            .collect();
        for w in &plain {
            assert!(lex.get(w).is_none(), "{w} is a lexicon word");
            assert!(!disaster.contains(w), "{w} is a disaster word");
        }
        let tags: Vec<String> = tag_pool(BELIEVER_TAG_STEMS, TAG_SUFFIXES)
            .into_iter()
            .chain(tag_pool(DISBELIEVER_TAG_STEMS, TAG_SUFFIXES))
            .chain(SHARED_TAGS.iter().map(|s| s.to_string()))
            .collect();
        for t in &tags {
            assert!(!disaster.matches_substring(t), "{t} contains a disaster term");
        }
        for t in tag_pool(DISASTER_TAG_STEMS, DISASTER_TAG_SUFFIXES) {
            assert!(disaster.matches_substring(&t), "{t}");
        }
        for w in DISASTER_WORDS {
            assert!(disaster.contains(w), "{w}");
            assert!(lex.get(w).is_none(), "{w}");
        }
    }

    #[test]
    fn same_seed_same_corpus() {
        let a = generate(&small(3)).unwrap();
        let b = generate(&small(3)).unwrap();
        assert_eq!(a.messages, b.messages);
        assert_eq!(a.truth, b.truth);
        let c = generate(&small(4)).unwrap();
        assert_ne!(a.messages, c.messages);
    }

    #[test]
    fn every_user_has_truth_and_both_groups_have_seeders() {
        let c = generate(&small(1)).unwrap();
        assert_eq!(c.truth.stance.len(), 80);
        let seeds = crate::stance::seed_users(&c.messages, &SeedConfig::default());
        for g in StanceLabel::GROUPS {
            assert!(seeds.iter().any(|a| a.label == g));
        }
        // Seeds are always correct.
        for a in seeds.iter().filter(|a| a.label.is_labeled()) {
            assert_eq!(c.truth.stance[&a.user_id], a.label);
        }
    }

    #[test]
    fn planted_sentiment_is_recoverable() {
        let lex = ValenceLexicon::english_default();
        let c = generate(&small(2)).unwrap();
        for m in c.messages.iter().filter(|m| !m.mentioned_users.is_empty()).take(200) {
            let toks = tokenize(&m.text);
            let known: Vec<f64> = toks.iter().filter_map(|t| lex.get(t)).collect();
            assert!(known.len() <= 1, "{}", m.text);
            let s = crate::sentiment::aspect_scores(m, 0, &lex, 3);
            assert_eq!(s.len(), 1);
            assert_eq!(s[0].score, known.first().copied().unwrap_or(0.0));
        }
    }

    #[test]
    fn infeasible_specs_are_rejected() {
        let mut s = small(0);
        s.n_users_per_group = 0;
        assert!(matches!(generate(&s), Err(Error::Config(_))));
        let mut s = small(0);
        s.believer.in_group_mean = 1.5;
        assert!(generate(&s).is_err());
        let mut s = small(0);
        s.disbeliever.hostile_weeks = 5;
        assert!(generate(&s).is_err());
    }

    #[test]
    fn planted_direction() {
        let s = SynthSpec::default();
        assert_eq!(s.planted_direction(StanceLabel::Believer, false), 1.0);
        assert_eq!(s.planted_direction(StanceLabel::Disbeliever, true), 1.0);
        let s = SynthSpec::symmetric(0);
        assert_eq!(s.planted_direction(StanceLabel::Believer, false), 0.0);
    }

    #[test]
    fn spec_toml_round_trip() {
        let s = SynthSpec::default();
        let text = toml::to_string(&s).unwrap();
        assert_eq!(SynthSpec::from_toml_str(&text).unwrap(), s);
        let cfg = s.corpus_config();
        assert_eq!(cfg.interval().end - cfg.interval().start, 20 * WEEK_SECONDS);
    }
}
