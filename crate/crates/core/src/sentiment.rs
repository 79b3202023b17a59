//! Aspect-level sentiment toward mentioned users.
//!
//! Each token's sentiment is the mean valence of the lexicon words around
//! it (the token itself excluded). A message's score toward `@user` is the
//! mean of that quantity over the occurrences of `@user` in the text.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Message;
use crate::error::{Error, Result};

pub const DEFAULT_HALF_WIDTH: usize = 3;

const BUNDLED_LEXICON: &str = include_str!("../data/valence_en.tsv");

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_url(chunk: &str) -> bool {
    let chunk = chunk.trim_start_matches(|c: char| !c.is_alphanumeric());
    chunk.starts_with("http://") || chunk.starts_with("https://") || chunk.starts_with("www.")
}

/// Lowercased word tokens.
///
/// `@handle` and `#tag` stay single tokens with their prefix; hyphens and
/// apostrophes inside a word are kept; all other punctuation separates
/// tokens and is dropped. URLs are skipped entirely.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        if is_url(chunk) {
            continue;
        }
        if chunk.is_ascii() {
            split_ascii(chunk, &mut tokens);
        } else {
            split_chunk(chunk.to_lowercase().chars(), &mut tokens);
        }
    }
    tokens
}

/// ASCII fast path of [`split_chunk`]: tokens are contiguous byte ranges.
fn split_ascii(chunk: &str, tokens: &mut Vec<String>) {
    let bytes = chunk.as_bytes();
    let word = |i: usize| bytes.get(i).is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_');
    let mut start: Option<usize> = None;
    let mut prefixed = false;
    let mut flush = |start: &mut Option<usize>, end: usize, prefixed: &mut bool| {
        if let Some(s) = start.take() {
            if end > s && !(*prefixed && end - s == 1) {
                tokens.push(chunk[s..end].to_ascii_lowercase());
            }
        }
        *prefixed = false;
    };
    for (i, &b) in bytes.iter().enumerate() {
        let joiner = (b == b'-' || b == b'\'') && !prefixed && start.is_some() && word(i + 1);
        if word(i) || joiner {
            start.get_or_insert(i);
        } else if (b == b'@' || b == b'#') && word(i + 1) {
            flush(&mut start, i, &mut prefixed);
            start = Some(i);
            prefixed = true;
        } else {
            flush(&mut start, i, &mut prefixed);
        }
    }
    flush(&mut start, bytes.len(), &mut prefixed);
}

fn split_chunk<I: Iterator<Item = char>>(chars: I, tokens: &mut Vec<String>) {
    let mut chars = chars.peekable();
    let mut buf = String::new();
    let mut prefixed = false;
    let flush = |buf: &mut String, prefixed: &mut bool, tokens: &mut Vec<String>| {
        let bare = *prefixed && buf.len() == 1;
        if !buf.is_empty() && !bare {
            tokens.push(std::mem::take(buf));
        }
        buf.clear();
        *prefixed = false;
    };
    while let Some(c) = chars.next() {
        let next_is_word = chars.peek().copied().is_some_and(is_word_char);
        if is_word_char(c) {
            buf.push(c);
        } else if (c == '@' || c == '#') && next_is_word {
            flush(&mut buf, &mut prefixed, tokens);
            buf.push(c);
            prefixed = true;
        } else if (c == '-' || c == '\'') && !prefixed && !buf.is_empty() && next_is_word {
            buf.push(c);
        } else {
            flush(&mut buf, &mut prefixed, tokens);
        }
    }
    flush(&mut buf, &mut prefixed, tokens);
}

/// Token → valence in `[-1, 1]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValenceLexicon {
    entries: HashMap<String, f64>,
}

impl ValenceLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// The small English lexicon shipped with the crate.
    pub fn english_default() -> Self {
        Self::parse(BUNDLED_LEXICON.as_bytes(), "bundled lexicon").expect("bundled lexicon is valid")
    }

    pub fn from_pairs<'a, I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let mut lex = Self::new();
        for (token, valence) in pairs {
            lex.insert(token, valence)?;
        }
        Ok(lex)
    }

    /// Adds or replaces an entry.
    pub fn insert(&mut self, token: &str, valence: f64) -> Result<Option<f64>> {
        if token.is_empty() || token.chars().any(char::is_whitespace) || token.to_lowercase() != token {
            return Err(Error::Config(format!(
                "lexicon token {token:?} must be non-empty, lowercase and whitespace-free"
            )));
        }
        if !valence.is_finite() || !(-1.0..=1.0).contains(&valence) {
            return Err(Error::Config(format!("valence {valence} for {token:?} is outside [-1, 1]")));
        }
        Ok(self.entries.insert(token.to_owned(), valence))
    }

    /// Reads `token<TAB>valence` lines. Later duplicates replace earlier ones.
    pub fn parse<R: BufRead>(reader: R, source_name: &str) -> Result<Self> {
        let mut lex = Self::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() {
                continue;
            }
            let (token, valence) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(source_name, i + 1, "expected token<TAB>valence"))?;
            let valence: f64 = valence
                .trim()
                .parse()
                .map_err(|e| Error::parse(source_name, i + 1, format!("bad valence: {e}")))?;
            match lex.insert(token.trim(), valence) {
                Ok(Some(_)) => log::warn!("{source_name}:{}: duplicate token {token:?}, keeping the last", i + 1),
                Ok(None) => {}
                Err(e) => return Err(Error::parse(source_name, i + 1, e.to_string())),
            }
        }
        Ok(lex)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::MissingInput(path.to_path_buf()),
            _ => Error::Io(e),
        })?;
        Self::parse(BufReader::new(file), &path.display().to_string())
    }

    pub fn get(&self, token: &str) -> Option<f64> {
        self.entries.get(token).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Same tokens with every valence sign-flipped.
    pub fn negated(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

/// Sentiment of `source`'s message toward `target` in a given week.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AspectScore {
    pub week: u32,
    pub source: String,
    pub target: String,
    pub score: f64,
}

/// Mean lexicon valence of the tokens within `half_width` of `position`,
/// not counting the token at `position`. Zero when no neighbor is known.
pub fn word_valence<S: AsRef<str>>(
    tokens: &[S],
    position: usize,
    lexicon: &ValenceLexicon,
    half_width: usize,
) -> f64 {
    let lo = position.saturating_sub(half_width);
    let hi = (position + half_width).min(tokens.len().saturating_sub(1));
    let mut sum = 0.0;
    let mut n = 0usize;
    for (i, tok) in tokens.iter().enumerate().take(hi + 1).skip(lo) {
        if i == position {
            continue;
        }
        if let Some(v) = lexicon.get(tok.as_ref()) {
            sum += v;
            n += 1;
        }
    }
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn mean_message_valence(tokens: &[String], lexicon: &ValenceLexicon) -> f64 {
    let (sum, n) = tokens
        .iter()
        .filter_map(|t| lexicon.get(t))
        .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// One score per distinct mentioned or replied-to user, in first-mention
/// order.
///
/// A target whose `@handle` appears in the text is scored from the windows
/// around its occurrences. A target known only from metadata (a reply with
/// no inline handle) gets the mean valence of the whole message.
pub fn aspect_scores(message: &Message, week: u32, lexicon: &ValenceLexicon, half_width: usize) -> Vec<AspectScore> {
    let mut targets: Vec<&str> = Vec::new();
    for t in message.mentioned_users.iter().chain(message.reply_to_user.iter()) {
        if !targets.contains(&t.as_str()) {
            targets.push(t);
        }
    }
    if targets.is_empty() {
        return Vec::new();
    }
    let tokens = tokenize(&message.text);
    let mut fallback: Option<f64> = None;
    targets
        .into_iter()
        .map(|target| {
            let handle = format!("@{}", target.to_lowercase());
            let (sum, n) = tokens
                .iter()
                .enumerate()
                .filter(|(_, tok)| **tok == handle)
                .fold((0.0, 0usize), |(s, n), (pos, _)| {
                    (s + word_valence(&tokens, pos, lexicon, half_width), n + 1)
                });
            let score = if n > 0 {
                sum / n as f64
            } else {
                *fallback.get_or_insert_with(|| mean_message_valence(&tokens, lexicon))
            };
            AspectScore {
                week,
                source: message.author_id.clone(),
                target: target.to_owned(),
                score: score.clamp(-1.0, 1.0),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex(pairs: &[(&str, f64)]) -> ValenceLexicon {
        ValenceLexicon::from_pairs(pairs.iter().copied()).unwrap()
    }

    fn message(text: &str, mentions: &[&str], reply_to: Option<&str>) -> Message {
        Message {
            message_id: "m".into(),
            author_id: "me".into(),
            timestamp: 0,
            text: text.into(),
            mentioned_users: mentions.iter().map(|s| s.to_string()).collect(),
            reply_to_user: reply_to.map(str::to_owned),
            retweet_of_user: None,
            hashtags: vec![],
        }
    }

    #[test]
    fn tokenizer_examples() {
        assert_eq!(tokenize("Climate HOAX, @alice!"), vec!["climate", "hoax", "@alice"]);
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("#ActOnClimate now"), vec!["#actonclimate", "now"]);
    }

    proptest::proptest! {
        #[test]
        fn ascii_fast_path_matches_general(chunk in "[a-zA-Z0-9_@#'\\-.,:!]{0,16}") {
            let mut fast = Vec::new();
            split_ascii(&chunk, &mut fast);
            let mut slow = Vec::new();
            split_chunk(chunk.to_lowercase().chars(), &mut slow);
            proptest::prop_assert_eq!(fast, slow);
        }
    }

    #[test]
    fn tokenizer_edges() {
        assert_eq!(tokenize("(@bob) don't high-pressure -- #"), vec!["@bob", "don't", "high-pressure"]);
        assert_eq!(tokenize("see https://t.co/xyz #Flood"), vec!["see", "#flood"]);
        assert_eq!(tokenize("RT @a: @b, yes"), vec!["rt", "@a", "@b", "yes"]);
        assert_eq!(tokenize("trailing- 'quoted'"), vec!["trailing", "quoted"]);
    }

    #[test]
    fn window_mean_excludes_target() {
        let l = lex(&[("bad", -0.8)]);
        assert_eq!(word_valence(&["bad", "@x", "bad"], 1, &l, 3), -0.8);
        assert_eq!(word_valence(&["so", "@x", "what"], 1, &l, 3), 0.0);
        let l = lex(&[("good", 0.5), ("bad", -0.5), ("@x", 1.0)]);
        assert_eq!(word_valence(&["good", "@x", "bad"], 1, &l, 3), 0.0);
    }

    #[test]
    fn window_is_bounded() {
        let l = lex(&[("bad", -1.0), ("good", 1.0)]);
        let toks = ["bad", "a", "b", "c", "@x", "good"];
        assert_eq!(word_valence(&toks, 4, &l, 3), 1.0);
        assert_eq!(word_valence(&toks, 4, &l, 4), 0.0);
        assert_eq!(word_valence(&toks, 0, &l, 0), 0.0);
    }

    #[test]
    fn single_mention_score() {
        let l = lex(&[("wrong", -0.6)]);
        let s = aspect_scores(&message("you are wrong @bob", &["bob"], None), 4, &l, 3);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].target, "bob");
        assert_eq!(s[0].week, 4);
        assert_eq!(s[0].score, -0.6);
    }

    #[test]
    fn no_targets_no_scores() {
        let l = lex(&[("wrong", -0.6)]);
        assert!(aspect_scores(&message("you are wrong", &[], None), 0, &l, 3).is_empty());
    }

    #[test]
    fn repeated_mentions_average() {
        let l = lex(&[("awful", -0.4), ("nice", 0.4)]);
        let m = message("awful @a x x x x x x nice @a", &["a"], None);
        let s = aspect_scores(&m, 0, &l, 1);
        assert_eq!(s[0].score, 0.0);
    }

    #[test]
    fn metadata_only_target_uses_message_mean() {
        let l = lex(&[("great", 0.8), ("bad", -0.4)]);
        let m = message("great and bad @a", &["a"], Some("b"));
        let s = aspect_scores(&m, 0, &l, 3);
        assert_eq!(s.iter().map(|x| x.target.as_str()).collect::<Vec<_>>(), vec!["a", "b"]);
        assert!((s[1].score - 0.2).abs() < 1e-15);
    }

    #[test]
    fn handle_match_is_case_insensitive() {
        let l = lex(&[("bad", -0.5)]);
        let s = aspect_scores(&message("bad @Bob", &["Bob"], None), 0, &l, 3);
        assert_eq!(s[0].score, -0.5);
        assert_eq!(s[0].target, "Bob");
    }

    #[test]
    fn lexicon_file_parsing() {
        let text = "good\t0.5\nbad\t-0.5\n\ngood\t0.7\n";
        let l = ValenceLexicon::parse(text.as_bytes(), "t").unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.get("good"), Some(0.7));
        assert!(ValenceLexicon::parse("x\t1.5\n".as_bytes(), "t").is_err());
        assert!(ValenceLexicon::parse("Upper\t0.5\n".as_bytes(), "t").is_err());
        assert!(ValenceLexicon::parse("nocolumn\n".as_bytes(), "t").is_err());
    }

    #[test]
    fn bundled_lexicon_loads() {
        let l = ValenceLexicon::english_default();
        assert!(l.len() > 50);
        assert!(l.iter().all(|(_, v)| (-1.0..=1.0).contains(&v)));
    }
}
