//! Label propagation over the combined retweet / hashtag-similarity graph.
//!
//! The edge weight between two users is the number of retweets between them
//! (both directions) plus the cosine similarity of their hashtag-frequency
//! vectors. The cosine part is dense in practice, so it is never
//! materialized for propagation: neighbor sums are computed through the
//! normalized user × hashtag matrix instead, `O(nnz)` per sweep.

use std::collections::{BTreeMap, HashMap};

use crate::corpus::Message;
use crate::error::{Error, Result};
use crate::stance::StanceLabel;

pub const MAX_ITERATIONS: usize = 100;
pub const TOLERANCE: f64 = 1e-6;

type SparseRow = Vec<(u32, f64)>;

#[derive(Debug, Clone)]
pub struct PropagationGraph {
    users: Vec<String>,
    index: HashMap<String, u32>,
    /// Symmetric retweet counts, neighbors sorted by index.
    retweets: Vec<SparseRow>,
    /// Unit-length hashtag vectors per user (tag id, weight).
    tag_rows: Vec<SparseRow>,
    /// Transpose of `tag_rows`: per tag, the users carrying it.
    tag_cols: Vec<SparseRow>,
    /// Total edge weight incident to each user.
    degree: Vec<f64>,
}

impl PropagationGraph {
    /// Builds the graph over every user appearing in `messages`.
    pub fn build(messages: &[Message]) -> Self {
        Self::build_for_users(messages, super::user_universe(messages))
    }

    /// Builds the graph over an explicit, sorted user list. Users referenced
    /// by messages but missing from `users` are ignored.
    pub fn build_for_users(messages: &[Message], users: Vec<String>) -> Self {
        let index: HashMap<String, u32> = users
            .iter()
            .enumerate()
            .map(|(i, u)| (u.clone(), i as u32))
            .collect();
        let n = users.len();

        let mut rt: Vec<BTreeMap<u32, f64>> = vec![BTreeMap::new(); n];
        let mut tag_counts: Vec<BTreeMap<&str, f64>> = vec![BTreeMap::new(); n];
        for msg in messages {
            let Some(&a) = index.get(&msg.author_id) else { continue };
            if let Some(&b) = msg.retweet_of_user.as_ref().and_then(|r| index.get(r)) {
                if a != b {
                    *rt[a as usize].entry(b).or_default() += 1.0;
                    *rt[b as usize].entry(a).or_default() += 1.0;
                }
            }
            for tag in &msg.hashtags {
                *tag_counts[a as usize].entry(tag.as_str()).or_default() += 1.0;
            }
        }

        let mut tag_ids: BTreeMap<&str, u32> = BTreeMap::new();
        for counts in &tag_counts {
            for tag in counts.keys() {
                tag_ids.entry(tag).or_insert(0);
            }
        }
        for (i, id) in tag_ids.values_mut().enumerate() {
            *id = i as u32;
        }

        let mut tag_rows: Vec<SparseRow> = Vec::with_capacity(n);
        let mut tag_cols: Vec<SparseRow> = vec![Vec::new(); tag_ids.len()];
        for (u, counts) in tag_counts.iter().enumerate() {
            let norm = counts.values().map(|c| c * c).sum::<f64>().sqrt();
            let mut row: SparseRow = counts.iter().map(|(t, c)| (tag_ids[t], c / norm)).collect();
            row.sort_by_key(|&(t, _)| t);
            for &(t, w) in &row {
                tag_cols[t as usize].push((u as u32, w));
            }
            tag_rows.push(row);
        }

        let retweets: Vec<SparseRow> = rt.into_iter().map(|m| m.into_iter().collect()).collect();

        let mut graph = Self {
            users,
            index,
            retweets,
            tag_rows,
            tag_cols,
            degree: Vec::new(),
        };
        graph.degree = graph.neighbor_sums(&vec![1.0; n]);
        graph
    }

    pub fn users(&self) -> &[String] {
        &self.users
    }

    pub fn user_index(&self, user: &str) -> Option<u32> {
        self.index.get(user).copied()
    }

    pub fn len(&self) -> usize {
        self.users.len()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }

    pub fn degree(&self, user: u32) -> f64 {
        self.degree[user as usize]
    }

    /// Edge weight between two users; zero means no edge.
    pub fn weight(&self, a: &str, b: &str) -> f64 {
        match (self.user_index(a), self.user_index(b)) {
            (Some(a), Some(b)) if a != b => self.weight_indexed(a, b),
            _ => 0.0,
        }
    }

    fn weight_indexed(&self, a: u32, b: u32) -> f64 {
        let rt = self.retweets[a as usize]
            .binary_search_by_key(&b, |&(v, _)| v)
            .map(|i| self.retweets[a as usize][i].1)
            .unwrap_or(0.0);
        rt + sparse_dot(&self.tag_rows[a as usize], &self.tag_rows[b as usize])
    }

    /// Every edge `(a, b, weight)` with `a < b`, sorted. Quadratic in the
    /// size of the largest hashtag audience; meant for inspection and export.
    pub fn edges(&self) -> Vec<(String, String, f64)> {
        let mut pairs: BTreeMap<(u32, u32), ()> = BTreeMap::new();
        for (a, row) in self.retweets.iter().enumerate() {
            for &(b, _) in row {
                if (a as u32) < b {
                    pairs.insert((a as u32, b), ());
                }
            }
        }
        for col in &self.tag_cols {
            for (i, &(a, _)) in col.iter().enumerate() {
                for &(b, _) in &col[i + 1..] {
                    pairs.insert((a.min(b), a.max(b)), ());
                }
            }
        }
        pairs
            .into_keys()
            .filter_map(|(a, b)| {
                let w = self.weight_indexed(a, b);
                (w > 0.0).then(|| (self.users[a as usize].clone(), self.users[b as usize].clone(), w))
            })
            .collect()
    }

    /// `out[u] = Σ_{v ≠ u} weight(u, v) · values[v]`.
    fn neighbor_sums(&self, values: &[f64]) -> Vec<f64> {
        let tag_totals: Vec<f64> = self
            .tag_cols
            .iter()
            .map(|col| col.iter().map(|&(v, w)| w * values[v as usize]).sum())
            .collect();
        (0..self.users.len())
            .map(|u| {
                let rt: f64 = self.retweets[u].iter().map(|&(v, c)| c * values[v as usize]).sum();
                // Subtracting u's own term is exact when u is the tag's only user.
                let tags: f64 = self.tag_rows[u]
                    .iter()
                    .map(|&(t, w)| w * (tag_totals[t as usize] - w * values[u]))
                    .sum();
                rt + tags
            })
            .collect()
    }
}

fn sparse_dot(a: &[(u32, f64)], b: &[(u32, f64)]) -> f64 {
    let (mut i, mut j, mut acc) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Synchronous weighted-average propagation with clamped entries.
///
/// `clamp[u] = Some(x)` pins user `u` at `x`; all others start at 0 and
/// take the weighted mean of their neighbors each sweep. Users without
/// edges stay at 0.
pub(crate) fn propagate_indexed(graph: &PropagationGraph, clamp: &[Option<f64>]) -> Vec<f64> {
    let mut scores: Vec<f64> = clamp.iter().map(|c| c.unwrap_or(0.0)).collect();
    for _ in 0..MAX_ITERATIONS {
        let sums = graph.neighbor_sums(&scores);
        let mut delta: f64 = 0.0;
        let next: Vec<f64> = (0..scores.len())
            .map(|u| {
                let v = match clamp[u] {
                    Some(x) => x,
                    None if graph.degree[u] > 0.0 => (sums[u] / graph.degree[u]).clamp(-1.0, 1.0),
                    None => 0.0,
                };
                delta = delta.max((v - scores[u]).abs());
                v
            })
            .collect();
        scores = next;
        if delta < TOLERANCE {
            break;
        }
    }
    scores
}

/// Scores every user in `[-1, 1]`: Believer seeds are pinned at +1,
/// Disbeliever seeds at -1.
pub fn propagate(graph: &PropagationGraph, seeds: &BTreeMap<String, StanceLabel>) -> Result<BTreeMap<String, f64>> {
    let mut clamp = vec![None; graph.len()];
    let (mut pos, mut neg) = (false, false);
    for (user, label) in seeds {
        let Some(i) = graph.user_index(user) else { continue };
        match label {
            StanceLabel::Believer => {
                clamp[i as usize] = Some(1.0);
                pos = true;
            }
            StanceLabel::Disbeliever => {
                clamp[i as usize] = Some(-1.0);
                neg = true;
            }
            StanceLabel::Unlabeled => {}
        }
    }
    if !(pos && neg) {
        return Err(Error::Config("propagation needs at least one seed of each stance".into()));
    }
    let scores = propagate_indexed(graph, &clamp);
    Ok(graph.users.iter().cloned().zip(scores).collect())
}
