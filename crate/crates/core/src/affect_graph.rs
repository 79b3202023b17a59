//! Weekly valenced interaction networks.
//!
//! For every ordered pair `(i, j)` the aspect scores of `i`'s messages
//! toward `j` in one week form the multiset `S_ij`. Three weights are kept
//! per pair:
//!
//! * positive: `w⁺ = Σ max(0, x)`
//! * negative: `w⁻ = Σ max(0, -x)`
//! * net: `w = w⁺ - w⁻`, i.e. `Σ x`
//!
//! Both valenced weights are non-negative, so `G⁺` carries the friendly and
//! `G⁻` the hostile interactions.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sentiment::AspectScore;
use crate::stance::StanceLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum View {
    Pos,
    Neg,
    Net,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EdgeWeight {
    pub pos: f64,
    pub neg: f64,
    pub net: f64,
}

impl EdgeWeight {
    /// Aggregates one `S_ij`.
    ///
    /// The valenced sums add terms in order of increasing magnitude, which
    /// makes them independent of input order and makes negating every
    /// score swap `pos` and `neg` bit for bit.
    pub fn from_scores(scores: &mut [f64]) -> Self {
        scores.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
        let pos: f64 = scores.iter().map(|&x| x.max(0.0)).sum();
        let neg: f64 = scores.iter().map(|&x| (-x).max(0.0)).sum();
        Self {
            pos,
            neg,
            net: pos - neg,
        }
    }

    pub fn get(&self, view: View) -> f64 {
        match view {
            View::Pos => self.pos,
            View::Neg => self.neg,
            View::Net => self.net,
        }
    }
}

/// One week's interaction network over users.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AffectiveGraph {
    pub week: u32,
    nodes: BTreeSet<String>,
    edges: BTreeMap<(String, String), EdgeWeight>,
}

impl AffectiveGraph {
    pub fn empty(week: u32) -> Self {
        Self {
            week,
            ..Default::default()
        }
    }

    /// Aggregates the aspect scores of one week. Self-directed scores are
    /// dropped; zero scores still create an (all-zero) edge.
    pub fn build(week: u32, scores: &[AspectScore]) -> Result<Self> {
        let mut groups: BTreeMap<(&str, &str), Vec<f64>> = BTreeMap::new();
        let mut nodes = BTreeSet::new();
        for s in scores {
            if s.week != week {
                return Err(Error::Invariant(format!(
                    "score for week {} passed to the graph of week {week}",
                    s.week
                )));
            }
            if !s.score.is_finite() || !(-1.0..=1.0).contains(&s.score) {
                return Err(Error::Invariant(format!("aspect score {} outside [-1, 1]", s.score)));
            }
            nodes.insert(s.source.clone());
            nodes.insert(s.target.clone());
            if s.source != s.target {
                groups.entry((&s.source, &s.target)).or_default().push(s.score);
            }
        }
        let edges = groups
            .into_iter()
            .map(|((i, j), mut xs)| ((i.to_owned(), j.to_owned()), EdgeWeight::from_scores(&mut xs)))
            .collect();
        Ok(Self { week, nodes, edges })
    }

    /// Rebuilds a graph from stored edges (e.g. an edge-list file).
    pub fn from_edges<I>(week: u32, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, String, EdgeWeight)>,
    {
        let mut g = Self::empty(week);
        for (i, j, w) in edges {
            if i == j {
                return Err(Error::Invariant(format!("self-loop on {i}")));
            }
            if w.pos < 0.0 || w.neg < 0.0 {
                return Err(Error::Invariant(format!("negative valenced weight on {i} -> {j}")));
            }
            g.nodes.insert(i.clone());
            g.nodes.insert(j.clone());
            g.edges.insert((i, j), w);
        }
        Ok(g)
    }

    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    pub fn edge(&self, source: &str, target: &str) -> Option<&EdgeWeight> {
        self.edges.get(&(source.to_owned(), target.to_owned()))
    }

    /// Edges in `(source, target)` order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, &EdgeWeight)> {
        self.edges.iter().map(|((i, j), w)| (i.as_str(), j.as_str(), w))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn pos_edges(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.view(View::Pos)
    }

    pub fn neg_edges(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.view(View::Neg)
    }

    pub fn net_edges(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.view(View::Net)
    }

    pub fn view(&self, view: View) -> impl Iterator<Item = (&str, &str, f64)> {
        self.edges().map(move |(i, j, w)| (i, j, w.get(view)))
    }

    /// Every weight multiplied by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|(k, w)| {
                let (pos, neg) = (w.pos * factor, w.neg * factor);
                (k.clone(), EdgeWeight { pos, neg, net: pos - neg })
            })
            .collect();
        Self {
            week: self.week,
            nodes: self.nodes.clone(),
            edges,
        }
    }

    /// Out-group and in-group edge weights of `group` in one view.
    ///
    /// External edges run from a member of `group` to a member of the
    /// opposite stance, internal ones between two members. Edges touching
    /// unlabeled (or unknown) users count as neither.
    pub fn group_weights(
        &self,
        view: View,
        stances: &BTreeMap<String, StanceLabel>,
        group: StanceLabel,
    ) -> GroupedWeights {
        let mut out = GroupedWeights {
            group,
            view,
            external: Vec::new(),
            internal: Vec::new(),
        };
        let Some(other) = group.opposite() else {
            return out;
        };
        let label = |u: &str| stances.get(u).copied().unwrap_or(StanceLabel::Unlabeled);
        for (i, j, w) in self.edges() {
            if label(i) != group {
                continue;
            }
            let lj = label(j);
            if lj == group {
                out.internal.push(w.get(view));
            } else if lj == other {
                out.external.push(w.get(view));
            }
        }
        out
    }

    pub fn write_edge_list<W: Write>(&self, out: &mut csv::Writer<W>) -> Result<()> {
        for (i, j, w) in self.edges() {
            out.serialize(EdgeRow {
                week: self.week,
                src: i.to_owned(),
                dst: j.to_owned(),
                w_pos: w.pos,
                w_neg: w.neg,
                w_net: w.net,
            })?;
        }
        Ok(())
    }
}

/// One line of the exported edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRow {
    pub week: u32,
    pub src: String,
    pub dst: String,
    pub w_pos: f64,
    pub w_neg: f64,
    pub w_net: f64,
}

/// Reads an edge list back into per-week graphs.
pub fn read_edge_list<R: std::io::Read>(input: R) -> Result<BTreeMap<u32, AffectiveGraph>> {
    let mut by_week: BTreeMap<u32, Vec<(String, String, EdgeWeight)>> = BTreeMap::new();
    for row in csv::Reader::from_reader(input).deserialize::<EdgeRow>() {
        let row = row?;
        by_week.entry(row.week).or_default().push((
            row.src,
            row.dst,
            EdgeWeight {
                pos: row.w_pos,
                neg: row.w_neg,
                net: row.w_net,
            },
        ));
    }
    by_week
        .into_iter()
        .map(|(week, edges)| Ok((week, AffectiveGraph::from_edges(week, edges)?)))
        .collect()
}

/// External (`V_k → V_k'`) and internal (`V_k → V_k`) edge weights for one
/// group, all from the same view.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedWeights {
    pub group: StanceLabel,
    pub view: View,
    pub external: Vec<f64>,
    pub internal: Vec<f64>,
}
