//! E/I indices, polarization valence and the signed EMD metric.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::affect_graph::{AffectiveGraph, GroupedWeights, View};
use crate::error::{Error, Result};
use crate::stance::StanceLabel;

/// `(E - I) / (E + I)`, undefined when both are zero.
pub fn ei_ratio(external: f64, internal: f64) -> Option<f64> {
    let total = external + internal;
    if total == 0.0 {
        None
    } else {
        Some(((external - internal) / total).clamp(-1.0, 1.0))
    }
}

/// Krackhardt's E/I index of one group on the positive or negative network.
pub fn ei_index(weights: &GroupedWeights) -> Result<Option<f64>> {
    if weights.view == View::Net {
        return Err(Error::Invariant("E/I index needs the positive or negative view".into()));
    }
    if let Some(w) = weights.external.iter().chain(&weights.internal).find(|w| **w < 0.0) {
        return Err(Error::Invariant(format!("negative weight {w} in a valenced view")));
    }
    let e: f64 = weights.external.iter().sum();
    let i: f64 = weights.internal.iter().sum();
    Ok(ei_ratio(e, i))
}

/// `P_k = EI⁻ - EI⁺`; positive when a group is disproportionately hostile
/// toward the out-group.
pub fn valence(ei_neg: Option<f64>, ei_pos: Option<f64>) -> Option<f64> {
    Some(ei_neg? - ei_pos?)
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// First Wasserstein distance between the empirical distributions of two
/// samples, `∫ |A(x) - B(x)| dx`.
///
/// Walks the merged breakpoints once; the CDF gap on each segment is taken
/// from integer counts so only the segment lengths are rounded.
pub fn emd_1d(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut x = a[0].min(b[0]);
    let mut total = 0.0;
    loop {
        while i < na && a[i] <= x {
            i += 1;
        }
        while j < nb && b[j] <= x {
            j += 1;
        }
        let next = match (a.get(i), b.get(j)) {
            (None, None) => break,
            (Some(&p), None) | (None, Some(&p)) => p,
            (Some(&p), Some(&q)) => p.min(q),
        };
        let gap = (i as u128 * nb as u128).abs_diff(j as u128 * na as u128);
        total += gap as f64 * (next - x);
        x = next;
    }
    Some(total / (na as f64 * nb as f64))
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |A(x) - B(x)|`.
///
/// Diagnostic only; the polarization metric uses [`emd_1d`].
pub fn ks_statistic(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut best) = (0usize, 0usize, 0.0f64);
    while i < a.len() || j < b.len() {
        let x = match (a.get(i), b.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) | (None, Some(&p)) => p,
            (None, None) => unreachable!(),
        };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        best = best.max((i as f64 / na - j as f64 / nb).abs());
    }
    Some(best)
}

/// Per (week, group) polarization measurements. `None` marks quantities
/// that are undefined for the week.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizationRecord {
    pub week: u32,
    pub group: StanceLabel,
    pub ei_pos: Option<f64>,
    pub ei_neg: Option<f64>,
    pub valence: Option<f64>,
    pub magnitude: Option<f64>,
    pub l: Option<f64>,
}

impl PolarizationRecord {
    pub fn undefined(week: u32, group: StanceLabel) -> Self {
        Self {
            week,
            group,
            ei_pos: None,
            ei_neg: None,
            valence: None,
            magnitude: None,
            l: None,
        }
    }
}

/// Affective polarization of `group` in one week.
///
/// The magnitude is the EMD between the net weights of the group's
/// out-group edges and its in-group edges; its sign is that of the
/// polarization valence (non-negative valence → non-negative `l`). A group
/// without out-group or without in-group edges gets an all-undefined record.
pub fn metric(
    graph: &AffectiveGraph,
    stances: &BTreeMap<String, StanceLabel>,
    group: StanceLabel,
) -> Result<PolarizationRecord> {
    let net = graph.group_weights(View::Net, stances, group);
    if net.external.is_empty() || net.internal.is_empty() {
        return Ok(PolarizationRecord::undefined(graph.week, group));
    }
    let ei_pos = ei_index(&graph.group_weights(View::Pos, stances, group))?;
    let ei_neg = ei_index(&graph.group_weights(View::Neg, stances, group))?;
    let valence = valence(ei_neg, ei_pos);
    let magnitude = emd_1d(&net.external, &net.internal);
    let l = match (valence, magnitude) {
        (_, Some(0.0)) => Some(0.0),
        (Some(p), Some(m)) => Some(if p < 0.0 { -m } else { m }),
        _ => None,
    };
    Ok(PolarizationRecord {
        week: graph.week,
        group,
        ei_pos,
        ei_neg,
        valence,
        magnitude,
        l,
    })
}

/// Mean and spread of one group's `l` series, with the weeks above
/// mean + one (population) standard deviation flagged as hostile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSummary {
    pub group: StanceLabel,
    pub defined_weeks: usize,
    pub mean_l: f64,
    pub sd_l: f64,
    pub threshold: f64,
    pub hostile_weeks: BTreeSet<u32>,
}

impl SeriesSummary {
    pub fn is_hostile(&self, week: u32) -> bool {
        self.hostile_weeks.contains(&week)
    }
}

pub fn summarize(series: &[PolarizationRecord]) -> Result<SeriesSummary> {
    let Some(first) = series.first() else {
        return Err(Error::InsufficientData("empty polarization series".into()));
    };
    let group = first.group;
    if series.iter().any(|r| r.group != group) {
        return Err(Error::Invariant("series mixes stance groups".into()));
    }
    let mut defined: Vec<(u32, f64)> = series.iter().filter_map(|r| Some((r.week, r.l?))).collect();
    defined.sort_by_key(|&(w, _)| w);
    if defined.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{group}: {} defined weeks, need at least 2",
            defined.len()
        )));
    }
    let n = defined.len() as f64;
    let mean = defined.iter().map(|&(_, l)| l).sum::<f64>() / n;
    let var = defined.iter().map(|&(_, l)| (l - mean) * (l - mean)).sum::<f64>() / n;
    let sd = var.sqrt();
    let threshold = mean + sd;
    Ok(SeriesSummary {
        group,
        defined_weeks: defined.len(),
        mean_l: mean,
        sd_l: sd,
        threshold,
        hostile_weeks: defined.iter().filter(|&&(_, l)| l > threshold).map(|&(w, _)| w).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarizationRow {
    pub week: u32,
    pub group: StanceLabel,
    pub ei_pos: Option<f64>,
    pub ei_neg: Option<f64>,
    pub valence: Option<f64>,
    pub magnitude: Option<f64>,
    pub l: Option<f64>,
    pub hostile_flag: u8,
}

impl PolarizationRow {
    pub fn record(&self) -> PolarizationRecord {
        PolarizationRecord {
            week: self.week,
            group: self.group,
            ei_pos: self.ei_pos,
            ei_neg: self.ei_neg,
            valence: self.valence,
            magnitude: self.magnitude,
            l: self.l,
        }
    }
}

/// Writes `week,group,ei_pos,ei_neg,valence,magnitude,l,hostile_flag`;
/// undefined values are empty fields.
pub fn write_series<W: Write>(
    out: W,
    records: &[PolarizationRecord],
    summaries: &BTreeMap<StanceLabel, SeriesSummary>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        let hostile = summaries.get(&r.group).is_some_and(|s| s.is_hostile(r.week));
        w.serialize(PolarizationRow {
            week: r.week,
            group: r.group,
            ei_pos: r.ei_pos,
            ei_neg: r.ei_neg,
            valence: r.valence,
            magnitude: r.magnitude,
            l: r.l,
            hostile_flag: u8::from(hostile),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_series<R: std::io::Read>(input: R) -> Result<Vec<PolarizationRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

#[derive(Debug, Serialize)]
struct SummaryRow<'a> {
    group: StanceLabel,
    defined_weeks: usize,
    mean_l: f64,
    sd_l: f64,
    threshold: f64,
    hostile_weeks: usize,
    hostile_week_list: &'a str,
}

/// Writes one row per group: mean, SD, hostile threshold and hostile weeks
/// (`;`-separated).
pub fn write_summaries<W: Write>(out: W, summaries: &BTreeMap<StanceLabel, SeriesSummary>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in summaries.values() {
        let list = s.hostile_weeks.iter().map(u32::to_string).collect::<Vec<_>>().join(";");
        w.serialize(SummaryRow {
            group: s.group,
            defined_weeks: s.defined_weeks,
            mean_l: s.mean_l,
            sd_l: s.sd_l,
            threshold: s.threshold,
            hostile_weeks: s.hostile_weeks.len(),
            hostile_week_list: &list,
        })?;
    }
    w.flush()?;
    Ok(())
}
