#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use affectgauge::disaster::PrevalenceCell;
use affectgauge::pipeline::Settings;
use affectgauge::synth::{self, GroundTruth, SynthSpec};
use affectgauge::{PolarizationRecord, SeriesSummary, StanceAssignment, StanceLabel};

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method
/// with potentials). Returns the total cost.
pub fn hungarian(cost: &[Vec<f64>]) -> f64 {
    let n = cost.len();
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).map(|j| cost[p[j] - 1][j - 1]).sum()
}

/// Minimum-cost matching by trying every permutation; only for tiny inputs.
pub fn enumerate_matching(cost: &[Vec<f64>]) -> f64 {
    fn go(cost: &[Vec<f64>], row: usize, used: &mut Vec<bool>, acc: f64, best: &mut f64) {
        if row == cost.len() {
            *best = best.min(acc);
            return;
        }
        for j in 0..cost.len() {
            if !used[j] {
                used[j] = true;
                go(cost, row + 1, used, acc + cost[row][j], best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(cost, 0, &mut vec![false; cost.len()], 0.0, &mut best);
    best
}

/// Replicates both samples to `lcm(n, m)` equal-mass points and returns the
/// `|x - y|` cost matrix between them.
pub fn replicated_cost(a: &[f64], b: &[f64]) -> (Vec<Vec<f64>>, usize) {
    let l = a.len() / gcd(a.len(), b.len()) * b.len();
    let xs: Vec<f64> = a.iter().flat_map(|&x| std::iter::repeat_n(x, l / a.len())).collect();
    let ys: Vec<f64> = b.iter().flat_map(|&y| std::iter::repeat_n(y, l / b.len())).collect();
    let cost = xs.iter().map(|x| ys.iter().map(|y| (x - y).abs()).collect()).collect();
    (cost, l)
}

/// Earth mover's distance between two uniform empirical distributions,
/// computed as a minimum-cost transport problem.
pub fn ot_oracle(a: &[f64], b: &[f64]) -> f64 {
    let (cost, l) = replicated_cost(a, b);
    hungarian(&cost) / l as f64
}

pub struct Run {
    pub truth: GroundTruth,
    pub spec: SynthSpec,
    pub assignments: Vec<StanceAssignment>,
    pub records: Vec<PolarizationRecord>,
    pub summaries: BTreeMap<StanceLabel, SeriesSummary>,
    pub cells: Vec<PrevalenceCell>,
    pub pipeline_time: Duration,
}

/// Generates a corpus into `dir` and runs every stage on it.
pub fn run_synth(spec: &SynthSpec, dir: &Path) -> Run {
    let corpus = synth::generate(spec).expect("generate");
    corpus.write_to(dir).expect("write corpus");
    let mut settings = Settings::new(dir.join("out"));
    settings.corpus = Some(dir.join(synth::CORPUS_FILE));
    settings.collection = Some(dir.join(synth::CONFIG_FILE));
    let start = Instant::now();
    settings.ingest().expect("ingest");
    let assignments = settings.stance().expect("stance");
    settings.sentiment().expect("sentiment");
    settings.graph().expect("graph");
    let (records, summaries) = settings.polarize().expect("polarize");
    let cells = settings.report().expect("report");
    Run {
        truth: corpus.truth,
        spec: spec.clone(),
        assignments,
        records,
        summaries,
        cells,
        pipeline_time: start.elapsed(),
    }
}

impl Run {
    pub fn stance_accuracy(&self) -> f64 {
        let correct = self
            .assignments
            .iter()
            .filter(|a| self.truth.stance.get(&a.user_id) == Some(&a.label))
            .count();
        correct as f64 / self.truth.stance.len() as f64
    }

    /// (matching, total) over defined group-weeks.
    pub fn sign_agreement(&self) -> (usize, usize) {
        let mut hit = 0;
        let mut total = 0;
        for r in &self.records {
            let Some(l) = r.l else { continue };
            total += 1;
            let want = self.spec.planted_direction(r.group, self.truth.is_hostile(r.group, r.week));
            let got = if l > 0.0 {
                1.0
            } else if l < 0.0 {
                -1.0
            } else {
                0.0
            };
            if got == want {
                hit += 1;
            }
        }
        (hit, total)
    }

    pub fn mean_abs_l(&self) -> f64 {
        let ls: Vec<f64> = self.records.iter().filter_map(|r| r.l).collect();
        ls.iter().map(|l| l.abs()).sum::<f64>() / ls.len() as f64
    }

    /// (recovered, planted) hostile weeks over both groups.
    pub fn hostile_recall(&self) -> (usize, usize) {
        let mut found = 0;
        let mut planted = 0;
        for (g, weeks) in &self.truth.planted_hostile_weeks {
            planted += weeks.len();
            if let Some(s) = self.summaries.get(g) {
                found += weeks.iter().filter(|w| s.hostile_weeks.contains(w)).count();
            }
        }
        (found, planted)
    }

    pub fn cell(&self, group: StanceLabel, hostile: bool) -> Option<&PrevalenceCell> {
        use affectgauge::disaster::Condition;
        let want = if hostile { Condition::Hostile } else { Condition::Other };
        self.cells.iter().find(|c| c.group == group && c.condition == want)
    }
}
