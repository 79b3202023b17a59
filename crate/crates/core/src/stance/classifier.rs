//! Logistic-regression text classifier over per-user token frequencies.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::Message;
use crate::error::{Error, Result};
use crate::sentiment::tokenize;

pub const LEARNING_RATE: f64 = 0.1;
pub const EPOCHS: usize = 200;
const SHUFFLE_SEED: u64 = 0x5EED;

pub type SparseVec = Vec<(u32, f64)>;

/// L2-normalized token-frequency vector per user, in `users` order.
///
/// Mentions (`@handle`) are left out so the model learns from what users
/// say rather than whom they address.
pub fn user_features(messages: &[Message], users: &[String]) -> (Vec<String>, Vec<SparseVec>) {
    let index: HashMap<&str, usize> = users.iter().enumerate().map(|(i, u)| (u.as_str(), i)).collect();
    let mut counts: Vec<BTreeMap<String, f64>> = vec![BTreeMap::new(); users.len()];
    for msg in messages {
        let Some(&u) = index.get(msg.author_id.as_str()) else { continue };
        for tok in tokenize(&msg.text) {
            if !tok.starts_with('@') {
                *counts[u].entry(tok).or_default() += 1.0;
            }
        }
    }
    let mut vocab: BTreeMap<&str, u32> = BTreeMap::new();
    for c in &counts {
        for tok in c.keys() {
            vocab.entry(tok.as_str()).or_insert(0);
        }
    }
    for (i, id) in vocab.values_mut().enumerate() {
        *id = i as u32;
    }
    let rows = counts
        .iter()
        .map(|c| {
            let norm = c.values().map(|x| x * x).sum::<f64>().sqrt();
            c.iter().map(|(tok, x)| (vocab[tok.as_str()], x / norm)).collect()
        })
        .collect();
    let vocab = vocab.into_keys().map(str::to_owned).collect();
    (vocab, rows)
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    weights: Vec<f64>,
    bias: f64,
}

impl LogisticModel {
    /// Stochastic gradient descent on the logistic loss, classes balanced by
    /// inverse frequency, visiting samples in a fixed-seed shuffled order.
    ///
    /// `targets` are `true` for the positive class.
    pub fn train(rows: &[&SparseVec], targets: &[bool], dim: usize) -> Result<Self> {
        assert_eq!(rows.len(), targets.len());
        let n_pos = targets.iter().filter(|&&t| t).count();
        let n_neg = targets.len() - n_pos;
        if n_pos == 0 || n_neg == 0 {
            return Err(Error::Config(
                "text classifier needs labeled users of both stances".into(),
            ));
        }
        let n = targets.len() as f64;
        let w_pos = n / (2.0 * n_pos as f64);
        let w_neg = n / (2.0 * n_neg as f64);

        let mut model = Self {
            weights: vec![0.0; dim],
            bias: 0.0,
        };
        let mut order: Vec<usize> = (0..rows.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(SHUFFLE_SEED);
        for _ in 0..EPOCHS {
            order.shuffle(&mut rng);
            for &i in &order {
                let y = if targets[i] { 1.0 } else { 0.0 };
                let class_weight = if targets[i] { w_pos } else { w_neg };
                let grad = (model.probability(rows[i]) - y) * class_weight;
                let step = LEARNING_RATE * grad;
                for &(f, x) in rows[i] {
                    model.weights[f as usize] -= step * x;
                }
                model.bias -= step;
            }
        }
        Ok(model)
    }

    /// Probability of the positive class.
    pub fn probability(&self, row: &SparseVec) -> f64 {
        let z: f64 = row.iter().map(|&(f, x)| self.weights[f as usize] * x).sum::<f64>() + self.bias;
        sigmoid(z)
    }
}
