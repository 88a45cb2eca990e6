//! Evaluation protocol: seeded splits, weighted F1, seed averaging, and
//! annotation agreement.
//!
//! The protocol fixes an 80:20 train/test split of the gold-labeled
//! sentences, then a further 80:20 split of the train pool into train and
//! validation. Random splits are driven by the documented generator in
//! [`crate::rng`], so a seed fully determines the partition. A temporal mode
//! splits at a boundary date instead, for look-ahead-bias checks.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::Serialize;

use crate::corpus::{Corpus, DocumentKind, StanceLabel};
use crate::error::Error;
use crate::rng::fisher_yates;
use crate::stance::{rule_classify, LabelSource};
use crate::Result;

/// Default seeds for the three-run evaluation protocol.
pub const DEFAULT_SEEDS: [u64; 3] = [5768, 78516, 944601];

/// How to partition the labeled sentences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SplitMode {
    RandomSeeded { seed: u64 },
    Temporal { boundary: NaiveDate },
}

/// Split specification. Fractions default to 0.8 at both levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitSpec {
    pub mode: SplitMode,
    /// Share of the data forming the train pool; the rest is the test set.
    pub train_fraction: f64,
    /// Share of the train pool kept for training; the rest is validation.
    pub val_fraction_of_train: f64,
}

impl SplitSpec {
    pub fn seeded(seed: u64) -> Self {
        SplitSpec {
            mode: SplitMode::RandomSeeded { seed },
            train_fraction: 0.8,
            val_fraction_of_train: 0.8,
        }
    }

    pub fn temporal(boundary: NaiveDate) -> Self {
        SplitSpec {
            mode: SplitMode::Temporal { boundary },
            train_fraction: 0.8,
            val_fraction_of_train: 0.8,
        }
    }
}

/// One gold-labeled sentence flattened out of a corpus for evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalItem {
    pub key: String,
    pub text: String,
    pub gold: StanceLabel,
    pub release_date: NaiveDate,
    pub kind: DocumentKind,
}

/// All sentences carrying a gold label, in corpus order.
pub fn collect_labeled(corpus: &Corpus) -> Vec<EvalItem> {
    let mut items = Vec::new();
    for doc in corpus.documents() {
        for s in &doc.sentences {
            if let Some(gold) = s.gold_label {
                items.push(EvalItem {
                    key: s.key(),
                    text: s.text.clone(),
                    gold,
                    release_date: doc.release_date,
                    kind: doc.kind,
                });
            }
        }
    }
    items
}

/// Index partition produced by [`make_split`]. Partitions are disjoint and
/// exhaustive over `0..n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

/// Partition labeled items into train/val/test.
///
/// Random mode: a seeded shuffle, then the first `train_fraction` of indices
/// form the train pool and the rest the test set; the pool is split again
/// into train and validation. Temporal mode: train is everything released on
/// or before the boundary, test is everything after, and validation is empty.
pub fn make_split(items: &[EvalItem], spec: &SplitSpec) -> Result<SplitIndices> {
    if items.is_empty() {
        return Err(Error::EmptyInput("no labeled sentences to split".into()));
    }
    let split = match spec.mode {
        SplitMode::RandomSeeded { seed } => {
            let mut indices: Vec<usize> = (0..items.len()).collect();
            fisher_yates(&mut indices, seed);
            let pool_len = (items.len() as f64 * spec.train_fraction).floor() as usize;
            let test = indices.split_off(pool_len);
            let train_len = (indices.len() as f64 * spec.val_fraction_of_train).floor() as usize;
            let val = indices.split_off(train_len);
            SplitIndices {
                train: indices,
                val,
                test,
            }
        }
        SplitMode::Temporal { boundary } => {
            let (train, test): (Vec<usize>, Vec<usize>) =
                (0..items.len()).partition(|&i| items[i].release_date <= boundary);
            SplitIndices {
                train,
                val: Vec::new(),
                test,
            }
        }
    };

    let temporal = matches!(spec.mode, SplitMode::Temporal { .. });
    if split.train.is_empty() || split.test.is_empty() || (!temporal && split.val.is_empty()) {
        return Err(Error::EmptyInput(format!(
            "split produced an empty partition (train {}, val {}, test {})",
            split.train.len(),
            split.val.len(),
            split.test.len()
        )));
    }
    Ok(split)
}

/// 3x3 confusion counts; rows are gold classes, columns predictions, both in
/// label-code order.
pub type Confusion = [[u64; 3]; 3];

pub fn confusion_matrix(gold: &[StanceLabel], pred: &[StanceLabel]) -> Result<Confusion> {
    if gold.len() != pred.len() {
        return Err(Error::Mismatch(format!(
            "gold has {} labels, predictions {}",
            gold.len(),
            pred.len()
        )));
    }
    let mut m = [[0u64; 3]; 3];
    for (g, p) in gold.iter().zip(pred) {
        m[g.class_index()][p.class_index()] += 1;
    }
    Ok(m)
}

/// Support-weighted mean of per-class F1 scores.
///
/// Per class, `F1 = 2PR / (P + R)` with the convention that an undefined
/// precision, recall, or F1 is zero; the weights are the gold supports.
pub fn weighted_f1(gold: &[StanceLabel], pred: &[StanceLabel]) -> Result<f64> {
    if gold.is_empty() {
        return Err(Error::EmptyInput("weighted F1 of empty label lists".into()));
    }
    let m = confusion_matrix(gold, pred)?;
    let n = gold.len() as f64;
    let mut score = 0.0;
    for (c, row) in m.iter().enumerate() {
        let support: u64 = row.iter().sum();
        if support == 0 {
            continue;
        }
        let tp = row[c] as f64;
        let predicted: u64 = (0..3).map(|g| m[g][c]).sum();
        let precision = if predicted == 0 {
            0.0
        } else {
            tp / predicted as f64
        };
        let recall = tp / support as f64;
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        score += (support as f64 / n) * f1;
    }
    Ok(score)
}

/// Percentage of positions where two annotations agree.
pub fn agreement(labels_a: &[StanceLabel], labels_b: &[StanceLabel]) -> Result<f64> {
    if labels_a.len() != labels_b.len() {
        return Err(Error::Mismatch(format!(
            "annotation lists differ in length ({} vs {})",
            labels_a.len(),
            labels_b.len()
        )));
    }
    if labels_a.is_empty() {
        return Err(Error::EmptyInput("agreement of empty label lists".into()));
    }
    let matches = labels_a
        .iter()
        .zip(labels_b)
        .filter(|(a, b)| a == b)
        .count();
    Ok(100.0 * matches as f64 / labels_a.len() as f64)
}

/// Aggregate outcome of the seeded evaluation runs.
#[derive(Debug, Clone, Serialize)]
pub struct EvalResult {
    /// Weighted F1 per seed, in the order the seeds were given.
    pub per_seed_f1: Vec<(u64, f64)>,
    pub mean_f1: f64,
    /// Population standard deviation across seeds.
    pub stddev_f1: f64,
    /// Confusion counts summed over every seed's test partition.
    pub confusion: Confusion,
    pub test_size_per_seed: Vec<usize>,
}

/// Run the seeded evaluation protocol: for each seed, split, predict the test
/// partition with the label source, and score weighted F1.
pub fn seed_suite(corpus: &Corpus, source: &LabelSource, seeds: &[u64]) -> Result<EvalResult> {
    if seeds.is_empty() {
        return Err(Error::EmptyInput("no seeds given".into()));
    }
    let items = collect_labeled(corpus);
    if items.is_empty() {
        return Err(Error::EmptyInput(
            "corpus has no gold-labeled sentences".into(),
        ));
    }
    let external = match source {
        LabelSource::ExternalFile { path } => Some(crate::stance::load_label_csv(path)?),
        LabelSource::RuleBased { .. } => None,
    };

    let mut per_seed_f1 = Vec::with_capacity(seeds.len());
    let mut test_size_per_seed = Vec::with_capacity(seeds.len());
    let mut confusion = [[0u64; 3]; 3];
    for &seed in seeds {
        let split = make_split(&items, &SplitSpec::seeded(seed))?;
        let (gold, pred) = predict(&items, &split.test, source, external.as_ref())?;
        let f1 = weighted_f1(&gold, &pred)?;
        let m = confusion_matrix(&gold, &pred)?;
        for g in 0..3 {
            for p in 0..3 {
                confusion[g][p] += m[g][p];
            }
        }
        per_seed_f1.push((seed, f1));
        test_size_per_seed.push(split.test.len());
    }

    let n = per_seed_f1.len() as f64;
    let mean_f1 = per_seed_f1.iter().map(|(_, f)| f).sum::<f64>() / n;
    let variance = per_seed_f1
        .iter()
        .map(|(_, f)| (f - mean_f1).powi(2))
        .sum::<f64>()
        / n;
    Ok(EvalResult {
        per_seed_f1,
        mean_f1,
        stddev_f1: variance.sqrt(),
        confusion,
        test_size_per_seed,
    })
}

/// Score a label source on the temporal test partition (everything released
/// after the boundary).
pub fn temporal_eval(
    corpus: &Corpus,
    source: &LabelSource,
    boundary: NaiveDate,
) -> Result<EvalResult> {
    let items = collect_labeled(corpus);
    if items.is_empty() {
        return Err(Error::EmptyInput(
            "corpus has no gold-labeled sentences".into(),
        ));
    }
    let external = match source {
        LabelSource::ExternalFile { path } => Some(crate::stance::load_label_csv(path)?),
        LabelSource::RuleBased { .. } => None,
    };
    let split = make_split(&items, &SplitSpec::temporal(boundary))?;
    let (gold, pred) = predict(&items, &split.test, source, external.as_ref())?;
    let f1 = weighted_f1(&gold, &pred)?;
    Ok(EvalResult {
        per_seed_f1: vec![(0, f1)],
        mean_f1: f1,
        stddev_f1: 0.0,
        confusion: confusion_matrix(&gold, &pred)?,
        test_size_per_seed: vec![split.test.len()],
    })
}

fn predict(
    items: &[EvalItem],
    test: &[usize],
    source: &LabelSource,
    external: Option<&BTreeMap<String, StanceLabel>>,
) -> Result<(Vec<StanceLabel>, Vec<StanceLabel>)> {
    let mut gold = Vec::with_capacity(test.len());
    let mut pred = Vec::with_capacity(test.len());
    for &i in test {
        let item = &items[i];
        gold.push(item.gold);
        let label = match source {
            LabelSource::RuleBased { lexicon, tie } => {
                rule_classify(&item.text, lexicon, *tie).label
            }
            LabelSource::ExternalFile { path } => external
                .and_then(|m| m.get(&item.key).copied())
                .ok_or_else(|| Error::LabelCoverage {
                    count: 1,
                    missing: vec![format!("{} (from {})", item.key, path.display())],
                })?,
        };
        pred.push(label);
    }
    Ok((gold, pred))
}
