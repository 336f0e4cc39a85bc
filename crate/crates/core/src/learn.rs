//! Random forest classifier, evaluation metrics and grouped splitting.
//!
//! Trees are CART with Gini splits searched over per-column histograms: each
//! column is cut into at most 256 bins (exact midpoints when it has that few
//! distinct training values, quantile edges otherwise). Every tree owns an RNG
//! derived from `(seed, tree_index)`, so training is reproducible regardless of
//! how trees are scheduled across threads.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rng::{derive_seed, seeded};
use crate::{Error, Result};

pub const MODEL_SCHEMA: &str = "proxsim-forest-v1";
pub const MAX_BINS: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    /// Candidate columns per node; `None` means ⌈√d⌉.
    pub features_per_split: Option<usize>,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self { n_trees: 200, max_depth: 16, min_samples_leaf: 5, features_per_split: None, bootstrap: true, seed: 7 }
    }
}

impl ForestParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_trees == 0 || self.max_depth == 0 || self.min_samples_leaf == 0 {
            return Err(Error::Config("n_trees, max_depth and min_samples_leaf must all be >= 1".into()));
        }
        if self.features_per_split == Some(0) {
            return Err(Error::Config("features_per_split must be >= 1".into()));
        }
        Ok(())
    }

    pub fn mtry(&self, d: usize) -> usize {
        self.features_per_split.unwrap_or_else(|| (d as f64).sqrt().ceil() as usize).clamp(1, d.max(1))
    }
}

/// One decision tree in flat arrays. Node 0 is the root; `left[i] == 0`
/// marks a leaf whose probability row is `right[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub feature: Vec<u32>,
    pub threshold: Vec<f64>,
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    /// Leaf class distributions, `n_leaves × n_classes`.
    pub proba: Vec<f64>,
}

impl Tree {
    fn leaf_of(&self, x: &[f64]) -> usize {
        let mut node = 0;
        while self.left[node] != 0 {
            node = if x[self.feature[node] as usize] <= self.threshold[node] {
                self.left[node] as usize
            } else {
                self.right[node] as usize
            };
        }
        self.right[node] as usize
    }

    /// Class distribution of the leaf reached by `x`.
    pub fn leaf_proba<'a>(&'a self, x: &[f64], n_classes: usize) -> &'a [f64] {
        let leaf = self.leaf_of(x);
        &self.proba[leaf * n_classes..(leaf + 1) * n_classes]
    }

    pub fn n_nodes(&self) -> usize {
        self.left.len()
    }

    pub fn depth(&self) -> usize {
        fn go(t: &Tree, node: usize) -> usize {
            if t.left[node] == 0 {
                0
            } else {
                1 + go(t, t.left[node] as usize).max(go(t, t.right[node] as usize))
            }
        }
        go(self, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub schema_version: String,
    pub columns: Vec<String>,
    pub classes: Vec<String>,
    pub params: ForestParams,
    pub trees: Vec<Tree>,
}

impl ForestModel {
    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer(&mut w, self)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let model: ForestModel = serde_json::from_reader(std::io::BufReader::new(File::open(path)?))?;
        if model.schema_version != MODEL_SCHEMA {
            return Err(Error::Schema(format!(
                "model schema '{}' is not supported (expected '{MODEL_SCHEMA}')",
                model.schema_version
            )));
        }
        Ok(model)
    }
}

/// Split thresholds for one column: `x <= edges[b]` ⇔ `bin(x) <= b`.
fn bin_edges(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut unique = sorted.clone();
    unique.dedup();
    if unique.len() <= MAX_BINS {
        return unique.windows(2).map(|w| w[0] + (w[1] - w[0]) / 2.0).collect();
    }
    let n = sorted.len();
    let max = sorted[n - 1];
    let mut edges: Vec<f64> = (1..MAX_BINS).map(|k| sorted[k * n / MAX_BINS]).filter(|q| *q < max).collect();
    edges.dedup();
    edges
}

fn bin_of(edges: &[f64], x: f64) -> u8 {
    edges.partition_point(|e| *e < x) as u8
}

struct Binned {
    edges: Vec<Vec<f64>>,
    /// Column-major bin indices.
    bins: Vec<Vec<u8>>,
}

impl Binned {
    fn new(x: &[f64], n_cols: usize) -> Self {
        let n = x.len() / n_cols;
        let (edges, bins) = (0..n_cols)
            .into_par_iter()
            .map(|j| {
                let col: Vec<f64> = (0..n).map(|i| x[i * n_cols + j]).collect();
                let edges = bin_edges(&col);
                let bins = col.iter().map(|v| bin_of(&edges, *v)).collect();
                (edges, bins)
            })
            .unzip();
        Binned { edges, bins }
    }
}

struct Grower<'a> {
    binned: &'a Binned,
    y: &'a [u8],
    n_classes: usize,
    params: &'a ForestParams,
    mtry: usize,
}

struct Split {
    feature: usize,
    bin: u8,
    score: f64,
}

impl Grower<'_> {
    fn grow(&self, tree_index: usize) -> Tree {
        let mut rng = seeded(derive_seed(self.params.seed, tree_index as u64));
        let n = self.y.len();
        let mut idx: Vec<u32> = if self.params.bootstrap {
            (0..n).map(|_| rng.random_range(0..n) as u32).collect()
        } else {
            (0..n as u32).collect()
        };
        let mut tree =
            Tree { feature: Vec::new(), threshold: Vec::new(), left: Vec::new(), right: Vec::new(), proba: Vec::new() };
        let mut order: Vec<usize> = (0..self.binned.bins.len()).collect();
        let mut hist = vec![0u32; MAX_BINS * self.n_classes];
        // (start, end, depth, node id)
        let mut stack = vec![(0usize, idx.len(), 0usize, 0usize)];
        tree.push_node();
        while let Some((start, end, depth, node)) = stack.pop() {
            let rows = &mut idx[start..end];
            let counts = self.class_counts(rows);
            let pure = counts.iter().filter(|c| **c > 0).count() <= 1;
            let size = rows.len();
            let split = if pure || depth >= self.params.max_depth || size < 2 * self.params.min_samples_leaf {
                None
            } else {
                order.shuffle(&mut rng);
                self.best_split(rows, &counts, &order, &mut hist)
            };
            match split {
                None => tree.make_leaf(node, &counts),
                Some(s) => {
                    let col = &self.binned.bins[s.feature];
                    let mut mid = 0;
                    for i in 0..rows.len() {
                        if col[rows[i] as usize] <= s.bin {
                            rows.swap(i, mid);
                            mid += 1;
                        }
                    }
                    let l = tree.push_node();
                    let r = tree.push_node();
                    tree.feature[node] = s.feature as u32;
                    tree.threshold[node] = self.binned.edges[s.feature][s.bin as usize];
                    tree.left[node] = l as u32;
                    tree.right[node] = r as u32;
                    stack.push((start + mid, end, depth + 1, r));
                    stack.push((start, start + mid, depth + 1, l));
                }
            }
        }
        tree
    }

    fn class_counts(&self, rows: &[u32]) -> Vec<u32> {
        let mut counts = vec![0u32; self.n_classes];
        for &r in rows {
            counts[self.y[r as usize] as usize] += 1;
        }
        counts
    }

    /// Best Gini split over the first `mtry` columns of `order`; if none of
    /// those admits a split, the remaining columns are tried in order.
    fn best_split(&self, rows: &[u32], counts: &[u32], order: &[usize], hist: &mut [u32]) -> Option<Split> {
        let c = self.n_classes;
        let n = rows.len() as f64;
        let min_leaf = self.params.min_samples_leaf as f64;
        let mut best: Option<Split> = None;
        for (k, &f) in order.iter().enumerate() {
            if k >= self.mtry && best.is_some() {
                break;
            }
            let n_bins = self.binned.edges[f].len() + 1;
            if n_bins < 2 {
                continue;
            }
            let hist = &mut hist[..n_bins * c];
            hist.fill(0);
            let col = &self.binned.bins[f];
            for &r in rows {
                hist[col[r as usize] as usize * c + self.y[r as usize] as usize] += 1;
            }
            let mut left = vec![0f64; c];
            let mut nl = 0.0;
            for b in 0..n_bins - 1 {
                let h = &hist[b * c..(b + 1) * c];
                let moved: u32 = h.iter().sum();
                if moved == 0 {
                    continue;
                }
                for (l, v) in left.iter_mut().zip(h) {
                    *l += f64::from(*v);
                }
                nl += f64::from(moved);
                let nr = n - nl;
                if nl < min_leaf {
                    continue;
                }
                if nr < min_leaf {
                    break;
                }
                let (mut sl, mut sr) = (0.0, 0.0);
                for (l, t) in left.iter().zip(counts) {
                    let r = f64::from(*t) - l;
                    sl += l * l;
                    sr += r * r;
                }
                // Maximizing Σl²/nl + Σr²/nr minimizes the weighted Gini impurity.
                let score = sl / nl + sr / nr;
                if best.as_ref().is_none_or(|s| score > s.score) {
                    best = Some(Split { feature: f, bin: b as u8, score });
                }
            }
        }
        best
    }
}

impl Tree {
    fn push_node(&mut self) -> usize {
        self.feature.push(0);
        self.threshold.push(0.0);
        self.left.push(0);
        self.right.push(0);
        self.left.len() - 1
    }

    fn make_leaf(&mut self, node: usize, counts: &[u32]) {
        let total: u32 = counts.iter().sum();
        let leaf = self.proba.len() / counts.len();
        self.proba.extend(counts.iter().map(|c| f64::from(*c) / f64::from(total)));
        self.left[node] = 0;
        self.right[node] = leaf as u32;
    }
}

/// Train a forest on row-major `x` (`y.len()` rows of `columns.len()` values).
pub fn train_forest(
    x: &[f64],
    y: &[usize],
    columns: &[String],
    classes: &[String],
    params: &ForestParams,
) -> Result<ForestModel> {
    params.validate()?;
    let d = columns.len();
    if y.is_empty() || d == 0 {
        return Err(Error::Input("cannot train on an empty feature matrix".into()));
    }
    if x.len() != y.len() * d {
        return Err(Error::Input(format!(
            "feature matrix holds {} values, expected {} rows × {d} columns",
            x.len(),
            y.len()
        )));
    }
    if classes.is_empty() || classes.len() > u8::MAX as usize {
        return Err(Error::Input(format!("unsupported class count {}", classes.len())));
    }
    if let Some(bad) = y.iter().find(|c| **c >= classes.len()) {
        return Err(Error::Input(format!("label {bad} outside the {} classes", classes.len())));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("feature matrix contains non-finite values".into()));
    }
    let binned = Binned::new(x, d);
    let y8: Vec<u8> = y.iter().map(|c| *c as u8).collect();
    let grower = Grower { binned: &binned, y: &y8, n_classes: classes.len(), params, mtry: params.mtry(d) };
    let trees: Vec<Tree> = (0..params.n_trees).into_par_iter().map(|t| grower.grow(t)).collect();
    Ok(ForestModel {
        schema_version: MODEL_SCHEMA.to_string(),
        columns: columns.to_vec(),
        classes: classes.to_vec(),
        params: params.clone(),
        trees,
    })
}

/// Mean of the per-tree leaf distributions for every row of `x`.
pub fn predict_proba(model: &ForestModel, x: &[f64], columns: &[String]) -> Result<Vec<Vec<f64>>> {
    if columns != model.columns.as_slice() {
        return Err(Error::Schema(format!(
            "feature columns do not match the model ({} given, {} expected)",
            columns.len(),
            model.columns.len()
        )));
    }
    let d = columns.len();
    if d == 0 || !x.len().is_multiple_of(d) {
        return Err(Error::Input("feature matrix shape does not match its columns".into()));
    }
    let c = model.n_classes();
    let scale = 1.0 / model.trees.len() as f64;
    Ok(x.par_chunks(d)
        .map(|row| {
            let mut p = vec![0.0; c];
            for tree in &model.trees {
                for (acc, v) in p.iter_mut().zip(tree.leaf_proba(row, c)) {
                    *acc += v;
                }
            }
            p.iter_mut().for_each(|v| *v *= scale);
            p
        })
        .collect())
}

/// Index of the largest probability; ties go to the lowest index.
pub fn argmax(p: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in p.iter().enumerate() {
        if *v > p[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

/// One-vs-rest ROC by sweeping the threshold over +∞, every distinct score
/// (descending) and −∞; `None` when either side has no samples.
pub fn roc_curve(scores: &[f64], positive: &[bool]) -> Option<Vec<RocPoint>> {
    let p = positive.iter().filter(|b| **b).count();
    let n = positive.len() - p;
    if p == 0 || n == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|a, b| scores[*b].total_cmp(&scores[*a]));
    let mut points = vec![RocPoint { threshold: f64::INFINITY, fpr: 0.0, tpr: 0.0 }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let t = scores[order[i]];
        while i < order.len() && scores[order[i]] == t {
            if positive[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint { threshold: t, fpr: fp as f64 / n as f64, tpr: tp as f64 / p as f64 });
    }
    points.push(RocPoint { threshold: f64::NEG_INFINITY, fpr: 1.0, tpr: 1.0 });
    Some(points)
}

/// Trapezoidal area under a ROC curve.
pub fn auc(points: &[RocPoint]) -> f64 {
    points.windows(2).map(|w| (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: String,
    pub support: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Set when the metric's denominator was zero and the value reported as 0.
    pub precision_undefined: bool,
    pub recall_undefined: bool,
    pub auroc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub classes: Vec<String>,
    pub n: u64,
    pub accuracy: f64,
    pub macro_f1: f64,
    /// Mean of the defined per-class AUROCs.
    pub macro_auroc: Option<f64>,
    pub per_class: Vec<ClassMetrics>,
    /// Rows are true classes, columns predicted classes.
    pub confusion: Vec<Vec<u64>>,
    #[serde(skip)]
    pub roc: Vec<Option<Vec<RocPoint>>>,
}

pub fn evaluate(y_true: &[usize], proba: &[Vec<f64>], classes: &[String]) -> Result<MetricsReport> {
    if y_true.len() != proba.len() {
        return Err(Error::Input(format!("{} labels but {} probability rows", y_true.len(), proba.len())));
    }
    if y_true.is_empty() {
        return Err(Error::Input("nothing to evaluate".into()));
    }
    let k = classes.len();
    if proba.iter().any(|p| p.len() != k) || y_true.iter().any(|y| *y >= k) {
        return Err(Error::Input(format!("labels or probabilities disagree with {k} classes")));
    }
    let mut confusion = vec![vec![0u64; k]; k];
    for (y, p) in y_true.iter().zip(proba) {
        confusion[*y][argmax(p)] += 1;
    }
    let n = y_true.len() as u64;
    let correct: u64 = (0..k).map(|i| confusion[i][i]).sum();
    let mut per_class = Vec::with_capacity(k);
    let mut roc = Vec::with_capacity(k);
    for c in 0..k {
        let tp = confusion[c][c] as f64;
        let support: u64 = confusion[c].iter().sum();
        let predicted: u64 = (0..k).map(|r| confusion[r][c]).sum();
        let precision = if predicted > 0 { tp / predicted as f64 } else { 0.0 };
        let recall = if support > 0 { tp / support as f64 } else { 0.0 };
        let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
        let scores: Vec<f64> = proba.iter().map(|p| p[c]).collect();
        let positive: Vec<bool> = y_true.iter().map(|y| *y == c).collect();
        let curve = roc_curve(&scores, &positive);
        per_class.push(ClassMetrics {
            class: classes[c].clone(),
            support,
            precision,
            recall,
            f1,
            precision_undefined: predicted == 0,
            recall_undefined: support == 0,
            auroc: curve.as_deref().map(auc),
        });
        roc.push(curve);
    }
    let aurocs: Vec<f64> = per_class.iter().filter_map(|m| m.auroc).collect();
    Ok(MetricsReport {
        classes: classes.to_vec(),
        n,
        accuracy: correct as f64 / n as f64,
        macro_f1: per_class.iter().map(|m| m.f1).sum::<f64>() / k as f64,
        macro_auroc: (!aurocs.is_empty()).then(|| aurocs.iter().sum::<f64>() / aurocs.len() as f64),
        per_class,
        confusion,
        roc,
    })
}

/// Average row probabilities within each group and score one decision per group.
pub fn evaluate_groups(
    y_true: &[usize],
    proba: &[Vec<f64>],
    groups: &[u64],
    classes: &[String],
) -> Result<MetricsReport> {
    if groups.len() != y_true.len() || proba.len() != y_true.len() {
        return Err(Error::Input("labels, probabilities and groups differ in length".into()));
    }
    let mut acc: BTreeMap<u64, (usize, Vec<f64>, usize)> = BTreeMap::new();
    for ((g, y), p) in groups.iter().zip(y_true).zip(proba) {
        let e = acc.entry(*g).or_insert_with(|| (*y, vec![0.0; p.len()], 0));
        if e.0 != *y {
            return Err(Error::Input(format!("group {g} mixes labels")));
        }
        e.1.iter_mut().zip(p).for_each(|(a, v)| *a += v);
        e.2 += 1;
    }
    let (ys, ps): (Vec<usize>, Vec<Vec<f64>>) = acc
        .into_values()
        .map(|(y, mut s, n)| {
            s.iter_mut().for_each(|v| *v /= n as f64);
            (y, s)
        })
        .unzip();
    evaluate(&ys, &ps, classes)
}

impl MetricsReport {
    pub fn class(&self, name: &str) -> Option<&ClassMetrics> {
        self.per_class.iter().find(|m| m.class == name)
    }

    pub fn write_confusion_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let mut header = vec!["true\\predicted".to_string()];
        header.extend(self.classes.iter().cloned());
        w.write_record(&header)?;
        for (name, row) in self.classes.iter().zip(&self.confusion) {
            let mut rec = vec![name.clone()];
            rec.extend(row.iter().map(u64::to_string));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_roc_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["class", "threshold", "fpr", "tpr"])?;
        for (name, curve) in self.classes.iter().zip(&self.roc) {
            for p in curve.iter().flatten() {
                w.write_record([name.clone(), p.threshold.to_string(), p.fpr.to_string(), p.tpr.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Per-class precision/recall/F1/support plus the macro and accuracy rows.
    pub fn write_class_table_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["class", "precision", "recall", "f1", "support", "auroc"])?;
        for m in &self.per_class {
            w.write_record([
                m.class.clone(),
                format!("{:.4}", m.precision),
                format!("{:.4}", m.recall),
                format!("{:.4}", m.f1),
                m.support.to_string(),
                m.auroc.map(|a| format!("{a:.4}")).unwrap_or_default(),
            ])?;
        }
        w.write_record([
            "macro".to_string(),
            String::new(),
            String::new(),
            format!("{:.4}", self.macro_f1),
            self.n.to_string(),
            self.macro_auroc.map(|a| format!("{a:.4}")).unwrap_or_default(),
        ])?;
        w.write_record([
            "accuracy".to_string(),
            String::new(),
            String::new(),
            format!("{:.4}", self.accuracy),
            self.n.to_string(),
            String::new(),
        ])?;
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub test_groups: BTreeSet<u64>,
}

/// Scenario-level split stratified by class: `round(fraction · n_c)` groups of
/// each class (at least one, and leaving at least one) go to the test side.
pub fn grouped_split(groups: &[u64], labels: &[usize], test_fraction: f64, seed: u64) -> Result<SplitIndices> {
    if groups.len() != labels.len() {
        return Err(Error::Input("groups and labels differ in length".into()));
    }
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::Split(format!("test fraction {test_fraction} outside (0, 1)")));
    }
    let mut by_class: BTreeMap<usize, BTreeSet<u64>> = BTreeMap::new();
    let mut label_of: BTreeMap<u64, usize> = BTreeMap::new();
    for (g, y) in groups.iter().zip(labels) {
        if let Some(prev) = label_of.insert(*g, *y) {
            if prev != *y {
                return Err(Error::Split(format!("scenario {g} carries two labels")));
            }
        }
        by_class.entry(*y).or_default().insert(*g);
    }
    let mut rng = seeded(seed);
    let mut test_groups = BTreeSet::new();
    for (class, set) in &by_class {
        let n = set.len();
        if n < 2 {
            return Err(Error::Split(format!("class {class} has {n} scenario(s); need at least 2")));
        }
        let mut ids: Vec<u64> = set.iter().copied().collect();
        ids.shuffle(&mut rng);
        let k = ((test_fraction * n as f64).round() as usize).clamp(1, n - 1);
        test_groups.extend(&ids[..k]);
    }
    let (test, train): (Vec<usize>, Vec<usize>) = (0..groups.len()).partition(|&i| test_groups.contains(&groups[i]));
    Ok(SplitIndices { train, test, test_groups })
}

/// Gather the listed rows of a row-major matrix.
pub fn take_rows(x: &[f64], n_cols: usize, rows: &[usize]) -> Vec<f64> {
    let mut out = Vec::with_capacity(rows.len() * n_cols);
    for &r in rows {
        out.extend_from_slice(&x[r * n_cols..(r + 1) * n_cols]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| format!("c{i}")).collect()
    }

    #[test]
    fn binning_exact_for_few_values() {
        let e = bin_edges(&[3.0, 1.0, 2.0, 2.0]);
        assert_eq!(e, vec![1.5, 2.5]);
        assert_eq!(bin_of(&e, 1.0), 0);
        assert_eq!(bin_of(&e, 2.0), 1);
        assert_eq!(bin_of(&e, 3.0), 2);
        let many: Vec<f64> = (0..10_000).map(|i| i as f64).collect();
        let e = bin_edges(&many);
        assert!(e.len() < MAX_BINS && e.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn toy_auroc() {
        let curve = roc_curve(&[0.1, 0.4, 0.35, 0.8], &[false, false, true, true]).unwrap();
        assert!((auc(&curve) - 0.75).abs() < 1e-12);
        assert_eq!(curve.first().unwrap().threshold, f64::INFINITY);
        assert_eq!(curve.last().unwrap().threshold, f64::NEG_INFINITY);
    }

    #[test]
    fn perfect_predictions() {
        let y = vec![0, 1, 2, 1];
        let p: Vec<Vec<f64>> = y.iter().map(|c| (0..3).map(|k| f64::from(u8::from(k == *c))).collect()).collect();
        let r = evaluate(&y, &p, &names(3)).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.macro_f1, 1.0);
        assert_eq!(r.macro_auroc, Some(1.0));
        assert_eq!(r.confusion, vec![vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn undefined_precision_flagged() {
        let y = vec![0, 0, 1];
        let p = vec![vec![0.9, 0.1]; 3];
        let r = evaluate(&y, &p, &names(2)).unwrap();
        assert!(r.per_class[1].precision_undefined);
        assert_eq!(r.per_class[1].f1, 0.0);
        assert!(evaluate(&y, &p[..2], &names(2)).is_err());
    }

    #[test]
    fn argmax_ties_go_low() {
        assert_eq!(argmax(&[0.4, 0.4, 0.2]), 0);
        assert_eq!(argmax(&[0.2, 0.4, 0.4]), 1);
    }

    #[test]
    fn single_class_forest() {
        let x: Vec<f64> = (0..40).map(|i| i as f64).collect();
        let y = vec![2usize; 20];
        let cols = vec!["a".to_string(), "b".to_string()];
        let m = train_forest(&x, &y, &cols, &names(3), &ForestParams { n_trees: 5, ..Default::default() }).unwrap();
        for p in predict_proba(&m, &x, &cols).unwrap() {
            assert_eq!(p, vec![0.0, 0.0, 1.0]);
        }
    }

    #[test]
    fn column_mismatch_is_schema_error() {
        let x = vec![0.0, 1.0, 1.0, 0.0];
        let cols = vec!["a".to_string(), "b".to_string()];
        let m = train_forest(
            &x,
            &[0, 1],
            &cols,
            &names(2),
            &ForestParams { n_trees: 1, min_samples_leaf: 1, ..Default::default() },
        )
        .unwrap();
        let other = vec!["b".to_string(), "a".to_string()];
        assert!(matches!(predict_proba(&m, &x, &other), Err(Error::Schema(_))));
        assert!(matches!(train_forest(&[], &[], &cols, &names(2), &ForestParams::default()), Err(Error::Input(_))));
    }

    #[test]
    fn split_examples() {
        let mut groups = Vec::new();
        let mut labels = Vec::new();
        for g in 0..30u64 {
            for _ in 0..4 {
                groups.push(g);
                labels.push((g % 3) as usize);
            }
        }
        let s = grouped_split(&groups, &labels, 0.3, 1).unwrap();
        assert_eq!(s.test_groups.len(), 9);
        for c in 0..3 {
            assert_eq!(s.test_groups.iter().filter(|g| (**g % 3) as usize == c).count(), 3);
        }
        let train_groups: BTreeSet<u64> = s.train.iter().map(|i| groups[*i]).collect();
        assert!(train_groups.is_disjoint(&s.test_groups));
        assert_eq!(s, grouped_split(&groups, &labels, 0.3, 1).unwrap());
        assert!(matches!(grouped_split(&[0, 1, 2], &[0, 1, 1], 0.3, 1), Err(Error::Split(_))));
    }
}
