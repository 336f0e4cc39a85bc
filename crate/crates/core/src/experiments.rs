//! End-to-end experiments: per-view training/evaluation and the noise sweep.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{validate_sigma_grid, RunConfig};
use crate::features::{build_feature_matrix, FeatureMatrix, FeatureView};
use crate::learn::{
    evaluate, evaluate_groups, grouped_split, predict_proba, take_rows, train_forest, ForestParams, MetricsReport,
};
use crate::orbital::OrbitRegime;
use crate::scenario::{observe, simulate_clean, BehaviorClass, CleanScenario, DataRow, ScenarioConfig};
use crate::Result;

pub fn class_names() -> Vec<String> {
    BehaviorClass::ALL.iter().map(|c| c.to_string()).collect()
}

/// Row-level (primary) and scenario-mean (secondary) results for one view.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewReport {
    pub config_hash: String,
    pub view: FeatureView,
    pub train_rows: usize,
    pub test_rows: usize,
    pub test_scenarios: usize,
    pub rows: MetricsReport,
    pub scenarios: MetricsReport,
}

impl ViewReport {
    /// Write `metrics_{view}.json`, `confusion_{view}.csv`, `roc_{view}.csv`
    /// and `classes_{view}.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let v = self.view;
        let json = dir.join(format!("metrics_{v}.json"));
        std::fs::write(&json, serde_json::to_string_pretty(self)? + "\n")?;
        let confusion = dir.join(format!("confusion_{v}.csv"));
        self.rows.write_confusion_csv(&confusion)?;
        let roc = dir.join(format!("roc_{v}.csv"));
        self.rows.write_roc_csv(&roc)?;
        let classes = dir.join(format!("classes_{v}.csv"));
        self.rows.write_class_table_csv(&classes)?;
        Ok(vec![json, confusion, roc, classes])
    }

    pub fn read(dir: &Path, view: FeatureView) -> Result<Self> {
        let text = std::fs::read_to_string(dir.join(format!("metrics_{view}.json")))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Split by scenario, train on one side, evaluate on the other.
pub fn train_eval(
    m: &FeatureMatrix,
    test_fraction: f64,
    split_seed: u64,
    params: &ForestParams,
    config_hash: &str,
) -> Result<ViewReport> {
    let split = grouped_split(&m.groups, &m.labels, test_fraction, split_seed)?;
    let d = m.n_cols();
    let classes = class_names();
    let y_train: Vec<usize> = split.train.iter().map(|&i| m.labels[i]).collect();
    let model = train_forest(&take_rows(&m.data, d, &split.train), &y_train, &m.columns, &classes, params)?;
    let proba = predict_proba(&model, &take_rows(&m.data, d, &split.test), &m.columns)?;
    let y_test: Vec<usize> = split.test.iter().map(|&i| m.labels[i]).collect();
    let g_test: Vec<u64> = split.test.iter().map(|&i| m.groups[i]).collect();
    Ok(ViewReport {
        config_hash: config_hash.to_string(),
        view: m.view,
        train_rows: split.train.len(),
        test_rows: split.test.len(),
        test_scenarios: split.test_groups.len(),
        rows: evaluate(&y_test, &proba, &classes)?,
        scenarios: evaluate_groups(&y_test, &proba, &g_test, &classes)?,
    })
}

/// All (class, regime, id) triples of a configuration, in id order.
pub fn scenario_index(cfg: &ScenarioConfig) -> Vec<(BehaviorClass, OrbitRegime, u64)> {
    let mut out = Vec::with_capacity(cfg.total_scenarios());
    for class in BehaviorClass::ALL {
        for regime in OrbitRegime::ALL {
            for k in 0..cfg.scenarios_per_cell {
                out.push((class, regime, cfg.scenario_id(class, regime, k)));
            }
        }
    }
    out
}

pub fn simulate_all(cfg: &ScenarioConfig) -> Result<Vec<CleanScenario>> {
    cfg.validate()?;
    scenario_index(cfg).par_iter().map(|&(class, regime, id)| simulate_clean(cfg, class, regime, id)).collect()
}

pub fn observe_all(clean: &[CleanScenario], sigma: f64, cfg: &ScenarioConfig) -> Result<Vec<Vec<DataRow>>> {
    clean.par_iter().map(|c| observe(c, sigma, &cfg.link).map(|r| r.rows)).collect()
}

/// Generate in memory and evaluate each requested view on the same split.
pub fn ablation(cfg: &RunConfig, views: &[FeatureView]) -> Result<Vec<ViewReport>> {
    cfg.validate()?;
    let hash = cfg.hash()?;
    let clean = simulate_all(&cfg.scenario)?;
    let scenarios = observe_all(&clean, cfg.scenario.sigma, &cfg.scenario)?;
    drop(clean);
    views
        .iter()
        .map(|&view| {
            let m = build_feature_matrix(&scenarios, view, &cfg.features)?;
            train_eval(&m, cfg.test_fraction, cfg.scenario.master_seed, &cfg.forest, &hash)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub sigma: f64,
    pub sigma_sq: f64,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl SweepRow {
    /// 1/σ², or "inf" for the noise-free row.
    pub fn inv_sigma_sq_label(&self) -> String {
        if self.sigma == 0.0 {
            "inf".to_string()
        } else {
            format!("{}", 1.0 / self.sigma_sq)
        }
    }
}

/// Binary detection scores with class 1 (jammer ON) as positive.
fn binary_scores(y: &[usize], pred: &[usize]) -> (f64, f64, f64, f64) {
    let (mut tp, mut fp, mut fn_, mut tn) = (0.0, 0.0, 0.0, 0.0);
    for (t, p) in y.iter().zip(pred) {
        match (*t == 1, *p == 1) {
            (true, true) => tp += 1.0,
            (false, true) => fp += 1.0,
            (true, false) => fn_ += 1.0,
            (false, false) => tn += 1.0,
        }
    }
    let precision = if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 };
    let recall = if tp + fn_ > 0.0 { tp / (tp + fn_) } else { 0.0 };
    let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
    ((tp + tn) / (tp + tn + fp + fn_), precision, recall, f1)
}

/// Timestep-level jammer detection across estimation-noise scales.
///
/// Transmit power jitter is forced to zero and one set of clean scenarios is
/// re-observed at every σ; the scenario split and forest seed are shared
/// across σ so that only the observation noise changes.
pub fn noise_sweep(cfg: &RunConfig, sigma_grid: &[f64]) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    validate_sigma_grid(sigma_grid)?;
    let mut scenario = cfg.scenario.clone();
    scenario.scenarios_per_cell = cfg.sweep.scenarios_per_cell;
    scenario.link.power_jitter_db = 0.0;
    let clean = simulate_all(&scenario)?;
    let params = &cfg.sweep.forest;
    let detector_classes = vec!["off".to_string(), "on".to_string()];
    let mut out = Vec::with_capacity(sigma_grid.len());
    for &sigma in sigma_grid {
        let rows = observe_all(&clean, sigma, &scenario)?;
        let m = build_feature_matrix(&rows, FeatureView::Fused, &cfg.features)?;
        let split = grouped_split(&m.groups, &m.labels, cfg.test_fraction, scenario.master_seed)?;
        let d = m.n_cols();
        let y_train: Vec<usize> = split.train.iter().map(|&i| usize::from(m.jam_state[i])).collect();
        let model =
            train_forest(&take_rows(&m.data, d, &split.train), &y_train, &m.columns, &detector_classes, params)?;
        let proba = predict_proba(&model, &take_rows(&m.data, d, &split.test), &m.columns)?;
        let y_test: Vec<usize> = split.test.iter().map(|&i| usize::from(m.jam_state[i])).collect();
        let pred: Vec<usize> = proba.iter().map(|p| crate::learn::argmax(p)).collect();
        let (accuracy, precision, recall, f1) = binary_scores(&y_test, &pred);
        log::info!("sweep sigma={sigma}: accuracy {accuracy:.4} f1 {f1:.4}");
        out.push(SweepRow { sigma, sigma_sq: sigma * sigma, accuracy, precision, recall, f1 });
    }
    Ok(out)
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow], config_hash: &str) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["sigma", "sigma_sq", "inv_sigma_sq", "accuracy", "precision", "recall", "f1", "config_hash"])?;
    for r in rows {
        w.write_record([
            r.sigma.to_string(),
            r.sigma_sq.to_string(),
            r.inv_sigma_sq_label(),
            format!("{:.6}", r.accuracy),
            format!("{:.6}", r.precision),
            format!("{:.6}", r.recall),
            format!("{:.6}", r.f1),
            config_hash.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Table of headline numbers per view: accuracy, macro F1, macro AUROC.
pub fn write_summary_csv(path: &Path, reports: &[ViewReport]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "view",
        "accuracy",
        "macro_f1",
        "macro_auroc",
        "scenario_accuracy",
        "scenario_macro_f1",
        "config_hash",
    ])?;
    for r in reports {
        w.write_record([
            r.view.as_str().to_uppercase(),
            format!("{:.4}", r.rows.accuracy),
            format!("{:.4}", r.rows.macro_f1),
            r.rows.macro_auroc.map(|a| format!("{a:.4}")).unwrap_or_default(),
            format!("{:.4}", r.scenarios.accuracy),
            format!("{:.4}", r.scenarios.macro_f1),
            r.config_hash.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
