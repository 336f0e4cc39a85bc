//! Temporal features, scenario aggregates and the three feature views.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::orbital::OrbitRegime;
use crate::relmotion::central_diff;
use crate::rflink::OFF_SENTINEL_DB;
use crate::scenario::{load_dataset, DataRow, CSV_COLUMNS};
use crate::{Error, Result};

/// Columns only the simulator knows; never offered to a classifier.
pub const PRIVILEGED_COLUMNS: [&str; 2] = ["sjnr_db", "jam_state"];

/// Floor on the trailing standard deviation used by [`anomaly_flags`].
pub const ANOMALY_STD_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RollingStats {
    pub std: Vec<f64>,
    pub gradient: Vec<f64>,
}

/// Centered rolling sample standard deviation and per-step gradient.
///
/// Windows shrink at the edges; a window holding a single value has std 0.
pub fn rolling_stats(series: &[f64], window: usize) -> Result<RollingStats> {
    if window < 2 {
        return Err(Error::Parameter(format!("rolling window must be >= 2, got {window}")));
    }
    let n = series.len();
    if n < window.max(3) {
        return Err(Error::Size { need: window.max(3), got: n });
    }
    let half = window / 2;
    let std = (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + window - half).min(n);
            sample_std(&series[lo..hi])
        })
        .collect();
    Ok(RollingStats { std, gradient: central_diff(series, 1.0)? })
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Trailing z-score outlier flags.
///
/// `x[i]` is flagged when it deviates from the mean of the preceding `window`
/// samples (fewer near the start, at least two) by more than `z` of their
/// sample standard deviation.
pub fn anomaly_flags(series: &[f64], window: usize, z: f64) -> Result<Vec<u8>> {
    if window < 3 {
        return Err(Error::Parameter(format!("anomaly window must be >= 3, got {window}")));
    }
    Ok((0..series.len())
        .map(|i| {
            let past = &series[i.saturating_sub(window)..i];
            if past.len() < 2 {
                return 0;
            }
            let sd = sample_std(past).max(ANOMALY_STD_FLOOR);
            u8::from((series[i] - mean(past)).abs() > z * sd)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Least-squares slope against the sample index.
    pub slope: f64,
}

pub fn scenario_aggregates(series: &[f64]) -> Result<Aggregates> {
    let n = series.len();
    if n < 2 {
        return Err(Error::Size { need: 2, got: n });
    }
    let m = mean(series);
    let xm = (n - 1) as f64 / 2.0;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in series.iter().enumerate() {
        let dx = i as f64 - xm;
        sxy += dx * (y - m);
        sxx += dx * dx;
    }
    Ok(Aggregates {
        min: series.iter().copied().fold(f64::INFINITY, f64::min),
        max: series.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean: m,
        slope: sxy / sxx,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureView {
    Rf,
    Kin,
    Fused,
}

impl FeatureView {
    pub const ALL: [FeatureView; 3] = [FeatureView::Rf, FeatureView::Kin, FeatureView::Fused];

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureView::Rf => "rf",
            FeatureView::Kin => "kin",
            FeatureView::Fused => "fused",
        }
    }
}

impl std::fmt::Display for FeatureView {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FeatureView {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rf" => Ok(FeatureView::Rf),
            "kin" => Ok(FeatureView::Kin),
            "fused" => Ok(FeatureView::Fused),
            other => Err(Error::Input(format!("unknown feature view '{other}' (rf|kin|fused)"))),
        }
    }
}

/// Cross-domain terms appended to the fused view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interaction {
    /// JSR with the jammer path loss's range dependence removed:
    /// jsr_db + 20·log10(range). Jammer-off rows keep the sentinel.
    RangeJsr,
    /// boresight_rad × RSSI gradient.
    BoresightRssiGrad,
    /// range_rate × throughput gradient.
    RangeRateThroughputGrad,
}

impl Interaction {
    pub fn column(self) -> &'static str {
        match self {
            Interaction::RangeJsr => "range_jsr_db",
            Interaction::BoresightRssiGrad => "boresight_rssi_grad",
            Interaction::RangeRateThroughputGrad => "range_rate_throughput_grad",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureConfig {
    pub rf_columns: Vec<String>,
    pub kin_columns: Vec<String>,
    /// RF series that get a rolling std and gradient.
    pub rolling_columns: Vec<String>,
    pub rolling_window: usize,
    /// RF series that get anomaly flags.
    pub anomaly_columns: Vec<String>,
    pub anomaly_window: usize,
    pub anomaly_z: f64,
    /// Kinematic series summarized per scenario and broadcast to each row.
    pub kin_aggregates: Vec<String>,
    /// RF series summarized per scenario (empty by default).
    pub rf_aggregates: Vec<String>,
    pub interactions: Vec<Interaction>,
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            rf_columns: strings(&["rssi_dbm", "throughput_mbps", "cn0_dbhz", "jsr_db", "cfo_noise_hz"]),
            kin_columns: strings(&[
                "range_m",
                "range_rate_mps",
                "v_r",
                "v_t",
                "v_n",
                "a_r",
                "a_t",
                "a_n",
                "jerk",
                "curvature",
                "doppler_hz",
                "doppler_rate_hzs",
                "boresight_rad",
                "t_to_tca",
            ]),
            rolling_columns: strings(&["rssi_dbm", "throughput_mbps"]),
            rolling_window: 3,
            anomaly_columns: strings(&["rssi_dbm", "throughput_mbps", "cn0_dbhz", "jsr_db"]),
            anomaly_window: 16,
            anomaly_z: 3.0,
            kin_aggregates: strings(&["range_m", "range_rate_mps", "curvature", "jerk", "boresight_rad"]),
            rf_aggregates: Vec::new(),
            interactions: vec![
                Interaction::RangeJsr,
                Interaction::BoresightRssiGrad,
                Interaction::RangeRateThroughputGrad,
            ],
        }
    }
}

const AGGREGATE_SUFFIXES: [&str; 4] = ["min", "max", "mean", "slope"];

impl FeatureConfig {
    pub fn validate(&self) -> Result<()> {
        let known: BTreeSet<&str> = CSV_COLUMNS[3..].iter().copied().collect();
        let lists = [
            ("rf_columns", &self.rf_columns),
            ("kin_columns", &self.kin_columns),
            ("rolling_columns", &self.rolling_columns),
            ("anomaly_columns", &self.anomaly_columns),
            ("kin_aggregates", &self.kin_aggregates),
            ("rf_aggregates", &self.rf_aggregates),
        ];
        for (name, list) in lists {
            for c in list {
                if !known.contains(c.as_str()) {
                    return Err(Error::Config(format!("{name}: unknown column '{c}'")));
                }
                if PRIVILEGED_COLUMNS.contains(&c.as_str()) {
                    return Err(Error::Config(format!("{name}: '{c}' is simulation-privileged")));
                }
            }
        }
        let rf: BTreeSet<&String> = self.rf_columns.iter().collect();
        if let Some(c) = self.kin_columns.iter().find(|c| rf.contains(c)) {
            return Err(Error::Config(format!("'{c}' is listed in both the RF and kinematic views")));
        }
        if self.rolling_window < 2 {
            return Err(Error::Config("rolling_window must be >= 2".into()));
        }
        if self.anomaly_window < 3 || !(self.anomaly_z > 0.0) {
            return Err(Error::Config("anomaly_window must be >= 3 and anomaly_z > 0".into()));
        }
        Ok(())
    }

    fn rf_block(&self) -> Vec<String> {
        let mut cols = self.rf_columns.clone();
        for c in &self.rolling_columns {
            cols.push(format!("{c}_rstd"));
            cols.push(format!("{c}_grad"));
        }
        cols.extend(self.anomaly_columns.iter().map(|c| format!("{c}_anom")));
        cols.extend(aggregate_names(&self.rf_aggregates));
        cols
    }

    fn kin_block(&self) -> Vec<String> {
        let mut cols = self.kin_columns.clone();
        cols.extend(aggregate_names(&self.kin_aggregates));
        cols
    }

    /// Column manifest of a view, in matrix order.
    pub fn columns(&self, view: FeatureView) -> Vec<String> {
        match view {
            FeatureView::Rf => self.rf_block(),
            FeatureView::Kin => self.kin_block(),
            FeatureView::Fused => {
                let mut cols = self.rf_block();
                for c in self.kin_block() {
                    if !cols.contains(&c) {
                        cols.push(c);
                    }
                }
                cols.extend(self.interactions.iter().map(|i| i.column().to_string()));
                cols
            }
        }
    }
}

fn aggregate_names(series: &[String]) -> impl Iterator<Item = String> + '_ {
    series.iter().flat_map(|c| AGGREGATE_SUFFIXES.iter().map(move |s| format!("{c}_{s}")))
}

fn column(rows: &[DataRow], name: &str) -> Result<Vec<f64>> {
    rows.iter().map(|r| r.value(name).ok_or_else(|| Error::Input(format!("unknown column '{name}'")))).collect()
}

fn push_aggregates(cols: &mut Vec<Vec<f64>>, rows: &[DataRow], names: &[String]) -> Result<()> {
    let n = rows.len();
    for name in names {
        let a = scenario_aggregates(&column(rows, name)?)?;
        for v in [a.min, a.max, a.mean, a.slope] {
            cols.push(vec![v; n]);
        }
    }
    Ok(())
}

/// Column-major feature block for one scenario.
fn scenario_block(rows: &[DataRow], view: FeatureView, cfg: &FeatureConfig) -> Result<Vec<Vec<f64>>> {
    let n = rows.len();
    let mut cols: Vec<Vec<f64>> = Vec::new();
    let rf = matches!(view, FeatureView::Rf | FeatureView::Fused);
    let kin = matches!(view, FeatureView::Kin | FeatureView::Fused);
    let mut rf_names = Vec::new();
    if rf {
        for c in &cfg.rf_columns {
            cols.push(column(rows, c)?);
        }
        for c in &cfg.rolling_columns {
            let s = rolling_stats(&column(rows, c)?, cfg.rolling_window)?;
            cols.push(s.std);
            cols.push(s.gradient);
        }
        for c in &cfg.anomaly_columns {
            let flags = anomaly_flags(&column(rows, c)?, cfg.anomaly_window, cfg.anomaly_z)?;
            cols.push(flags.into_iter().map(f64::from).collect());
        }
        push_aggregates(&mut cols, rows, &cfg.rf_aggregates)?;
        rf_names = cfg.rf_block();
    }
    if kin {
        let mut kin_cols = Vec::new();
        for c in &cfg.kin_columns {
            kin_cols.push(column(rows, c)?);
        }
        push_aggregates(&mut kin_cols, rows, &cfg.kin_aggregates)?;
        for (name, values) in cfg.kin_block().into_iter().zip(kin_cols) {
            if !rf_names.contains(&name) {
                cols.push(values);
            }
        }
    }
    if view == FeatureView::Fused {
        for inter in &cfg.interactions {
            cols.push(interaction(rows, *inter)?);
        }
    }
    debug_assert!(cols.iter().all(|c| c.len() == n));
    Ok(cols)
}

fn interaction(rows: &[DataRow], kind: Interaction) -> Result<Vec<f64>> {
    Ok(match kind {
        Interaction::RangeJsr => rows
            .iter()
            .map(|r| if r.jsr_db <= OFF_SENTINEL_DB { OFF_SENTINEL_DB } else { r.jsr_db + 20.0 * r.range_m.log10() })
            .collect(),
        Interaction::BoresightRssiGrad => {
            let grad = central_diff(&column(rows, "rssi_dbm")?, 1.0)?;
            rows.iter().zip(grad).map(|(r, g)| r.boresight_rad * g).collect()
        }
        Interaction::RangeRateThroughputGrad => {
            let grad = central_diff(&column(rows, "throughput_mbps")?, 1.0)?;
            rows.iter().zip(grad).map(|(r, g)| r.range_rate_mps * g).collect()
        }
    })
}

/// Per-row features with their labels and scenario groups.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub view: FeatureView,
    pub columns: Vec<String>,
    /// Row-major, `n_rows × columns.len()`.
    pub data: Vec<f64>,
    /// Behavior class index of each row's scenario.
    pub labels: Vec<usize>,
    pub groups: Vec<u64>,
    pub regimes: Vec<OrbitRegime>,
    /// Ground-truth jammer state; a target only, never a feature.
    pub jam_state: Vec<u8>,
    /// Non-finite cells replaced during imputation.
    pub imputed: usize,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.n_cols();
        &self.data[i * d..(i + 1) * d]
    }

    /// Columns whose values never change across the matrix.
    pub fn constant_columns(&self) -> Vec<&str> {
        let d = self.n_cols();
        (0..d)
            .filter(|&j| {
                let first = self.data.get(j).copied();
                (0..self.n_rows()).all(|i| Some(self.data[i * d + j]) == first)
            })
            .map(|j| self.columns[j].as_str())
            .collect()
    }

    /// Write `features_{view}.csv` and `features_{view}.columns.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let csv_path = dir.join(format!("features_{}.csv", self.view));
        let json_path = dir.join(format!("features_{}.columns.json", self.view));
        let mut w = csv::Writer::from_writer(BufWriter::new(File::create(&csv_path)?));
        let mut header = vec!["scenario_id".to_string(), "label".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header)?;
        let mut record = Vec::with_capacity(header.len());
        for i in 0..self.n_rows() {
            record.clear();
            record.push(self.groups[i].to_string());
            record.push(self.labels[i].to_string());
            record.extend(self.row(i).iter().map(|v| v.to_string()));
            w.write_record(&record)?;
        }
        w.into_inner().map_err(|e| Error::Io(e.into_error()))?.flush()?;
        let manifest = ColumnManifest {
            view: self.view,
            columns: self.columns.clone(),
            rows: self.n_rows(),
            scenarios: self.groups.iter().collect::<BTreeSet<_>>().len(),
            imputed: self.imputed,
        };
        std::fs::write(&json_path, serde_json::to_string_pretty(&manifest)? + "\n")?;
        Ok((csv_path, json_path))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnManifest {
    pub view: FeatureView,
    pub columns: Vec<String>,
    pub rows: usize,
    pub scenarios: usize,
    pub imputed: usize,
}

/// Forward-fill non-finite values down each column, then zero-fill leading gaps.
fn impute(cols: &mut [Vec<f64>]) -> usize {
    let mut count = 0;
    for col in cols {
        let mut last = None;
        for v in col.iter_mut() {
            if v.is_finite() {
                last = Some(*v);
            } else {
                *v = last.unwrap_or(0.0);
                count += 1;
            }
        }
    }
    count
}

/// Assemble a view over in-memory scenarios (each a time-ordered row block).
pub fn build_feature_matrix(
    scenarios: &[Vec<DataRow>],
    view: FeatureView,
    cfg: &FeatureConfig,
) -> Result<FeatureMatrix> {
    cfg.validate()?;
    let columns = cfg.columns(view);
    let d = columns.len();
    let blocks = scenarios
        .par_iter()
        .map(|rows| {
            let id = rows.first().map_or(0, |r| r.scenario_id);
            let mut cols = scenario_block(rows, view, cfg).map_err(|e| e.in_scenario(id))?;
            let imputed = impute(&mut cols);
            Ok((cols, imputed))
        })
        .collect::<Result<Vec<_>>>()?;
    let n_rows: usize = scenarios.iter().map(Vec::len).sum();
    let mut m = FeatureMatrix {
        view,
        columns,
        data: Vec::with_capacity(n_rows * d),
        labels: Vec::with_capacity(n_rows),
        groups: Vec::with_capacity(n_rows),
        regimes: Vec::with_capacity(n_rows),
        jam_state: Vec::with_capacity(n_rows),
        imputed: 0,
    };
    for (rows, (cols, imputed)) in scenarios.iter().zip(blocks) {
        debug_assert_eq!(cols.len(), d);
        for (i, r) in rows.iter().enumerate() {
            m.data.extend(cols.iter().map(|c| c[i]));
            m.labels.push(r.class.index());
            m.groups.push(r.scenario_id);
            m.regimes.push(r.regime);
            m.jam_state.push(r.jam_state);
        }
        m.imputed += imputed;
    }
    if m.imputed > 0 {
        log::info!("{view} features: imputed {} non-finite values", m.imputed);
    }
    for c in m.constant_columns() {
        log::warn!("{view} feature column '{c}' has zero variance");
    }
    Ok(m)
}

/// Assemble a view from a dataset directory written by `generate_dataset`.
pub fn build_from_dir(dir: &Path, view: FeatureView, cfg: &FeatureConfig) -> Result<FeatureMatrix> {
    let (_, scenarios) = load_dataset(dir)?;
    build_feature_matrix(&scenarios, view, cfg)
}
