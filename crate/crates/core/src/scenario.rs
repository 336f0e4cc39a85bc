//! Labeled scenario generation and dataset persistence.
//!
//! A scenario couples one attacker orbit (with a single impulsive burn) to the
//! fixed GEO target, derives the kinematic rows in the target's RTN frame and
//! the RF observables of the ground-station uplink under the class's bursty
//! jammer. Datasets are written as one CSV shard per (class, regime) cell plus
//! a JSON manifest.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::hash_json;
use crate::orbital::{
    clears_earth, sample_burn_time, sample_delta_v, sample_orbit, ManeuverPriors, ManeuverSpec, OrbitConfig,
    OrbitRegime, OrbitalElements, StateVector, Trajectory, R_EARTH,
};
use crate::relmotion::{kinematic_rows, KinematicRow};
use crate::rflink::{
    apply_estimation_noise, jammer_eirp, link_metrics, received_power, sample_jammer_activity, BurstParams, LinkConfig,
    LinkMetrics, LinkRole, OFF_SENTINEL_DB,
};
use crate::rng::{derive_seed, stream, Stream};
use crate::{Error, Result, Vec3};

pub const SCHEMA_VERSION: &str = "proxsim-v1";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BehaviorClass {
    Benign,
    Covert,
    Threatening,
}

impl BehaviorClass {
    pub const ALL: [BehaviorClass; 3] = [BehaviorClass::Benign, BehaviorClass::Covert, BehaviorClass::Threatening];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BehaviorClass::Benign => "benign",
            BehaviorClass::Covert => "covert",
            BehaviorClass::Threatening => "threatening",
        }
    }
}

impl std::fmt::Display for BehaviorClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for BehaviorClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "benign" => Ok(BehaviorClass::Benign),
            "covert" => Ok(BehaviorClass::Covert),
            "threatening" => Ok(BehaviorClass::Threatening),
            other => Err(Error::Input(format!("unknown behavior class '{other}'"))),
        }
    }
}

/// One value per behavior class.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerClass<T> {
    pub benign: T,
    pub covert: T,
    pub threatening: T,
}

impl<T> PerClass<T> {
    pub fn get(&self, class: BehaviorClass) -> &T {
        match class {
            BehaviorClass::Benign => &self.benign,
            BehaviorClass::Covert => &self.covert,
            BehaviorClass::Threatening => &self.threatening,
        }
    }

    pub fn get_mut(&mut self, class: BehaviorClass) -> &mut T {
        match class {
            BehaviorClass::Benign => &mut self.benign,
            BehaviorClass::Covert => &mut self.covert,
            BehaviorClass::Threatening => &mut self.threatening,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenarios_per_cell: usize,
    pub horizon_s: f64,
    pub dt_s: f64,
    pub master_seed: u64,
    /// Estimation-noise scale applied to the RF observables.
    pub sigma: f64,
    /// Ground station longitude east of the target's sub-satellite point, degrees.
    pub ground_station_offset_deg: f64,
    pub orbit: OrbitConfig,
    pub maneuver: ManeuverPriors,
    pub link: LinkConfig,
    pub bursts: PerClass<BurstParams>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            scenarios_per_cell: 400,
            horizon_s: 8_640.0,
            dt_s: 10.0,
            master_seed: 2025,
            sigma: 1.0,
            ground_station_offset_deg: 5.0,
            orbit: OrbitConfig::default(),
            maneuver: ManeuverPriors::default(),
            link: LinkConfig::default(),
            bursts: BurstParams::table_defaults(),
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.scenarios_per_cell == 0 {
            return Err(Error::Config("scenarios_per_cell must be at least 1".into()));
        }
        if !(self.dt_s > 0.0 && self.horizon_s > 0.0) {
            return Err(Error::Config("horizon and dt must be positive".into()));
        }
        let steps = self.horizon_s / self.dt_s;
        if (steps - steps.round()).abs() > 1e-9 || steps.round() < 3.0 {
            return Err(Error::Config(format!(
                "horizon {} s is not an integer multiple (>= 3) of dt {} s",
                self.horizon_s, self.dt_s
            )));
        }
        if !(self.sigma >= 0.0) {
            return Err(Error::Config("sigma must be non-negative".into()));
        }
        self.orbit.validate()?;
        self.maneuver.validate()?;
        self.link.validate()?;
        for class in BehaviorClass::ALL {
            self.bursts.get(class).validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn samples_per_scenario(&self) -> usize {
        (self.horizon_s / self.dt_s).round() as usize
    }

    pub fn total_scenarios(&self) -> usize {
        9 * self.scenarios_per_cell
    }

    pub fn total_rows(&self) -> u64 {
        self.total_scenarios() as u64 * self.samples_per_scenario() as u64
    }

    /// Scenario id of the k-th scenario in a (class, regime) cell.
    pub fn scenario_id(&self, class: BehaviorClass, regime: OrbitRegime, k: usize) -> u64 {
        let cell = class.index() * 3 + regime as usize;
        (cell * self.scenarios_per_cell + k) as u64
    }

    pub fn scenario_seed(&self, scenario_id: u64) -> u64 {
        derive_seed(self.master_seed, scenario_id)
    }
}

/// Ground station on the equator, `offset_deg` east of the target's
/// sub-satellite point and co-rotating with the target.
pub fn ground_station_position(target: &StateVector, offset_deg: f64) -> Vec3 {
    let (s, c) = offset_deg.to_radians().sin_cos();
    let u = Vec3::new(target.position.x, target.position.y, 0.0).normalize();
    Vec3::new(c * u.x - s * u.y, s * u.x + c * u.y, 0.0) * R_EARTH
}

/// Slant range from the default-placed ground station to the GEO target.
pub fn ground_station_range(orbit: &OrbitConfig, offset_deg: f64) -> f64 {
    let target = orbit.target_elements().to_state().expect("GEO target elements are valid by construction");
    (ground_station_position(&target, offset_deg) - target.position).norm()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioMeta {
    pub scenario_id: u64,
    pub class: BehaviorClass,
    pub regime: OrbitRegime,
    pub seed: u64,
    pub attacker: OrbitalElements,
    pub maneuver: ManeuverSpec,
}

/// Noise-free simulation output; observation noise is layered on by [`observe`].
#[derive(Debug, Clone, PartialEq)]
pub struct CleanScenario {
    pub meta: ScenarioMeta,
    pub kinematics: Vec<KinematicRow>,
    pub link: Vec<LinkMetrics>,
}

/// One CSV row. Field order is the on-disk column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataRow {
    pub scenario_id: u64,
    pub class: BehaviorClass,
    pub regime: OrbitRegime,
    pub t: f64,
    pub range_m: f64,
    pub range_rate_mps: f64,
    pub v_r: f64,
    pub v_t: f64,
    pub v_n: f64,
    pub a_r: f64,
    pub a_t: f64,
    pub a_n: f64,
    pub jerk: f64,
    pub curvature: f64,
    pub doppler_hz: f64,
    pub doppler_rate_hzs: f64,
    pub boresight_rad: f64,
    pub t_to_tca: f64,
    pub visibility: u8,
    pub rssi_dbm: f64,
    pub throughput_mbps: f64,
    pub cn0_dbhz: f64,
    pub jsr_db: f64,
    pub cfo_noise_hz: f64,
    pub sjnr_db: f64,
    pub jam_state: u8,
}

pub const CSV_COLUMNS: [&str; 26] = [
    "scenario_id",
    "class",
    "regime",
    "t",
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
    "visibility",
    "rssi_dbm",
    "throughput_mbps",
    "cn0_dbhz",
    "jsr_db",
    "cfo_noise_hz",
    "sjnr_db",
    "jam_state",
];

impl DataRow {
    /// Numeric column by CSV name; `None` for labels and unknown names.
    pub fn value(&self, column: &str) -> Option<f64> {
        Some(match column {
            "t" => self.t,
            "range_m" => self.range_m,
            "range_rate_mps" => self.range_rate_mps,
            "v_r" => self.v_r,
            "v_t" => self.v_t,
            "v_n" => self.v_n,
            "a_r" => self.a_r,
            "a_t" => self.a_t,
            "a_n" => self.a_n,
            "jerk" => self.jerk,
            "curvature" => self.curvature,
            "doppler_hz" => self.doppler_hz,
            "doppler_rate_hzs" => self.doppler_rate_hzs,
            "boresight_rad" => self.boresight_rad,
            "t_to_tca" => self.t_to_tca,
            "visibility" => f64::from(self.visibility),
            "rssi_dbm" => self.rssi_dbm,
            "throughput_mbps" => self.throughput_mbps,
            "cn0_dbhz" => self.cn0_dbhz,
            "jsr_db" => self.jsr_db,
            "cfo_noise_hz" => self.cfo_noise_hz,
            "sjnr_db" => self.sjnr_db,
            "jam_state" => f64::from(self.jam_state),
            _ => return None,
        })
    }

    fn numeric_fields(&self) -> [f64; 21] {
        [
            self.t,
            self.range_m,
            self.range_rate_mps,
            self.v_r,
            self.v_t,
            self.v_n,
            self.a_r,
            self.a_t,
            self.a_n,
            self.jerk,
            self.curvature,
            self.doppler_hz,
            self.doppler_rate_hzs,
            self.boresight_rad,
            self.t_to_tca,
            self.rssi_dbm,
            self.throughput_mbps,
            self.cn0_dbhz,
            self.jsr_db,
            self.cfo_noise_hz,
            self.sjnr_db,
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRecord {
    pub meta: ScenarioMeta,
    pub rows: Vec<DataRow>,
}

impl ScenarioRecord {
    pub fn duty_cycle(&self) -> f64 {
        self.rows.iter().map(|r| f64::from(r.jam_state)).sum::<f64>() / self.rows.len() as f64
    }
}

fn sample_maneuver(
    cfg: &ScenarioConfig,
    class: BehaviorClass,
    coast: &Trajectory,
    target: &Trajectory,
    seed: u64,
) -> Result<ManeuverSpec> {
    let mut rng = stream(seed, Stream::Maneuver);
    let prior = cfg.maneuver.delta_v.get(class);
    for _ in 0..32 {
        let t_burn = sample_burn_time(&cfg.maneuver, cfg.horizon_s, cfg.dt_s, &mut rng);
        let att = coast.state_at(t_burn)?;
        let tgt = target.state_at(t_burn)?;
        let delta_v = sample_delta_v(prior, &(tgt.position - att.position), &mut rng);
        let spec = ManeuverSpec { t_burn, delta_v };
        let post = StateVector { velocity: att.velocity + delta_v, ..att };
        if clears_earth(&post) {
            return Ok(spec);
        }
    }
    Err(Error::Domain("no admissible maneuver after 32 draws".into()))
}

/// Run the noise-free simulation for one scenario.
pub fn simulate_clean(
    cfg: &ScenarioConfig,
    class: BehaviorClass,
    regime: OrbitRegime,
    scenario_id: u64,
) -> Result<CleanScenario> {
    let seed = cfg.scenario_seed(scenario_id);
    let run = || -> Result<CleanScenario> {
        let attacker = sample_orbit(regime, class, &cfg.orbit, &mut stream(seed, Stream::Orbit))?;
        let coast = Trajectory::from_elements(&attacker)?;
        let target = Trajectory::from_elements(&cfg.orbit.target_elements())?;
        let maneuver = sample_maneuver(cfg, class, &coast, &target, seed)?;
        let attacker_traj = coast.with_maneuver(&maneuver)?;

        let n = cfg.samples_per_scenario();
        let times: Vec<f64> = (0..n).map(|i| i as f64 * cfg.dt_s).collect();
        let att_states = times.iter().map(|&t| attacker_traj.state_at(t)).collect::<Result<Vec<_>>>()?;
        let tgt_states = times.iter().map(|&t| target.state_at(t)).collect::<Result<Vec<_>>>()?;
        let stations: Vec<Vec3> =
            tgt_states.iter().map(|s| ground_station_position(s, cfg.ground_station_offset_deg)).collect();
        let boresight: Vec<Vec3> =
            stations.iter().zip(&tgt_states).map(|(gs, s)| (gs - s.position).normalize()).collect();
        let kinematics = kinematic_rows(&att_states, &tgt_states, &boresight, cfg.dt_s, cfg.link.carrier_hz)?;

        let activity = sample_jammer_activity(cfg.bursts.get(class), n, &mut stream(seed, Stream::Jammer))?;
        let mut jitter = stream(seed, Stream::LinkJitter);
        let eirp = jammer_eirp(&cfg.link, class);
        let mut link = Vec::with_capacity(n);
        for i in 0..n {
            let gs_range = (stations[i] - tgt_states[i].position).norm();
            let p_sig = received_power(gs_range, 0.0, &cfg.link, LinkRole::Signal, &mut jitter)?;
            let k = &kinematics[i];
            let p_jam = received_power(
                k.range,
                k.boresight_angle,
                &cfg.link,
                LinkRole::Jammer { eirp_dbw: eirp },
                &mut jitter,
            )?;
            let mut m = link_metrics(times[i], p_sig, (activity[i] == 1).then_some(p_jam), &cfg.link);
            m.doppler_hz = k.doppler_shift;
            link.push(m);
        }
        Ok(CleanScenario {
            meta: ScenarioMeta { scenario_id, class, regime, seed, attacker, maneuver },
            kinematics,
            link,
        })
    };
    run().map_err(|e| e.in_scenario(scenario_id))
}

fn finite_or_sentinel(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        OFF_SENTINEL_DB
    } else {
        x
    }
}

/// Apply estimation noise at scale `sigma` and flatten into CSV rows.
pub fn observe(clean: &CleanScenario, sigma: f64, link_cfg: &LinkConfig) -> Result<ScenarioRecord> {
    let id = clean.meta.scenario_id;
    let mut rng = stream(clean.meta.seed, Stream::Estimation);
    let link = apply_estimation_noise(&clean.link, sigma, link_cfg, &mut rng).map_err(|e| e.in_scenario(id))?;
    let rows: Vec<DataRow> = clean
        .kinematics
        .iter()
        .zip(&link)
        .map(|(k, m)| DataRow {
            scenario_id: id,
            class: clean.meta.class,
            regime: clean.meta.regime,
            t: k.t,
            range_m: k.range,
            range_rate_mps: k.range_rate,
            v_r: k.v_r,
            v_t: k.v_t,
            v_n: k.v_n,
            a_r: k.a_r,
            a_t: k.a_t,
            a_n: k.a_n,
            jerk: k.jerk,
            curvature: k.curvature,
            doppler_hz: m.doppler_hz,
            doppler_rate_hzs: k.doppler_rate,
            boresight_rad: k.boresight_angle,
            t_to_tca: k.t_to_tca,
            visibility: u8::from(k.visibility),
            rssi_dbm: m.rssi_dbm,
            throughput_mbps: m.throughput_mbps,
            cn0_dbhz: m.cn0_dbhz,
            jsr_db: finite_or_sentinel(m.jsr_db),
            cfo_noise_hz: m.cfo_noise_hz,
            sjnr_db: m.sjnr_db,
            jam_state: u8::from(m.jam_state),
        })
        .collect();
    if let Some(bad) = rows.iter().find(|r| r.numeric_fields().iter().any(|x| !x.is_finite())) {
        return Err(Error::Domain(format!("non-finite value in row t={}", bad.t)).in_scenario(id));
    }
    Ok(ScenarioRecord { meta: clean.meta.clone(), rows })
}

/// Simulate and observe one scenario at the configured noise scale.
pub fn generate_scenario(
    cfg: &ScenarioConfig,
    class: BehaviorClass,
    regime: OrbitRegime,
    scenario_id: u64,
) -> Result<ScenarioRecord> {
    observe(&simulate_clean(cfg, class, regime, scenario_id)?, cfg.sigma, &cfg.link)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub class: BehaviorClass,
    pub regime: OrbitRegime,
    pub shard: String,
    pub scenarios: usize,
    pub rows: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioEntry {
    pub scenario_id: u64,
    pub class: BehaviorClass,
    pub regime: OrbitRegime,
    pub seed: u64,
    pub rows: usize,
    pub duty_cycle: f64,
    pub t_burn: f64,
    pub delta_v_mps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: String,
    pub config_hash: String,
    /// False while writing, or when generation aborted.
    pub complete: bool,
    pub error: Option<String>,
    pub samples_per_scenario: usize,
    pub total_scenarios: usize,
    pub total_rows: u64,
    pub duty_cycles: PerClass<f64>,
    pub cells: Vec<CellSummary>,
    pub scenarios: Vec<ScenarioEntry>,
    pub config: ScenarioConfig,
}

impl Manifest {
    pub fn read(dir: &Path) -> Result<Self> {
        let text = fs::read_to_string(dir.join(MANIFEST_FILE))?;
        let manifest: Manifest = serde_json::from_str(&text)?;
        if manifest.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "dataset schema '{}' is not supported (expected '{SCHEMA_VERSION}')",
                manifest.schema_version
            )));
        }
        if !manifest.complete {
            return Err(Error::Schema(format!(
                "dataset in {} is incomplete{}",
                dir.display(),
                manifest.error.as_deref().map(|e| format!(": {e}")).unwrap_or_default()
            )));
        }
        Ok(manifest)
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(dir.join(MANIFEST_FILE), text)?;
        Ok(())
    }
}

pub fn shard_name(class: BehaviorClass, regime: OrbitRegime) -> String {
    format!("{class}_{regime}.csv")
}

const GENERATION_CHUNK: usize = 32;

/// Generate every (class × regime) cell and write shards plus the manifest.
///
/// Scenarios are simulated in parallel chunks and written in id order, so the
/// output bytes do not depend on the thread count. An initial manifest with
/// `complete: false` marks partial output until the final one replaces it.
pub fn generate_dataset(cfg: &ScenarioConfig, out_dir: &Path) -> Result<Manifest> {
    cfg.validate()?;
    fs::create_dir_all(out_dir)?;
    let mut manifest = Manifest {
        schema_version: SCHEMA_VERSION.to_string(),
        config_hash: hash_json(cfg)?,
        complete: false,
        error: None,
        samples_per_scenario: cfg.samples_per_scenario(),
        total_scenarios: 0,
        total_rows: 0,
        duty_cycles: PerClass::default(),
        cells: Vec::new(),
        scenarios: Vec::new(),
        config: cfg.clone(),
    };
    manifest.write(out_dir)?;
    match write_cells(cfg, out_dir, &mut manifest) {
        Ok(()) => {
            manifest.complete = true;
            manifest.write(out_dir)?;
            Ok(manifest)
        }
        Err(e) => {
            manifest.error = Some(e.to_string());
            // Best effort: the original error is the one worth reporting.
            let _ = manifest.write(out_dir);
            Err(e)
        }
    }
}

fn write_cells(cfg: &ScenarioConfig, out_dir: &Path, manifest: &mut Manifest) -> Result<()> {
    let mut jam_rows: PerClass<u64> = PerClass::default();
    let mut class_rows: PerClass<u64> = PerClass::default();
    for class in BehaviorClass::ALL {
        for regime in OrbitRegime::ALL {
            let shard = shard_name(class, regime);
            let path: PathBuf = out_dir.join(&shard);
            let mut writer = csv::Writer::from_writer(BufWriter::new(File::create(&path)?));
            let mut cell = CellSummary { class, regime, shard, scenarios: 0, rows: 0 };
            let ids: Vec<u64> = (0..cfg.scenarios_per_cell).map(|k| cfg.scenario_id(class, regime, k)).collect();
            for chunk in ids.chunks(GENERATION_CHUNK) {
                let records = chunk
                    .par_iter()
                    .map(|&id| generate_scenario(cfg, class, regime, id))
                    .collect::<Result<Vec<_>>>()?;
                for rec in records {
                    for row in &rec.rows {
                        writer.serialize(row)?;
                    }
                    let jams: u64 = rec.rows.iter().map(|r| u64::from(r.jam_state)).sum();
                    *jam_rows.get_mut(class) += jams;
                    *class_rows.get_mut(class) += rec.rows.len() as u64;
                    cell.scenarios += 1;
                    cell.rows += rec.rows.len() as u64;
                    manifest.scenarios.push(ScenarioEntry {
                        scenario_id: rec.meta.scenario_id,
                        class,
                        regime,
                        seed: rec.meta.seed,
                        rows: rec.rows.len(),
                        duty_cycle: rec.duty_cycle(),
                        t_burn: rec.meta.maneuver.t_burn,
                        delta_v_mps: rec.meta.maneuver.delta_v.norm(),
                    });
                }
            }
            let mut inner = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            inner.flush()?;
            manifest.total_scenarios += cell.scenarios;
            manifest.total_rows += cell.rows;
            manifest.cells.push(cell);
        }
    }
    for class in BehaviorClass::ALL {
        let rows = *class_rows.get(class);
        *manifest.duty_cycles.get_mut(class) = if rows > 0 { *jam_rows.get(class) as f64 / rows as f64 } else { 0.0 };
    }
    Ok(())
}

/// Read one shard back, grouped into per-scenario row blocks in file order.
pub fn read_shard(path: &Path) -> Result<Vec<Vec<DataRow>>> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != CSV_COLUMNS {
        return Err(Error::Schema(format!("{} has an unexpected header: {}", path.display(), header.join(","))));
    }
    let mut out: Vec<Vec<DataRow>> = Vec::new();
    for row in reader.deserialize::<DataRow>() {
        let row = row?;
        match out.last_mut() {
            Some(block) if block[0].scenario_id == row.scenario_id => block.push(row),
            _ => out.push(vec![row]),
        }
    }
    Ok(out)
}

/// Load every scenario of a dataset directory, in manifest cell order.
pub fn load_dataset(dir: &Path) -> Result<(Manifest, Vec<Vec<DataRow>>)> {
    let manifest = Manifest::read(dir)?;
    let mut scenarios = Vec::with_capacity(manifest.total_scenarios);
    for cell in &manifest.cells {
        scenarios.extend(read_shard(&dir.join(&cell.shard))?);
    }
    if scenarios.len() != manifest.total_scenarios {
        return Err(Error::Schema(format!(
            "manifest lists {} scenarios but shards hold {}",
            manifest.total_scenarios,
            scenarios.len()
        )));
    }
    Ok((manifest, scenarios))
}
