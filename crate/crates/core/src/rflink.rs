//! Uplink and jammer link budgets, RF observables, the bursty Markov jammer
//! and receiver-side estimation noise.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::relmotion::SPEED_OF_LIGHT;
use crate::scenario::{BehaviorClass, PerClass};
use crate::{Error, Result};

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Finite stand-in for −∞ dB quantities (jammer OFF) in serialized data.
pub const OFF_SENTINEL_DB: f64 = -400.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkConfig {
    pub carrier_hz: f64,
    pub bandwidth_hz: f64,
    /// Ground-station transmit power, dBW.
    pub tx_power_dbw: f64,
    /// Ground-station antenna gain, dBi.
    pub tx_gain_dbi: f64,
    pub rx_gain_max_dbi: f64,
    /// Receive half-power beamwidth, radians.
    pub theta_3db: f64,
    pub sidelobe_floor_dbi: f64,
    pub system_temp_k: f64,
    /// Receive-antenna pointing jitter (1σ), radians.
    pub pointing_jitter_std: f64,
    /// Transmit power jitter (1σ), dB; applied to both emitters.
    pub power_jitter_db: f64,
    pub sigma_rssi_db: f64,
    pub sigma_cfo_hz: f64,
    pub sigma_doppler_est_hz: f64,
    /// Relative 1σ error of the throughput estimate.
    pub sigma_throughput_frac: f64,
    /// 1σ error (dB) of the receiver's interference-power estimate.
    pub sigma_interference_db: f64,
    pub jammer_eirp_dbw: PerClass<f64>,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self {
            carrier_hz: 14.25e9,
            bandwidth_hz: 36e6,
            // 55.6 dBW EIRP: on-axis clear-sky SNR ≈ 15 dB over the default
            // ground-station slant range.
            tx_power_dbw: 14.5,
            tx_gain_dbi: 41.1,
            rx_gain_max_dbi: 40.0,
            theta_3db: 0.5f64.to_radians(),
            sidelobe_floor_dbi: 0.0,
            system_temp_k: 500.0,
            pointing_jitter_std: 0.02f64.to_radians(),
            power_jitter_db: 0.5,
            sigma_rssi_db: 1.0,
            sigma_cfo_hz: 50.0,
            sigma_doppler_est_hz: 20.0,
            sigma_throughput_frac: 0.02,
            sigma_interference_db: 1.0,
            // Strong enough to be seen from LEO/MEO distances when ON.
            jammer_eirp_dbw: PerClass { benign: 70.0, covert: 80.0, threatening: 90.0 },
        }
    }
}

impl LinkConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.carrier_hz > 0.0 && self.bandwidth_hz > 0.0 && self.system_temp_k > 0.0) {
            return Err(Error::Config("carrier frequency, bandwidth and system temperature must be positive".into()));
        }
        if !(self.theta_3db > 0.0) {
            return Err(Error::Config("theta_3db must be positive".into()));
        }
        if !(self.sidelobe_floor_dbi < self.rx_gain_max_dbi) {
            return Err(Error::Config("sidelobe floor must be below the peak receive gain".into()));
        }
        let stds = [
            self.pointing_jitter_std,
            self.power_jitter_db,
            self.sigma_rssi_db,
            self.sigma_cfo_hz,
            self.sigma_doppler_est_hz,
            self.sigma_throughput_frac,
            self.sigma_interference_db,
        ];
        if stds.iter().any(|s| !(*s >= 0.0)) {
            return Err(Error::Config("noise standard deviations must be non-negative".into()));
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    /// Thermal noise power k·T_sys·B, watts.
    pub fn noise_power_w(&self) -> f64 {
        BOLTZMANN * self.system_temp_k * self.bandwidth_hz
    }

    pub fn noise_power_dbw(&self) -> f64 {
        to_db(self.noise_power_w())
    }

    /// Receive gain pattern: parabolic main lobe down to the sidelobe floor.
    pub fn rx_gain_dbi(&self, off_axis: f64) -> f64 {
        let x = off_axis / self.theta_3db;
        (self.rx_gain_max_dbi - 12.0 * x * x).max(self.sidelobe_floor_dbi)
    }
}

pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Free-space path loss 20·log10(4πd/λ), dB.
pub fn fspl_db(distance: f64, carrier_hz: f64) -> f64 {
    20.0 * (4.0 * PI * distance * carrier_hz / SPEED_OF_LIGHT).log10()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinkRole {
    /// Ground-station uplink.
    Signal,
    Jammer {
        eirp_dbw: f64,
    },
}

/// Received power (dBW) at the GEO receiver.
///
/// Transmit power carries `power_jitter_db` Gaussian jitter and the off-axis
/// angle carries receive pointing jitter; both draws are always consumed so
/// the stream stays aligned whatever the configured stds.
pub fn received_power<R: Rng + ?Sized>(
    distance: f64,
    off_axis: f64,
    cfg: &LinkConfig,
    role: LinkRole,
    rng: &mut R,
) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::Domain(format!("link distance must be positive, got {distance}")));
    }
    let z_power: f64 = StandardNormal.sample(rng);
    let z_point: f64 = StandardNormal.sample(rng);
    let eirp = match role {
        LinkRole::Signal => cfg.tx_power_dbw + cfg.tx_gain_dbi,
        LinkRole::Jammer { eirp_dbw } => eirp_dbw,
    } + cfg.power_jitter_db * z_power;
    let theta = (off_axis + cfg.pointing_jitter_std * z_point).abs();
    Ok(eirp + cfg.rx_gain_dbi(theta) - fspl_db(distance, cfg.carrier_hz))
}

/// Per-timestep RF observables. Jammer-off quantities are `-inf` in memory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkMetrics {
    pub t: f64,
    pub p_sig_dbw: f64,
    pub p_jam_dbw: f64,
    pub sjnr_db: f64,
    pub rssi_dbm: f64,
    pub throughput_mbps: f64,
    pub cn0_dbhz: f64,
    pub jsr_db: f64,
    pub cfo_noise_hz: f64,
    /// Jammer Doppler as reported by the receiver.
    pub doppler_hz: f64,
    pub jam_state: bool,
}

/// Noise-free RF metrics for one timestep; `p_jam_dbw = None` means jammer OFF.
pub fn link_metrics(t: f64, p_sig_dbw: f64, p_jam_dbw: Option<f64>, cfg: &LinkConfig) -> LinkMetrics {
    let noise = cfg.noise_power_w();
    let sig = from_db(p_sig_dbw);
    let jam = p_jam_dbw.map_or(0.0, from_db);
    let sjnr = sig / (jam + noise);
    LinkMetrics {
        t,
        p_sig_dbw,
        p_jam_dbw: p_jam_dbw.unwrap_or(f64::NEG_INFINITY),
        sjnr_db: to_db(sjnr),
        rssi_dbm: p_sig_dbw + 30.0,
        throughput_mbps: cfg.bandwidth_hz / 1e6 * (1.0 + sjnr).log2(),
        cn0_dbhz: p_sig_dbw - to_db(BOLTZMANN * cfg.system_temp_k),
        jsr_db: p_jam_dbw.map_or(f64::NEG_INFINITY, |j| j - p_sig_dbw),
        cfo_noise_hz: 0.0,
        doppler_hz: 0.0,
        jam_state: p_jam_dbw.is_some(),
    }
}

/// Two-state jammer Markov chain, per-step transition probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BurstParams {
    /// OFF → ON probability per step.
    pub p_on: f64,
    /// ON → OFF probability per step.
    pub p_off: f64,
    #[serde(default = "default_clamp")]
    pub clamp: (usize, usize),
}

fn default_clamp() -> (usize, usize) {
    (1, 500)
}

impl BurstParams {
    pub fn new(p_on: f64, p_off: f64) -> Self {
        Self { p_on, p_off, clamp: default_clamp() }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p_on", self.p_on), ("p_off", self.p_off)] {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::Parameter(format!("{name} must lie in (0, 1], got {p}")));
            }
        }
        let (lo, hi) = self.clamp;
        if !(lo >= 1 && lo <= hi) {
            return Err(Error::Parameter(format!("segment clamp [{lo}, {hi}] is invalid")));
        }
        Ok(())
    }

    /// Stationary probability of the ON state.
    pub fn duty_cycle(&self) -> f64 {
        self.p_on / (self.p_on + self.p_off)
    }

    pub fn table_defaults() -> PerClass<BurstParams> {
        PerClass {
            benign: BurstParams::new(0.05, 0.8),
            covert: BurstParams::new(0.15, 0.6),
            threatening: BurstParams::new(0.5, 0.15),
        }
    }
}

/// Geometric draw on {1, 2, ...} with success probability `p` (mean 1/p).
fn geometric<R: Rng + ?Sized>(p: f64, rng: &mut R) -> usize {
    if p >= 1.0 {
        return 1;
    }
    // 1 − U lies in (0, 1], keeping the logarithm finite.
    let u: f64 = 1.0 - rng.random::<f64>();
    (u.ln() / (1.0 - p).ln()).ceil().max(1.0) as usize
}

/// Binary jammer activity: alternating OFF/ON segments with geometric dwell
/// times (OFF mean 1/p_on, ON mean 1/p_off), each clamped to the configured
/// range; the first state is drawn from the stationary distribution.
pub fn sample_jammer_activity<R: Rng + ?Sized>(params: &BurstParams, n: usize, rng: &mut R) -> Result<Vec<u8>> {
    params.validate()?;
    if n == 0 {
        return Err(Error::Size { need: 1, got: 0 });
    }
    let (lo, hi) = params.clamp;
    let mut on = rng.random_bool(params.duty_cycle());
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p_leave = if on { params.p_off } else { params.p_on };
        let len = geometric(p_leave, rng).clamp(lo, hi);
        let take = len.min(n - out.len());
        out.extend(std::iter::repeat_n(u8::from(on), take));
        on = !on;
    }
    Ok(out)
}

/// Empirical ON fraction of one `n`-step activity draw.
pub fn empirical_duty<R: Rng + ?Sized>(params: &BurstParams, n: usize, rng: &mut R) -> Result<f64> {
    let s = sample_jammer_activity(params, n, rng)?;
    Ok(s.iter().map(|&x| f64::from(x)).sum::<f64>() / n as f64)
}

/// Receiver-side estimation errors scaled by `sigma`.
///
/// Per row, with independent standard normals z₁..z₅:
/// RSSI and C/N0 share the signal-power error σ·σ_RSSI·z₁; CFO gets σ·σ_cfo·z₂;
/// reported Doppler gets σ·σ_doppler·z₃; throughput is scaled by
/// (1 + σ·σ_thr·z₄); the interference (jammer + noise) power estimate is off by
/// σ·σ_int·z₅ dB and the known noise floor is subtracted to form JSR, so a
/// negative residual reads as "no jammer" (−∞). The draws do not depend on
/// `sigma`, so different scales see proportional errors on the same stream.
/// `sigma = 0` returns the input unchanged.
pub fn apply_estimation_noise<R: Rng + ?Sized>(
    metrics: &[LinkMetrics],
    sigma: f64,
    cfg: &LinkConfig,
    rng: &mut R,
) -> Result<Vec<LinkMetrics>> {
    if !(sigma >= 0.0) {
        return Err(Error::Parameter(format!("noise scale must be non-negative, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(metrics.to_vec());
    }
    let noise_w = cfg.noise_power_w();
    Ok(metrics
        .iter()
        .map(|m| {
            let z: [f64; 5] = std::array::from_fn(|_| StandardNormal.sample(rng));
            let mut out = *m;
            let sig_err = sigma * cfg.sigma_rssi_db * z[0];
            out.rssi_dbm += sig_err;
            out.cn0_dbhz += sig_err;
            out.cfo_noise_hz += sigma * cfg.sigma_cfo_hz * z[1];
            out.doppler_hz += sigma * cfg.sigma_doppler_est_hz * z[2];
            out.throughput_mbps = (m.throughput_mbps * (1.0 + sigma * cfg.sigma_throughput_frac * z[3])).max(0.0);
            let interference = (from_db(m.p_jam_dbw) + noise_w) * from_db(sigma * cfg.sigma_interference_db * z[4]);
            let jam_est = interference - noise_w;
            out.jsr_db = if jam_est > 0.0 { to_db(jam_est) - (m.p_sig_dbw + sig_err) } else { f64::NEG_INFINITY };
            out
        })
        .collect())
}

/// Jammer EIRP for a class.
pub fn jammer_eirp(cfg: &LinkConfig, class: BehaviorClass) -> f64 {
    *cfg.jammer_eirp_dbw.get(class)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use approx::assert_relative_eq;

    fn quiet() -> LinkConfig {
        LinkConfig { power_jitter_db: 0.0, pointing_jitter_std: 0.0, ..LinkConfig::default() }
    }

    #[test]
    fn closed_form_fspl_budget() {
        let cfg = quiet();
        // 4π·4e7/(c/14.25e9) = 2.38906e10 → 207.565 dB
        let fspl = fspl_db(4.0e7, 14.25e9);
        assert_relative_eq!(fspl, 207.5645, epsilon = 1e-3);
        let p = received_power(4.0e7, 0.0, &cfg, LinkRole::Jammer { eirp_dbw: 90.0 }, &mut seeded(0)).unwrap();
        assert_relative_eq!(p, 90.0 + 40.0 - fspl, epsilon = 1e-12);
        assert!((p + 77.57).abs() < 0.01);
    }

    #[test]
    fn distance_doubling_and_beamwidth() {
        let cfg = quiet();
        let role = LinkRole::Signal;
        let p1 = received_power(1.0e7, 0.0, &cfg, role, &mut seeded(0)).unwrap();
        let p2 = received_power(2.0e7, 0.0, &cfg, role, &mut seeded(0)).unwrap();
        assert_relative_eq!(p1 - p2, 20.0 * 2f64.log10(), epsilon = 1e-10);
        assert_relative_eq!(p1 - p2, 6.0206, epsilon = 1e-4);
        assert_relative_eq!(cfg.rx_gain_max_dbi - cfg.rx_gain_dbi(cfg.theta_3db), 12.0, epsilon = 1e-12);
        assert_eq!(cfg.rx_gain_dbi(1.0), cfg.sidelobe_floor_dbi);
        assert!(matches!(received_power(0.0, 0.0, &cfg, role, &mut seeded(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn metric_examples() {
        let cfg = quiet();
        let n_dbw = cfg.noise_power_dbw();
        let m = link_metrics(0.0, n_dbw + to_db(3.0), None, &cfg);
        assert_relative_eq!(from_db(m.sjnr_db), 3.0, max_relative = 1e-12);
        assert_relative_eq!(m.throughput_mbps, 72.0, max_relative = 1e-12);
        assert!(!m.jam_state && m.jsr_db == f64::NEG_INFINITY && m.p_jam_dbw == f64::NEG_INFINITY);

        let m = link_metrics(0.0, -130.0, Some(-130.0), &cfg);
        assert_eq!(m.rssi_dbm, -100.0);
        assert_eq!(m.jsr_db, 0.0);
        assert!(m.jam_state);
        // C/N0 = P − 10·log10(k·T): −130 + 228.6 − 27.0
        assert_relative_eq!(m.cn0_dbhz, -130.0 + 228.6 - 26.99, epsilon = 0.01);
    }

    #[test]
    fn default_uplink_snr_is_about_15_db() {
        let cfg = quiet();
        // Default ground station: 5° east of the sub-satellite point.
        let gs_range = crate::scenario::ground_station_range(&crate::orbital::OrbitConfig::default(), 5.0);
        let p = received_power(gs_range, 0.0, &cfg, LinkRole::Signal, &mut seeded(0)).unwrap();
        let snr = p - cfg.noise_power_dbw();
        assert!((snr - 15.0).abs() < 0.5, "SNR {snr}");
    }

    #[test]
    fn sjnr_and_throughput_monotone() {
        let cfg = quiet();
        let mut last_sjnr = f64::INFINITY;
        let mut last_thr = f64::INFINITY;
        for j in (-150..-90).step_by(5) {
            let m = link_metrics(0.0, -110.0, Some(j as f64), &cfg);
            assert!(m.sjnr_db < last_sjnr && m.throughput_mbps < last_thr);
            last_sjnr = m.sjnr_db;
            last_thr = m.throughput_mbps;
        }
    }

    #[test]
    fn burst_segments_clamped_and_validated() {
        let p = BurstParams { p_on: 0.001, p_off: 0.001, clamp: (1, 500) };
        let s = sample_jammer_activity(&p, 200_000, &mut seeded(5)).unwrap();
        let mut run = 1;
        for w in s.windows(2) {
            if w[0] == w[1] {
                run += 1;
                assert!(run <= 500);
            } else {
                run = 1;
            }
        }
        assert!(matches!(
            sample_jammer_activity(&BurstParams::new(0.0, 0.5), 10, &mut seeded(0)),
            Err(Error::Parameter(_))
        ));
        assert!(sample_jammer_activity(&BurstParams::new(0.1, 0.5), 0, &mut seeded(0)).is_err());
    }

    #[test]
    fn table_duty_cycles() {
        let table = BurstParams::table_defaults();
        let benign = empirical_duty(&table.benign, 1_000_000, &mut seeded(11)).unwrap();
        assert!((benign - 0.059).abs() < 0.01, "benign {benign}");
        let threat = empirical_duty(&table.threatening, 1_000_000, &mut seeded(12)).unwrap();
        assert!((threat - 0.77).abs() < 0.02, "threatening {threat}");
    }

    fn series(n: usize) -> Vec<LinkMetrics> {
        let cfg = quiet();
        (0..n)
            .map(|i| {
                let jam = (i % 3 == 0).then_some(-120.0);
                let mut m = link_metrics(i as f64 * 10.0, -111.0, jam, &cfg);
                m.doppler_hz = 100.0;
                m
            })
            .collect()
    }

    #[test]
    fn zero_sigma_is_identity() {
        let clean = series(50);
        let out = apply_estimation_noise(&clean, 0.0, &LinkConfig::default(), &mut seeded(1)).unwrap();
        assert_eq!(out.len(), clean.len());
        for (a, b) in out.iter().zip(&clean) {
            // −inf == −inf holds, so field-wise equality is bit equality here.
            assert_eq!(a, b);
        }
        assert!(apply_estimation_noise(&clean, -1.0, &LinkConfig::default(), &mut seeded(1)).is_err());
    }

    #[test]
    fn rssi_noise_std_and_whiteness() {
        let cfg = LinkConfig::default();
        let n = 1_000_000;
        let clean = series(n);
        let noisy = apply_estimation_noise(&clean, 1.0, &cfg, &mut seeded(9)).unwrap();
        let d: Vec<f64> = noisy.iter().zip(&clean).map(|(a, b)| a.rssi_dbm - b.rssi_dbm).collect();
        let mean = d.iter().sum::<f64>() / n as f64;
        let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((var.sqrt() - cfg.sigma_rssi_db).abs() < 0.01 * cfg.sigma_rssi_db);
        let lag1 = d.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum::<f64>() / ((n - 1) as f64 * var);
        assert!(lag1.abs() < 3.0 / (n as f64).sqrt(), "lag-1 autocorrelation {lag1}");
    }

    #[test]
    fn strong_jammer_survives_estimation() {
        let cfg = LinkConfig::default();
        let clean = vec![link_metrics(0.0, -111.0, Some(-100.0), &cfg); 1000];
        let noisy = apply_estimation_noise(&clean, 0.5, &cfg, &mut seeded(2)).unwrap();
        assert!(noisy.iter().all(|m| (m.jsr_db - clean[0].jsr_db).abs() < 5.0));
        assert!(noisy.iter().all(|m| m.throughput_mbps >= 0.0));
    }
}
